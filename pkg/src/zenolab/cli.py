"""Command-line entry point: bound sweeps, protocol simulations, verification.

Every writing command drops a manifest JSON next to its outputs; re-running
with the same manifest reproduces the outputs byte for byte (fixed seeds,
fixed iteration order, repr-based float formatting).

Exit codes: 0 success, 1 invariant failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, asdict
from typing import Sequence

from . import __version__, bounds, protocol, verify


@dataclass(frozen=True)
class RunManifest:
    command: str
    parameters: dict
    seed: int | None
    version: str
    outputs: tuple[str, ...]

    def write(self, path: str) -> None:
        with open(path, "w") as fh:
            json.dump(asdict(self), fh, indent=2, sort_keys=True)
            fh.write("\n")


def _manifest_path(out: str) -> str:
    return out + ".manifest.json"


def _parse_float_or_strong(text: str) -> float:
    return math.inf if text.strip().lower() in ("strong", "inf") else float(text)


def _frange(spec: str) -> tuple[float, ...]:
    """'start:stop:step' inclusive grid, or a comma list."""
    if ":" in spec:
        start, stop, step = (float(x) for x in spec.split(":"))
        count = int(round((stop - start) / step)) + 1
        return tuple(round(start + i * step, 12) for i in range(count))
    return tuple(float(x) for x in spec.split(","))


def _irange(spec: str) -> tuple[int, ...]:
    if ":" in spec:
        parts = [int(x) for x in spec.split(":")]
        start, stop = parts[0], parts[1]
        step = parts[2] if len(parts) > 2 else 1
        return tuple(range(start, stop + 1, step))
    return tuple(int(x) for x in spec.split(","))


def cmd_sweep(args: argparse.Namespace) -> int:
    if args.panel == "left":
        grid = bounds.SweepGrid.surface_left()
    elif args.panel == "right":
        grid = bounds.SweepGrid.surface_right()
    else:
        if args.lambda_range is None and args.zeta_range is None:
            print("sweep: need --panel or one of --lambda-range/--zeta-range", file=sys.stderr)
            return 2
        if args.lambda_range is not None and args.zeta_range is not None:
            print("sweep: --lambda-range and --zeta-range are exclusive", file=sys.stderr)
            return 2
        try:
            if args.lambda_range is not None:
                grid = bounds.SweepGrid(
                    j0tau=args.j0tau,
                    qbar=args.qbar,
                    m_values=_irange(args.m),
                    axis="lambda",
                    axis_values=_frange(args.lambda_range),
                    fixed_zeta=args.zeta,
                )
            else:
                grid = bounds.SweepGrid(
                    j0tau=args.j0tau,
                    qbar=args.qbar,
                    m_values=_irange(args.m),
                    axis="zeta",
                    axis_values=_frange(args.zeta_range),
                    fixed_lambda=args.lam,
                )
        except ValueError as exc:
            print(f"sweep: {exc}", file=sys.stderr)
            return 2
    rows = bounds.sweep_bounds(grid)
    bounds.write_sweep_csv(rows, grid, args.out)
    RunManifest(
        command="sweep",
        parameters={
            "panel": args.panel,
            "j0tau": grid.j0tau,
            "qbar": grid.qbar,
            "axis": grid.axis,
            "axis_values": list(grid.axis_values),
            "m_values": list(grid.m_values),
            "fixed_lambda": grid.fixed_lambda,
            "fixed_zeta": grid.fixed_zeta,
        },
        seed=None,
        version=__version__,
        outputs=(args.out,),
    ).write(_manifest_path(args.out))
    print(f"wrote {len(rows) * 3} rows to {args.out}")
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    if args.spec:
        with open(args.spec) as fh:
            spec = protocol.ExperimentSpec.from_json(fh.read())
    else:
        spec = protocol.ExperimentSpec(
            n=args.n,
            bath_dim=args.bath_dim,
            seed=args.seed,
            j0=args.j0,
            j1=args.j1,
            tau=args.tau,
            m_list=_irange(args.m),
            epsilon_list=tuple(_parse_float_or_strong(e) for e in args.epsilon.split(",")),
            variant_list=tuple(args.variant.split(",")),
            logical_state=args.logical_state,
        )
    rows = protocol.run_experiment(spec)
    protocol.write_sim_csv(rows, args.out)
    RunManifest(
        command="simulate",
        parameters=json.loads(spec.to_json()),
        seed=spec.seed,
        version=__version__,
        outputs=(args.out,),
    ).write(_manifest_path(args.out))
    violations = [r for r in rows if r.ok is False]
    for r in violations:
        print(
            f"BOUND VIOLATION: variant={r.variant} M={r.m} eps={r.epsilon} "
            f"deviation={r.deviation} bound={r.bound}",
            file=sys.stderr,
        )
    print(f"wrote {len(rows)} rows to {args.out}")
    return 1 if violations else 0


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        results = verify.run_all(only=args.only, inject_sign_bug=args.inject_sign_bug)
    except ValueError as exc:
        print(f"verify: {exc}", file=sys.stderr)
        return 2
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"{status} {res.name}: {res.detail}")
    if args.csv_out:
        rows = [r for res in results for r in res.rows]
        with open(args.csv_out, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["observable", "epsilon", "seed", "residual", "pass"])
            for row in rows:
                writer.writerow(list(row))
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zenolab",
        description="Weak-measurement Zeno protection over stabilizer codes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="evaluate bound surfaces to CSV")
    sweep.add_argument("--panel", choices=("left", "right"), default=None)
    sweep.add_argument("--j0tau", type=float, default=1.0)
    sweep.add_argument("--qbar", type=int, default=4)
    sweep.add_argument("--m", default="1:60", help="M grid, 'start:stop[:step]' or list")
    sweep.add_argument("--zeta", type=float, default=0.5, help="fixed zeta for a lambda sweep")
    sweep.add_argument("--lambda", dest="lam", type=float, default=0.1, help="fixed lambda for a zeta sweep")
    sweep.add_argument("--lambda-range", default=None, help="lambda grid 'start:stop:step'")
    sweep.add_argument("--zeta-range", default=None, help="zeta grid 'start:stop:step'")
    sweep.add_argument("--out", default="sweep.csv")
    sweep.set_defaults(func=cmd_sweep)

    sim = sub.add_parser("simulate", help="run protocols and compare with bounds")
    sim.add_argument("--spec", default=None, help="experiment JSON path")
    sim.add_argument("--n", type=int, default=4)
    sim.add_argument("--bath-dim", type=int, default=2)
    sim.add_argument("--seed", type=int, default=7)
    sim.add_argument("--j0", type=float, default=1.0)
    sim.add_argument("--j1", type=float, default=0.1)
    sim.add_argument("--tau", type=float, default=1.0)
    sim.add_argument("--m", default="1,2,4,8,16,32")
    sim.add_argument("--epsilon", default="1,3,strong")
    sim.add_argument("--variant", default="group,generators,strong")
    sim.add_argument("--logical-state", default="00")
    sim.add_argument("--out", default="simulate.csv")
    sim.set_defaults(func=cmd_simulate)

    ver = sub.add_parser("verify", help="run the numerical invariant suites")
    ver.add_argument("--only", default=None, help=f"one of {sorted(verify.SUITES)}")
    ver.add_argument("--csv-out", default=None, help="write per-case rows (twolocal suite)")
    ver.add_argument("--inject-sign-bug", action="store_true", help=argparse.SUPPRESS)
    ver.set_defaults(func=cmd_verify)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
