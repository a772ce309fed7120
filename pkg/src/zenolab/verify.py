"""Self-check suites aggregating the package's numerical invariants.

Each suite returns a VerifyResult; the CLI maps overall failure to a
nonzero exit code.  The suites re-derive everything they assert (dense
commutators, exhaustive enumeration, channel comparisons) rather than
trusting the code paths under test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import bounds
from .hilbert import DensityMatrix, encode_codeword, maximally_mixed, random_density, random_hermitian, trace_distance
from .measurement import ChannelError, KrausSet, MeasurementStrength, kraus_set_generators, kraus_set_group
from .pauli import (
    PauliOperator,
    StabilizerCode,
    all_paulis_of_weight,
    anticommuting_count,
    build_detection_code,
    enumerate_stabilizer_group,
    pauli_commutes,
)
from .protocol import suppression_factor
from .twolocal import direct_weak_many_body, simulate_weak_family


@dataclass
class VerifyResult:
    name: str
    passed: bool
    detail: str
    rows: list[tuple] = field(default_factory=list)


def random_stabilizer_generators(
    n: int, qbar: int, rng: np.random.Generator, max_tries: int = 2000
) -> tuple[PauliOperator, ...]:
    """Rejection-sample a commuting, independent, phase-+1 generator set."""
    if not 1 <= qbar <= n:
        raise ValueError(f"need 1 <= qbar <= n, got qbar={qbar}, n={n}")
    for _ in range(max_tries):
        gens: list[PauliOperator] = []
        tries = 0
        while len(gens) < qbar and tries < 200:
            tries += 1
            bits = rng.integers(0, 2, size=2 * n)
            if not bits.any():
                continue
            cand = PauliOperator(
                n, tuple(int(b) for b in bits[:n]), tuple(int(b) for b in bits[n:])
            )
            if any(not pauli_commutes(cand, g) for g in gens):
                continue
            try:
                enumerate_stabilizer_group(gens + [cand])
            except ValueError:
                continue
            gens.append(cand)
        if len(gens) == qbar:
            return tuple(gens)
    raise RuntimeError(f"could not sample a [[{n},{n - qbar}]] generator set")


def run_halflemma(seed: int = 0, n_codes: int = 50, max_n: int = 5) -> VerifyResult:
    """Anticommuting-with-one-generator implies anticommuting with half the group."""
    rng = np.random.default_rng(seed)
    checked = 0
    for _ in range(n_codes):
        n = int(rng.integers(2, max_n + 1))
        qbar = int(rng.integers(1, n + 1))
        gens = random_stabilizer_generators(n, qbar, rng)
        code = StabilizerCode.from_generators(gens)
        half = len(code.group) // 2
        for p in all_paulis_of_weight(n, (1, 2)):
            if all(pauli_commutes(p, g) for g in code.generators):
                continue
            count = anticommuting_count(p, code, "group")
            checked += 1
            if count != half:
                return VerifyResult(
                    "halflemma",
                    False,
                    f"{p} anticommutes with {count}/{len(code.group)} of {gens}",
                )
    return VerifyResult("halflemma", True, f"{checked} Pauli/code pairs checked")


def _kraus_sets_under_test(
    mutate: Callable[[tuple[np.ndarray, ...]], tuple[np.ndarray, ...]] | None = None,
) -> list[tuple[str, tuple[np.ndarray, ...]]]:
    code = build_detection_code(4)
    sets = []
    for eps in (0.5, 1.0, 3.0, math.inf):
        s = MeasurementStrength(eps)
        sets.append((f"generators eps={s}", kraus_set_generators(code, s).operators))
        sets.append((f"group eps={s}", kraus_set_group(code, s).operators))
    if mutate is not None:
        sets = [(name, mutate(ops)) for name, ops in sets]
    return sets


def sign_bug_mutation(ops: tuple[np.ndarray, ...]) -> tuple[np.ndarray, ...]:
    """Testing hook: rebuild one operator with a wrong sign branch."""
    broken = list(ops)
    broken[-1] = broken[0].copy()
    return tuple(broken)


def run_sumrule(inject_sign_bug: bool = False, seed: int = 1) -> VerifyResult:
    """Sum rule at construction plus trace/PSD preservation of channel outputs."""
    mutate = sign_bug_mutation if inject_sign_bug else None
    rng = np.random.default_rng(seed)
    for name, ops in _kraus_sets_under_test(mutate):
        try:
            ks = KrausSet(ops, "group")
        except ChannelError as exc:
            return VerifyResult("sumrule", False, f"{name}: {exc}")
        rho = random_density(ks.system_dim, rng)
        out = ks.apply_matrix(rho)
        if abs(np.trace(out) - 1.0) > 1e-12:
            return VerifyResult("sumrule", False, f"{name}: trace not preserved")
        if float(np.linalg.eigvalsh(out)[0]) < -1e-10:
            return VerifyResult("sumrule", False, f"{name}: output not PSD")
    return VerifyResult("sumrule", True, "sum rule, trace, and PSD hold")


def run_suppression(seed: int = 2) -> VerifyResult:
    """One channel round scales erred components by zeta^q, elementwise."""
    code = build_detection_code(4)
    rho = encode_codeword(code, "00")
    rng = np.random.default_rng(seed)
    bath_state = maximally_mixed(2)
    bath_op = random_hermitian(2, rng)
    worst = 0.0
    for eps in (0.5, 2.0):
        s = MeasurementStrength(eps)
        for err in all_paulis_of_weight(4, (1,)):
            for variant in ("group", "generators"):
                q = (
                    code.q_group
                    if variant == "group"
                    else anticommuting_count(err, code, "generators")
                )
                expected = s.zeta**q
                got = suppression_factor(
                    rho, err, code, s, 1, variant, bath_state, bath_op
                )
                worst = max(worst, abs(got - expected))
                if abs(got - expected) > 1e-12:
                    return VerifyResult(
                        "suppression",
                        False,
                        f"{err} {variant} eps={eps}: factor {got} != zeta^{q}",
                    )
    return VerifyResult("suppression", True, f"max |factor - zeta^q| = {worst:.2e}")


def run_collapse() -> VerifyResult:
    """bound_exact at zeta = 0 equals the strong-limit bound on both panels."""
    for grid in (bounds.SweepGrid.surface_left(), bounds.SweepGrid.surface_right()):
        for m in grid.m_values:
            for val in grid.axis_values:
                lam = val if grid.axis == "lambda" else grid.fixed_lambda
                for variant in ("group", "generators"):
                    inputs = bounds.BoundInputs.for_variant(
                        variant,
                        j0=grid.j0tau,
                        j1=lam * grid.j0tau,
                        tau=1.0,
                        m=m,
                        qbar=grid.qbar,
                        zeta=0.0,
                    )
                    exact = bounds.bound_exact(inputs)
                    strong = bounds.bound_strong(inputs)
                    scale = max(abs(exact), abs(strong))
                    if exact != strong and abs(exact - strong) > 1e-10 * scale:
                        return VerifyResult(
                            "collapse",
                            False,
                            f"M={m} lambda={lam} {variant}: {exact} vs {strong}",
                        )
    return VerifyResult("collapse", True, "zeta=0 collapse exact on both panels")


def run_twolocal(seeds: Sequence[int] = (0, 1, 2)) -> VerifyResult:
    """Cat-ancilla simulation equals the direct weak measurement."""
    from .hilbert import tensor_product
    from .protocol import build_one_local_coupling
    from .hilbert import hermitian_exponential

    code = build_detection_code(4)
    observables = {
        "XXXX": code.group[1],
        "ZZZZ": code.group[2],
        "YYYY": code.group[3],
    }
    rows: list[tuple] = []
    worst = 0.0
    for seed in seeds:
        h_sb = build_one_local_coupling(4, 2, seed, 1.0)
        u = hermitian_exponential(h_sb.matrix, -1j * 0.3)
        rho_sys = encode_codeword(code, "00")
        rho_b = DensityMatrix((2,), maximally_mixed(2))
        joint = tensor_product(rho_sys, rho_b)
        evolved = DensityMatrix(joint.dims, u @ joint.matrix @ u.conj().T, bath=True)
        for name, v_hat in observables.items():
            strengths = [MeasurementStrength(eps) for eps in (0.5, 2.0, math.inf)]
            sims = simulate_weak_family(evolved, v_hat, strengths)
            for s, sim in zip(strengths, sims):
                direct = direct_weak_many_body(evolved, v_hat, s)
                residual = trace_distance(sim, direct)
                rows.append((name, str(s), seed, residual, residual <= 1e-10))
                worst = max(worst, residual)
    passed = worst <= 1e-10
    return VerifyResult(
        "twolocal", passed, f"max trace-distance residual = {worst:.2e}", rows
    )


SUITES: dict[str, Callable[..., VerifyResult]] = {
    "halflemma": run_halflemma,
    "sumrule": run_sumrule,
    "suppression": run_suppression,
    "collapse": run_collapse,
    "twolocal": run_twolocal,
}


def run_all(
    only: str | None = None, inject_sign_bug: bool = False
) -> list[VerifyResult]:
    names = [only] if only else list(SUITES)
    results = []
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
        if name == "sumrule":
            results.append(run_sumrule(inject_sign_bug=inject_sign_bug))
        else:
            results.append(SUITES[name]())
    return results
