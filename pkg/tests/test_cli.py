"""CLI surface: flags, CSV artifacts, manifests, exit codes, determinism."""

import csv
import json

from zenolab.cli import main


def read_csv(path):
    with open(path) as fh:
        reader = csv.reader(fh)
        return next(reader), list(reader)


class TestSweepCommand:
    def test_left_panel(self, tmp_path):
        out = tmp_path / "left.csv"
        assert main(["sweep", "--panel", "left", "--out", str(out)]) == 0
        header, body = read_csv(out)
        assert header == ["variant", "M", "lambda", "zeta", "J0tau", "Qbar", "B"]
        assert len(body) == 3 * 60 * 21
        manifest = json.loads((tmp_path / "left.csv.manifest.json").read_text())
        assert manifest["command"] == "sweep"
        assert manifest["outputs"] == [str(out)]

    def test_right_panel(self, tmp_path):
        out = tmp_path / "right.csv"
        assert main(["sweep", "--panel", "right", "--out", str(out)]) == 0
        _, body = read_csv(out)
        assert len(body) == 3 * 60 * 20
        zetas = {row[3] for row in body}
        assert "0.0" in zetas and "0.95" in zetas

    def test_custom_grid(self, tmp_path):
        out = tmp_path / "c.csv"
        code = main(
            [
                "sweep",
                "--j0tau", "1.0",
                "--qbar", "2",
                "--m", "1,2,4",
                "--lambda-range", "0:1:0.5",
                "--zeta", "0.3",
                "--out", str(out),
            ]
        )
        assert code == 0
        _, body = read_csv(out)
        assert len(body) == 3 * 3 * 3

    def test_no_grid_is_usage_error(self, tmp_path, capsys):
        assert main(["sweep", "--out", str(tmp_path / "x.csv")]) == 2
        assert "need --panel" in capsys.readouterr().err

    def test_conflicting_axes_usage_error(self, tmp_path):
        code = main(
            [
                "sweep",
                "--lambda-range", "0:1:0.5",
                "--zeta-range", "0:0.9:0.1",
                "--out", str(tmp_path / "x.csv"),
            ]
        )
        assert code == 2

    def test_deterministic_bytes(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["sweep", "--panel", "right", "--out", str(a)])
        main(["sweep", "--panel", "right", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()


class TestSimulateCommand:
    def test_small_run(self, tmp_path):
        out = tmp_path / "sim.csv"
        code = main(
            [
                "simulate",
                "--m", "1,4",
                "--epsilon", "1,strong",
                "--variant", "group,strong",
                "--seed", "3",
                "--out", str(out),
            ]
        )
        assert code == 0
        header, body = read_csv(out)
        assert header == [
            "variant", "M", "epsilon", "zeta", "deviation", "bound",
            "bound_minus_deviation", "ok",
        ]
        # group x 2 eps x 2 M + strong x 2 M
        assert len(body) == 6
        assert all(row[7] == "1" for row in body)

    def test_none_variant_baseline(self, tmp_path):
        out = tmp_path / "none.csv"
        code = main(
            [
                "simulate",
                "--m", "4",
                "--epsilon", "2",
                "--variant", "none,group",
                "--out", str(out),
            ]
        )
        assert code == 0
        _, body = read_csv(out)
        by_variant = {row[0]: row for row in body}
        assert by_variant["none"][5] == ""  # no bound column for the baseline
        assert float(by_variant["group"][4]) < float(by_variant["none"][4])

    def test_seed_determinism(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["simulate", "--m", "1,2", "--epsilon", "1", "--variant", "group", "--seed", "9"]
        main(args + ["--out", str(a)])
        main(args + ["--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_spec_file(self, tmp_path):
        from zenolab.protocol import ExperimentSpec

        spec_path = tmp_path / "exp.json"
        spec_path.write_text(
            ExperimentSpec(m_list=(2,), epsilon_list=(1.0,), variant_list=("group",)).to_json()
        )
        out = tmp_path / "sim.csv"
        assert main(["simulate", "--spec", str(spec_path), "--out", str(out)]) == 0
        _, body = read_csv(out)
        assert len(body) == 1

    def test_manifest_reproducibility(self, tmp_path):
        out = tmp_path / "sim.csv"
        main(["simulate", "--m", "2", "--epsilon", "1", "--variant", "group", "--out", str(out)])
        manifest = json.loads((tmp_path / "sim.csv.manifest.json").read_text())
        assert manifest["parameters"]["seed"] == 7
        assert manifest["version"]


class TestVerifyCommand:
    def test_single_fast_suite(self, capsys):
        assert main(["verify", "--only", "collapse"]) == 0
        assert "PASS collapse" in capsys.readouterr().out

    def test_suppression_suite(self, capsys):
        assert main(["verify", "--only", "suppression"]) == 0
        assert "PASS suppression" in capsys.readouterr().out

    def test_unknown_suite_usage_error(self):
        assert main(["verify", "--only", "nonsense"]) == 2

    def test_injected_bug_detected(self, capsys):
        assert main(["verify", "--only", "sumrule", "--inject-sign-bug"]) == 1
        assert "FAIL sumrule" in capsys.readouterr().out

    def test_twolocal_csv_rows(self, tmp_path, capsys):
        out = tmp_path / "twolocal.csv"
        # one seed through the underlying suite to keep the test quick
        from zenolab import verify as v

        res = v.run_twolocal(seeds=(0,))
        assert res.passed
        assert len(res.rows) == 9
        header = ["observable", "epsilon", "seed", "residual", "pass"]
        with open(out, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(res.rows)
        got_header, body = read_csv(out)
        assert got_header == header
        assert all(row[4] == "True" for row in body)

    def test_csv_out_flag(self, tmp_path, capsys):
        out = tmp_path / "rows.csv"
        assert main(["verify", "--only", "collapse", "--csv-out", str(out)]) == 0
        header, body = read_csv(out)
        assert header == ["observable", "epsilon", "seed", "residual", "pass"]
        assert body == []  # the collapse suite carries no per-case rows
