"""The ``modalsparse`` command line, end to end on small inputs.

Every test drives ``cli.main`` with an argv list and a temporary output
directory, then checks the exit code and the files left behind.
"""

from __future__ import annotations

import csv
import json
import tempfile
import unittest
from contextlib import redirect_stderr
from io import StringIO
from pathlib import Path

from modalsparse import cli
from modalsparse.contracts import FitReport


def _rows(path: Path) -> list[dict[str, str]]:
    with open(path, encoding="utf-8", newline="") as f:
        return list(csv.DictReader(line for line in f if not line.startswith("#")))


class CliTestCase(unittest.TestCase):
    def setUp(self) -> None:
        self._tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self._tmp.name)
        self.model = self.dir / "modes.json"
        self.model.write_text(
            json.dumps(
                {
                    "modes": [
                        {"f_hz": 1292.4, "zeta": 0.01, "residues": [[1.0, 0.0], [0.0, -0.5]]},
                        {"f_hz": 1553.8, "zeta": 0.01, "residues": [[0.5, 0.2], [1.0, 0.0]]},
                    ]
                }
            ),
            encoding="utf-8",
        )

    def tearDown(self) -> None:
        self._tmp.cleanup()

    def run_cli(self, *argv: str) -> tuple[int, str]:
        err = StringIO()
        with redirect_stderr(err):
            code = cli.main(list(argv))
        return code, err.getvalue()


class SynthCommandTests(CliTestCase):
    def test_same_seed_gives_identical_files(self) -> None:
        for name in ("a", "b"):
            code, _ = self.run_cli(
                "synth", "--model", str(self.model), "--lines", "128", "--alpha", "0.05",
                "--seed", "3", "--out-dir", str(self.dir / name),
            )
            self.assertEqual(code, 0)
        for file in ("frf_clean.csv", "frf_noisy.csv"):
            self.assertEqual(
                (self.dir / "a" / file).read_bytes(), (self.dir / "b" / file).read_bytes(), file
            )

    def test_no_noise_file_without_alpha(self) -> None:
        out = self.dir / "out"
        code, _ = self.run_cli("synth", "--model", str(self.model), "--lines", "64", "--out-dir", str(out))
        self.assertEqual(code, 0)
        self.assertTrue((out / "frf_clean.csv").exists())
        self.assertFalse((out / "frf_noisy.csv").exists())

    def test_negative_alpha_is_a_usage_error(self) -> None:
        code, err = self.run_cli(
            "synth", "--model", str(self.model), "--alpha", "-1", "--out-dir", str(self.dir / "out")
        )
        self.assertEqual(code, 2)
        self.assertIn("error[INVALID_INPUT]", err)

    def test_missing_model_file_fails_cleanly(self) -> None:
        code, err = self.run_cli(
            "synth", "--model", str(self.dir / "nope.json"), "--out-dir", str(self.dir / "out")
        )
        self.assertEqual(code, 1)
        self.assertIn("error[IO_ERROR]", err)

    def test_unknown_subcommand_is_a_usage_error(self) -> None:
        code, _ = self.run_cli("frobnicate")
        self.assertEqual(code, 2)


class FitCommandTests(CliTestCase):
    def setUp(self) -> None:
        super().setUp()
        self.data = self.dir / "data"
        code, _ = self.run_cli(
            "synth", "--model", str(self.model), "--lines", "256", "--out-dir", str(self.data)
        )
        self.assertEqual(code, 0)
        self.frf = self.data / "frf_clean.csv"

    def test_both_methods_write_every_artifact(self) -> None:
        out = self.dir / "fit"
        code, _ = self.run_cli("fit", str(self.frf), "--order", "12", "--out-dir", str(out))
        self.assertEqual(code, 0)
        for method in ("conventional", "omp"):
            for stem in ("diagram", "orders", "poles", "modes", "resynth"):
                suffix = "json" if stem == "modes" else "csv"
                self.assertTrue((out / f"{stem}_{method}.{suffix}").exists(), f"{stem}_{method}")
            self.assertTrue((out / f"diagram_{method}.svg").read_text(encoding="utf-8").startswith("<svg"))

        report = FitReport.model_validate_json((out / "fit_report.json").read_text(encoding="utf-8"))
        self.assertEqual([m.method for m in report.methods], ["conventional", "omp"])
        self.assertIsNone(report.methods[0].sparsity_k)
        self.assertGreaterEqual(report.methods[1].sparsity_k, 1)
        self.assertEqual(
            [row["method"] for row in _rows(out / "stats.csv")], ["conventional", "omp"]
        )
        orders = [int(row["order"]) for row in _rows(out / "orders_conventional.csv")]
        self.assertEqual(orders, list(range(1, 13)))

    def test_fit_is_deterministic(self) -> None:
        for name in ("a", "b"):
            self.run_cli("fit", str(self.frf), "--order", "8", "--method", "omp", "--out-dir", str(self.dir / name))
        for file in ("diagram_omp.csv", "modes_omp.json", "stats.csv"):
            self.assertEqual((self.dir / "a" / file).read_bytes(), (self.dir / "b" / file).read_bytes(), file)

    def test_order_below_two_is_a_usage_error(self) -> None:
        code, _ = self.run_cli("fit", str(self.frf), "--order", "1", "--out-dir", str(self.dir / "fit"))
        self.assertEqual(code, 2)

    def test_config_file_values_are_overridden_by_flags(self) -> None:
        settings = self.dir / "run.conf"
        settings.write_text("method=conventional\norder=99\n", encoding="utf-8")
        out = self.dir / "fit"
        code, _ = self.run_cli(
            "fit", str(self.frf), "--config", str(settings), "--order", "6", "--out-dir", str(out)
        )
        self.assertEqual(code, 0)
        report = FitReport.model_validate_json((out / "fit_report.json").read_text(encoding="utf-8"))
        self.assertEqual([(m.method, m.order) for m in report.methods], [("conventional", 6)])

    def test_missing_frf_file_fails_cleanly(self) -> None:
        code, _ = self.run_cli("fit", str(self.dir / "absent.csv"), "--out-dir", str(self.dir / "fit"))
        self.assertEqual(code, 1)

    def test_malformed_frf_reports_a_parse_error(self) -> None:
        bad = self.dir / "bad.csv"
        bad.write_text("freq_hz,out1_re,out1_im\n10,1,x\n", encoding="utf-8")
        code, err = self.run_cli("fit", str(bad), "--out-dir", str(self.dir / "fit"))
        self.assertEqual(code, 1)
        self.assertIn("error[PARSE_ERROR]", err)

    def test_non_utf8_frf_is_a_one_line_parse_error(self) -> None:
        bad = self.dir / "latin.csv"
        bad.write_bytes(b"freq_hz,out1_re,out1_im\n10,1,0\n20,\xe9,1\n")
        code, err = self.run_cli("fit", str(bad), "--out-dir", str(self.dir / "fit"))
        self.assertEqual(code, 1)
        self.assertNotIn("Traceback", err)
        (line,) = [text for text in err.splitlines() if text.startswith("error[")]
        self.assertTrue(line.startswith("error[PARSE_ERROR]"), line)
        self.assertIn("line=3", line)
        self.assertIn(f"path={bad}", line)

    def test_non_utf8_config_file_is_a_parse_error(self) -> None:
        settings = self.dir / "run.conf"
        settings.write_bytes(b"method=omp\norder=\xff\n")
        code, err = self.run_cli("fit", str(self.frf), "--config", str(settings), "--out-dir", str(self.dir / "fit"))
        self.assertEqual(code, 1)
        self.assertNotIn("Traceback", err)
        self.assertIn("error[PARSE_ERROR]", err)
        self.assertIn("line=2", err)


class CompareCommandTests(CliTestCase):
    def test_a_model_against_itself(self) -> None:
        out = self.dir / "cmp"
        code, _ = self.run_cli("compare", str(self.model), str(self.model), "--out-dir", str(out))
        self.assertEqual(code, 0)
        rows = _rows(out / "comparison.csv")
        self.assertEqual([row["matched"] for row in rows], ["1", "1"])
        self.assertEqual([float(row["f_error_pct"]) for row in rows], [0.0, 0.0])
        mac_rows = _rows(out / "mac.csv")
        self.assertAlmostEqual(float(mac_rows[0]["b1"]), 1.0, places=12)
        self.assertTrue((out / "mac.svg").exists())


class RootsStudyCommandTests(CliTestCase):
    def test_one_row_per_count(self) -> None:
        out = self.dir / "study"
        roots = self.dir / "cloud.csv"
        code, _ = self.run_cli(
            "roots-study", "--degree", "10", "--counts", "10,5,2", "--trials", "3",
            "--roots-out", str(roots), "--out-dir", str(out),
        )
        self.assertEqual(code, 0)
        rows = _rows(out / "sparsity_study.csv")
        self.assertEqual([row["nonzero"] for row in rows], ["10", "5", "2"])
        self.assertTrue(all(0.0 <= float(row["mean_pct_inside"]) <= 100.0 for row in rows))
        self.assertEqual(len(_rows(roots)), 3 * 3 * 10)

    def test_count_above_degree_is_a_usage_error(self) -> None:
        code, _ = self.run_cli(
            "roots-study", "--degree", "5", "--counts", "6", "--out-dir", str(self.dir / "study")
        )
        self.assertEqual(code, 2)

    def test_non_positive_coeff_scale_is_a_usage_error(self) -> None:
        code, err = self.run_cli(
            "roots-study", "--degree", "5", "--counts", "2", "--coeff-scale", "0",
            "--out-dir", str(self.dir / "study"),
        )
        self.assertEqual(code, 2)
        self.assertIn("error[INVALID_INPUT]", err)


if __name__ == "__main__":
    unittest.main()
