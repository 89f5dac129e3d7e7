import contextlib
import io
import os
import tempfile
import unittest

from src.cli import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, main
from src.sampler.latin_sampler import cyclic_square
from src.utils.io import read_json, read_jsonl, write_square


def _quiet(argv):
    with contextlib.redirect_stdout(io.StringIO()), contextlib.redirect_stderr(io.StringIO()):
        return main(argv)


class CliTests(unittest.TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = self._tmp.name
        self.z3 = os.path.join(self.tmp, "z3.txt")
        write_square(self.z3, cyclic_square(3))

    def tearDown(self):
        self._tmp.cleanup()

    def _write(self, name: str, text: str) -> str:
        path = os.path.join(self.tmp, name)
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
        return path

    def test_verify(self):
        self.assertEqual(_quiet(["verify", "--in", self.z3]), EXIT_OK)
        bad = self._write("bad.txt", "2\n1 1\n2 2\n")
        self.assertEqual(_quiet(["verify", "--in", bad]), EXIT_FAILURE)

    def test_malformed_input_is_a_usage_error(self):
        short = self._write("short.txt", "3\n1 2 3\n")
        self.assertEqual(_quiet(["verify", "--in", short]), EXIT_USAGE)
        self.assertEqual(_quiet(["verify", "--in", os.path.join(self.tmp, "missing.txt")]), EXIT_USAGE)

    def test_usage_errors(self):
        self.assertEqual(_quiet([]), EXIT_USAGE)
        self.assertEqual(_quiet(["census"]), EXIT_USAGE)
        self.assertEqual(_quiet(["stats", "--kind", "coin-flips", "--n", "3", "--samples", "1"]), EXIT_USAGE)

    def test_census_report(self):
        out = os.path.join(self.tmp, "census.json")
        self.assertEqual(_quiet(["--seed", "5", "census", "--in", self.z3, "--report", out]), EXIT_OK)
        report = read_json(out)
        self.assertEqual(report["full_transversal_count"], 3)
        self.assertEqual(report["hamilton_transversal_count"], 2)
        self.assertEqual(report["config"]["seed"], 5)
        self.assertEqual(report["config"]["command"], "census")
        self.assertIn("version", report)

    def test_generate(self):
        out = os.path.join(self.tmp, "squares.jsonl")
        self.assertEqual(_quiet(["generate", "--n", "5", "--count", "3", "--out", out]), EXIT_OK)
        records = list(read_jsonl(out))
        self.assertEqual([r["task"] for r in records], [0, 1, 2])
        self.assertTrue(all(len(r["grid"]) == 5 for r in records))

        rect = os.path.join(self.tmp, "rect.jsonl")
        self.assertEqual(_quiet(["generate", "--n", "6", "--k", "2", "--out", rect]), EXIT_OK)
        self.assertEqual(len(next(read_jsonl(rect))["grid"]), 2)

    def test_stats(self):
        out = os.path.join(self.tmp, "stats.json")
        csv = os.path.join(self.tmp, "stats.csv")
        argv = ["stats", "--kind", "row-permutation", "--n", "5", "--samples", "50", "--out", out, "--csv", csv]
        self.assertEqual(_quiet(argv), EXIT_OK)
        self.assertTrue(read_json(out)["passed"])
        self.assertTrue(os.path.exists(csv))

    def test_gadgets_absorbing(self):
        out = os.path.join(self.tmp, "gadgets.json")
        argv = ["gadgets", "--in", self.z3, "--mode", "absorbing", "--roots", "1,1", "--report", out]
        self.assertEqual(_quiet(argv), EXIT_OK)
        self.assertEqual(read_json(out)["count"], 0)

    def test_gadgets_quasirandom(self):
        out = os.path.join(self.tmp, "quasi.json")
        argv = ["gadgets", "--in", self.z3, "--mode", "quasirandom", "--report", out]
        self.assertEqual(_quiet(argv), EXIT_OK)
        report = read_json(out)
        self.assertTrue(report["upper"]["holds"])
        self.assertTrue(report["lower"]["holds"])

    def test_roots_required_for_gadget_modes(self):
        argv = ["gadgets", "--in", self.z3, "--mode", "bridging"]
        self.assertEqual(_quiet(argv), EXIT_USAGE)

    def test_bad_roots(self):
        argv = ["gadgets", "--in", self.z3, "--mode", "absorbing", "--roots", "1"]
        self.assertEqual(_quiet(argv), EXIT_USAGE)

    def test_pipeline_planted(self):
        config = self._write("cfg.json", '{"template_size": 1, "flexible_size": 0, "quasirandom_samples": 0}')
        out = os.path.join(self.tmp, "planted.json")
        self.assertEqual(_quiet(["pipeline", "--planted", "20", "--config", config, "--out", out]), EXIT_OK)
        report = read_json(out)
        self.assertEqual(report["status"], "success")
        self.assertEqual(len(report["square"]), 20)
        self.assertEqual(_quiet(["pipeline", "--planted", "26", "--config", config, "--out", out]), EXIT_USAGE)

    def test_pipeline_failure_exit(self):
        out = os.path.join(self.tmp, "run.json")
        self.assertEqual(_quiet(["pipeline", "--in", self.z3, "--out", out]), EXIT_FAILURE)
        self.assertEqual(read_json(out)["status"], "failed")


if __name__ == "__main__":
    unittest.main()
