"""End-to-end drive of the command line tool."""

import json
import os
import subprocess
import sys
import tempfile
import unittest

CLI = os.environ.get("OUTERTRACK_CLI", "outertrack")


def run(args, cwd):
    return subprocess.run([CLI] + args, cwd=cwd, capture_output=True, text=True)


def write(cwd, name, payload):
    path = os.path.join(cwd, name)
    with open(path, "w") as f:
        json.dump(payload, f)
    return name


def load(cwd, *parts):
    with open(os.path.join(cwd, *parts)) as f:
        return json.load(f)


class CliTest(unittest.TestCase):
    def setUp(self):
        self.dir = tempfile.mkdtemp(prefix="outertrack_cli_")

    def test_construct_and_exit_codes(self):
        cfg = write(self.dir, "c.json", {"n": 6, "alphas": ["2"] * 3, "betas": ["5"] * 3})
        r = run(["construct", "--config", cfg, "--out", "o", "--no-timestamp"], self.dir)
        self.assertEqual(r.returncode, 0, r.stderr)
        report = load(self.dir, "o", "construct.json")
        self.assertTrue(report["matches_closed_form"])
        self.assertEqual(report["diff"], [])
        bad = write(self.dir, "bad.json", {"n": 3})
        self.assertEqual(run(["construct", "--config", bad, "--out", "o"], self.dir).returncode, 2)
        unknown = write(self.dir, "unk.json", {"n": 5, "mystery": 1})
        self.assertEqual(run(["construct", "--config", unknown, "--out", "o"], self.dir).returncode, 2)

    def test_game_estimate_decompose_monitor_audit(self):
        cfg = write(self.dir, "g.json", {"n": 5, "m": 4, "direction": "folding", "steps": 8})
        self.assertEqual(
            run(["game", "--config", cfg, "--out", "g1", "--no-timestamp"], self.dir).returncode, 0)
        report = load(self.dir, "g1", "game_report.json")
        self.assertTrue(report["all_pass"])
        self.assertEqual(len(report["pairs"]), 36)

        self.assertEqual(
            run(["estimate", "--config", cfg, "--out", "e1", "--no-timestamp"], self.dir).returncode, 0)
        self.assertEqual(load(self.dir, "e1", "estimate.json")["rank"], 4)

        dcfg = write(self.dir, "d.json",
                     {"n": 5, "m": 4, "direction": "folding", "steps": 8, "depth": 8})
        self.assertEqual(
            run(["decompose", "--config", dcfg, "--out", "d1", "--no-timestamp"], self.dir).returncode,
            0)
        decomposition = load(self.dir, "d1", "decomposition.json")
        self.assertEqual(len(decomposition["blocks"]), 4)
        self.assertEqual(decomposition["H0"], ["a_0", "b_0", "c"])

        mcfg = write(self.dir, "m.json",
                     {"n": 5, "steps": 4, "subgroups": [["c"], ["b_0"]], "policy": "greedy"})
        self.assertEqual(
            run(["monitor", "--config", mcfg, "--out", "m1", "--no-timestamp"], self.dir).returncode, 0)
        monitor = load(self.dir, "m1", "monitor.json")
        self.assertEqual(monitor["trajectories"][0]["counts"][0], 1)
        self.assertEqual(monitor["trajectories"][0]["counts"][-1], 0)
        self.assertIn("recertified", monitor["trajectories"][0])
        self.assertEqual(monitor["trajectories"][1]["counts"], [0] * 5)

        acfg = write(self.dir, "a.json",
                     {"n": 5, "m": 4, "direction": "folding", "steps": 8, "depth": 8})
        self.assertEqual(
            run(["audit", "--config", acfg, "--out", "a1", "--no-timestamp"], self.dir).returncode, 0)
        audit = load(self.dir, "a1", "audit.json")
        self.assertTrue(audit["holds"])
        self.assertLessEqual(audit["k"], 9)

    def test_certify_and_determinism(self):
        cfg = write(self.dir, "cert.json", {
            "direction": "unfolding", "m": 2,
            "matrix": {"rows": 3, "cols": 3,
                       "entries": [["8", "1", "0"], ["1", "4", "1"], ["0", "2", "1"]]}})
        self.assertEqual(
            run(["certify", "--config", cfg, "--out", "c1", "--no-timestamp"], self.dir).returncode, 0)
        cert = load(self.dir, "c1", "certificate.json")["certificate"]
        self.assertEqual(cert["delta"], "1/2")
        self.assertEqual(cert["eps"], "1/4")

        gcfg = write(self.dir, "g.json", {"n": 4, "m": 2, "direction": "folding", "steps": 5})
        run(["game", "--config", gcfg, "--out", "r1", "--no-timestamp"], self.dir)
        run(["game", "--config", gcfg, "--out", "r2", "--no-timestamp"], self.dir)
        a = open(os.path.join(self.dir, "r1", "game_report.json")).read()
        b = open(os.path.join(self.dir, "r2", "game_report.json")).read()
        self.assertEqual(a, b)

    def test_export(self):
        cfg = write(self.dir, "x.json", {"n": 4, "m": 2, "direction": "folding", "steps": 4})
        self.assertEqual(
            run(["export", "--config", cfg, "--out", "x1", "--no-timestamp"], self.dir).returncode, 0)
        self.assertTrue(os.path.exists(os.path.join(self.dir, "x1", "M_0_4.csv")))
        self.assertTrue(os.path.exists(os.path.join(self.dir, "x1", "normalized_columns.csv")))


if __name__ == "__main__":
    sys.exit(unittest.main())
