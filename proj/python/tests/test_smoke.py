"""Smoke tests for the _outertrack python module."""

import unittest

import _outertrack as ot
import outertrack as wrapper


class SmokeTest(unittest.TestCase):
    def test_gamma_rank(self):
        for n in range(4, 9):
            self.assertEqual(ot.gamma_rank(n), n)

    def test_construction_identity(self):
        self.assertTrue(ot.construction_identity_holds(6, ["2", "2", "2"], ["5", "5", "5"]))

    def test_closed_form_spot_entries(self):
        labels = ot.gamma_edge_labels(6, "folding")
        rows = ot.closed_form_matrix(6, ["2", "2", "2"], ["5", "5", "5"], "folding")
        at = lambda r, c: rows[labels.index(r)][labels.index(c)]
        self.assertEqual(at("b_2", "c"), "3")
        self.assertEqual(at("b_1", "c"), "0")
        self.assertEqual(at("b_0", "c"), "3")
        self.assertEqual(at("a_1", "a_0"), "1")
        self.assertEqual(at("c", "c"), "1")
        self.assertEqual(at("b_1", "b_1"), "5")
        self.assertEqual(at("a_1", "a_1"), "4")

    def test_big_f_images(self):
        images = ot.big_f_images(5, ["1", "1"], ["1", "1"])
        self.assertEqual(images["a_0"], "a_1")
        self.assertEqual(images["b_0"], "b_1")

    def test_certify_identity(self):
        rows = [["1", "0"], ["0", "1"]]
        cert = ot.certify_folding(rows, 2)
        self.assertEqual(cert["eps"], "0")
        self.assertEqual(cert["K"], "1")

    def test_short_game(self):
        report = ot.run_game(5, 4, "folding", 4)
        self.assertTrue(report["all_pass"])
        self.assertEqual(len(report["pairs"]), 10)

    def test_rank(self):
        result = ot.ergodic_rank(5, 4, 6)
        self.assertEqual(result["rank"], 4)

    def test_monitor(self):
        result = ot.monitor_subgroup(5, ["c"], 3, "greedy")
        self.assertEqual(result["counts"][0], 1)
        self.assertEqual(result["counts"][-1], 0)
        self.assertTrue(result["reached_zero"])

    def test_bound_surface(self):
        self.assertIsNotNone(ot.mixing_depth(5, 4, "folding", 6, "0"))
        order = ot.edge_order(5, 4, 8, "2")
        self.assertTrue(order["complete"])
        loop = ot.witness_loop_through(5, "a_0", ["c"])
        self.assertIsNotNone(loop)
        self.assertNotIn("c", loop.split())
        audit = ot.audit_run(5, 4, 8, 8)
        self.assertTrue(audit["holds"])
        self.assertLessEqual(audit["k"], audit["inequality_cap"])

    def test_wrapper_reexports(self):
        self.assertIs(wrapper.gamma_rank, ot.gamma_rank)
        self.assertEqual(wrapper.gamma_rank(5), 5)

    def test_chi_minus(self):
        self.assertEqual(ot.chi_minus(1, [(0, 0), (0, 0), (0, 0)]), 2)  # rose R_3
        self.assertEqual(ot.chi_minus(2, [(0, 1), (0, 1), (0, 1)]), 1)  # theta
        self.assertEqual(ot.chi_minus(2, [(0, 0), (1, 1)]), 0)  # two circles


if __name__ == "__main__":
    unittest.main()
