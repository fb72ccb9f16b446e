import unittest
from itertools import permutations

from singularity.exceptions import DimensionMismatch, NotFreeAction, NotPairwiseCoprime
from singularity.utils.assembly import GlobalReport, GlobalSingularityData, assemble, wps_report, wps_singularity_data
from singularity.utils.constants import CheckStatus
from singularity.utils.integer_lattice import AbelianGroupStructure
from singularity.utils.local_singularity import LocalModel, ksg0_cyclic
from singularity.utils.matrix_group import close_group
from singularity.utils.presets import d_preset


class TestAssemble(unittest.TestCase):
    def test_direct_sum_of_local_groups(self):
        data = GlobalSingularityData(3, [LocalModel.cyclic(3, (1, 1, 1)), LocalModel.cyclic(2, (1, 1, 1))])
        report = assemble(data)
        self.assertEqual(report.kksg0, AbelianGroupStructure.from_orders([3, 3, 4]))
        self.assertEqual(report.annihilator_bound, 36)
        self.assertIsNone(report.surface_formula)
        self.assertEqual(report.failed_checks(), [])
        self.assertTrue(report.flag("pd_injective").value)

    def test_surface_formula(self):
        quaternion = LocalModel.from_group(close_group(d_preset(4).generators), label="D_4")
        data = GlobalSingularityData(2, [quaternion, LocalModel.cyclic(5, (1, 4))])
        report = assemble(data)
        self.assertEqual(report.kksg0, AbelianGroupStructure.from_orders([2, 2, 5]))
        self.assertEqual(report.surface_formula, report.kksg0)
        self.assertEqual([c.status for c in report.checks], [CheckStatus.PASS, CheckStatus.PASS])

    def test_invariant_under_reordering(self):
        quaternion = LocalModel.from_group(close_group(d_preset(4).generators), label="D_4")
        models = [quaternion, LocalModel.cyclic(5, (1, 4)), LocalModel.cyclic(3, (1, 2)), LocalModel.cyclic(7, (1, 6))]
        expected = assemble(GlobalSingularityData(2, models))
        for ordering in permutations(models):
            report = assemble(GlobalSingularityData(2, list(ordering)))
            self.assertEqual(report.kksg0, expected.kksg0)
            self.assertEqual(report.annihilator_bound, expected.annihilator_bound)
            self.assertEqual(report.surface_formula, expected.surface_formula)
            self.assertEqual([(f.name, f.value) for f in report.flags], [(f.name, f.value) for f in expected.flags])
            self.assertEqual([c.status for c in report.checks], [c.status for c in expected.checks])

    def test_no_singular_points(self):
        report = assemble(GlobalSingularityData(4, []))
        self.assertEqual(report.kksg0, AbelianGroupStructure.trivial())
        self.assertEqual(report.annihilator_bound, 1)

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatch):
            GlobalSingularityData(3, [LocalModel.cyclic(3, (1, 2))])

    def test_not_free_reports_the_model(self):
        data = GlobalSingularityData(2, [LocalModel.cyclic(3, (1, 2)), LocalModel.cyclic(4, (1, 2))])
        with self.assertRaises(NotFreeAction) as ctx:
            assemble(data)
        self.assertEqual(ctx.exception.details["index"], 1)

    def test_custom_evaluator(self):
        models = [LocalModel.cyclic(3, (1, 2)), LocalModel.cyclic(7, (1, 3))]
        seen = []

        def evaluate(batch):
            seen.extend(batch)
            return [ksg0_cyclic(m.modulus, m.weights) for m in batch]

        report = assemble(GlobalSingularityData(2, models), evaluate=evaluate)
        self.assertEqual(seen, models)
        self.assertEqual(report, assemble(GlobalSingularityData(2, models)))


class TestWeightedProjectiveSpace(unittest.TestCase):
    def test_p123(self):
        data = wps_singularity_data([1, 2, 3])
        self.assertEqual(data.dimension, 2)
        self.assertEqual([(m.modulus, m.weights) for m in data.local_models], [(2, (1, 1)), (3, (1, 2))])
        report = wps_report([1, 2, 3])
        self.assertEqual(report.kksg0, AbelianGroupStructure.from_orders([6]))
        self.assertEqual(report.annihilator_bound, 6)
        self.assertEqual(report.flag("k0_rank").value, 3)

    def test_higher_dimension(self):
        report = wps_report([1, 1, 1, 2])
        # single point 1/2(1, 1, 1)
        self.assertEqual(report.kksg0, AbelianGroupStructure.from_orders([4]))
        self.assertEqual(report.annihilator_bound, 4)

    def test_smooth(self):
        self.assertEqual(wps_report([1, 1, 1]).kksg0, AbelianGroupStructure.trivial())

    def test_invalid_weights(self):
        with self.assertRaises(NotPairwiseCoprime):
            wps_singularity_data([1, 2, 4])
        with self.assertRaises(ValueError):
            wps_singularity_data([0, 1])
        with self.assertRaises(ValueError):
            wps_singularity_data([])

    def test_json_round_trip(self):
        report = wps_report([1, 2, 3, 5])
        data = report.to_json_object()
        self.assertEqual(data["kksg0"]["invariant_factors"], report.kksg0.to_json_object()["invariant_factors"])
        self.assertEqual(GlobalReport.from_json_object(data), report)


if __name__ == '__main__':
    unittest.main()
