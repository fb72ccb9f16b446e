"""
The selftest suite: golden tables, structure formulas, pipeline agreement and
randomized property checks, each reported as one pass/fail result.
"""
import logging
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement
from math import gcd, prod

import numpy as np

from singularity.exceptions import SingkError
from singularity.utils.assembly import GlobalSingularityData, assemble, wps_report
from singularity.utils.characters import character_table, saturated_irreducibles
from singularity.utils.constants import KnorrerBase
from singularity.utils.geometric_tables import (
    ade_curve_invariants, ade_labels, ade_surface_ksg0, ade_threefold_record, knorrer_chain, odp_invariants,
)
from singularity.utils.integer_lattice import AbelianGroupStructure, IntMatrix, group_exponent, smith_normal_form
from singularity.utils.local_singularity import (
    LocalModel, cyclic_oracle_agreement, ksg0_cyclic, local_invariants, validate_order_law,
)
from singularity.utils.matrix_group import DEFAULT_DENSE_TABLE_LIMIT, DEFAULT_MAX_ORDER
from singularity.utils.presets import preset_catalog

logger = logging.getLogger(__name__)

# Plane ADE curves: (number of branches, dimension of Pic)
CURVE_TABLE = {
    "A_1": (2, 0), "A_2": (1, 1), "A_3": (2, 0), "A_4": (1, 2), "A_5": (2, 0), "A_6": (1, 3), "A_7": (2, 0), "A_8": (1, 4),
    "D_4": (3, 0), "D_5": (2, 1), "D_6": (3, 0), "D_7": (2, 2), "D_8": (3, 0),
    "E_6": (1, 3), "E_7": (2, 1), "E_8": (1, 4),
}


@dataclass
class AcceptanceResult:
    name: str
    passed: bool
    cases: int
    detail: str = ""

    def to_json_object(self):
        return {"name": self.name, "passed": self.passed, "cases": self.cases, "detail": self.detail}


def _units(m):
    return [a for a in range(1, m + 1) if gcd(a, m) == 1]


def _text(group):
    return group.render() if group is not None else "none"


class AcceptanceSuite:
    def __init__(self, seed, use_dual=True, max_order=DEFAULT_MAX_ORDER, dense_table_limit=DEFAULT_DENSE_TABLE_LIMIT,
                 evaluate_cyclic=None, evaluate_models=None, evaluate_oracle=None):
        """
        Initialize the suite

        Args:
            seed (int): Seed for the randomized criteria
            use_dual (bool): Koszul class convention
            max_order (int): Closure bound
            dense_table_limit (int): Largest order with a dense multiplication table
            evaluate_cyclic (callable): Maps [(m, weights)] to SingInvariants in order
            evaluate_models (callable): Maps [LocalModel] to SingInvariants in order
            evaluate_oracle (callable): Maps [(m, weights)] to dicts with keys agree, fast, general
        """
        self.seed = seed
        self.use_dual = use_dual
        self.max_order = max_order
        self.dense_table_limit = dense_table_limit
        self.evaluate_cyclic = evaluate_cyclic or self._cyclic_inline
        self.evaluate_models = evaluate_models or self._models_inline
        self.evaluate_oracle = evaluate_oracle or self._oracle_inline

    def _cyclic_inline(self, cases):
        return [ksg0_cyclic(m, weights, use_dual=self.use_dual, max_order=self.max_order) for m, weights in cases]

    def _models_inline(self, models):
        return [local_invariants(model, use_dual=self.use_dual, max_order=self.max_order) for model in models]

    def _oracle_inline(self, cases):
        rows = []
        for m, weights in cases:
            agree, fast, general = cyclic_oracle_agreement(m, weights, max_order=self.max_order)
            rows.append({"agree": agree, "fast": fast.cokernel.to_json_object(), "general": general.cokernel.to_json_object()})
        return rows

    @staticmethod
    def _result(name, cases, failures):
        if failures:
            logger.error(f"Selftest {name}: {len(failures)} of {cases} cases failed")
        return AcceptanceResult(name, not failures, cases, "; ".join(failures[:5]))

    def ade_golden_table(self):
        presets = preset_catalog()
        models = [p.local_model(self.max_order, self.dense_table_limit) for p in presets]
        failures = []
        for preset, inv in zip(presets, self.evaluate_models(models)):
            expected = ade_surface_ksg0(preset.ade_label)
            if inv.model["group_order"] != preset.expected_order:
                failures.append(f"{preset.name}: order {inv.model['group_order']}")
            elif inv.ksg0 != expected or not inv.isolated:
                failures.append(f"{preset.name}: {_text(inv.ksg0)} vs {expected.render()}")
        return self._result("ade_golden_table", len(presets), failures)

    def order_law(self):
        report = validate_order_law(range(1, 9), range(2, 7), evaluate=self.evaluate_cyclic)
        failures = [f"m={row['m']}, n={row['n']}: {row['order']}" for row in report.violations]
        return self._result("order_law", len(report.rows), failures)

    def structure_formulas(self):
        cases = [((m, (1, 1, 1)), AbelianGroupStructure.from_orders([m, m])) for m in range(3, 12, 2)]
        cases += [((m, (1, 1, 1)), AbelianGroupStructure.from_orders([m // 2, 2 * m])) for m in range(2, 11, 2)]
        cases += [((2, (1,) * n), AbelianGroupStructure.from_orders([2 ** (n - 1)])) for n in range(2, 11)]
        results = self.evaluate_cyclic([case for case, _ in cases])
        failures = [f"1/{m}{weights}: {_text(inv.ksg0)} vs {expected.render()}"
                    for ((m, weights), expected), inv in zip(cases, results) if inv.ksg0 != expected]
        return self._result("structure_formulas", len(cases), failures)

    def oracle_equivalence(self):
        cases = [(m, weights) for m in range(2, 7) for n in range(1, 5)
                 for weights in combinations_with_replacement(_units(m), n)]
        failures = [f"1/{m}{weights}: {row['fast']} vs {row['general']}"
                    for (m, weights), row in zip(cases, self.evaluate_oracle(cases)) if not row["agree"]]
        return self._result("oracle_equivalence", len(cases), failures)

    def structural_guarantees(self):
        rng = np.random.default_rng(self.seed)
        cases = []
        for _ in range(40):
            m = int(rng.integers(2, 13))
            units = _units(m)
            n = int(rng.integers(2, 6))
            cases.append((m, tuple(int(units[i]) for i in rng.integers(0, len(units), size=n))))
        presets = preset_catalog()
        results = self.evaluate_cyclic(cases)
        results += self.evaluate_models([p.local_model(self.max_order, self.dense_table_limit) for p in presets])
        failures = [f"{inv.model['label']}: {', '.join(c.name for c in inv.failed_checks()) or 'not free'}"
                    for inv in results if inv.failed_checks() or not inv.free_action]
        return self._result("structural_guarantees", len(results), failures)

    def character_laws(self):
        failures = []
        presets = preset_catalog()
        for preset in presets:
            group = preset.local_model(self.max_order, self.dense_table_limit).matrix_group(self.max_order)
            try:
                table = character_table(group, verify=False)
                table.verify()
                table.verify_columns()
                saturated = {chi.key() for chi in saturated_irreducibles(group)}
                if saturated != {chi.key() for chi in table.irreducibles}:
                    failures.append(f"{preset.name}: tensor-power saturation disagrees with the Dixon table")
            except SingkError as e:
                failures.append(f"{preset.name}: {e}")
        return self._result("character_laws", len(presets), failures)

    def snf_properties(self, count=500):
        rng = np.random.default_rng(self.seed)
        failures = []
        for t in range(count):
            rows, cols = int(rng.integers(1, 7)), int(rng.integers(1, 7))
            matrix = IntMatrix.from_rows(rng.integers(-20, 21, size=(rows, cols)).tolist(), cols)
            try:
                form = smith_normal_form(matrix, verify=True)
            except SingkError as e:
                failures.append(f"matrix {t}: {e}")
                continue
            if abs(form.U.determinant()) != 1 or abs(form.V.determinant()) != 1:
                failures.append(f"matrix {t}: transforms are not unimodular")
                continue
            k = form.rank
            if k and prod(form.diagonal[:k]) != _minor_gcd(matrix, k):
                failures.append(f"matrix {t}: diagonal {form.diagonal} disagrees with the {k}x{k} minors")
        return self._result("snf_properties", count, failures)

    def geometric_tables(self):
        failures = []
        for label in ade_labels(8):
            curve = ade_curve_invariants(label)
            threefold = ade_threefold_record(label)
            components, pic_dim = CURVE_TABLE[curve.label]
            expected = AbelianGroupStructure(components - 1)
            if (curve.components, curve.pic_dim) != (components, pic_dim) or curve.ksg0 != expected:
                failures.append(f"{label} curve: N={curve.components}, Pic {curve.pic_dim}")
            if threefold.cl != expected:
                failures.append(f"{label} threefold: Cl {threefold.cl.render()}")
        return self._result("geometric_tables", len(CURVE_TABLE), failures)

    def ordinary_double_points(self):
        failures = []
        for n in range(1, 13):
            degree, part = (n // 2, AbelianGroupStructure.from_orders([2])) if n % 2 == 0 else ((n - 1) // 2, AbelianGroupStructure(1))
            fg = odp_invariants(n)
            if fg.degrees != [degree] or fg.part(degree) != part:
                failures.append(f"n={n}: {fg.render()}")
        return self._result("ordinary_double_points", 12, failures)

    def dual_number_chain(self):
        failures = []
        for m in range(2, 9):
            dimension, fg = knorrer_chain(1, KnorrerBase.EPS, m)[-1]
            expected = AbelianGroupStructure.from_orders([m])
            surface = ksg0_cyclic(m, (1, m - 1), use_dual=self.use_dual).ksg0
            if dimension != 2 or fg.part(1) != expected or surface != expected or ade_surface_ksg0(f"A_{m - 1}") != expected:
                failures.append(f"m={m}: chain {fg.render()}, surface {_text(surface)}")
        return self._result("dual_number_chain", 7, failures)

    def assembly(self, count=100):
        failures = []
        report = wps_report((1, 2, 3), use_dual=self.use_dual, max_order=self.max_order, evaluate=self.evaluate_models)
        if report.kksg0 != AbelianGroupStructure.from_orders([6]):
            failures.append(f"P(1,2,3): {report.kksg0.render()}")
        rng = np.random.default_rng(self.seed)
        for t in range(count):
            n = int(rng.integers(2, 5))
            models = []
            for _ in range(int(rng.integers(1, 4))):
                m = int(rng.integers(2, 8))
                units = _units(m)
                models.append(LocalModel.cyclic(m, [int(units[i]) for i in rng.integers(0, len(units), size=n)]))
            report = assemble(GlobalSingularityData(n, models), use_dual=self.use_dual, max_order=self.max_order,
                              evaluate=self.evaluate_models)
            if report.failed_checks() or report.annihilator_bound % group_exponent(report.kksg0):
                failures.append(f"input {t}: {report.kksg0.render()} with bound {report.annihilator_bound}")
        return self._result("assembly", count + 1, failures)

    def criteria(self):
        return [
            self.ade_golden_table, self.order_law, self.structure_formulas, self.oracle_equivalence,
            self.structural_guarantees, self.character_laws, self.snf_properties, self.geometric_tables,
            self.ordinary_double_points, self.dual_number_chain, self.assembly,
        ]

    def run(self):
        results = []
        for criterion in self.criteria():
            try:
                results.append(criterion())
            except SingkError as e:
                logger.error(f"Selftest {criterion.__name__} raised {e.code}: {e}")
                results.append(AcceptanceResult(criterion.__name__, False, 0, str(e)))
        return results


def _minor_gcd(matrix, k):
    rows = matrix.to_rows()
    g = 0
    for row_set in combinations(range(matrix.rows), k):
        for col_set in combinations(range(matrix.cols), k):
            minor = IntMatrix.from_rows([[rows[i][j] for j in col_set] for i in row_set], k)
            g = gcd(g, minor.determinant())
    return abs(g)
