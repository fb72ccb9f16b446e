import unittest
from math import gcd

from singularity.exceptions import InvalidLabel, NotCoprime
from singularity.utils.constants import KnorrerBase
from singularity.utils.geometric_tables import (
    ADECurveRecord, Extension, FilteredAbelianGroup, Integers, Power, Product, UnitsOfField, VectorSpace,
    ade_curve_invariants, ade_labels, ade_surface_ksg0, ade_threefold_class_group, ade_threefold_record,
    dual_number_invariants, knorrer_chain, knorrer_shift, odp_invariants, parse_ade_label, parse_group_expr,
    sylvester_count,
)
from singularity.utils.integer_lattice import AbelianGroupStructure
from singularity.utils.local_singularity import ksg0_cyclic

Z = AbelianGroupStructure(1)
Z2 = AbelianGroupStructure.from_orders([2])


class TestFilteredGroups(unittest.TestCase):
    def test_knorrer_shift(self):
        fg = FilteredAbelianGroup([(0, Z2), (2, Z)])
        self.assertEqual(knorrer_shift(fg).components, [(1, Z2), (3, Z)])
        self.assertEqual(knorrer_shift(FilteredAbelianGroup()).components, [])

    def test_trivial_parts_are_dropped(self):
        fg = FilteredAbelianGroup([(0, AbelianGroupStructure.trivial()), (1, Z2)])
        self.assertEqual(fg.degrees, [1])
        self.assertEqual(fg.part(0), AbelianGroupStructure.trivial())

    def test_degrees_must_increase(self):
        with self.assertRaises(ValueError):
            FilteredAbelianGroup([(2, Z), (1, Z2)])

    def test_json_round_trip(self):
        fg = FilteredAbelianGroup([(1, Z2), (4, Z)])
        self.assertEqual(FilteredAbelianGroup.from_json_object(fg.to_json_object()), fg)


class TestDoublePoints(unittest.TestCase):
    def test_odp_invariants(self):
        for n in range(1, 13):
            fg = odp_invariants(n)
            if n % 2 == 0:
                self.assertEqual(fg.components, [(n // 2, Z2)])
            else:
                self.assertEqual(fg.components, [((n - 1) // 2, Z)])

    def test_knorrer_chain_dimensions(self):
        chain = knorrer_chain(3, KnorrerBase.XY)
        self.assertEqual([d for d, _ in chain], [1, 3, 5, 7])
        self.assertEqual(chain[-1][1].components, [(3, Z)])

    def test_dual_numbers(self):
        self.assertEqual(dual_number_invariants(5).components, [(0, AbelianGroupStructure.from_orders([5]))])
        for m in range(2, 8):
            dimension, fg = knorrer_chain(1, KnorrerBase.EPS, m)[-1]
            self.assertEqual(dimension, 2)
            self.assertEqual(fg.part(1), ksg0_cyclic(m, (1, m - 1)).ksg0)
            self.assertEqual(fg.part(1), ade_surface_ksg0(f"A_{m - 1}"))
        with self.assertRaises(ValueError):
            knorrer_chain(1, KnorrerBase.EPS)


class TestSylvester(unittest.TestCase):
    def test_counts(self):
        self.assertEqual(sylvester_count(2, 3), 1)
        self.assertEqual(sylvester_count(3, 4), 3)
        self.assertEqual(sylvester_count(3, 5), 4)
        self.assertEqual(sylvester_count(1, 7), 0)

    def test_closed_form_matches_enumeration(self):
        for a in range(1, 31):
            for b in range(1, 31):
                if gcd(a, b) != 1:
                    continue
                gaps = [t for t in range(1, a * b) if not any((t - i * a) % b == 0 for i in range(t // a + 1))]
                self.assertEqual(sylvester_count(a, b), len(gaps), (a, b))

    def test_not_coprime(self):
        with self.assertRaises(NotCoprime):
            sylvester_count(4, 6)


class TestADETables(unittest.TestCase):
    def test_labels(self):
        self.assertEqual(parse_ade_label("A3"), ("A", 3))
        self.assertEqual(parse_ade_label("d_{5}"), ("D", 5))
        self.assertEqual(parse_ade_label("E_8"), ("E", 8))
        for bad in ("D3", "E9", "A0", "B2", ""):
            with self.assertRaises(InvalidLabel):
                parse_ade_label(bad)

    def test_curve_rows(self):
        e6 = ade_curve_invariants("E6")
        self.assertEqual((e6.components, e6.pic_dim), (1, 3))
        self.assertEqual(e6.ksg0, AbelianGroupStructure.trivial())
        self.assertEqual(e6.ksg1.render(), "k^3")
        d4 = ade_curve_invariants("D_4")
        self.assertEqual(d4.ksg0, AbelianGroupStructure(2))
        self.assertEqual(d4.ksg1.render(), "(k* ⊕ Z)^2")
        d5 = ade_curve_invariants("D_5")
        self.assertEqual((d5.components, d5.pic_dim), (2, 1))
        self.assertEqual(d5.ksg1.render(), "[k* ⊕ Z; k]")
        a1 = ade_curve_invariants("A_1")
        self.assertEqual(a1.ksg1, Product((UnitsOfField(), Integers())))

    def test_every_row_is_consistent(self):
        for label in ade_labels(12):
            record = ade_curve_invariants(label)
            self.assertEqual(ADECurveRecord.from_json_object(record.to_json_object()), record)

    def test_threefolds(self):
        self.assertEqual(ade_threefold_class_group("A_3"), Z)
        self.assertEqual(ade_threefold_class_group("A_4"), AbelianGroupStructure.trivial())
        self.assertEqual(ade_threefold_class_group("D_6"), AbelianGroupStructure(2))
        record = ade_threefold_record("E_7")
        self.assertEqual(record.equation, "uv + y^3 + y z^3")
        self.assertEqual(record.filtration.components, [(1, Z)])

    def test_surface_table(self):
        self.assertEqual(ade_surface_ksg0("D_6"), AbelianGroupStructure.from_orders([2, 2]))
        self.assertEqual(ade_surface_ksg0("D_7"), AbelianGroupStructure.from_orders([4]))
        self.assertEqual(ade_surface_ksg0("E_8"), AbelianGroupStructure.trivial())


class TestGroupExpressions(unittest.TestCase):
    def test_parse_inverts_render(self):
        expressions = [
            Product(),
            VectorSpace(4),
            Power(Product((UnitsOfField(), Integers())), 3),
            Extension(Product((UnitsOfField(), Integers())), VectorSpace(2)),
            Extension(Power(Product((UnitsOfField(), Integers())), 2), VectorSpace(1)),
        ]
        for expr in expressions:
            self.assertEqual(parse_group_expr(expr.render()), expr)

    def test_invalid_expressions(self):
        for text in ("k* ⊕", "(k*", "[Z; k", "Q"):
            with self.assertRaises(ValueError):
                parse_group_expr(text)


if __name__ == '__main__':
    unittest.main()
