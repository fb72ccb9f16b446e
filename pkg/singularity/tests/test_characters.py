import unittest
from fractions import Fraction

import numpy as np

from singularity.exceptions import DegreeOutOfRange, GroupMismatch, NotVirtualCharacter
from singularity.utils.characters import (
    ClassFunction, character_table, decompose, determinant_character, dixon_prime, exterior_power_character,
    galois_conjugate, inner_product, linear_characters, realize, saturated_irreducibles, structure_constants,
    trace_character,
)
from singularity.utils.cyclotomic import CycNum
from singularity.utils.local_singularity import cyclic_generator
from singularity.utils.matrix_group import close_group, cyc_determinant
from singularity.utils.presets import d_preset, e_preset, preset_catalog


def embed(x):
    roots = np.exp(2j * np.pi * np.arange(x.conductor) / x.conductor)
    return complex(sum(float(c) * roots[j] for j, c in enumerate(x.coeffs)))


def reflection_dihedral_group():
    """The symmetric group S_3 acting on the plane by diag(w, w^2) and the coordinate swap."""
    zero, one = CycNum.zero(3), CycNum.one(3)
    swap = ((zero, one), (one, zero))
    return close_group([swap, cyclic_generator(3, (1, 2))])


def numeric_character_table(group):
    """
    Burnside's method in floating point: common eigenvectors of the class-sum matrices
    give the central characters, scaled into characters by the class sizes.
    """
    a = structure_constants(group).astype(float)
    r = group.class_count
    rng = np.random.default_rng(5)
    combination = sum(rng.normal() * a[j] for j in range(r))
    _, vectors = np.linalg.eig(combination)
    sizes = np.array(group.class_sizes, dtype=float)
    characters = []
    for t in range(r):
        omega = vectors[:, t] / vectors[0, t]
        degree = np.sqrt(group.order / np.sum(np.abs(omega) ** 2 / sizes))
        characters.append(degree * omega / sizes)
    return characters


class TestCharacterTable(unittest.TestCase):
    def test_cyclic_group(self):
        group = close_group([cyclic_generator(5, (1, 4))])
        table = character_table(group)
        self.assertEqual(table.degrees, [1] * 5)
        self.assertEqual(table[0], ClassFunction.trivial(group))

    def test_quaternion_group(self):
        group = close_group(d_preset(4).generators)
        table = character_table(group)
        self.assertEqual(table.degrees, [1, 1, 1, 1, 2])
        table.verify_columns()
        self.assertEqual(inner_product(trace_character(group), trace_character(group)), 1)

    def test_binary_tetrahedral_group(self):
        group = e_preset(6).local_model().group
        table = character_table(group)
        self.assertEqual(table.degrees, [1, 1, 1, 2, 2, 2, 3])
        self.assertEqual(sum(d * d for d in table.degrees), 24)
        table.verify_columns()

    def test_dual_permutation_is_an_involution(self):
        table = character_table(close_group(d_preset(5).generators))
        for i, j in enumerate(table.dual_permutation):
            self.assertEqual(table.dual_permutation[j], i)
            self.assertEqual(table[i].conjugate(), table[j])

    def test_dixon_prime(self):
        group = close_group(d_preset(4).generators)
        p = dixon_prime(group)
        self.assertEqual(p % group.exponent, 1)
        self.assertGreater(p * p, 4 * group.order)

    def test_matches_numeric_burnside(self):
        for group in (close_group(d_preset(5).generators), e_preset(6).local_model().group):
            table = character_table(group)
            exact = [np.array([embed(v) for v in chi.values]) for chi in table.irreducibles]
            for numeric in numeric_character_table(group):
                self.assertTrue(any(np.allclose(numeric, chi, atol=1e-8) for chi in exact))

    def test_saturation_matches_dixon_for_every_preset(self):
        for preset in preset_catalog():
            group = preset.local_model().matrix_group()
            saturated = saturated_irreducibles(group)
            self.assertEqual(
                {chi.key() for chi in saturated}, {chi.key() for chi in character_table(group).irreducibles},
                preset.name,
            )

    def test_saturation_on_a_reflection_group(self):
        group = reflection_dihedral_group()
        saturated = saturated_irreducibles(group)
        self.assertEqual([chi.degree() for chi in saturated], [1, 1, 2])
        self.assertEqual(saturated, character_table(group).irreducibles)

    def test_linear_characters(self):
        self.assertEqual(len(linear_characters(close_group(d_preset(4).generators))), 4)
        self.assertEqual(len(linear_characters(e_preset(6).local_model().group)), 3)
        self.assertEqual(len(linear_characters(e_preset(8).local_model().group)), 1)
        cyclic = close_group([cyclic_generator(6, (1, 5))])
        self.assertEqual(len(linear_characters(cyclic)), 6)

    def test_galois_conjugates_permute_the_table(self):
        table = character_table(e_preset(8).local_model().group)
        keys = {chi.key() for chi in table.irreducibles}
        for chi in table.irreducibles:
            self.assertIn(galois_conjugate(chi, 7).key(), keys)
            self.assertEqual(galois_conjugate(chi, 1), chi)

    def test_json(self):
        table = character_table(close_group(d_preset(4).generators))
        data = table.to_json_object()
        self.assertEqual(data["order"], 8)
        self.assertEqual([c["size"] for c in data["classes"]], table.group.class_sizes)
        self.assertEqual([chi["degree"] for chi in data["irreducibles"]], [1, 1, 1, 1, 2])


class TestClassFunctions(unittest.TestCase):
    def setUp(self):
        self.group = close_group(d_preset(4).generators)
        self.table = character_table(self.group)
        self.rho = trace_character(self.group)

    def test_exterior_powers(self):
        self.assertEqual(exterior_power_character(self.rho, 0), ClassFunction.trivial(self.group))
        self.assertEqual(exterior_power_character(self.rho, 1), self.rho)
        self.assertEqual(determinant_character(self.rho), ClassFunction.trivial(self.group))
        with self.assertRaises(DegreeOutOfRange):
            exterior_power_character(self.rho, 3)

    def test_exterior_square_of_cyclic_representation(self):
        group = close_group([cyclic_generator(7, (1, 2, 4))])
        rho = trace_character(group)
        # Lambda^2 of diag(z, z^2, z^4) is diag(z^3, z^5, z^6), the dual of rho
        self.assertEqual(exterior_power_character(rho, 2), rho.conjugate())
        self.assertEqual(determinant_character(rho), ClassFunction.trivial(group))

    def test_determinant_of_a_non_special_group(self):
        group = reflection_dihedral_group()
        rho = trace_character(group)
        expected = ClassFunction(group, [cyc_determinant(group.matrix(cls.representative)) for cls in group.classes])
        self.assertEqual(determinant_character(rho), expected)
        self.assertEqual(exterior_power_character(rho, rho.degree()), expected)
        self.assertNotEqual(expected, ClassFunction.trivial(group))

        group = close_group([cyclic_generator(5, (1, 2))])
        rho = trace_character(group)
        expected = ClassFunction(group, [cyc_determinant(group.matrix(cls.representative)) for cls in group.classes])
        self.assertEqual(determinant_character(rho), expected)

    def test_decompose(self):
        coords = decompose(self.rho * self.rho, self.table)
        self.assertEqual(coords, [1, 1, 1, 1, 0])
        self.assertEqual(realize(coords, self.table), self.rho * self.rho)

    def test_not_virtual_character(self):
        with self.assertRaises(NotVirtualCharacter):
            decompose(ClassFunction.constant(self.group, Fraction(1, 2)), self.table)

    def test_group_mismatch(self):
        other = close_group(d_preset(4).generators)
        with self.assertRaises(GroupMismatch):
            inner_product(self.rho, trace_character(other))


if __name__ == '__main__':
    unittest.main()
