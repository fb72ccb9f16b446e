import unittest

import numpy as np

from singularity.exceptions import TableMismatch
from singularity.utils.characters import character_table, trace_character
from singularity.utils.integer_lattice import AbelianGroupStructure, cokernel
from singularity.utils.local_singularity import cyclic_generator
from singularity.utils.cyclotomic import CycNum
from singularity.utils.matrix_group import close_group, cyc_matrix_rank, matrix_minus_identity
from singularity.utils.presets import d_preset
from singularity.utils.representation_ring import (
    VirtualCharacter, dual, koszul_class, koszul_class_function, multiplication_matrix, rr_multiply,
)


class TestRepresentationRing(unittest.TestCase):
    def setUp(self):
        self.group = close_group(d_preset(4).generators)
        self.table = character_table(self.group)

    def test_multiplication(self):
        rho = VirtualCharacter.irreducible(self.table, 4)
        self.assertEqual(rr_multiply(rho, rho).coords, (1, 1, 1, 1, 0))
        one = VirtualCharacter.one(self.table)
        self.assertEqual(rr_multiply(one, rho), rho)

    def test_arithmetic(self):
        a = VirtualCharacter(self.table, [1, 0, 2, 0, -1])
        b = VirtualCharacter(self.table, [0, 1, 0, 0, 1])
        self.assertEqual((a + b).coords, (1, 1, 2, 0, 0))
        self.assertEqual((a - b).coords, (1, -1, 2, 0, -2))
        self.assertEqual((-a).coords, (-1, 0, -2, 0, 1))
        self.assertEqual(a.scale(3).coords, (3, 0, 6, 0, -3))

    def test_multiplication_is_commutative_and_associative(self):
        table = character_table(close_group(d_preset(5).generators))
        rng = np.random.default_rng(11)
        for _ in range(8):
            a, b, c = (VirtualCharacter(table, rng.integers(-2, 3, size=len(table)).tolist()) for _ in range(3))
            self.assertEqual(rr_multiply(a, b), rr_multiply(b, a))
            self.assertEqual(rr_multiply(rr_multiply(a, b), c), rr_multiply(a, rr_multiply(b, c)))

    def test_table_mismatch(self):
        other = character_table(close_group(d_preset(4).generators))
        with self.assertRaises(TableMismatch):
            rr_multiply(VirtualCharacter.one(self.table), VirtualCharacter.one(other))

    def test_dual_of_cyclic_characters(self):
        group = close_group([cyclic_generator(3, (1, 1))])
        table = character_table(group)
        for i in range(len(table)):
            chi = VirtualCharacter.irreducible(table, i)
            self.assertEqual(dual(dual(chi)), chi)
            self.assertEqual(dual(chi).realization(), chi.realization().conjugate())

    def test_koszul_class_of_quaternion_group(self):
        # rho is self-dual with trivial determinant, so r = 2 - rho
        r = koszul_class(self.group, self.table)
        self.assertEqual(r.coords, (2, 0, 0, 0, -1))
        self.assertEqual(r.realization()[0], 0)

    def test_koszul_class_function_vanishes_at_identity(self):
        group = close_group([cyclic_generator(5, (1, 2, 3))])
        for use_dual in (True, False):
            self.assertTrue(koszul_class_function(group, use_dual=use_dual)[0].is_zero())

    def test_koszul_vanishes_exactly_where_one_is_an_eigenvalue(self):
        zero, one = CycNum.zero(3), CycNum.one(3)
        groups = [
            self.group,
            close_group([cyclic_generator(4, (1, 2))]),
            close_group([cyclic_generator(6, (1, 3, 5))]),
            close_group([((zero, one), (one, zero)), cyclic_generator(3, (1, 2))]),
        ]
        for group in groups:
            for use_dual in (True, False):
                r = koszul_class_function(group, use_dual=use_dual)
                for c, cls in enumerate(group.classes):
                    g = group.matrix(cls.representative)
                    fixes_a_vector = cyc_matrix_rank(matrix_minus_identity(g)) < group.dimension
                    self.assertEqual(r[c].is_zero(), fixes_a_vector, f"class {c} of order {group.order}")

    def test_multiplication_matrix(self):
        r = koszul_class(self.group, self.table)
        matrix = multiplication_matrix(r).matrix
        self.assertEqual([matrix[i, 0] for i in range(5)], list(r.coords))
        self.assertEqual(cokernel(matrix), AbelianGroupStructure(1, [2, 2]))

    def test_trace_character_is_irreducible(self):
        rho = VirtualCharacter.from_class_function(trace_character(self.group), self.table)
        self.assertEqual(rho.coords, (0, 0, 0, 0, 1))


if __name__ == '__main__':
    unittest.main()
