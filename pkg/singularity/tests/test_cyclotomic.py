import unittest
from fractions import Fraction

import numpy as np

from singularity.exceptions import ConductorMismatch, NotIntegral, NotRational
from singularity.utils.cyclotomic import (
    CycNum, cyc_as_integer, cyc_conjugate, cyc_mul, cyclotomic_polynomial, euler_phi, mobius,
)


def embed(x):
    """Complex value of a cyclotomic number under zeta_N -> exp(2 pi i / N)."""
    roots = np.exp(2j * np.pi * np.arange(x.conductor) / x.conductor)
    return complex(sum(float(c) * roots[j] for j, c in enumerate(x.coeffs)))


class TestCyclotomicPolynomials(unittest.TestCase):
    def test_small_cyclotomic_polynomials(self):
        self.assertEqual(cyclotomic_polynomial(1), (-1, 1))
        self.assertEqual(cyclotomic_polynomial(4), (1, 0, 1))
        self.assertEqual(cyclotomic_polynomial(6), (1, -1, 1))
        self.assertEqual(cyclotomic_polynomial(12), (1, 0, -1, 0, 1))

    def test_degree_is_euler_phi(self):
        for n in range(1, 31):
            self.assertEqual(len(cyclotomic_polynomial(n)) - 1, euler_phi(n))

    def test_euler_phi_and_mobius(self):
        self.assertEqual([euler_phi(n) for n in (1, 2, 9, 12, 36, 97)], [1, 1, 6, 4, 12, 96])
        self.assertEqual([mobius(n) for n in (1, 2, 4, 6, 30, 49)], [1, -1, 0, 1, -1, 0])
        for n in range(1, 50):
            divisors = [d for d in range(1, n + 1) if n % d == 0]
            self.assertEqual(sum(mobius(d) for d in divisors), 1 if n == 1 else 0)
            self.assertEqual(sum(euler_phi(d) for d in divisors), n)


class TestCycNum(unittest.TestCase):
    def test_roots_of_unity(self):
        i = CycNum.root_of_unity(4)
        self.assertEqual(i * i, -1)
        z3 = CycNum.root_of_unity(3)
        self.assertEqual(z3 + z3 ** 2, -1)
        self.assertEqual(z3 ** 3, 1)

    def test_square_root_of_two(self):
        z8 = CycNum.root_of_unity(8)
        self.assertEqual((z8 + z8 ** -1) ** 2, 2)

    def test_equality_across_conductors(self):
        self.assertEqual(CycNum.root_of_unity(2), CycNum.rational(-1))
        self.assertEqual(CycNum.root_of_unity(4, 2), CycNum.root_of_unity(6, 3))
        self.assertEqual(hash(CycNum.root_of_unity(4, 2)), hash(CycNum.rational(-1)))
        self.assertEqual(CycNum.root_of_unity(3).promote(12), CycNum.root_of_unity(12, 4))

    def test_promote_to_non_multiple_fails(self):
        with self.assertRaises(ConductorMismatch):
            CycNum.root_of_unity(3).promote(4)

    def test_cyc_mul_requires_equal_conductors(self):
        with self.assertRaises(ConductorMismatch):
            cyc_mul(CycNum.root_of_unity(3), CycNum.root_of_unity(4))
        self.assertEqual(cyc_mul(CycNum.root_of_unity(5), CycNum.root_of_unity(5, 4)), 1)

    def test_conjugate_and_inverse(self):
        z5 = CycNum.root_of_unity(5)
        self.assertEqual(cyc_conjugate(z5) * z5, 1)
        x = 1 + z5 + 3 * z5 ** 2
        self.assertEqual(x * x.inverse(), 1)
        self.assertEqual(x / x, 1)
        with self.assertRaises(ZeroDivisionError):
            CycNum.zero(5).inverse()

    def test_integrality(self):
        self.assertEqual(cyc_as_integer(CycNum.rational(7, 12)), 7)
        with self.assertRaises(NotRational):
            cyc_as_integer(CycNum.root_of_unity(3))
        with self.assertRaises(NotIntegral):
            CycNum.rational(Fraction(1, 2), 4).as_integer()
        self.assertTrue((CycNum.root_of_unity(7) * 3).is_integral())
        self.assertFalse((CycNum.root_of_unity(7) / 2).is_integral())

    def test_normalized_trace(self):
        self.assertEqual(CycNum.root_of_unity(5).normalized_trace(), Fraction(-1, 4))
        self.assertEqual(CycNum.root_of_unity(4).normalized_trace(), 0)
        self.assertEqual(CycNum.rational(3, 9).normalized_trace(), 3)

    def test_galois_action(self):
        z7 = CycNum.root_of_unity(7)
        self.assertEqual(z7.galois(3), z7 ** 3)
        with self.assertRaises(ValueError):
            z7.galois(7)

    def test_arithmetic_matches_complex_embedding(self):
        rng = np.random.default_rng(7)
        for conductor in (3, 5, 8, 12, 20):
            a = CycNum(conductor, [int(c) for c in rng.integers(-4, 5, size=conductor)])
            b = CycNum(conductor, [int(c) for c in rng.integers(-4, 5, size=conductor)])
            self.assertTrue(np.isclose(embed(a * b), embed(a) * embed(b)))
            self.assertTrue(np.isclose(embed(a - b), embed(a) - embed(b)))
            self.assertTrue(np.isclose(embed(a.conjugate()), np.conj(embed(a))))

    def test_ring_laws(self):
        rng = np.random.default_rng(13)

        def sample(conductor):
            return CycNum(conductor, [int(c) for c in rng.integers(-3, 4, size=conductor)])

        for conductors in ((5, 5, 5), (9, 9, 9), (12, 8, 3), (15, 10, 6), (7, 4, 1)):
            a, b, c = (sample(n) for n in conductors)
            self.assertEqual((a + b) + c, a + (b + c))
            self.assertEqual((a * b) * c, a * (b * c))
            self.assertEqual(a * (b + c), a * b + a * c)
            self.assertEqual((a + b) * c, a * c + b * c)

    def test_canonical_form_is_idempotent(self):
        rng = np.random.default_rng(19)
        for conductor in (1, 4, 9, 12, 30):
            x = CycNum(conductor, [int(c) for c in rng.integers(-5, 6, size=3 * conductor)])
            self.assertEqual(len(x.canonical_coeffs), euler_phi(conductor))
            again = CycNum(conductor, x.canonical_coeffs)
            self.assertEqual(again.canonical_coeffs, x.canonical_coeffs)
            self.assertEqual(CycNum(conductor, x.coeffs).canonical_coeffs, x.canonical_coeffs)

    def test_json_round_trip(self):
        x = CycNum(8, [Fraction(1, 2), 0, -3, Fraction(5, 7)])
        self.assertEqual(CycNum.from_json_object(x.to_json_object()), x)
        self.assertEqual(len(x.to_json_object()["coeffs"]), 8)
        half = CycNum.from_json_object({"N": 4, "coeffs": ["1/2", "1/2"]})
        self.assertEqual(half, (1 + CycNum.root_of_unity(4)) / 2)


if __name__ == '__main__':
    unittest.main()
