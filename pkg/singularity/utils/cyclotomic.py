"""
Exact arithmetic in cyclotomic fields Q(zeta_N).

Rationals are ``fractions.Fraction``. A ``CycNum`` stores its value over the
power basis 1, zeta, ..., zeta^(phi(N)-1) after reduction modulo the N-th
cyclotomic polynomial, so two numbers with the same conductor are equal exactly
when their coefficient tuples are equal. Numbers with different conductors are
promoted to the lcm of the conductors before any arithmetic.
"""
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
import logging

from sympy import mobius as sympy_mobius, totient

from singularity.exceptions import ConductorMismatch, NotIntegral, NotRational

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def euler_phi(n):
    return int(totient(n))


@lru_cache(maxsize=None)
def mobius(n):
    return int(sympy_mobius(n))


def _exact_polynomial_division(numerator, denominator):
    """Divides integer polynomials (lowest degree first) by a monic divisor; the remainder must vanish."""
    numerator = list(numerator)
    degree = len(denominator) - 1
    quotient = [0] * (len(numerator) - degree)
    for i in range(len(numerator) - 1, degree - 1, -1):
        c = numerator[i]
        quotient[i - degree] = c
        if c:
            for t in range(degree + 1):
                numerator[i - degree + t] -= c * denominator[t]
    if any(numerator[:degree]):
        raise ArithmeticError("Cyclotomic polynomial division left a remainder")
    return quotient


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n):
    """
    Integer coefficients of the n-th cyclotomic polynomial, lowest degree first.

    Uses Phi_n(x) = (x^n - 1) / prod_{d | n, d < n} Phi_d(x) with exact division.
    """
    if n < 1:
        raise ValueError(f"Cyclotomic polynomial index must be positive, got {n}")
    polynomial = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            polynomial = _exact_polynomial_division(polynomial, cyclotomic_polynomial(d))
    return tuple(polynomial)


def _reduce(coeffs, conductor):
    # Long division by the monic Phi_N; works for any input degree because Phi_N divides x^N - 1
    modulus = cyclotomic_polynomial(conductor)
    degree = len(modulus) - 1
    c = list(coeffs)
    for i in range(len(c) - 1, degree - 1, -1):
        a = c[i]
        if a:
            base = i - degree
            for t in range(degree):
                c[base + t] -= a * modulus[t]
            c[i] = 0
    c = c[:degree] + [0] * (degree - len(c))
    return tuple(x if isinstance(x, Fraction) else Fraction(x) for x in c)


@lru_cache(maxsize=None)
def _trace_weights(conductor):
    # Normalized trace of zeta_N^j is mu(d)/phi(d) with d = N / gcd(j, N)
    weights = []
    for j in range(euler_phi(conductor)):
        d = conductor // gcd(j, conductor)
        weights.append(Fraction(mobius(d), euler_phi(d)))
    return tuple(weights)


class CycNum:
    """An immutable element of Q(zeta_N) in canonical form."""
    __slots__ = ('conductor', '_coeffs')

    def __init__(self, conductor, coeffs=()):
        if not isinstance(conductor, int) or conductor < 1:
            raise ValueError(f"Conductor must be a positive integer, got {conductor!r}")
        self.conductor = conductor
        self._coeffs = _reduce(coeffs, conductor)

    @classmethod
    def _canonical(cls, conductor, coeffs):
        number = object.__new__(cls)
        number.conductor = conductor
        number._coeffs = coeffs
        return number

    @classmethod
    def rational(cls, value, conductor=1):
        return cls(conductor, [Fraction(value)])

    @classmethod
    def root_of_unity(cls, conductor, exponent=1):
        exponent %= conductor
        coeffs = [0] * (exponent + 1)
        coeffs[exponent] = 1
        return cls(conductor, coeffs)

    @classmethod
    def zero(cls, conductor=1):
        return cls._canonical(conductor, (Fraction(0),) * euler_phi(conductor))

    @classmethod
    def one(cls, conductor=1):
        return cls.rational(1, conductor)

    @property
    def coeffs(self):
        """Coefficients of zeta_N^0 .. zeta_N^(N-1); entries past phi(N)-1 are zero."""
        return self._coeffs + (Fraction(0),) * (self.conductor - len(self._coeffs))

    @property
    def canonical_coeffs(self):
        return self._coeffs

    # Conductor handling
    def promote(self, conductor):
        if conductor == self.conductor:
            return self
        if conductor % self.conductor:
            raise ConductorMismatch(f"Cannot promote conductor {self.conductor} to {conductor}")
        step = conductor // self.conductor
        coeffs = [0] * conductor
        for j, c in enumerate(self._coeffs):
            coeffs[j * step] = c
        return CycNum(conductor, coeffs)

    def _coerce(self, other):
        if isinstance(other, CycNum):
            if other.conductor == self.conductor:
                return self, other
            common = lcm(self.conductor, other.conductor)
            return self.promote(common), other.promote(common)
        if isinstance(other, (int, Fraction)):
            return self, CycNum.rational(other, self.conductor)
        return None, None

    # Ring operations
    def __add__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return CycNum._canonical(a.conductor, tuple(x + y for x, y in zip(a._coeffs, b._coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycNum._canonical(self.conductor, tuple(-x for x in self._coeffs))

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return CycNum._canonical(a.conductor, tuple(x - y for x, y in zip(a._coeffs, b._coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycNum._canonical(self.conductor, tuple(x * other for x in self._coeffs))
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return cyc_mul(a, b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("CycNum division by zero")
            return self * (Fraction(1) / Fraction(other))
        if isinstance(other, CycNum):
            return self * other.inverse()
        return NotImplemented

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = CycNum.one(self.conductor)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __bool__(self):
        return any(self._coeffs)

    def is_zero(self):
        return not any(self._coeffs)

    # Galois action
    def galois(self, k):
        """Applies zeta_N -> zeta_N^k for k coprime to N."""
        n = self.conductor
        if gcd(k, n) != 1:
            raise ValueError(f"Galois exponent {k} is not coprime to conductor {n}")
        if n <= 2 or k % n == 1:
            return self
        coeffs = [0] * n
        for j, c in enumerate(self._coeffs):
            if c:
                coeffs[(j * k) % n] += c
        return CycNum(n, coeffs)

    def conjugate(self):
        return self.galois(self.conductor - 1) if self.conductor > 2 else self

    def galois_exponents(self):
        return [k for k in range(1, self.conductor) if gcd(k, self.conductor) == 1] or [1]

    def inverse(self):
        """Inverse via the norm: a^-1 = prod_{sigma != 1} sigma(a) / N(a)."""
        if self.is_zero():
            raise ZeroDivisionError("CycNum zero has no inverse")
        others = CycNum.one(self.conductor)
        for k in self.galois_exponents():
            if k != 1:
                others = others * self.galois(k)
        norm = (self * others).as_rational()
        return others * (Fraction(1) / norm)

    # Rationality
    def is_rational(self):
        return not any(self._coeffs[1:])

    def as_rational(self):
        if not self.is_rational():
            raise NotRational(f"{self!r} is not rational")
        return self._coeffs[0]

    def as_integer(self):
        value = self.as_rational()
        if value.denominator != 1:
            raise NotIntegral(f"{value} is rational but not an integer")
        return value.numerator

    def is_integral(self):
        """True when every power-basis coefficient is an integer, i.e. the number lies in Z[zeta_N]."""
        return all(c.denominator == 1 for c in self._coeffs)

    def normalized_trace(self):
        """Trace to Q divided by the field degree; independent of the conductor used to store the value."""
        return sum((c * w for c, w in zip(self._coeffs, _trace_weights(self.conductor)) if c), Fraction(0))

    # Comparison and hashing
    def __eq__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return a._coeffs == b._coeffs

    def __hash__(self):
        # Equal values stored under different conductors share a normalized trace
        return hash(self.normalized_trace())

    def __repr__(self):
        terms = []
        for j, c in enumerate(self._coeffs):
            if c:
                terms.append(f"{c}" if j == 0 else f"{c}*z{self.conductor}^{j}")
        return ' + '.join(terms) if terms else '0'

    # Serialization
    def to_json_object(self):
        return {
            "N": self.conductor,
            "coeffs": [[str(c.numerator), str(c.denominator)] for c in self.coeffs],
        }

    @staticmethod
    def from_json_object(data):
        if not isinstance(data, dict) or "N" not in data:
            raise ValueError("CycNum data must be a dictionary with keys 'N' and 'coeffs'.")
        coeffs = []
        for entry in data.get("coeffs", []):
            if isinstance(entry, (list, tuple)):
                numerator, denominator = entry
                coeffs.append(Fraction(int(numerator), int(denominator)))
            else:
                coeffs.append(Fraction(str(entry)))
        return CycNum(int(data["N"]), coeffs)


def cyc_mul(a, b):
    """Field product of two numbers stored under the same conductor."""
    if a.conductor != b.conductor:
        raise ConductorMismatch(f"cyc_mul called with conductors {a.conductor} and {b.conductor}")
    x, y = a._coeffs, b._coeffs
    product = [0] * (len(x) + len(y) - 1)
    for i, xi in enumerate(x):
        if xi:
            for j, yj in enumerate(y):
                if yj:
                    product[i + j] += xi * yj
    return CycNum(a.conductor, product)


def cyc_conjugate(a):
    return a.conjugate()


def cyc_as_integer(a):
    return a.as_integer()
