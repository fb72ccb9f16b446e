"""
Class functions and character tables of enumerated matrix groups.

Irreducible characters are computed with Dixon's method: the class-sum
structure constants are reduced modulo a prime p = 1 (mod e), their common
eigenvectors are split off over F_p, and every character value is lifted back
to Z[zeta_e] from its eigenvalue multiplicities.
"""
import logging
from collections import deque
from fractions import Fraction
from itertools import product
from math import gcd, isqrt, lcm

import numpy as np
from sympy import isprime
from sympy.ntheory import primitive_root

from singularity.exceptions import (
    AlgorithmFailure, CheckFailure, DegreeOutOfRange, GroupMismatch, NonExactDivision,
    NotRational, NotVirtualCharacter,
)
from singularity.utils.cyclotomic import CycNum
from singularity.utils.matrix_group import matrix_trace

logger = logging.getLogger(__name__)


def value_conductor(group):
    """Conductor used for every class-function value of the group."""
    return lcm(group.conductor, group.exponent)


def inverse_classes(group):
    return [group.class_of(group.inverse(cls.representative)) for cls in group.classes]


# A function on the conjugacy classes of an enumerated group
class ClassFunction:
    def __init__(self, group, values):
        """
        Initialize a class function

        Args:
            group (FiniteMatrixGroup): The group whose classes index the values
            values (list): One CycNum (or rational) per conjugacy class
        """
        if len(values) != group.class_count:
            raise ValueError(f"Expected {group.class_count} class values, got {len(values)}")
        conductor = value_conductor(group)
        self.group = group
        self.values: tuple = tuple(
            v.promote(conductor) if isinstance(v, CycNum) else CycNum.rational(v, conductor) for v in values
        )

    @staticmethod
    def constant(group, value):
        return ClassFunction(group, [value] * group.class_count)

    @staticmethod
    def trivial(group):
        return ClassFunction.constant(group, 1)

    def _check_group(self, other):
        if not isinstance(other, ClassFunction):
            return False
        if other.group is not self.group:
            raise GroupMismatch("Class functions belong to different groups")
        return True

    def __add__(self, other):
        if not self._check_group(other):
            return NotImplemented
        return ClassFunction(self.group, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other):
        if not self._check_group(other):
            return NotImplemented
        return ClassFunction(self.group, [a - b for a, b in zip(self.values, other.values)])

    def __neg__(self):
        return ClassFunction(self.group, [-a for a in self.values])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return ClassFunction(self.group, [a * other for a in self.values])
        if not self._check_group(other):
            return NotImplemented
        return ClassFunction(self.group, [a * b for a, b in zip(self.values, other.values)])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, ClassFunction):
            return NotImplemented
        return self.group is other.group and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def __getitem__(self, c):
        return self.values[c]

    def conjugate(self):
        """The dual character: values complex-conjugated."""
        return ClassFunction(self.group, [v.conjugate() for v in self.values])

    def degree(self):
        return self.values[0].as_integer()

    def key(self):
        return tuple(v.canonical_coeffs for v in self.values)

    def to_json_object(self):
        return {"values": [v.to_json_object() for v in self.values]}

    def __repr__(self):
        return f"ClassFunction({list(self.values)!r})"


def trace_character(group):
    """Character of the defining representation: the trace of every class representative."""
    return ClassFunction(group, [matrix_trace(group.matrix(cls.representative)) for cls in group.classes])


def inner_product(a, b):
    """
    (1/|G|) * sum over classes of |class| * a(class) * conj(b(class)), as an exact rational.
    """
    if a.group is not b.group:
        raise GroupMismatch("Inner product of class functions on different groups")
    group = a.group
    total = CycNum.zero(value_conductor(group))
    for size, x, y in zip(group.class_sizes, a.values, b.values):
        if x and y:
            total = total + x * y.conjugate() * size
    return total.as_rational() / group.order


def exterior_power_character(character, k):
    """
    Character of the k-th exterior power, from Newton's identities on power sums.

    Args:
        character (ClassFunction): Character of a genuine representation
        k (int): Exterior power, 0 <= k <= degree
    """
    degree = character.degree()
    if not 0 <= k <= degree:
        raise DegreeOutOfRange(f"Exterior power {k} outside 0..{degree}")
    group = character.group
    values = []
    for c in range(group.class_count):
        power_sums = [None] + [character[group.power_class(c, i)] for i in range(1, k + 1)]
        elementary = [CycNum.one(value_conductor(group))]
        for j in range(1, k + 1):
            total = CycNum.zero(value_conductor(group))
            for i in range(1, j + 1):
                term = elementary[j - i] * power_sums[i]
                total = total + term if i % 2 else total - term
            quotient = total / j
            if not quotient.is_integral():
                raise NonExactDivision(f"Newton identity division by {j} is not exact on class {c}")
            elementary.append(quotient)
        values.append(elementary[k])
    return ClassFunction(group, values)


def determinant_character(character):
    return exterior_power_character(character, character.degree())


class CharacterTable:
    def __init__(self, group, irreducibles, prime=None):
        """
        Initialize a character table

        Args:
            group (FiniteMatrixGroup): The group
            irreducibles (list): Irreducible characters in basis order
            prime (int): The prime used to compute the table, if any
        """
        self.group = group
        self.irreducibles: list = irreducibles
        self.degrees: list = [chi.degree() for chi in irreducibles]
        self.prime = prime
        position = {chi.key(): i for i, chi in enumerate(irreducibles)}
        try:
            self.dual_permutation: list = [position[chi.conjugate().key()] for chi in irreducibles]
        except KeyError:
            raise CheckFailure("Character table is not closed under complex conjugation")

    def __len__(self):
        return len(self.irreducibles)

    def __getitem__(self, i):
        return self.irreducibles[i]

    def trivial_index(self):
        return 0

    def verify(self):
        """
        Checks the sum of squared degrees and exact row orthogonality.
        """
        group = self.group
        if len(self.irreducibles) != group.class_count:
            raise CheckFailure(f"{len(self.irreducibles)} irreducibles for {group.class_count} classes")
        if sum(d * d for d in self.degrees) != group.order:
            raise CheckFailure(f"Sum of squared degrees {self.degrees} differs from |G| = {group.order}")
        for i, chi in enumerate(self.irreducibles):
            for j in range(i, len(self.irreducibles)):
                expected = 1 if i == j else 0
                if inner_product(chi, self.irreducibles[j]) != expected:
                    raise CheckFailure(f"Characters {i} and {j} are not orthonormal")

    def verify_columns(self):
        """
        Column orthogonality: sum_chi chi(a) conj(chi(b)) is |C_G(a)| when a = b and 0 otherwise.
        """
        group = self.group
        conjugates = [chi.conjugate() for chi in self.irreducibles]
        for a in range(group.class_count):
            for b in range(a, group.class_count):
                total = CycNum.zero(value_conductor(group))
                for chi, chi_bar in zip(self.irreducibles, conjugates):
                    total = total + chi[a] * chi_bar[b]
                expected = group.order // group.classes[a].size if a == b else 0
                if total != expected:
                    raise CheckFailure(f"Columns {a} and {b} violate column orthogonality: {total!r}")

    def to_json_object(self):
        group = self.group
        return {
            "order": group.order,
            "conductor": value_conductor(group),
            "classes": [
                {"size": cls.size, "representative_order": group.element_orders[cls.representative]}
                for cls in group.classes
            ],
            "irreducibles": [
                {"degree": d, "values": [v.to_json_object() for v in chi.values]}
                for d, chi in zip(self.degrees, self.irreducibles)
            ],
        }


def decompose(function, table):
    """
    Coordinates of a virtual character in the irreducible basis.

    Args:
        function (ClassFunction): A virtual character
        table (CharacterTable): The character table of the same group
    """
    if function.group is not table.group:
        raise GroupMismatch("Class function and table belong to different groups")
    coords = []
    for chi in table.irreducibles:
        try:
            multiplicity = inner_product(function, chi)
        except NotRational:
            raise NotVirtualCharacter("Inner product with an irreducible is not rational")
        if multiplicity.denominator != 1:
            raise NotVirtualCharacter(f"Inner product {multiplicity} with an irreducible is not an integer")
        coords.append(multiplicity.numerator)
    if realize(coords, table) != function:
        raise NotVirtualCharacter("Class function is not an integer combination of irreducibles")
    return coords


def realize(coords, table):
    """Class function sum_i coords[i] * chi_i."""
    values = [CycNum.zero(value_conductor(table.group))] * table.group.class_count
    for m, chi in zip(coords, table.irreducibles):
        if m:
            values = [v + x * m for v, x in zip(values, chi.values)]
    return ClassFunction(table.group, values)


# Dixon's algorithm over F_p
def dixon_prime(group):
    """Smallest prime p = 1 (mod exponent) with p > 2 * sqrt(|G|)."""
    e = group.exponent
    p = e + 1
    while not (isprime(p) and p * p > 4 * group.order):
        p += e
    return p


def structure_constants(group):
    """
    a[j][k][l] = #{x in C_j : x^-1 z_l in C_k} for the representative z_l of class l,
    so that K_j K_k = sum_l a[j][k][l] K_l.
    """
    r = group.class_count
    a = np.zeros((r, r, r), dtype=np.int64)
    for j, cls in enumerate(group.classes):
        for l, target in enumerate(group.classes):
            z = target.representative
            for x in cls.members:
                k = group.class_of(group.multiply(group.inverse(x), z))
                a[j, k, l] += 1
    return a


def _rref_mod_p(matrix, p):
    a = np.array(matrix, dtype=np.int64) % p
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nonzero = np.nonzero(a[r:, c])[0]
        if nonzero.size == 0:
            continue
        k = r + int(nonzero[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        factors = a[:, c].copy()
        factors[r] = 0
        a = (a - np.outer(factors, a[r])) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def _nullspace_mod_p(matrix, p):
    reduced, pivots = _rref_mod_p(matrix, p)
    cols = np.asarray(matrix).shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-reduced[i, f]) % p
        basis.append(v)
    return np.array(basis, dtype=np.int64).reshape(len(basis), cols)


def _split_space(basis, pivots, operator, p):
    """
    Splits an invariant subspace (RREF row basis) into eigenspaces of a class-sum matrix.
    """
    d = basis.shape[0]
    image = (basis @ operator.T) % p
    restricted = image[:, pivots]
    pieces = []
    found = 0
    for eigenvalue in range(p):
        shifted = (restricted - eigenvalue * np.identity(d, dtype=np.int64)) % p
        left = _nullspace_mod_p(shifted.T, p)
        if left.shape[0]:
            piece, piece_pivots = _rref_mod_p((left @ basis) % p, p)
            pieces.append((piece, piece_pivots))
            found += piece.shape[0]
            if found == d:
                return pieces
    raise AlgorithmFailure(f"Class-sum matrix is not diagonalizable over F_{p} on a space of dimension {d}")


def _central_character_vectors(group, p):
    constants = structure_constants(group)
    r = group.class_count
    spaces = [_rref_mod_p(np.identity(r, dtype=np.int64), p)]
    for j in range(1, r):
        if all(space.shape[0] == 1 for space, _ in spaces):
            break
        operator = constants[j] % p
        split = []
        for space, pivots in spaces:
            if space.shape[0] == 1:
                split.append((space, pivots))
            else:
                split.extend(_split_space(space, pivots, operator, p))
        spaces = split
    if len(spaces) != r or any(space.shape[0] != 1 for space, _ in spaces):
        raise AlgorithmFailure(f"Class algebra did not split into {r} one-dimensional eigenspaces mod {p}")
    vectors = []
    for space, _ in spaces:
        w = space[0]
        if w[0] % p == 0:
            raise AlgorithmFailure("Central character vanishes on the identity class")
        vectors.append((w * pow(int(w[0]), -1, p)) % p)
    return vectors


def _degree_from_central_character(group, omega, inverse, p):
    sizes = group.class_sizes
    s = 0
    for l, size in enumerate(sizes):
        s = (s + int(omega[l]) * int(omega[inverse[l]]) * pow(size, -1, p)) % p
    if s == 0:
        raise AlgorithmFailure("Degree normalization vanished mod p")
    target = (group.order * pow(s, -1, p)) % p
    for d in range(1, isqrt(group.order) + 1):
        if (d * d) % p == target and group.order % d == 0:
            return d
    raise AlgorithmFailure(f"No character degree squares to {target} mod {p}")


def _lift_character(group, theta, degree, p, root_powers):
    e = group.exponent
    values = []
    for l, cls in enumerate(group.classes):
        o = group.element_orders[cls.representative]
        step = e // o
        o_inverse = pow(o, -1, p)
        coeffs = [0] * e
        total = 0
        for j in range(o):
            m = 0
            for k in range(o):
                m += int(theta[group.power_class(l, k)]) * root_powers[(-step * j * k) % e]
            m = (m * o_inverse) % p
            if m > degree:
                raise AlgorithmFailure(f"Eigenvalue multiplicity {m} exceeds degree {degree} on class {l}")
            coeffs[step * j] += m
            total += m
        if total != degree:
            raise AlgorithmFailure(f"Eigenvalue multiplicities on class {l} sum to {total}, not {degree}")
        values.append(CycNum(e, coeffs))
    return ClassFunction(group, values)


def _table_sort_key(chi):
    is_trivial = all(v == 1 for v in chi.values)
    return (chi.degree(), not is_trivial, chi.key())


def character_table(group, verify=True):
    """
    Complete set of irreducible characters with exact cyclotomic values.

    Irreducibles are ordered by degree, the trivial character first among the linear
    ones, then lexicographically by their value coefficients.

    Args:
        group (FiniteMatrixGroup): An enumerated group
        verify (bool): Check the sum of squared degrees and orthonormality exactly
    """
    p = dixon_prime(group)
    e = group.exponent
    z = pow(primitive_root(p), (p - 1) // e, p)
    root_powers = [pow(z, t, p) for t in range(e)]
    inverse = inverse_classes(group)
    sizes = group.class_sizes

    irreducibles = []
    for omega in _central_character_vectors(group, p):
        degree = _degree_from_central_character(group, omega, inverse, p)
        theta = [(degree * int(omega[l]) * pow(sizes[l], -1, p)) % p for l in range(group.class_count)]
        irreducibles.append(_lift_character(group, theta, degree, p, root_powers))

    irreducibles.sort(key=_table_sort_key)
    table = CharacterTable(group, irreducibles, prime=p)
    if verify:
        table.verify()
    logger.info(f"Character table of a group of order {group.order}: degrees {table.degrees} (p = {p})")
    return table


# Tensor-power saturation
def linear_characters(group):
    """
    Every homomorphism G -> C*: roots of unity are assigned to the generators and
    propagated over all elements, keeping the assignments that stay consistent.
    """
    e = group.exponent
    generators = group.generators
    choices = [range(0, e, e // group.element_orders[s]) for s in generators]
    characters = []
    for assignment in product(*choices):
        exponents = [None] * group.order
        exponents[0] = 0
        queue = deque([0])
        consistent = True
        while queue and consistent:
            x = queue.popleft()
            for s, t in zip(generators, assignment):
                y = group.multiply(x, s)
                value = (exponents[x] + t) % e
                if exponents[y] is None:
                    exponents[y] = value
                    queue.append(y)
                elif exponents[y] != value:
                    consistent = False
                    break
        if consistent:
            characters.append(ClassFunction(
                group, [CycNum.root_of_unity(e, exponents[cls.representative]) for cls in group.classes]
            ))
    return characters


def galois_conjugate(character, k):
    """The class function g -> chi(g^k), again a character whenever k is prime to the exponent."""
    group = character.group
    return ClassFunction(group, [character[group.power_class(c, k)] for c in range(group.class_count)])


def _project_out(psi, irreducibles):
    for chi in irreducibles:
        m = inner_product(psi, chi)
        if m:
            psi = psi - chi * m
    return psi


def _size_reduce(residuals):
    """Pairwise reduction of virtual characters, lowering norms until no step helps."""
    residuals = [psi for psi in residuals if inner_product(psi, psi)]
    changed = True
    while changed:
        changed = False
        for i in range(len(residuals)):
            for j in range(len(residuals)):
                if i == j:
                    continue
                a, b = residuals[i], residuals[j]
                q = round(inner_product(a, b) / inner_product(b, b))
                if not q:
                    continue
                reduced = a - b * q
                if inner_product(reduced, reduced) < inner_product(a, a):
                    residuals[i] = reduced
                    changed = True
        residuals = [psi for psi in residuals if inner_product(psi, psi)]
    return residuals


def saturated_irreducibles(group):
    """
    Irreducible characters found without Dixon's method.

    The trivial and linear characters, the trace character and its dual seed the search.
    Products and Galois conjugates of the irreducibles found so far are reduced against
    them, and the leftovers against each other. A virtual character of norm one is plus
    or minus an irreducible.

    Args:
        group (FiniteMatrixGroup): An enumerated group
    """
    rho = trace_character(group)
    units = [k for k in range(2, group.exponent) if gcd(k, group.exponent) == 1]
    found = []
    residuals = []
    candidates = [ClassFunction.trivial(group)] + linear_characters(group) + [rho, rho.conjugate()]
    while candidates and len(found) < group.class_count:
        new = []
        pool = residuals + candidates
        while pool:
            residuals = []
            for psi in pool:
                psi = _project_out(psi, found)
                norm = inner_product(psi, psi)
                if norm == 1:
                    chi = psi if psi.degree() > 0 else -psi
                    found.append(chi)
                    new.append(chi)
                elif norm:
                    residuals.append(psi)
            residuals = _size_reduce(residuals)
            # Residuals are re-projected while new irreducibles keep appearing among them
            pool = residuals if any(inner_product(psi, psi) == 1 for psi in residuals) else []
        candidates = []
        for chi in new:
            candidates.extend([chi * rho, chi * rho.conjugate()])
            candidates.extend(chi * other for other in found)
            candidates.extend(galois_conjugate(chi, k) for k in units)
    if len(found) != group.class_count:
        raise AlgorithmFailure(f"Saturation stalled at {len(found)} of {group.class_count} irreducibles")
    found.sort(key=_table_sort_key)
    logger.debug(f"Saturation found degrees {[chi.degree() for chi in found]} for order {group.order}")
    return found
