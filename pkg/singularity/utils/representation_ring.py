import logging
from dataclasses import dataclass

from singularity.exceptions import CheckFailure, TableMismatch
from singularity.utils.characters import decompose, exterior_power_character, realize, trace_character
from singularity.utils.integer_lattice import IntMatrix

logger = logging.getLogger(__name__)


# Element of R(G): integer coordinates in the irreducible basis of a character table
class VirtualCharacter:
    def __init__(self, table, coords):
        if len(coords) != len(table):
            raise ValueError(f"Expected {len(table)} coordinates, got {len(coords)}")
        self.table = table
        self.coords: tuple = tuple(int(m) for m in coords)

    @staticmethod
    def from_class_function(function, table):
        return VirtualCharacter(table, decompose(function, table))

    @staticmethod
    def irreducible(table, i):
        coords = [0] * len(table)
        coords[i] = 1
        return VirtualCharacter(table, coords)

    @staticmethod
    def one(table):
        return VirtualCharacter.irreducible(table, table.trivial_index())

    def realization(self):
        """The class function sum_i coords[i] * chi_i."""
        return realize(self.coords, self.table)

    def _check_table(self, other):
        if other.table is not self.table:
            raise TableMismatch("Virtual characters belong to different character tables")

    def __add__(self, other):
        self._check_table(other)
        return VirtualCharacter(self.table, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        self._check_table(other)
        return VirtualCharacter(self.table, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return VirtualCharacter(self.table, [-a for a in self.coords])

    def scale(self, factor):
        return VirtualCharacter(self.table, [a * factor for a in self.coords])

    def __eq__(self, other):
        if not isinstance(other, VirtualCharacter):
            return NotImplemented
        return self.table is other.table and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"VirtualCharacter({list(self.coords)})"

    def to_json_object(self):
        return {"coords": list(self.coords)}


@dataclass(frozen=True)
class MultiplicationMatrix:
    # Column j holds the coordinates of r * chi_j
    matrix: IntMatrix

    def to_json_object(self):
        return {"matrix": self.matrix.to_json_object()}


def rr_multiply(a, b):
    """
    Product in R(G): pointwise product of realizations, decomposed back into integer coordinates.
    """
    if a.table is not b.table:
        raise TableMismatch("Cannot multiply virtual characters from different tables")
    return VirtualCharacter.from_class_function(a.realization() * b.realization(), a.table)


def dual(a):
    coords = [0] * len(a.coords)
    for i, m in enumerate(a.coords):
        coords[a.table.dual_permutation[i]] = m
    return VirtualCharacter(a.table, coords)


def koszul_class_function(group, use_dual=True):
    """
    sum_{i=0}^{n} (-1)^i Lambda^i(rho^dual) as a class function (rho instead of its dual when use_dual is off).
    """
    rho = trace_character(group)
    base = rho.conjugate() if use_dual else rho
    total = None
    for i in range(group.dimension + 1):
        term = exterior_power_character(base, i)
        if total is None:
            total = term
        else:
            total = total - term if i % 2 else total + term
    if group.dimension >= 1 and not total[0].is_zero():
        raise CheckFailure(f"Koszul class has rank {total[0]} at the identity, expected 0")
    return total


def koszul_class(group, table, use_dual=True):
    """
    Koszul class r in the irreducible coordinates of the table.

    Args:
        group (FiniteMatrixGroup): The group acting on affine n-space
        table (CharacterTable): Its character table
        use_dual (bool): Build r from the dual of the defining representation
    """
    if table.group is not group:
        raise TableMismatch("Character table does not belong to the group")
    r = VirtualCharacter.from_class_function(koszul_class_function(group, use_dual=use_dual), table)
    logger.debug(f"Koszul class coordinates {list(r.coords)}")
    return r


def multiplication_matrix(r):
    """
    Integer matrix of x -> r * x on R(G); column j is the decomposition of r * chi_j.
    """
    table = r.table
    realization = r.realization()
    columns = [decompose(realization * chi, table) for chi in table.irreducibles]
    size = len(table)
    return MultiplicationMatrix(IntMatrix.from_rows([[columns[j][i] for j in range(size)] for i in range(size)], size))
