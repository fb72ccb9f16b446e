import logging
from dataclasses import dataclass
from math import prod

from sympy import Matrix, factorint

from singularity.exceptions import CheckFailure, FactorizationTooLarge

logger = logging.getLogger(__name__)

# Invariant factors above this bound are not factored
FACTORIZATION_LIMIT = 2 ** 128


# Dense integer matrix, row-major. 0xN and Nx0 shapes are allowed
@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError(f"Matrix dimensions must be nonnegative, got {self.rows}x{self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(f"Expected {self.rows * self.cols} entries, got {len(self.entries)}")

    @staticmethod
    def from_rows(rows, cols=None):
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("All matrix rows must have the same length")
        return IntMatrix(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @staticmethod
    def identity(n):
        return IntMatrix(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @staticmethod
    def zeros(rows, cols):
        return IntMatrix(rows, cols, (0,) * (rows * cols))

    def __getitem__(self, index):
        i, j = index
        return self.entries[i * self.cols + j]

    def to_rows(self):
        return [list(self.entries[i * self.cols:(i + 1) * self.cols]) for i in range(self.rows)]

    def transpose(self):
        return IntMatrix(self.cols, self.rows, tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def matmul(self, other):
        if self.cols != other.rows:
            raise ValueError(f"Cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        entries = []
        for i in range(self.rows):
            row = self.entries[i * self.cols:(i + 1) * self.cols]
            for j in range(other.cols):
                entries.append(sum(row[k] * other.entries[k * other.cols + j] for k in range(self.cols)))
        return IntMatrix(self.rows, other.cols, tuple(entries))

    __matmul__ = matmul

    def determinant(self):
        """
        Exact determinant, by sympy's fraction-free Bareiss elimination.
        """
        if self.rows != self.cols:
            raise ValueError("Determinant requires a square matrix")
        if self.rows == 0:
            return 1
        return int(Matrix(self.to_rows()).det(method="bareiss"))

    def to_json_object(self):
        return self.to_rows()

    @staticmethod
    def from_json_object(data):
        if not isinstance(data, list):
            raise ValueError("Matrix data must be a list of rows.")
        return IntMatrix.from_rows(data)


@dataclass(frozen=True)
class SmithForm:
    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self):
        return [self.D[i, i] for i in range(min(self.D.rows, self.D.cols))]

    @property
    def rank(self):
        return sum(1 for d in self.diagonal if d != 0)

    def verify(self, matrix):
        """
        Re-multiplies U·M·V and checks the diagonal shape and the divisibility chain.

        Args:
            matrix (IntMatrix): The matrix the form was computed from
        """
        if self.U.matmul(matrix).matmul(self.V) != self.D:
            raise CheckFailure("Smith form does not satisfy U*M*V = D")
        for i in range(self.D.rows):
            for j in range(self.D.cols):
                if i != j and self.D[i, j] != 0:
                    raise CheckFailure(f"Smith form has off-diagonal entry at ({i}, {j})")
        diagonal = self.diagonal
        for a, b in zip(diagonal, diagonal[1:]):
            if a < 0 or (a == 0 and b != 0) or (a != 0 and b % a != 0):
                raise CheckFailure(f"Smith form diagonal {diagonal} is not a divisibility chain")
        if diagonal and diagonal[-1] < 0:
            raise CheckFailure(f"Smith form diagonal {diagonal} has a negative entry")


def _swap_rows(a, i, j):
    a[i], a[j] = a[j], a[i]


def _swap_cols(a, i, j):
    for row in a:
        row[i], row[j] = row[j], row[i]


def _add_row_multiple(a, target, source, factor):
    # row_target += factor * row_source
    src = a[source]
    a[target] = [x + factor * y for x, y in zip(a[target], src)]


def _add_col_multiple(a, target, source, factor):
    for row in a:
        row[target] += factor * row[source]


def _smallest_entry(a, positions):
    best = None
    for i, j in positions:
        value = a[i][j]
        if value and (best is None or abs(value) < abs(a[best[0]][best[1]])):
            best = (i, j)
    return best


def smith_normal_form(matrix, verify=False):
    """
    Computes U, D, V with U·M·V = D, D diagonal with d_1 | d_2 | ... and trailing zeros.

    Pivots on the nonzero entry of minimal absolute value (ties: lowest row, then column),
    so the result is deterministic for a fixed input.

    Args:
        matrix (IntMatrix): The matrix to reduce
        verify (bool): Re-multiply the result and raise CheckFailure when it is inconsistent
    """
    m, n = matrix.rows, matrix.cols
    a = matrix.to_rows()
    u = IntMatrix.identity(m).to_rows()
    # V is tracked transposed so column operations become row operations on vt
    vt = IntMatrix.identity(n).to_rows()

    t = 0
    while t < min(m, n):
        pivot = _smallest_entry(a, ((i, j) for i in range(t, m) for j in range(t, n)))
        if pivot is None:
            break
        i, j = pivot
        if i != t:
            _swap_rows(a, t, i)
            _swap_rows(u, t, i)
        if j != t:
            _swap_cols(a, t, j)
            _swap_rows(vt, t, j)

        while True:
            p = a[t][t]
            for r in range(t + 1, m):
                if a[r][t]:
                    q = a[r][t] // p
                    _add_row_multiple(a, r, t, -q)
                    _add_row_multiple(u, r, t, -q)
            for c in range(t + 1, n):
                if a[t][c]:
                    q = a[t][c] // p
                    _add_col_multiple(a, c, t, -q)
                    _add_row_multiple(vt, c, t, -q)

            # Remainders are smaller than the pivot; bring the smallest one into position
            leftover = _smallest_entry(a, [(r, t) for r in range(t + 1, m)] + [(t, c) for c in range(t + 1, n)])
            if leftover is not None:
                r, c = leftover
                if r != t:
                    _swap_rows(a, t, r)
                    _swap_rows(u, t, r)
                else:
                    _swap_cols(a, t, c)
                    _swap_rows(vt, t, c)
                continue

            # Pivot must divide the whole remaining block
            offender = next(((r, c) for r in range(t + 1, m) for c in range(t + 1, n) if a[r][c] % p), None)
            if offender is not None:
                _add_row_multiple(a, t, offender[0], 1)
                _add_row_multiple(u, t, offender[0], 1)
                continue
            break

        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    form = SmithForm(
        U=IntMatrix.from_rows(u, m),
        D=IntMatrix.from_rows(a, n),
        V=IntMatrix.from_rows(vt, n).transpose(),
    )
    if verify:
        form.verify(matrix)
    return form


def matrix_rank(matrix):
    return smith_normal_form(matrix).rank


def kernel_rank(matrix):
    return matrix.cols - matrix_rank(matrix)


def cokernel(matrix, verify=True):
    """
    Structure of Z^rows / M·Z^cols.
    """
    form = smith_normal_form(matrix, verify=verify)
    nonzero = [d for d in form.diagonal if d != 0]
    return AbelianGroupStructure(matrix.rows - len(nonzero), [d for d in nonzero if d > 1])


def _prime_powers(d):
    if d > FACTORIZATION_LIMIT:
        raise FactorizationTooLarge(f"Invariant factor {d} exceeds 2^128; factor it externally")
    return factorint(d)


# Finitely generated abelian group Z^r ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k with d_1 | d_2 | ... and d_i >= 2
class AbelianGroupStructure:
    def __init__(self, free_rank=0, torsion=()):
        """
        Initialize and normalize an abelian group structure

        Args:
            free_rank (int): The rank of the free part
            torsion (list): Orders of cyclic summands in any order; 0 counts as a free summand and 1 is dropped
        """
        if free_rank < 0:
            raise ValueError(f"Free rank must be nonnegative, got {free_rank}")
        extra_free = 0
        partitions = {}
        for d in torsion:
            d = abs(int(d))
            if d == 0:
                extra_free += 1
                continue
            for p, e in _prime_powers(d).items():
                partitions.setdefault(p, []).append(e)
        self.free_rank: int = free_rank + extra_free
        self.invariant_factors: tuple = AbelianGroupStructure._factors_from_partitions(partitions)

    @staticmethod
    def _factors_from_partitions(partitions):
        length = max((len(e) for e in partitions.values()), default=0)
        factors = [1] * length
        for p, exponents in partitions.items():
            # Largest exponents go to the last invariant factors
            for k, e in enumerate(sorted(exponents, reverse=True)):
                factors[length - 1 - k] *= p ** e
        return tuple(factors)

    @staticmethod
    def from_orders(orders):
        return AbelianGroupStructure(0, orders)

    @staticmethod
    def trivial():
        return AbelianGroupStructure()

    def prime_partitions(self):
        """Exponent partition (descending) of the p-primary part for every prime p dividing the torsion."""
        partitions = {}
        for d in self.invariant_factors:
            for p, e in factorint(d).items():
                partitions.setdefault(p, []).append(e)
        return {p: sorted(e, reverse=True) for p, e in sorted(partitions.items())}

    @property
    def torsion_order(self):
        return prod(self.invariant_factors)

    @property
    def order(self):
        # None stands for an infinite group
        return None if self.free_rank else self.torsion_order

    def is_trivial(self):
        return self.free_rank == 0 and not self.invariant_factors

    def torsion_part(self):
        return AbelianGroupStructure(0, self.invariant_factors)

    def render(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.invariant_factors)
        return " ⊕ ".join(parts) if parts else "0"

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"AbelianGroupStructure({self.free_rank}, {list(self.invariant_factors)})"

    def __eq__(self, other):
        if not isinstance(other, AbelianGroupStructure):
            return NotImplemented
        return self.free_rank == other.free_rank and self.invariant_factors == other.invariant_factors

    def __hash__(self):
        return hash((self.free_rank, self.invariant_factors))

    def to_json_object(self):
        return {"free_rank": self.free_rank, "invariant_factors": list(self.invariant_factors)}

    @staticmethod
    def from_json_object(data):
        if not isinstance(data, dict):
            raise ValueError("Abelian group data must be a dictionary.")
        return AbelianGroupStructure(int(data.get("free_rank", 0)), [int(d) for d in data.get("invariant_factors", [])])


def group_exponent(group):
    """
    Returns the exponent of a finite group, or None when the group is infinite.
    """
    if group.free_rank:
        return None
    return group.invariant_factors[-1] if group.invariant_factors else 1


def direct_sum(groups):
    groups = list(groups)
    return AbelianGroupStructure(
        sum(g.free_rank for g in groups),
        [d for g in groups for d in g.invariant_factors],
    )


def is_quotient_of(quotient, group):
    """
    True when `group` surjects onto `quotient`.

    Compared prime by prime: every free summand of `group` beyond those matched with
    free summands of `quotient` counts as an unbounded exponent.

    Args:
        quotient (AbelianGroupStructure): The candidate quotient
        group (AbelianGroupStructure): The group that should surject onto it
    """
    if quotient.free_rank > group.free_rank:
        return False
    spare = group.free_rank - quotient.free_rank
    target = quotient.prime_partitions()
    source = group.prime_partitions()
    for p, exponents in target.items():
        available = [float('inf')] * spare + source.get(p, [])
        if len(exponents) > len(available):
            return False
        if any(e > a for e, a in zip(exponents, available)):
            return False
    return True
