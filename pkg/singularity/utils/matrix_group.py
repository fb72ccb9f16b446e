"""
Finite matrix groups over cyclotomic fields.

``close_group`` enumerates a group from generator matrices by breadth-first
right multiplication, then derives everything the representation-theoretic
pipelines need: inverses, element orders, conjugacy classes, exponent and
power maps. Elements are addressed by their dense BFS index; index 0 is the
identity.
"""
import logging
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from sympy import factorint

from singularity.exceptions import CheckFailure, NonInvertibleGenerator, NotNormal, OrderExceeded
from singularity.utils.cyclotomic import CycNum
from singularity.utils.integer_lattice import AbelianGroupStructure

logger = logging.getLogger(__name__)

DEFAULT_MAX_ORDER = 100000
DEFAULT_DENSE_TABLE_LIMIT = 4096


# Square matrices over Q(zeta_N) are tuples of row tuples of CycNum
def identity_matrix(n, conductor=1):
    one, zero = CycNum.one(conductor), CycNum.zero(conductor)
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def matrix_product(a, b):
    n, inner, m = len(a), len(b), len(b[0]) if b else 0
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(inner)), CycNum.zero(a[i][0].conductor)) for j in range(m))
        for i in range(n)
    )


def matrix_trace(a):
    return sum((a[i][i] for i in range(len(a))), CycNum.zero(a[0][0].conductor if a else 1))


def matrix_minus_identity(a):
    return tuple(tuple(x - 1 if i == j else x for j, x in enumerate(row)) for i, row in enumerate(a))


def promote_matrix(a, conductor):
    return tuple(tuple(x.promote(conductor) for x in row) for row in a)


def matrix_key(a):
    # Exact key for matrices stored under one common conductor
    return tuple(x.canonical_coeffs for row in a for x in row)


def _eliminate(a):
    """
    Gaussian elimination over Q(zeta_N). Returns (rank, determinant-or-None for non-square input).
    """
    rows = [list(r) for r in a]
    m = len(rows)
    n = len(rows[0]) if rows else 0
    rank = 0
    det = CycNum.one(rows[0][0].conductor) if rows and n else CycNum.one()
    for col in range(n):
        pivot = next((r for r in range(rank, m) if rows[r][col]), None)
        if pivot is None:
            det = det * 0
            continue
        if pivot != rank:
            rows[rank], rows[pivot] = rows[pivot], rows[rank]
            det = -det
        p = rows[rank][col]
        det = det * p
        p_inv = p.inverse()
        for r in range(rank + 1, m):
            if rows[r][col]:
                factor = rows[r][col] * p_inv
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank, (det if m == n else None)


def cyc_matrix_rank(a):
    return _eliminate(a)[0]


def cyc_determinant(a):
    if not a:
        return CycNum.one()
    return _eliminate(a)[1]


def parse_cyc_entry(entry, conductor):
    """
    Reads a matrix entry: a CycNum encoding ({"N": .., "coeffs": ..}, N defaulting to the
    group conductor), a bare coefficient list, or an integer / rational string.
    """
    if isinstance(entry, dict):
        return CycNum.from_json_object({"N": entry.get("N", conductor), "coeffs": entry.get("coeffs", [])})
    if isinstance(entry, list):
        return CycNum.from_json_object({"N": conductor, "coeffs": entry})
    return CycNum.rational(Fraction(str(entry)), conductor)


def generators_from_json_object(data):
    """
    Parses the group input format {"n": int, "conductor": int, "generators": [matrix, ...]}.

    Args:
        data (dict): Parsed JSON group description
    """
    if not isinstance(data, dict) or "generators" not in data:
        raise ValueError("Group data must be a dictionary with a 'generators' list.")
    conductor = int(data.get("conductor", 1))
    generators = []
    for matrix in data["generators"]:
        generators.append(tuple(tuple(parse_cyc_entry(x, conductor) for x in row) for row in matrix))
    n = int(data.get("n", len(generators[0]) if generators else 0))
    for g in generators:
        if len(g) != n or any(len(row) != n for row in g):
            raise ValueError(f"Every generator must be a {n}x{n} matrix")
    return n, generators


def generators_to_json_object(n, conductor, generators):
    return {
        "n": n,
        "conductor": conductor,
        "generators": [[[x.promote(conductor).to_json_object() for x in row] for row in g] for g in generators],
    }


@dataclass(frozen=True)
class GroupElement:
    matrix: tuple
    index: int


@dataclass(frozen=True)
class ConjugacyClass:
    representative: int
    members: tuple

    @property
    def size(self):
        return len(self.members)


class FiniteMatrixGroup:
    def __init__(self, dimension, conductor, elements, generators, right_mult, parent, parent_generator, dense_table_limit):
        """
        Initialize the enumerated group and derive inverses, classes, exponent and power maps

        Args:
            dimension (int): Size of the matrices
            conductor (int): Common conductor of all matrix entries
            elements (list): GroupElement list in BFS order, identity first
            generators (list): Element indices of the generators
            right_mult (list): right_mult[i][s] is the index of elements[i] * generator s
            parent (list): BFS parent index of every element (None for the identity)
            parent_generator (list): Generator position leading from the parent to the element
            dense_table_limit (int): Largest order that gets a full multiplication table
        """
        self.dimension: int = dimension
        self.conductor: int = conductor
        self.elements: list = elements
        self.generators: list = generators
        self.order: int = len(elements)
        self._right_mult = right_mult
        self._parent = parent
        self._parent_generator = parent_generator

        self.mul_table = self._dense_table() if self.order <= dense_table_limit else None

        self.element_orders, self.inverse_map = self._orders_and_inverses()
        self.classes = self._conjugacy_classes()
        self.element_class = [0] * self.order
        for c, cls in enumerate(self.classes):
            for i in cls.members:
                self.element_class[i] = c
        self.exponent = 1
        for cls in self.classes:
            self.exponent = lcm(self.exponent, self.element_orders[cls.representative])
        self.power_map = self._power_map()
        self._check_structure()

    # Multiplication
    def _dense_table(self):
        # Row i is filled in BFS order: element j = parent(j) * s, so i*j = (i*parent(j)) * s
        table = []
        for i in range(self.order):
            row = [0] * self.order
            row[0] = i
            for j in range(1, self.order):
                row[j] = self._right_mult[row[self._parent[j]]][self._parent_generator[j]]
            table.append(row)
        return table

    def _word(self, j):
        word = []
        while self._parent[j] is not None:
            word.append(self._parent_generator[j])
            j = self._parent[j]
        word.reverse()
        return word

    def multiply(self, i, j):
        if self.mul_table is not None:
            return self.mul_table[i][j]
        for s in self._word(j):
            i = self._right_mult[i][s]
        return i

    def inverse(self, i):
        return self.inverse_map[i]

    def power(self, i, k):
        k %= self.element_orders[i]
        result = 0
        base = i
        while k:
            if k & 1:
                result = self.multiply(result, base)
            base = self.multiply(base, base)
            k >>= 1
        return result

    def conjugate(self, x, s):
        """Returns s^-1 x s."""
        return self.multiply(self.multiply(self.inverse_map[s], x), s)

    def _orders_and_inverses(self):
        orders = [0] * self.order
        inverses = [0] * self.order
        for i in range(self.order):
            previous, current, k = 0, i, 1
            while current != 0:
                previous = current
                current = self.multiply(current, i)
                k += 1
            # current = i^k throughout, so previous = i^(k-1) is the inverse
            orders[i] = k if i else 1
            inverses[i] = previous if i else 0
        return orders, inverses

    def _conjugacy_classes(self):
        assigned = [False] * self.order
        classes = []
        for start in range(self.order):
            if assigned[start]:
                continue
            assigned[start] = True
            orbit = [start]
            queue = deque([start])
            while queue:
                x = queue.popleft()
                for s in self.generators:
                    y = self.conjugate(x, s)
                    if not assigned[y]:
                        assigned[y] = True
                        orbit.append(y)
                        queue.append(y)
            classes.append(ConjugacyClass(representative=start, members=tuple(sorted(orbit))))
        return classes

    def _power_map(self):
        power_map = []
        for cls in self.classes:
            g = cls.representative
            row = [0]
            current = 0
            for _ in range(self.exponent):
                current = self.multiply(current, g)
                row.append(self.element_class[current])
            power_map.append(row)
        return power_map

    def _check_structure(self):
        if self.classes[0].members != (0,):
            raise CheckFailure("Identity does not form a singleton conjugacy class")
        if sum(cls.size for cls in self.classes) != self.order:
            raise CheckFailure("Conjugacy classes do not partition the group")
        for cls in self.classes:
            if self.order % cls.size:
                raise CheckFailure(f"Class size {cls.size} does not divide the group order {self.order}")
        if self.order % self.exponent:
            raise CheckFailure(f"Exponent {self.exponent} does not divide the group order {self.order}")
        for c, row in enumerate(self.power_map):
            if row[1] != c or row[self.exponent] != 0:
                raise CheckFailure(f"Power map of class {c} is inconsistent")

    # Accessors
    @property
    def identity(self):
        return self.elements[0]

    @property
    def class_count(self):
        return len(self.classes)

    @property
    def class_sizes(self):
        return [cls.size for cls in self.classes]

    def matrix(self, i):
        return self.elements[i].matrix

    def class_of(self, i):
        return self.element_class[i]

    def power_class(self, c, j):
        """Class of g^j for g in class c; j is reduced modulo the exponent."""
        return self.power_map[c][j % self.exponent]

    def index_of(self, matrix):
        key = matrix_key(promote_matrix(matrix, self.conductor))
        for element in self.elements:
            if matrix_key(element.matrix) == key:
                return element.index
        return None

    def subgroup_generated(self, indices):
        members = {0}
        queue = deque([0])
        indices = list(indices)
        while queue:
            x = queue.popleft()
            for s in indices:
                y = self.multiply(x, s)
                if y not in members:
                    members.add(y)
                    queue.append(y)
        return frozenset(members)

    def normal_closure(self, indices):
        members = set(self.subgroup_generated(indices))
        while True:
            extra = {self.conjugate(x, s) for x in members for s in self.generators} - members
            if not extra:
                return frozenset(members)
            members = set(self.subgroup_generated(members | extra))

    def is_normal(self, subgroup):
        return all(self.conjugate(x, s) in subgroup for x in subgroup for s in self.generators)

    def generator_matrices(self):
        return [self.matrix(i) for i in self.generators]


def close_group(generators, max_order=DEFAULT_MAX_ORDER, dense_table_limit=DEFAULT_DENSE_TABLE_LIMIT):
    """
    Enumerates the group generated by invertible square matrices over cyclotomic fields.

    Args:
        generators (list): n x n matrices of CycNum
        max_order (int): Enumeration stops with OrderExceeded beyond this many elements
        dense_table_limit (int): Largest order that gets a full multiplication table
    """
    if not generators:
        raise ValueError("At least one generator is required")
    n = len(generators[0])
    conductor = 1
    for g in generators:
        if len(g) != n or any(len(row) != n for row in g):
            raise ValueError(f"Every generator must be a {n}x{n} matrix")
        for row in g:
            for x in row:
                conductor = lcm(conductor, x.conductor)
    generators = [promote_matrix(g, conductor) for g in generators]
    for position, g in enumerate(generators):
        if n and cyc_determinant(g).is_zero():
            raise NonInvertibleGenerator(f"Generator {position} is singular")

    identity = identity_matrix(n, conductor)
    elements = [GroupElement(identity, 0)]
    index = {matrix_key(identity): 0}
    parent, parent_generator = [None], [None]
    right_mult = []
    cursor = 0
    while cursor < len(elements):
        current = elements[cursor].matrix
        row = []
        for s, g in enumerate(generators):
            product = matrix_product(current, g)
            key = matrix_key(product)
            target = index.get(key)
            if target is None:
                target = len(elements)
                if target >= max_order:
                    logger.error(f"Group closure passed {max_order} elements")
                    raise OrderExceeded(max_order)
                index[key] = target
                elements.append(GroupElement(product, target))
                parent.append(cursor)
                parent_generator.append(s)
            row.append(target)
        right_mult.append(row)
        cursor += 1

    generator_indices = [right_mult[0][s] for s in range(len(generators))]
    group = FiniteMatrixGroup(n, conductor, elements, generator_indices, right_mult, parent, parent_generator, dense_table_limit)
    logger.info(f"Closed group of order {group.order} with {group.class_count} classes, exponent {group.exponent}")
    return group


def is_reflection(element):
    """
    True when the element is not the identity and fixes a hyperplane pointwise (rank(g - I) = 1).

    Args:
        element (GroupElement): An element of an enumerated group
    """
    if element.index == 0:
        return False
    return cyc_matrix_rank(matrix_minus_identity(element.matrix)) == 1


def reflection_classes(group):
    # Being a reflection is invariant under conjugation
    return [c for c, cls in enumerate(group.classes) if is_reflection(group.elements[cls.representative])]


def reflection_indices(group):
    return [i for c in reflection_classes(group) for i in group.classes[c].members]


def acts_freely_off_origin(group):
    """
    True when no non-identity element has eigenvalue 1 (det(g - I) != 0); checked on class representatives.
    """
    for cls in group.classes[1:]:
        if cyc_determinant(matrix_minus_identity(group.matrix(cls.representative))).is_zero():
            return False
    return True


def reflection_normal_closure(group):
    """
    Subgroup generated by all reflections, as a frozenset of element indices.
    """
    subgroup = group.subgroup_generated(reflection_indices(group))
    if not group.is_normal(subgroup):
        raise CheckFailure("Subgroup generated by reflections is not closed under conjugation")
    return subgroup


def _cyclic_orders_from_counts(prime, counts):
    # counts[k] = log_p #{h : h^(p^k) = 1}; the number of cyclic factors of order >= p^k is counts[k] - counts[k-1]
    at_least = [counts[k] - counts[k - 1] for k in range(1, len(counts))]
    orders = []
    for k, number in enumerate(at_least, start=1):
        following = at_least[k] if k < len(at_least) else 0
        orders.extend([prime ** k] * (number - following))
    return orders


def dual_abelianization_of_quotient(group, normal_subgroup):
    """
    Character group of G/N, isomorphic to the abelianization G/(N[G,G]).

    Args:
        group (FiniteMatrixGroup): The enumerated group
        normal_subgroup (frozenset): Element indices of a normal subgroup N
    """
    normal_subgroup = frozenset(normal_subgroup)
    if 0 not in normal_subgroup or not group.is_normal(normal_subgroup):
        raise NotNormal("Subgroup is not normal under conjugation by the generators")

    commutators = set()
    for s in group.generators:
        for t in group.generators:
            commutators.add(group.multiply(group.multiply(group.inverse(s), group.inverse(t)), group.multiply(s, t)))
    kernel = group.normal_closure(set(normal_subgroup) | commutators)

    coset_of = [None] * group.order
    representatives = []
    for g in range(group.order):
        if coset_of[g] is None:
            for k in kernel:
                coset_of[group.multiply(g, k)] = len(representatives)
            representatives.append(g)
    quotient_order = len(representatives)

    coset_orders = []
    for g in representatives:
        t, current = 1, g
        while current not in kernel:
            current = group.multiply(current, g)
            t += 1
        coset_orders.append(t)

    orders = []
    for p, exponent in factorint(quotient_order).items():
        counts = [0]
        for k in range(1, exponent + 1):
            number = sum(1 for t in coset_orders if (p ** k) % t == 0)
            counts.append(_log(number, p))
            if number == p ** exponent:
                break
        orders.extend(_cyclic_orders_from_counts(p, counts))
    result = AbelianGroupStructure.from_orders(orders)
    if result.order != quotient_order:
        raise CheckFailure(f"Abelian invariants {result} do not match quotient order {quotient_order}")
    return result


def _log(value, base):
    k = 0
    while value > 1:
        if value % base:
            raise CheckFailure(f"{value} is not a power of {base}")
        value //= base
        k += 1
    return k


def group_summary(group):
    reflections = reflection_classes(group)
    free = acts_freely_off_origin(group)
    return {
        "dimension": group.dimension,
        "conductor": group.conductor,
        "order": group.order,
        "exponent": group.exponent,
        "class_count": group.class_count,
        "class_sizes": group.class_sizes,
        "representative_orders": [group.element_orders[cls.representative] for cls in group.classes],
        "reflection_count": sum(group.classes[c].size for c in reflections),
        "free_action": free,
        "isolated": free and not reflections,
    }
