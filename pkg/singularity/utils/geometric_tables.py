"""
Closed-form invariants: Knörrer shifts of the topological filtration, ordinary
double points, and the ADE curve and threefold atlases.
"""
import logging
import re
from dataclasses import dataclass, field
from math import gcd
from typing import Optional

from singularity.exceptions import CheckFailure, InvalidLabel, NotCoprime
from singularity.utils.constants import KnorrerBase
from singularity.utils.integer_lattice import AbelianGroupStructure, direct_sum

logger = logging.getLogger(__name__)


# Abelian group with its graded pieces labeled by codimension degree
class FilteredAbelianGroup:
    def __init__(self, components=()):
        """
        Args:
            components (list): (degree, AbelianGroupStructure) pairs; trivial parts are dropped
        """
        components = [(int(d), part) for d, part in components if not part.is_trivial()]
        degrees = [d for d, _ in components]
        if any(d < 0 for d in degrees):
            raise ValueError(f"Filtration degrees must be nonnegative, got {degrees}")
        if any(a >= b for a, b in zip(degrees, degrees[1:])):
            raise ValueError(f"Filtration degrees must be strictly increasing, got {degrees}")
        self.components: list = components

    @property
    def group(self):
        return direct_sum(part for _, part in self.components)

    @property
    def degrees(self):
        return [d for d, _ in self.components]

    def part(self, degree):
        return next((part for d, part in self.components if d == degree), AbelianGroupStructure.trivial())

    def __eq__(self, other):
        if not isinstance(other, FilteredAbelianGroup):
            return NotImplemented
        return self.components == other.components

    def __repr__(self):
        return f"FilteredAbelianGroup({self.components!r})"

    def render(self):
        if not self.components:
            return "0"
        return ", ".join(f"gr^{d} = {part.render()}" for d, part in self.components)

    def to_json_object(self):
        return {
            "group": self.group.to_json_object(),
            "components": [{"degree": d, "part": part.to_json_object()} for d, part in self.components],
        }

    @staticmethod
    def from_json_object(data):
        if not isinstance(data, dict):
            raise ValueError("Filtered group data must be a dictionary.")
        return FilteredAbelianGroup(
            [(c["degree"], AbelianGroupStructure.from_json_object(c["part"])) for c in data.get("components", [])]
        )


def knorrer_shift(filtered):
    """Adding a product xy of two new variables raises every codimension degree by one."""
    return FilteredAbelianGroup([(d + 1, part) for d, part in filtered.components])


def dual_number_invariants(m):
    """K^sg_0 of k[e]/(e^m): Z/m in degree 0."""
    if m < 1:
        raise ValueError(f"Dual number order must be positive, got {m}")
    return FilteredAbelianGroup([(0, AbelianGroupStructure.from_orders([m]))])


def knorrer_base(base, m=None):
    """
    Starting point of a Knörrer chain and its dimension.

    Args:
        base (KnorrerBase): z2 (k[z]/z^2), xy (the node xy = 0) or eps (k[e]/e^m)
        m (int): Nilpotency order for the eps base
    """
    if base is KnorrerBase.Z2:
        return 0, FilteredAbelianGroup([(0, AbelianGroupStructure.from_orders([2]))])
    if base is KnorrerBase.XY:
        return 1, FilteredAbelianGroup([(0, AbelianGroupStructure(1))])
    if base is KnorrerBase.EPS:
        if m is None:
            raise ValueError("The eps base needs a nilpotency order m")
        return 0, dual_number_invariants(m)
    raise ValueError(f"Unknown Knörrer base {base!r}")


def knorrer_chain(steps, base, m=None):
    """
    Returns [(dimension, filtered K^sg_0)] for the base and each of `steps` Knörrer steps.
    """
    if steps < 0:
        raise ValueError(f"Number of steps must be nonnegative, got {steps}")
    dimension, current = knorrer_base(base, m)
    chain = [(dimension, current)]
    for _ in range(steps):
        dimension, current = dimension + 2, knorrer_shift(current)
        chain.append((dimension, current))
    return chain


def odp_invariants(n):
    """
    Ordinary double point of dimension n: Z/2 at degree n/2 for even n, Z at degree (n-1)/2 for odd n.
    """
    if n < 1:
        raise ValueError(f"Dimension must be positive, got {n}")
    if n % 2 == 0:
        return knorrer_chain(n // 2, KnorrerBase.Z2)[-1][1]
    return knorrer_chain((n - 1) // 2, KnorrerBase.XY)[-1][1]


def sylvester_count(a, b):
    """
    Number of positive integers that are not nonnegative combinations of coprime a and b.

    Computed from (a-1)(b-1)/2 and by enumeration up to the Frobenius number; both must agree.
    """
    if a < 1 or b < 1:
        raise ValueError(f"Sylvester count needs positive integers, got ({a}, {b})")
    if gcd(a, b) != 1:
        raise NotCoprime(f"{a} and {b} are not coprime")
    closed_form = (a - 1) * (b - 1) // 2
    frobenius = a * b - a - b
    representable = set()
    if frobenius > 0:
        for i in range(frobenius // a + 1):
            for j in range((frobenius - i * a) // b + 1):
                representable.add(i * a + j * b)
    enumerated = sum(1 for t in range(1, frobenius + 1) if t not in representable)
    if enumerated != closed_form:
        raise CheckFailure(f"Sylvester count for ({a}, {b}): closed form {closed_form}, enumeration {enumerated}")
    return closed_form


# Symbolic group expressions for K^sg_1
class SymbolicGroupExpr:
    def render(self):
        raise NotImplementedError

    def __str__(self):
        return self.render()


@dataclass(frozen=True)
class UnitsOfField(SymbolicGroupExpr):
    def render(self):
        return "k*"


@dataclass(frozen=True)
class Integers(SymbolicGroupExpr):
    def render(self):
        return "Z"


@dataclass(frozen=True)
class VectorSpace(SymbolicGroupExpr):
    dimension: int

    def render(self):
        if self.dimension == 0:
            return "0"
        return "k" if self.dimension == 1 else f"k^{self.dimension}"


@dataclass(frozen=True)
class Product(SymbolicGroupExpr):
    items: tuple = ()

    def render(self):
        return " ⊕ ".join(item.render() for item in self.items) if self.items else "0"


@dataclass(frozen=True)
class Power(SymbolicGroupExpr):
    base: SymbolicGroupExpr
    exponent: int

    def render(self):
        return f"({self.base.render()})^{self.exponent}"


@dataclass(frozen=True)
class Extension(SymbolicGroupExpr):
    # 0 -> sub -> E -> quotient -> 0
    sub: SymbolicGroupExpr
    quotient: SymbolicGroupExpr

    def render(self):
        return f"[{self.sub.render()}; {self.quotient.render()}]"


def product(items):
    flat = []
    for item in items:
        flat.extend(item.items if isinstance(item, Product) else [item])
    return flat[0] if len(flat) == 1 else Product(tuple(flat))


def power(base, exponent):
    if exponent == 0:
        return Product()
    return base if exponent == 1 else Power(base, exponent)


_TOKEN = re.compile(r"\s*(k\*|k\^\d+|k|Z|0|\d+|⊕|\(|\)\^|\(|\)|\[|;|\])")


def _tokenize(text):
    tokens = []
    position = 0
    text = text.strip()
    while position < len(text):
        match = _TOKEN.match(text, position)
        if not match:
            raise ValueError(f"Unexpected character in group expression at {position}: {text[position:]!r}")
        tokens.append(match.group(1))
        position = match.end()
    return tokens


def parse_group_expr(text):
    """
    Parses the rendering of a SymbolicGroupExpr, e.g. "[(k* ⊕ Z)^2; k^3]".
    """
    tokens = _tokenize(text)
    expr, position = _parse_sum(tokens, 0)
    if position != len(tokens):
        raise ValueError(f"Trailing input in group expression: {tokens[position:]}")
    return expr


def _parse_sum(tokens, position):
    items = []
    item, position = _parse_term(tokens, position)
    items.append(item)
    while position < len(tokens) and tokens[position] == "⊕":
        item, position = _parse_term(tokens, position + 1)
        items.append(item)
    return product(items), position


def _parse_term(tokens, position):
    if position >= len(tokens):
        raise ValueError("Group expression ended unexpectedly")
    token = tokens[position]
    if token == "0":
        return Product(), position + 1
    if token == "Z":
        return Integers(), position + 1
    if token == "k*":
        return UnitsOfField(), position + 1
    if token == "k":
        return VectorSpace(1), position + 1
    if token.startswith("k^"):
        return VectorSpace(int(token[2:])), position + 1
    if token == "(":
        inner, position = _parse_sum(tokens, position + 1)
        if position + 1 >= len(tokens) or tokens[position] != ")^" or not tokens[position + 1].isdigit():
            raise ValueError("Parenthesized group expression must be followed by ^exponent")
        return Power(inner, int(tokens[position + 1])), position + 2
    if token == "[":
        sub, position = _parse_sum(tokens, position + 1)
        if position >= len(tokens) or tokens[position] != ";":
            raise ValueError("Extension needs '[sub; quotient]'")
        quotient, position = _parse_sum(tokens, position + 1)
        if position >= len(tokens) or tokens[position] != "]":
            raise ValueError("Extension is missing its closing ']'")
        return Extension(sub, quotient), position + 1
    raise ValueError(f"Unexpected token {token!r} in group expression")


def ksg1_expression(components, pic_dim):
    """K^sg_1 of a plane ADE curve: an extension of Pic = k^pic_dim by (k* ⊕ Z)^(N-1)."""
    units = power(Product((UnitsOfField(), Integers())), components - 1)
    if components == 1:
        return VectorSpace(pic_dim) if pic_dim else Product()
    if pic_dim == 0:
        return units
    return Extension(units, VectorSpace(pic_dim))


# ADE curve atlas. Each entry: family -> (index check, equation, N, cusp (a, b) or None, Pic dimension)
_LABEL = re.compile(r"^\s*([ADEade])_?\{?(\d+)\}?\s*$")


def parse_ade_label(label):
    match = _LABEL.match(str(label))
    if not match:
        raise InvalidLabel(f"Unrecognized ADE label {label!r}")
    family, index = match.group(1).upper(), int(match.group(2))
    if family == "A" and index >= 1:
        return family, index
    if family == "D" and index >= 4:
        return family, index
    if family == "E" and index in (6, 7, 8):
        return family, index
    raise InvalidLabel(f"{family}_{index} is not an ADE type")


def _curve_row(family, k):
    """(equation, N, cusp, tabulated Pic dimension) for the plane curve of the given type."""
    if family == "A":
        if k % 2 == 0:
            return f"y^2 + z^{k + 1}", 1, (2, k + 1), k // 2
        return f"y^2 + z^{k + 1}", 2, None, 0
    if family == "D":
        if k % 2 == 0:
            return f"y^2 z + z^{k - 1}", 3, None, 0
        l = (k + 1) // 2
        return f"y^2 z + z^{k - 1}", 2, (2, k - 2), l - 2
    return {
        6: ("y^3 + z^4", 1, (3, 4), 3),
        7: ("y^3 + y z^3", 2, (2, 3), 1),
        8: ("y^3 + z^5", 1, (3, 5), 4),
    }[k]


@dataclass
class ADECurveRecord:
    label: str
    equation: str
    components: int
    ksg0: AbelianGroupStructure
    pic_dim: int
    ksg1: SymbolicGroupExpr
    cusp: Optional[tuple] = None

    def to_json_object(self):
        return {
            "label": self.label,
            "equation": self.equation,
            "components": self.components,
            "ksg0": self.ksg0.to_json_object(),
            "pic_dim": self.pic_dim,
            "ksg1": self.ksg1.render(),
            "cusp": list(self.cusp) if self.cusp else None,
        }

    @staticmethod
    def from_json_object(data):
        if not isinstance(data, dict):
            raise ValueError("ADE curve data must be a dictionary.")
        return ADECurveRecord(
            label=data["label"],
            equation=data["equation"],
            components=int(data["components"]),
            ksg0=AbelianGroupStructure.from_json_object(data["ksg0"]),
            pic_dim=int(data["pic_dim"]),
            ksg1=parse_group_expr(data["ksg1"]),
            cusp=tuple(data["cusp"]) if data.get("cusp") else None,
        )


def ade_curve_invariants(label):
    """
    K^sg_0 = Z^(N-1), Pic dimension and the shape of K^sg_1 for a plane ADE curve.
    """
    family, k = parse_ade_label(label)
    equation, components, cusp, tabulated_pic = _curve_row(family, k)
    pic_dim = sylvester_count(*cusp) if cusp else 0
    if pic_dim != tabulated_pic:
        raise CheckFailure(f"{family}_{k}: Sylvester count {pic_dim} differs from the tabulated Pic dimension {tabulated_pic}")
    return ADECurveRecord(
        label=f"{family}_{k}",
        equation=equation,
        components=components,
        ksg0=AbelianGroupStructure(components - 1),
        pic_dim=pic_dim,
        ksg1=ksg1_expression(components, pic_dim),
        cusp=cusp,
    )


def ade_threefold_class_group(label):
    """
    Cl of the threefold uv + f(y, z) = 0: one Knörrer step moves gr^0 of the curve to gr^1 = Cl/Pic, and Pic = 0.
    """
    curve = ade_curve_invariants(label)
    shifted = knorrer_shift(FilteredAbelianGroup([(0, curve.ksg0)]))
    return shifted.part(1)


@dataclass
class ADEThreefoldRecord:
    label: str
    equation: str
    cl: AbelianGroupStructure
    filtration: FilteredAbelianGroup = field(default_factory=FilteredAbelianGroup)

    def to_json_object(self):
        return {"label": self.label, "equation": self.equation, "cl": self.cl.to_json_object(), "filtration": self.filtration.to_json_object()}


def ade_threefold_record(label):
    curve = ade_curve_invariants(label)
    cl = ade_threefold_class_group(label)
    return ADEThreefoldRecord(
        label=curve.label,
        equation=f"uv + {curve.equation}",
        cl=cl,
        filtration=FilteredAbelianGroup([(1, cl)]),
    )


def ade_labels(max_index=8):
    """A_1..A_max, D_4..D_max and E_6, E_7, E_8."""
    labels = [f"A_{k}" for k in range(1, max_index + 1)]
    labels += [f"D_{k}" for k in range(4, max_index + 1)]
    labels += ["E_6", "E_7", "E_8"]
    return labels


def ade_surface_ksg0(label):
    """
    Tabulated K^sg_0 of the surface singularity A^2/G of the given ADE type.
    """
    family, k = parse_ade_label(label)
    if family == "A":
        return AbelianGroupStructure.from_orders([k + 1])
    if family == "D":
        return AbelianGroupStructure.from_orders([2, 2] if k % 2 == 0 else [4])
    return AbelianGroupStructure.from_orders({6: [3], 7: [2], 8: []}[k])
