"""
Invariants of a local quotient singularity A^n/G.

G_0(A^n/G) is presented as the cokernel of multiplication by the Koszul class
on the representation ring; when G acts freely off the origin it splits as
Z ⊕ K^sg_0. Cyclic groups 1/m(a_1, ..., a_n) use R(Z_m) = Z[x]/(x^m - 1)
directly instead of a character table.
"""
import logging
from dataclasses import dataclass, field
from math import gcd
from typing import Optional

from singularity.exceptions import NotFreeAction
from singularity.utils.characters import character_table
from singularity.utils.constants import CheckStatus, ModelKind, Provenance, friendly_to_check_status_map, friendly_to_model_kind_map, friendly_to_provenance_map
from singularity.utils.cyclotomic import CycNum
from singularity.utils.integer_lattice import AbelianGroupStructure, IntMatrix, cokernel, group_exponent, is_quotient_of, kernel_rank
from singularity.utils.matrix_group import (
    DEFAULT_MAX_ORDER, acts_freely_off_origin, close_group, dual_abelianization_of_quotient, generators_from_json_object,
    generators_to_json_object, reflection_classes, reflection_normal_closure,
)
from singularity.utils.representation_ring import koszul_class, multiplication_matrix

logger = logging.getLogger(__name__)


def cyclic_generator(m, weights):
    """diag(zeta_m^a_1, ..., zeta_m^a_n)."""
    n = len(weights)
    zero = CycNum.zero(m)
    return tuple(
        tuple(CycNum.root_of_unity(m, a) if i == j else zero for j in range(n))
        for i, a in enumerate(weights)
    )


@dataclass
class LocalModel:
    kind: ModelKind
    dimension: int
    group: Optional[object] = field(default=None, compare=False, repr=False)
    modulus: Optional[int] = None
    weights: tuple = ()
    label: Optional[str] = None

    @staticmethod
    def cyclic(m, weights, label=None):
        weights = tuple(int(a) for a in weights)
        if m < 1:
            raise ValueError(f"Cyclic modulus must be positive, got {m}")
        if not weights:
            raise ValueError("A cyclic model needs at least one weight")
        for a in weights:
            if not 1 <= a <= m:
                raise ValueError(f"Weight {a} outside 1..{m}")
        return LocalModel(ModelKind.CYCLIC_WEIGHTS, len(weights), modulus=m, weights=weights, label=label)

    @staticmethod
    def from_group(group, label=None):
        return LocalModel(ModelKind.MATRIX_GROUP, group.dimension, group=group, label=label)

    def is_faithful_cyclic(self):
        return self.kind is ModelKind.CYCLIC_WEIGHTS and (self.modulus == 1 or gcd(self.modulus, *self.weights) == 1)

    def matrix_group(self, max_order=DEFAULT_MAX_ORDER):
        if self.group is None:
            self.group = close_group([cyclic_generator(self.modulus, self.weights)], max_order=max_order)
        return self.group

    @property
    def group_order(self):
        if self.kind is ModelKind.CYCLIC_WEIGHTS:
            return self.modulus // gcd(self.modulus, *self.weights)
        return self.group.order

    def name(self):
        if self.label:
            return self.label
        if self.kind is ModelKind.CYCLIC_WEIGHTS:
            return f"1/{self.modulus}({','.join(str(a) for a in self.weights)})"
        return f"matrix group of order {self.group.order}"

    def descriptor(self):
        data = {
            "kind": self.kind.value,
            "label": self.name(),
            "dimension": self.dimension,
            "group_order": self.group_order,
        }
        if self.kind is ModelKind.CYCLIC_WEIGHTS:
            data["m"] = self.modulus
            data["weights"] = list(self.weights)
        return data

    def to_json_object(self):
        data = self.descriptor()
        if self.kind is ModelKind.MATRIX_GROUP:
            data["group"] = generators_to_json_object(self.dimension, self.group.conductor, self.group.generator_matrices())
        return data

    @staticmethod
    def from_json_object(data, max_order=DEFAULT_MAX_ORDER):
        if not isinstance(data, dict) or "kind" not in data:
            raise ValueError("Local model data must be a dictionary with a 'kind' key.")
        kind = friendly_to_model_kind_map[data["kind"]]
        if kind is ModelKind.CYCLIC_WEIGHTS:
            return LocalModel.cyclic(int(data["m"]), data["weights"], label=data.get("label"))
        _, generators = generators_from_json_object(data["group"])
        return LocalModel.from_group(close_group(generators, max_order=max_order), label=data.get("label"))


@dataclass(frozen=True)
class CheckRecord:
    name: str
    status: CheckStatus
    detail: str = ""

    def to_json_object(self):
        return {"name": self.name, "status": self.status.value, "detail": self.detail}

    @staticmethod
    def from_json_object(data):
        return CheckRecord(data["name"], friendly_to_check_status_map[data["status"]], data.get("detail", ""))


@dataclass(frozen=True)
class CitedFlag:
    name: str
    value: object
    statement: str
    provenance: Provenance = Provenance.CITED

    def to_json_object(self):
        return {"name": self.name, "value": self.value, "provenance": self.provenance.value, "statement": self.statement}

    @staticmethod
    def from_json_object(data):
        return CitedFlag(data["name"], data["value"], data.get("statement", ""), friendly_to_provenance_map[data.get("provenance", "cited")])


def _optional_group(data, key):
    value = data.get(key)
    return AbelianGroupStructure.from_json_object(value) if value is not None else None


@dataclass
class SingInvariants:
    model: dict
    cokernel: AbelianGroupStructure
    g0: Optional[AbelianGroupStructure]
    ksg0: Optional[AbelianGroupStructure]
    cl: AbelianGroupStructure
    free_action: bool
    isolated: bool
    annihilator_bound: int
    filtration_length_bound: Optional[int] = None
    checks: list = field(default_factory=list)
    flags: list = field(default_factory=list)
    matrix: Optional[IntMatrix] = None

    def failed_checks(self):
        return [c for c in self.checks if c.status is CheckStatus.FAIL]

    def check(self, name):
        return next((c for c in self.checks if c.name == name), None)

    def to_json_object(self, include_matrix=True):
        data = {
            "model": dict(self.model),
            "cokernel": self.cokernel.to_json_object(),
            "cokernel_label": "G_0" if self.free_action else "R(G)/rR(G)",
            "g0": self.g0.to_json_object() if self.g0 is not None else None,
            "ksg0": self.ksg0.to_json_object() if self.ksg0 is not None else None,
            "cl": self.cl.to_json_object(),
            "free_action": self.free_action,
            "isolated": self.isolated,
            "annihilator_bound": self.annihilator_bound,
            "filtration_length_bound": self.filtration_length_bound,
            "checks": [c.to_json_object() for c in self.checks],
            "flags": [f.to_json_object() for f in self.flags],
        }
        if include_matrix and self.matrix is not None:
            data["matrix"] = self.matrix.to_json_object()
        return data

    @staticmethod
    def from_json_object(data):
        if not isinstance(data, dict):
            raise ValueError("Singularity invariants data must be a dictionary.")
        return SingInvariants(
            model=dict(data["model"]),
            cokernel=AbelianGroupStructure.from_json_object(data["cokernel"]),
            g0=_optional_group(data, "g0"),
            ksg0=_optional_group(data, "ksg0"),
            cl=AbelianGroupStructure.from_json_object(data["cl"]),
            free_action=bool(data["free_action"]),
            isolated=bool(data["isolated"]),
            annihilator_bound=int(data["annihilator_bound"]),
            filtration_length_bound=data.get("filtration_length_bound"),
            checks=[CheckRecord.from_json_object(c) for c in data.get("checks", [])],
            flags=[CitedFlag.from_json_object(f) for f in data.get("flags", [])],
            matrix=IntMatrix.from_json_object(data["matrix"]) if data.get("matrix") is not None else None,
        )

    def __eq__(self, other):
        if not isinstance(other, SingInvariants):
            return NotImplemented
        return self.to_json_object() == other.to_json_object()


def _status(condition):
    return CheckStatus.PASS if condition else CheckStatus.FAIL


def _structural_checks(n, order, cok, kernel, ksg0, cl, free_action, has_reflections):
    bound = order ** (n - 1)
    if not free_action:
        names = ["cokernel_free_rank_one", "kernel_rank_one", "exponent_divides_bound", "surface_ksg0_is_cl", "c1_surjective"]
        return [CheckRecord(name, CheckStatus.NOT_APPLICABLE, "action is not free off the origin") for name in names]
    exponent = group_exponent(ksg0)
    checks = [
        CheckRecord("cokernel_free_rank_one", _status(cok.free_rank == 1), f"free rank {cok.free_rank}"),
        CheckRecord("kernel_rank_one", _status(kernel == 1), f"kernel rank {kernel}"),
        CheckRecord("exponent_divides_bound", _status(bound % exponent == 0), f"exponent {exponent}, bound {bound}"),
    ]
    if n == 2:
        checks.append(CheckRecord("surface_ksg0_is_cl", _status(ksg0 == cl), f"{ksg0.render()} vs {cl.render()}"))
    else:
        checks.append(CheckRecord("surface_ksg0_is_cl", CheckStatus.NOT_APPLICABLE, f"dimension {n}"))
    checks.append(CheckRecord("c1_surjective", _status(is_quotient_of(cl, ksg0)), f"{cl.render()} from {ksg0.render()}"))
    if n >= 2:
        checks.append(CheckRecord("free_action_excludes_reflections", _status(not has_reflections), ""))
    return checks


def _cited_flags(isolated):
    if not isolated:
        return []
    return [
        CitedFlag("ksg1_zero", True, "K^sg_1 vanishes for an isolated quotient singularity"),
        CitedFlag("k_minus_1_zero", True, "K_{-1} vanishes for an isolated quotient singularity"),
        CitedFlag("idempotent_complete", True, "the singularity category of an isolated quotient singularity is idempotent complete"),
    ]


def _finish(model, order, matrix, cl, free_action, has_reflections, include_matrix):
    n = model.dimension
    cok = cokernel(matrix)
    kernel = kernel_rank(matrix)
    isolated = free_action and not has_reflections
    if free_action:
        g0, ksg0 = cok, cok.torsion_part()
    else:
        logger.warning(f"{model.name()} does not act freely off the origin; reporting R(G)/rR(G) without the G_0 interpretation")
        g0, ksg0 = None, None
    checks = _structural_checks(n, order, cok, kernel, ksg0, cl, free_action, has_reflections)
    for failed in (c for c in checks if c.status is CheckStatus.FAIL):
        logger.error(f"Check {failed.name} failed for {model.name()}: {failed.detail}")
    return SingInvariants(
        model=model.descriptor(),
        cokernel=cok,
        g0=g0,
        ksg0=ksg0,
        cl=cl,
        free_action=free_action,
        isolated=isolated,
        annihilator_bound=order ** (n - 1),
        filtration_length_bound=n - 1 if free_action else None,
        checks=checks,
        flags=_cited_flags(isolated),
        matrix=matrix if include_matrix else None,
    )


def ksg0_local(model, use_dual=True, max_order=DEFAULT_MAX_ORDER, require_free=False, include_matrix=False):
    """
    Full representation-ring pipeline: character table, Koszul class, multiplication matrix, cokernel.

    Args:
        model (LocalModel): The local model; cyclic models are turned into their diagonal matrix group
        use_dual (bool): Build the Koszul class from the dual representation
        max_order (int): Closure bound for cyclic models
        require_free (bool): Raise NotFreeAction instead of reporting a non-free model
        include_matrix (bool): Keep the multiplication matrix in the result
    """
    group = model.matrix_group(max_order=max_order)
    free_action = acts_freely_off_origin(group)
    if not free_action and require_free:
        raise NotFreeAction(f"{model.name()} has non-identity elements fixing a nonzero vector")
    has_reflections = bool(reflection_classes(group))
    table = character_table(group)
    r = koszul_class(group, table, use_dual=use_dual)
    matrix = multiplication_matrix(r).matrix
    cl = dual_abelianization_of_quotient(group, reflection_normal_closure(group))
    result = _finish(model, group.order, matrix, cl, free_action, has_reflections, include_matrix)
    logger.info(f"{model.name()}: cokernel {result.cokernel.render()}, Cl {cl.render()}")
    return result


def koszul_polynomial(m, weights):
    """Coefficients of prod_i (1 - x^a_i) in Z[x]/(x^m - 1)."""
    r = [1] + [0] * (m - 1)
    for a in weights:
        r = [r[j] - r[(j - a) % m] for j in range(m)]
    return r


def circulant_matrix(m, r):
    # Column j holds x^j * r
    return IntMatrix.from_rows([[r[(i - j) % m] for j in range(m)] for i in range(m)], m)


def cyclic_reflection_exponents(m, weights):
    """Exponents k in 1..m-1 for which g^k moves exactly one coordinate."""
    return [k for k in range(1, m) if sum(1 for a in weights if (k * a) % m) == 1]


def cyclic_class_group(m, weights):
    d = m
    for k in cyclic_reflection_exponents(m, weights):
        d = gcd(d, k)
    return AbelianGroupStructure.from_orders([d])


def class_group(model, max_order=DEFAULT_MAX_ORDER):
    """
    Cl(A^n/G): characters of G modulo the subgroup generated by reflections.
    """
    if model.is_faithful_cyclic():
        return cyclic_class_group(model.modulus, model.weights)
    group = model.matrix_group(max_order=max_order)
    return dual_abelianization_of_quotient(group, reflection_normal_closure(group))


def ksg0_cyclic(m, weights, use_dual=True, max_order=DEFAULT_MAX_ORDER, require_free=False, include_matrix=False, label=None):
    """
    Cyclic fast path for 1/m(a_1, ..., a_n) with r = prod (1 - x^-a_i) in Z[x]/(x^m - 1),
    or prod (1 - x^a_i) when use_dual is off.

    Weights sharing a factor with m describe a non-faithful action and go through the matrix pipeline.
    """
    model = LocalModel.cyclic(m, weights, label=label)
    if not model.is_faithful_cyclic():
        logger.warning(f"{model.name()} is not faithful; using the matrix-group pipeline")
        return ksg0_local(model, use_dual=use_dual, max_order=max_order, require_free=require_free, include_matrix=include_matrix)
    free_action = all(gcd(a, m) == 1 for a in model.weights)
    if not free_action and require_free:
        raise NotFreeAction(f"{model.name()} has weights sharing a factor with {m}")
    has_reflections = bool(cyclic_reflection_exponents(m, model.weights))
    # x is the character g -> zeta_m, so the dual representation has weights -a_i
    koszul_weights = [(-a) % m for a in model.weights] if use_dual else model.weights
    matrix = circulant_matrix(m, koszul_polynomial(m, koszul_weights))
    cl = cyclic_class_group(m, model.weights)
    result = _finish(model, m, matrix, cl, free_action, has_reflections, include_matrix)
    logger.info(f"{model.name()}: cokernel {result.cokernel.render()}, Cl {cl.render()}")
    return result


def local_invariants(model, use_dual=True, max_order=DEFAULT_MAX_ORDER, require_free=False, include_matrix=False):
    """Dispatches to the cyclic fast path when the model allows it."""
    if model.kind is ModelKind.CYCLIC_WEIGHTS:
        return ksg0_cyclic(model.modulus, model.weights, use_dual=use_dual, max_order=max_order,
                           require_free=require_free, include_matrix=include_matrix, label=model.label)
    return ksg0_local(model, use_dual=use_dual, max_order=max_order, require_free=require_free, include_matrix=include_matrix)


def cyclic_oracle_agreement(m, weights, max_order=DEFAULT_MAX_ORDER):
    """
    Compares the fast path with the matrix-group pipeline on the same cyclic model.

    Returns:
        tuple: (agree, fast result, general result)
    """
    fast = ksg0_cyclic(m, weights, max_order=max_order)
    general = ksg0_local(LocalModel.cyclic(m, weights), max_order=max_order)
    agree = fast.cokernel == general.cokernel and fast.cl == general.cl
    if not agree:
        logger.error(f"1/{m}{tuple(weights)}: fast path {fast.cokernel.render()} differs from {general.cokernel.render()}")
    return agree, fast, general


@dataclass
class OrderLawReport:
    rows: list = field(default_factory=list)

    @property
    def violations(self):
        return [row for row in self.rows if not row["ok"]]

    def to_json_object(self):
        return {"rows": list(self.rows), "violations": len(self.violations)}


def validate_order_law(m_range, n_range, evaluate=None):
    """
    Checks |K^sg_0(1/m(1, ..., 1))| = m^(n-1) for every m and n in the ranges.

    Args:
        m_range (iterable): Moduli
        n_range (iterable): Dimensions
        evaluate (callable): Maps a list of (m, weights) pairs to SingInvariants in order; inline by default
    """
    cases = [(m, (1,) * n) for m in m_range for n in n_range]
    if evaluate is None:
        results = [ksg0_cyclic(m, weights) for m, weights in cases]
    else:
        results = evaluate(cases)
    report = OrderLawReport()
    for (m, weights), result in zip(cases, results):
        n = len(weights)
        order = result.ksg0.order if result.ksg0 is not None else None
        report.rows.append({"m": m, "n": n, "order": order, "expected": m ** (n - 1), "ok": order == m ** (n - 1)})
    if report.violations:
        logger.error(f"Order law violated in {len(report.violations)} cases")
    return report
