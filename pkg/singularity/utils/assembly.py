import logging
from dataclasses import dataclass, field
from math import gcd, lcm
from typing import Optional

from singularity.exceptions import DimensionMismatch, NotFreeAction, NotPairwiseCoprime
from singularity.utils.constants import REPORT_SCHEMA_VERSION, CheckStatus, Provenance
from singularity.utils.integer_lattice import AbelianGroupStructure, direct_sum, group_exponent
from singularity.utils.local_singularity import CheckRecord, CitedFlag, LocalModel, SingInvariants, local_invariants
from singularity.utils.matrix_group import DEFAULT_MAX_ORDER

logger = logging.getLogger(__name__)

CONTAINMENT_STATEMENT = "K^sg_0(X) is a subgroup of the idempotent-completed group reported here"


# A variety with isolated quotient singularities, described by its local models
@dataclass
class GlobalSingularityData:
    dimension: int
    local_models: list = field(default_factory=list)

    def __post_init__(self):
        for i, model in enumerate(self.local_models):
            if model.dimension != self.dimension:
                raise DimensionMismatch(f"Local model {i} ({model.name()}) has dimension {model.dimension}, expected {self.dimension}")


@dataclass
class GlobalReport:
    dimension: int
    kksg0: AbelianGroupStructure
    annihilator_bound: int
    local: list = field(default_factory=list)
    flags: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    surface_formula: Optional[AbelianGroupStructure] = None

    def failed_checks(self):
        return [c for c in self.checks if c.status is CheckStatus.FAIL]

    def flag(self, name):
        return next((f for f in self.flags if f.name == name), None)

    def to_json_object(self):
        return {
            "schema": REPORT_SCHEMA_VERSION,
            "dimension": self.dimension,
            "kksg0": self.kksg0.to_json_object(),
            "annihilator_bound": self.annihilator_bound,
            "provenance": {
                "kksg0": Provenance.COMPUTED.value,
                "annihilator_bound": Provenance.COMPUTED.value,
                "surface_formula": Provenance.COMPUTED.value,
            },
            "surface_formula": self.surface_formula.to_json_object() if self.surface_formula is not None else None,
            "containment": CONTAINMENT_STATEMENT,
            "local": [inv.to_json_object(include_matrix=False) for inv in self.local],
            "flags": [f.to_json_object() for f in self.flags],
            "checks": [c.to_json_object() for c in self.checks],
        }

    @staticmethod
    def from_json_object(data):
        if not isinstance(data, dict):
            raise ValueError("Global report data must be a dictionary.")
        surface = data.get("surface_formula")
        return GlobalReport(
            dimension=int(data["dimension"]),
            kksg0=AbelianGroupStructure.from_json_object(data["kksg0"]),
            annihilator_bound=int(data["annihilator_bound"]),
            local=[SingInvariants.from_json_object(inv) for inv in data.get("local", [])],
            flags=[CitedFlag.from_json_object(f) for f in data.get("flags", [])],
            checks=[CheckRecord.from_json_object(c) for c in data.get("checks", [])],
            surface_formula=AbelianGroupStructure.from_json_object(surface) if surface is not None else None,
        )

    def __eq__(self, other):
        if not isinstance(other, GlobalReport):
            return NotImplemented
        return self.to_json_object() == other.to_json_object()


def _global_flags():
    return [
        CitedFlag("ksg1_zero", True, "K^sg_1(X) vanishes"),
        CitedFlag("k_minus_j_zero", True, "K_{-j}(X) vanishes for every j >= 2"),
        CitedFlag("k_minus_1_torsion", True, "K_{-1}(X) is finite and annihilated by the same bound"),
        CitedFlag("pd_injective", True, "pullback of the resolution of singularities is injective on K^sg_0"),
        CitedFlag("length_map_iso", True, "the length map on zero-cycles supported at the singular points is an isomorphism"),
        CitedFlag("k0_injects_into_g0", True, "0 -> K_0(X) -> G_0(X) -> K^sg_0(X) -> 0 is exact"),
    ]


def assemble(data, use_dual=True, max_order=DEFAULT_MAX_ORDER, evaluate=None):
    """
    Upper singularity Grothendieck group of a variety from its isolated quotient singularities.

    Args:
        data (GlobalSingularityData): Dimension and local models
        use_dual (bool): Koszul class convention for the matrix pipeline
        max_order (int): Closure bound for the matrix pipeline
        evaluate (callable): Maps the list of local models to SingInvariants in order; inline by default
    """
    n = data.dimension
    models = list(data.local_models)
    if evaluate is None:
        local = []
        for i, model in enumerate(models):
            try:
                local.append(local_invariants(model, use_dual=use_dual, max_order=max_order, require_free=True))
            except NotFreeAction as e:
                raise NotFreeAction(f"Local model {i} ({model.name()}): {e}", index=i)
    else:
        local = evaluate(models)
        for i, inv in enumerate(local):
            if not inv.free_action:
                raise NotFreeAction(f"Local model {i} ({models[i].name()}) does not act freely off the origin", index=i)

    kksg0 = direct_sum(inv.ksg0 for inv in local)
    order_lcm = 1
    for model in models:
        order_lcm = lcm(order_lcm, model.group_order)
    bound = order_lcm ** (n - 1) if n >= 1 else 1
    exponent = group_exponent(kksg0)
    checks = [CheckRecord("exponent_divides_bound", CheckStatus.PASS if bound % exponent == 0 else CheckStatus.FAIL,
                          f"exponent {exponent}, bound {bound}")]

    surface = None
    if n == 2:
        surface = direct_sum(inv.cl for inv in local)
        checks.append(CheckRecord("surface_kksg0_is_cl_sum", CheckStatus.PASS if surface == kksg0 else CheckStatus.FAIL,
                                  f"{kksg0.render()} vs {surface.render()}"))
    for check in checks:
        if check.status is CheckStatus.FAIL:
            logger.error(f"Global check {check.name} failed: {check.detail}")

    report = GlobalReport(
        dimension=n,
        kksg0=kksg0,
        annihilator_bound=bound,
        local=local,
        flags=_global_flags(),
        checks=checks,
        surface_formula=surface,
    )
    logger.info(f"Assembled {len(models)} local models: {kksg0.render()}")
    return report


def wps_singularity_data(weights):
    """
    Local models of the weighted projective space P(a_0, ..., a_n) with pairwise coprime weights:
    one 1/a_i(a_0, ..., a_n without a_i) for every a_i > 1, weights reduced mod a_i.
    """
    weights = [int(a) for a in weights]
    if not weights or any(a < 1 for a in weights):
        raise ValueError(f"Weights must be positive integers, got {weights}")
    for i, a in enumerate(weights):
        for b in weights[i + 1:]:
            if gcd(a, b) != 1:
                raise NotPairwiseCoprime(f"Weights {a} and {b} share a factor")
    n = len(weights) - 1
    models = []
    for i, a in enumerate(weights):
        if a > 1:
            reduced = [b % a for j, b in enumerate(weights) if j != i]
            models.append(LocalModel.cyclic(a, reduced))
    return GlobalSingularityData(n, models)


def wps_report(weights, use_dual=True, max_order=DEFAULT_MAX_ORDER, evaluate=None):
    data = wps_singularity_data(weights)
    report = assemble(data, use_dual=use_dual, max_order=max_order, evaluate=evaluate)
    rank = data.dimension + 1
    report.flags.extend([
        CitedFlag("k0_rank", rank, "K_0 of a weighted projective space is free of rank n+1"),
        CitedFlag("g0_rank", rank, "G_0 of a weighted projective space has rank n+1"),
        CitedFlag("k0_free", True, "K_0 of a weighted projective space is a free abelian group"),
    ])
    return report
