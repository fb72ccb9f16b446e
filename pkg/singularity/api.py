"""
This module contains the API for the singularity application.
It's used by the management command to run the computations with the configured settings.
"""
import json
import logging
from pathlib import Path

from celery import group as celery_group
from django.conf import settings

from singularity.tasks import ksg0_cyclic_task, local_invariants_task, oracle_agreement_task
from singularity.utils.acceptance import AcceptanceSuite
from singularity.utils.assembly import GlobalSingularityData, assemble, wps_report
from singularity.utils.characters import character_table
from singularity.utils.constants import KnorrerBase
from singularity.utils.geometric_tables import (
    ade_curve_invariants, ade_labels, ade_threefold_record, knorrer_chain, odp_invariants,
)
from singularity.utils.local_singularity import (
    LocalModel, SingInvariants, class_group, ksg0_local, local_invariants, validate_order_law,
)
from singularity.utils.matrix_group import close_group, generators_from_json_object, group_summary
from singularity.utils.presets import get_preset, preset_catalog
from singularity.utils.representation_ring import koszul_class, multiplication_matrix

logger = logging.getLogger(__name__)


def _max_order(max_order=None):
    return max_order if max_order is not None else settings.SINGK_MAX_ORDER


def _use_dual(use_dual=None):
    return use_dual if use_dual is not None else settings.SINGK_KOSZUL_USE_DUAL


def parse_cyclic(text):
    """
    Parses "m:a1,a2,..." into (m, weights).
    """
    try:
        m, weights = text.split(":", 1)
        return int(m), tuple(int(a) for a in weights.split(",") if a.strip())
    except ValueError:
        raise ValueError(f"Cyclic model must look like m:a1,a2,...; got {text!r}")


def parse_knorrer_base(text):
    """
    Parses z2, xy or eps:m into (KnorrerBase, m).
    """
    name, _, m = text.partition(":")
    try:
        base = KnorrerBase(name)
    except ValueError:
        raise ValueError(f"Unknown Knörrer base {text!r}; expected z2, xy or eps:m")
    if base is KnorrerBase.EPS:
        if not m.isdigit():
            raise ValueError("The eps base needs an order, e.g. eps:3")
        return base, int(m)
    return base, None


def load_group_file(path, max_order=None):
    with open(path, 'r') as f:
        data = json.load(f)
    _, generators = generators_from_json_object(data)
    group = close_group(generators, max_order=_max_order(max_order), dense_table_limit=settings.SINGK_DENSE_TABLE_LIMIT)
    return LocalModel.from_group(group, label=data.get("name") or Path(path).stem)


def load_model(preset=None, cyclic=None, group_file=None, max_order=None):
    """
    Builds a local model from exactly one of the three input forms.

    Args:
        preset (str): Preset name such as A_3 or E8
        cyclic (str): Cyclic weights "m:a1,...,an"
        group_file (str): Path to a generator JSON file
        max_order (int): Closure bound, defaults to SINGK_MAX_ORDER
    """
    given = [x for x in (preset, cyclic, group_file) if x is not None]
    if len(given) != 1:
        raise ValueError("Exactly one of --preset, --cyclic or --group is required")
    if preset is not None:
        return get_preset(preset).local_model(_max_order(max_order), settings.SINGK_DENSE_TABLE_LIMIT)
    if cyclic is not None:
        m, weights = parse_cyclic(cyclic)
        return LocalModel.cyclic(m, weights)
    return load_group_file(group_file, max_order)


def parse_model_option(text, max_order=None):
    """
    Parses an assemble model argument: cyclic:m:a1,... or preset:NAME.
    """
    kind, _, rest = text.partition(":")
    if kind == "cyclic":
        return load_model(cyclic=rest, max_order=max_order)
    if kind == "preset":
        return load_model(preset=rest, max_order=max_order)
    raise ValueError(f"Model must be cyclic:m:a,... or preset:NAME; got {text!r}")


def summarize_group(model, max_order=None):
    return group_summary(model.matrix_group(_max_order(max_order)))


def compute_character_table(model, max_order=None):
    return character_table(model.matrix_group(_max_order(max_order)))


def compute_koszul(model, use_dual=None, max_order=None):
    """
    Returns:
        tuple: (CharacterTable, Koszul class, MultiplicationMatrix)
    """
    group = model.matrix_group(_max_order(max_order))
    table = character_table(group)
    r = koszul_class(group, table, use_dual=_use_dual(use_dual))
    return table, r, multiplication_matrix(r)


def compute_ksg(model, use_dual=None, max_order=None, include_matrix=False, general=False):
    """
    Local invariants of a model; cyclic models take the fast path unless general is set.
    """
    pipeline = ksg0_local if general else local_invariants
    return pipeline(model, use_dual=_use_dual(use_dual), max_order=_max_order(max_order), include_matrix=include_matrix)


def compute_class_group(model, max_order=None):
    return class_group(model, max_order=_max_order(max_order))


def ade_curves():
    return [ade_curve_invariants(label) for label in ade_labels()]


def ade_threefolds():
    return [ade_threefold_record(label) for label in ade_labels()]


def odp_rows(dimension=None, max_dimension=12):
    dimensions = [dimension] if dimension is not None else range(1, max_dimension + 1)
    return [(n, odp_invariants(n)) for n in dimensions]


def knorrer_rows(steps, base):
    base, m = parse_knorrer_base(base)
    return knorrer_chain(steps, base, m)


def list_presets():
    return [preset.to_json_object() for preset in preset_catalog()]


# Batch evaluation: Celery group fan-out when workers are enabled, inline otherwise
def _collect(signatures):
    if not signatures:
        return []
    return celery_group(signatures).apply_async().get()


def evaluate_cyclic_cases(cases, use_dual=None, max_order=None):
    use_dual, max_order = _use_dual(use_dual), _max_order(max_order)
    rows = _collect([ksg0_cyclic_task.s(m, list(weights), use_dual, max_order) for m, weights in cases])
    return [SingInvariants.from_json_object(row) for row in rows]


def evaluate_models(models, use_dual=None, max_order=None):
    use_dual, max_order = _use_dual(use_dual), _max_order(max_order)
    rows = _collect([local_invariants_task.s(model.to_json_object(), use_dual, max_order) for model in models])
    return [SingInvariants.from_json_object(row) for row in rows]


def evaluate_oracle_cases(cases, max_order=None):
    return _collect([oracle_agreement_task.s(m, list(weights), _max_order(max_order)) for m, weights in cases])


def _use_workers(use_workers=None):
    return settings.SINGK_USE_WORKERS if use_workers is None else use_workers


def order_law(m_range, n_range, use_workers=None):
    evaluate = evaluate_cyclic_cases if _use_workers(use_workers) else None
    return validate_order_law(m_range, n_range, evaluate=evaluate)


def assemble_models(dimension, model_options, use_dual=None, max_order=None, use_workers=None):
    models = [parse_model_option(option, max_order) for option in model_options]
    data = GlobalSingularityData(dimension, models)
    evaluate = (lambda batch: evaluate_models(batch, use_dual, max_order)) if _use_workers(use_workers) else None
    return assemble(data, use_dual=_use_dual(use_dual), max_order=_max_order(max_order), evaluate=evaluate)


def weighted_projective_space(weights, use_dual=None, max_order=None, use_workers=None):
    evaluate = (lambda batch: evaluate_models(batch, use_dual, max_order)) if _use_workers(use_workers) else None
    return wps_report(weights, use_dual=_use_dual(use_dual), max_order=_max_order(max_order), evaluate=evaluate)


def run_selftest(seed=None, use_dual=None, max_order=None, use_workers=None):
    """
    Runs the acceptance suite, fanning the per-model work out to Celery when workers are enabled.
    """
    seed = settings.SINGK_SELFTEST_SEED if seed is None else seed
    kwargs = {}
    if _use_workers(use_workers):
        kwargs = {
            "evaluate_cyclic": lambda cases: evaluate_cyclic_cases(cases, use_dual, max_order),
            "evaluate_models": lambda models: evaluate_models(models, use_dual, max_order),
            "evaluate_oracle": lambda cases: evaluate_oracle_cases(cases, max_order),
        }
    suite = AcceptanceSuite(seed, use_dual=_use_dual(use_dual), max_order=_max_order(max_order),
                            dense_table_limit=settings.SINGK_DENSE_TABLE_LIMIT, **kwargs)
    results = suite.run()
    logger.info(f"Selftest finished: {sum(r.passed for r in results)} of {len(results)} criteria passed")
    return results
