"""
Aligned text tables for the command line, built with pandas.
"""
import pandas as pd

from singularity.utils.constants import CheckStatus


def render_table(rows, columns):
    """
    Formats rows as a left-aligned text table.

    Args:
        rows (list): Row tuples or dictionaries keyed by column name
        columns (list): Column headers
    """
    if not rows:
        return "(empty)"
    df = pd.DataFrame(rows, columns=columns)
    return df.to_string(index=False, justify='left')


def _group_text(group):
    return group.render() if group is not None else "-"


def render_checks(checks):
    return render_table([(c.name, c.status.value, c.detail) for c in checks], ["check", "status", "detail"])


def render_flags(flags):
    return render_table([(f.name, f.value, f.provenance.value, f.statement) for f in flags],
                        ["flag", "value", "provenance", "statement"])


def render_group_summary(summary):
    header = render_table(
        [(key, summary[key]) for key in ("dimension", "conductor", "order", "exponent", "class_count",
                                         "reflection_count", "free_action", "isolated")],
        ["property", "value"],
    )
    classes = render_table(
        list(zip(range(summary["class_count"]), summary["class_sizes"], summary["representative_orders"])),
        ["class", "size", "element order"],
    )
    return f"{header}\n\n{classes}"


def render_character_table(table):
    group = table.group
    columns = ["chi", "degree"] + [f"C{c} ({cls.size}, o{group.element_orders[cls.representative]})"
                                   for c, cls in enumerate(group.classes)]
    rows = [[f"chi_{i}", d] + [repr(v) for v in chi.values]
            for i, (d, chi) in enumerate(zip(table.degrees, table.irreducibles))]
    return render_table(rows, columns)


def render_koszul(r, matrix=None):
    group = r.table.group
    values = r.realization().values
    lines = [
        render_table([(f"chi_{i}", c) for i, c in enumerate(r.coords)], ["irreducible", "coefficient of r"]),
        "",
        render_table([(f"C{c}", cls.size, group.element_orders[cls.representative], repr(v))
                      for c, (cls, v) in enumerate(zip(group.classes, values))],
                     ["class", "size", "element order", "r(g)"]),
    ]
    if matrix is not None:
        lines.append("")
        lines.append(render_table(matrix.to_rows(), [f"chi_{j}" for j in range(matrix.cols)]))
    return "\n".join(lines)


def render_invariants(inv):
    label = "G_0" if inv.free_action else "R(G)/rR(G)"
    rows = [
        ("model", inv.model.get("label")),
        ("order", inv.model.get("group_order")),
        (label, inv.cokernel.render()),
        ("K^sg_0", _group_text(inv.ksg0)),
        ("Cl", inv.cl.render()),
        ("free action", inv.free_action),
        ("isolated", inv.isolated),
        ("annihilator bound", inv.annihilator_bound),
    ]
    if inv.filtration_length_bound is not None:
        rows.append(("filtration length bound", inv.filtration_length_bound))
    return render_table(rows, ["invariant", "value"])


def render_invariants_detail(inv, checks=False):
    parts = [render_invariants(inv)]
    if inv.matrix is not None:
        parts.append(render_table(inv.matrix.to_rows(), [str(j) for j in range(inv.matrix.cols)]))
    if inv.flags:
        parts.append(render_flags(inv.flags))
    if checks:
        parts.append(render_checks(inv.checks))
    return "\n\n".join(parts)


def render_ade_curves(records):
    rows = [(r.label, r.equation, r.components, r.ksg0.render(), r.pic_dim, r.ksg1.render()) for r in records]
    return render_table(rows, ["type", "curve", "N", "K^sg_0", "dim Pic", "K^sg_1"])


def render_ade_threefolds(records):
    rows = [(r.label, r.equation, r.cl.render(), r.filtration.render()) for r in records]
    return render_table(rows, ["type", "threefold", "Cl", "filtration"])


def render_filtered(rows):
    """
    Args:
        rows (list): (dimension, FilteredAbelianGroup) pairs
    """
    return render_table([(d, fg.group.render(), fg.render()) for d, fg in rows], ["dimension", "K^sg_0", "graded pieces"])


def render_global_report(report):
    rows = [(inv.model.get("label"), inv.model.get("group_order"), _group_text(inv.ksg0), inv.cl.render())
            for inv in report.local]
    summary = [
        ("dimension", report.dimension),
        ("idempotent-completed K^sg_0", report.kksg0.render()),
        ("annihilator bound", report.annihilator_bound),
    ]
    if report.surface_formula is not None:
        summary.append(("sum of local Cl", report.surface_formula.render()))
    return "\n\n".join([
        render_table(summary, ["invariant", "value"]),
        render_table(rows, ["local model", "order", "K^sg_0", "Cl"]),
        render_flags(report.flags),
    ])


def render_order_law(report):
    return render_table(report.rows, ["m", "n", "order", "expected", "ok"])


def render_acceptance(results):
    """
    Args:
        results (list): AcceptanceResult entries
    """
    rows = [(r.name, CheckStatus.PASS.value if r.passed else CheckStatus.FAIL.value, r.cases, r.detail) for r in results]
    return render_table(rows, ["criterion", "status", "cases", "detail"])
