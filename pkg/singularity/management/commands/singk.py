import argparse
import json
import logging

from django.core.management.base import BaseCommand, CommandError

from singularity import api
from singularity.cli import RunConfig
from singularity.exceptions import AlgorithmFailure, CheckFailure, ConductorMismatch, PresetIntegrityError, SingkError
from singularity.utils.constants import EXIT_CHECK_FAILURE, EXIT_USAGE, CheckStatus, OutputMode
from singularity.utils.rendering import (
    render_acceptance, render_ade_curves, render_ade_threefolds, render_character_table, render_checks,
    render_filtered, render_global_report, render_group_summary, render_invariants_detail, render_koszul,
    render_order_law, render_table,
)

logger = logging.getLogger(__name__)

# Errors that mean a guaranteed invariant failed rather than bad input
INTERNAL_ERRORS = (CheckFailure, AlgorithmFailure, ConductorMismatch, PresetIntegrityError)


def _weights(text):
    try:
        return [int(a) for a in text.split(",") if a.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"weights must be comma-separated integers, got {text!r}")


class Command(BaseCommand):
    help = "Singularity K-theory of quotient singularities: K^sg_0, G_0 and Cl of A^n/G, ADE tables and global assembly."
    requires_system_checks = []

    def add_arguments(self, parser):
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument("--json", action="store_true", help="Machine-readable JSON output")
        common.add_argument("--checks", action="store_true", help="Show the structural checks")
        common.add_argument("--max-order", type=int, default=None, help="Closure bound (default SINGK_MAX_ORDER)")

        model = argparse.ArgumentParser(add_help=False)
        model.add_argument("--preset", help="Preset name: A_n, D_n, E6, E7, E8")
        model.add_argument("--cyclic", help="Cyclic quotient m:a1,...,an")
        model.add_argument("--group", dest="group_file", help="JSON file with generator matrices")

        subparsers = parser.add_subparsers(dest="subcommand", required=True)
        group = subparsers.add_parser("group", parents=[common, model], help="Group summary")
        group.add_argument("--list-presets", action="store_true", help="List the preset catalog")
        subparsers.add_parser("chartab", parents=[common, model], help="Character table")
        koszul = subparsers.add_parser("koszul", parents=[common, model], help="Koszul class and multiplication matrix")
        koszul.add_argument("--matrix", action="store_true", help="Print the multiplication matrix")
        koszul.add_argument("--primal", action="store_true", help="Build r from rho instead of its dual")
        ksg = subparsers.add_parser("ksg", parents=[common, model], help="G_0, K^sg_0 and Cl of a local model")
        ksg.add_argument("--matrix", action="store_true", help="Include the multiplication matrix")
        ksg.add_argument("--general", action="store_true", help="Use the matrix-group pipeline for cyclic models")
        ksg.add_argument("--primal", action="store_true", help="Build r from rho instead of its dual")
        subparsers.add_parser("cl", parents=[common, model], help="Class group of a local model")
        ade = subparsers.add_parser("ade", parents=[common], help="ADE curve and threefold tables")
        table = ade.add_mutually_exclusive_group()
        table.add_argument("--curves", action="store_true", help="Plane ADE curves (default)")
        table.add_argument("--threefolds", action="store_true", help="Threefolds uv + f(y, z)")
        odp = subparsers.add_parser("odp", parents=[common], help="Ordinary double points")
        odp.add_argument("--dim", type=int, default=None, help="Single dimension (default 1..12)")
        knorrer = subparsers.add_parser("knorrer", parents=[common], help="Knörrer periodicity chain")
        knorrer.add_argument("--chain", type=int, default=3, help="Number of Knörrer steps")
        knorrer.add_argument("--base", default="z2", help="z2, xy or eps:m")
        assemble = subparsers.add_parser("assemble", parents=[common], help="Assemble local models into a global report")
        assemble.add_argument("--dim", type=int, required=True, help="Dimension of the variety")
        assemble.add_argument("--model", action="append", required=True, help="cyclic:m:a1,... or preset:NAME (repeatable)")
        wps = subparsers.add_parser("wps", parents=[common], help="Weighted projective space")
        wps.add_argument("--weights", type=_weights, required=True, help="Pairwise coprime weights a0,a1,...")
        selftest = subparsers.add_parser("selftest", parents=[common], help="Run the acceptance suite")
        selftest.add_argument("--seed", type=int, default=None, help="Seed for randomized criteria (default SINGK_SELFTEST_SEED)")
        selftest.add_argument("--order-law", action="store_true", help="Only tabulate the order law")

    def handle(self, *args, **options):
        config = RunConfig.from_options(options)
        subcommand = options["subcommand"]
        try:
            failures = getattr(self, f"_handle_{subcommand}")(config, options)
        except INTERNAL_ERRORS as e:
            self._fail(config, e, EXIT_CHECK_FAILURE)
        except (SingkError, ValueError, KeyError, OSError) as e:
            self._fail(config, e, EXIT_USAGE)
        if failures:
            self._fail(config, CheckFailure(f"{subcommand}: failed checks {', '.join(failures)}"), EXIT_CHECK_FAILURE)

    def _fail(self, config, error, returncode):
        logger.error(f"singk failed with exit code {returncode}: {error}")
        if config.output_mode is OutputMode.JSON:
            payload = error.to_json_object() if isinstance(error, SingkError) else \
                {'status': 'Error', 'code': 'usage_error', 'message': str(error)}
            self.stderr.write(json.dumps(payload))
            raise SystemExit(returncode)
        raise CommandError(str(error), returncode=returncode)

    def _emit(self, config, json_object, text):
        if config.output_mode is OutputMode.JSON:
            self.stdout.write(json.dumps(json_object, indent=2, ensure_ascii=False))
        else:
            self.stdout.write(text)

    @staticmethod
    def _model(config, options):
        return api.load_model(options.get("preset"), options.get("cyclic"), options.get("group_file"), config.max_order)

    @staticmethod
    def _failed(checks):
        return [c.name for c in checks if c.status is CheckStatus.FAIL]

    # Subcommands return the names of failed checks
    def _handle_group(self, config, options):
        if options.get("list_presets"):
            presets = api.list_presets()
            rows = [(p["name"], p["kind"], p["expected_order"], p["description"]) for p in presets]
            self._emit(config, presets, render_table(rows, ["name", "kind", "order", "description"]))
            return []
        summary = api.summarize_group(self._model(config, options), config.max_order)
        self._emit(config, summary, render_group_summary(summary))
        return []

    def _handle_chartab(self, config, options):
        table = api.compute_character_table(self._model(config, options), config.max_order)
        self._emit(config, table.to_json_object(), render_character_table(table))
        return []

    def _handle_koszul(self, config, options):
        use_dual = False if options.get("primal") else None
        table, r, matrix = api.compute_koszul(self._model(config, options), use_dual=use_dual, max_order=config.max_order)
        data = {
            "table": table.to_json_object(),
            "koszul": r.to_json_object(),
            "class_function": r.realization().to_json_object(),
        }
        if options.get("matrix"):
            data["matrix"] = matrix.matrix.to_json_object()
        self._emit(config, data, render_koszul(r, matrix.matrix if options.get("matrix") else None))
        return []

    def _handle_ksg(self, config, options):
        use_dual = False if options.get("primal") else None
        inv = api.compute_ksg(self._model(config, options), use_dual=use_dual, max_order=config.max_order,
                              include_matrix=bool(options.get("matrix")), general=bool(options.get("general")))
        self._emit(config, inv.to_json_object(), render_invariants_detail(inv, checks=config.checks))
        return self._failed(inv.checks)

    def _handle_cl(self, config, options):
        model = self._model(config, options)
        cl = api.compute_class_group(model, config.max_order)
        self._emit(config, {"model": model.descriptor(), "cl": cl.to_json_object()},
                   render_table([(model.name(), cl.render())], ["model", "Cl"]))
        return []

    def _handle_ade(self, config, options):
        if options.get("threefolds"):
            records = api.ade_threefolds()
            self._emit(config, [r.to_json_object() for r in records], render_ade_threefolds(records))
        else:
            records = api.ade_curves()
            self._emit(config, [r.to_json_object() for r in records], render_ade_curves(records))
        return []

    def _handle_odp(self, config, options):
        rows = api.odp_rows(options.get("dim"))
        self._emit(config, [{"dimension": n, **fg.to_json_object()} for n, fg in rows], render_filtered(rows))
        return []

    def _handle_knorrer(self, config, options):
        rows = api.knorrer_rows(options["chain"], options["base"])
        self._emit(config, [{"dimension": n, **fg.to_json_object()} for n, fg in rows], render_filtered(rows))
        return []

    def _handle_assemble(self, config, options):
        report = api.assemble_models(options["dim"], options["model"], max_order=config.max_order)
        text = render_global_report(report)
        if config.checks:
            text = f"{text}\n\n{render_checks(report.checks)}"
        self._emit(config, report.to_json_object(), text)
        return self._failed(report.checks)

    def _handle_wps(self, config, options):
        report = api.weighted_projective_space(options["weights"], max_order=config.max_order)
        text = render_global_report(report)
        if config.checks:
            text = f"{text}\n\n{render_checks(report.checks)}"
        self._emit(config, report.to_json_object(), text)
        return self._failed(report.checks)

    def _handle_selftest(self, config, options):
        if options.get("order_law"):
            report = api.order_law(range(1, 9), range(2, 7))
            self._emit(config, report.to_json_object(), render_order_law(report))
            return [f"m={row['m']},n={row['n']}" for row in report.violations]
        results = api.run_selftest(seed=config.seed, max_order=config.max_order)
        self._emit(config, {"seed": config.seed, "passed": all(r.passed for r in results),
                            "results": [r.to_json_object() for r in results]}, render_acceptance(results))
        return [r.name for r in results if not r.passed]
