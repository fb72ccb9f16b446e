"""
Programmatic entry point for the singk command.
"""
import logging
import sys
from dataclasses import dataclass
from typing import Optional

from django.conf import settings
from django.core.management import call_command
from django.core.management.base import CommandError

from singularity.utils.constants import EXIT_CHECK_FAILURE, EXIT_OK, EXIT_USAGE, OutputMode

logger = logging.getLogger(__name__)


@dataclass
class RunConfig:
    output_mode: OutputMode = OutputMode.TEXT
    checks: bool = False
    max_order: Optional[int] = None
    seed: Optional[int] = None

    @staticmethod
    def from_options(options):
        """
        Builds the run configuration from parsed command options; unset values fall back to settings.
        """
        return RunConfig(
            output_mode=OutputMode.JSON if options.get("json") else OutputMode.TEXT,
            checks=bool(options.get("checks")),
            max_order=options.get("max_order") or settings.SINGK_MAX_ORDER,
            seed=options.get("seed") if options.get("seed") is not None else settings.SINGK_SELFTEST_SEED,
        )


def run(argv, stdout=None, stderr=None):
    """
    Runs one singk subcommand and returns its exit code.

    Args:
        argv (list): Subcommand and options, e.g. ["ksg", "--cyclic", "3:1,1,1", "--json"]
        stdout (file): Output stream, sys.stdout by default
        stderr (file): Error stream, sys.stderr by default
    """
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        call_command("singk", *argv, stdout=stdout, stderr=stderr)
    except CommandError as e:
        stderr.write(f"{e}\n")
        return e.returncode if e.returncode == EXIT_CHECK_FAILURE else EXIT_USAGE
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    return EXIT_OK
