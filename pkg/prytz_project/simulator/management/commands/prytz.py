# simulator/management/commands/prytz.py
import json

from django.core.management.base import BaseCommand, CommandError
from rest_framework import serializers

from core.exceptions import ConvergenceError, NumericError, PrytzError
from simulator.figures import cmd_figures
from simulator.output import write_report
from simulator.reports import COMMANDS, Report
from simulator.scenario import Scenario

USAGE_ERROR = 2
NUMERIC_ERROR = 3
NOT_CONVERGED = 4


def _flatten(detail, prefix=""):
    """ValidationError detail as "key.subkey: message" strings."""
    if isinstance(detail, dict):
        return [msg for key, value in detail.items() for msg in _flatten(value, f"{prefix}{key}.")]
    if isinstance(detail, list):
        return [msg for value in detail for msg in _flatten(value, prefix)]
    return [f"{prefix.rstrip('.') or 'scenario'}: {detail}"]


class Command(BaseCommand):
    help = (
        "Run a planimeter simulation from a JSON scenario: area, holonomy, sweep, "
        "geodesic, plan, chain, or regenerate the figure data with `figures`."
    )

    def add_arguments(self, parser):
        parser.add_argument("subcommand", choices=[*COMMANDS, "figures"])
        parser.add_argument("--scenario", help="Path to the scenario JSON document.")
        parser.add_argument("--out", help="Output directory (default: the scenario's `out`, else .).")

    def handle(self, *args, **options):
        command = options["subcommand"]
        try:
            scenario = self._load(options["scenario"], required=command != "figures")
            if command == "figures":
                report = cmd_figures(steps=scenario["steps"] if scenario else None)
            else:
                report = COMMANDS[command](scenario)
        except serializers.ValidationError as exc:
            raise CommandError("; ".join(_flatten(exc.detail)), returncode=USAGE_ERROR)
        except NumericError as exc:
            raise CommandError(f"numeric failure: {exc}", returncode=NUMERIC_ERROR)
        except ConvergenceError as exc:
            if isinstance(exc.best, Report):
                self._write(exc.best, self._out_dir(options, scenario))
            raise CommandError(f"did not converge: {exc}", returncode=NOT_CONVERGED)
        except PrytzError as exc:
            raise CommandError(str(exc), returncode=USAGE_ERROR)

        for line in report.lines:
            self.stdout.write(line)
        self._write(report, self._out_dir(options, scenario))

    def _load(self, path, required=True):
        if path is None:
            if required:
                raise serializers.ValidationError({"scenario": "This command needs --scenario."})
            return None
        try:
            with open(path) as handle:
                data = json.load(handle)
        except OSError as exc:
            raise serializers.ValidationError({"scenario": f"Cannot read {path}: {exc.strerror}."})
        except json.JSONDecodeError as exc:
            raise serializers.ValidationError({"scenario": f"Invalid JSON: {exc.msg} (line {exc.lineno})."})
        return Scenario.from_dict(data)

    def _out_dir(self, options, scenario):
        if options["out"]:
            return options["out"]
        if scenario is not None and scenario["out"]:
            return scenario["out"]
        return "."

    def _write(self, report, out_dir):
        written = write_report(report, out_dir)
        self.stdout.write(self.style.SUCCESS(
            f"{report.command}: wrote {len(written)} file(s) to {out_dir}"
        ))
