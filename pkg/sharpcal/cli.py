"""Command line front end

Three commands are available:

    sharpcal validate SCENARIO
    sharpcal run {calibration,pit,sharpness,decompose,theta,asymptotic,
                  oracle,probe,scan} [flags]
    sharpcal scenario build --spec SPEC --out SCENARIO

Every report is written with its run manifest embedded. Errors map to the
exit code carried by their class: 1 invariant violation, 2 bad arguments or
unparsable input, 3 failed hypothesis (calibration), 4 numeric failure and
5 search failure.
"""

import argparse
import datetime
import logging
import os
import sys

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from sharpcal import __version__
from sharpcal.base.config import Config, set_config
from sharpcal.base.datadef import _DataDef
from sharpcal.base.errors import (
    ArgumentError,
    InvariantViolationError,
    NotCalibratedError,
    SharpcalError,
)
from sharpcal.application import ReportWriter
from sharpcal.calib import Scenario, histogram_frame
from sharpcal.external import JsonInFile, ReportFile
from sharpcal.external.file import dump_json
from sharpcal.model import EqualityGapScan
from sharpcal.pipe import (
    AsymptoticCheck,
    CalibrationCheck,
    CalibrationTrend,
    Decompose,
    McOracle,
    MinimizeSharpness,
    RandomizedPIT,
    Sharpness,
    Theta,
)
from sharpcal.scenarios import build_scenario
from sharpcal.translator import ProbeConfigTranslator, ScenarioTranslator
from sharpcal.util import to_jsonable
from sharpcal.validator.presets import SCENARIO, SCENARIO_DOC


logger = logging.getLogger(__name__)

RUN_COMMANDS = ("calibration", "pit", "sharpness", "decompose", "theta",
                "asymptotic", "oracle", "probe", "scan")

_SEEDED = ("pit", "oracle", "probe")


@dataclass(frozen=True)
class RunManifest:
    """Everything needed to reproduce a report.

    The timestamp honours SOURCE_DATE_EPOCH so that reruns can produce
    byte-identical files.

    Attributes:
        command (list): command line arguments.
        inputs (dict): input path to sha256 digest.
        seeds (dict): seed name to value.
        version (str): package version.
        tolerances (dict): tolerance settings in effect.
        timestamp (str): ISO 8601 UTC time of the run.
    """

    command: List[str]
    inputs: Dict[str, str] = field(default_factory=dict)
    seeds: Dict[str, Any] = field(default_factory=dict)
    version: str = __version__
    tolerances: Dict[str, Any] = field(default_factory=dict)
    timestamp: str = ""

    def to_dict(self):
        return to_jsonable({
            "command": self.command,
            "inputs": self.inputs,
            "seeds": self.seeds,
            "version": self.version,
            "tolerances": self.tolerances,
            "timestamp": self.timestamp,
        })


def run_timestamp(environ=None):
    environ = os.environ if environ is None else environ
    epoch = environ.get("SOURCE_DATE_EPOCH")
    if epoch:
        now = datetime.datetime.fromtimestamp(int(epoch),
                                              tz=datetime.timezone.utc)
    else:
        now = datetime.datetime.now(tz=datetime.timezone.utc)
    return now.replace(microsecond=0).isoformat()


def _positive_int(value):
    try:
        ret = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{value} is not an integer")
    if ret < 1:
        raise argparse.ArgumentTypeError(f"{value} must be at least 1")
    return ret


def _grid_int(value):
    ret = _positive_int(value)
    if ret < 2:
        raise argparse.ArgumentTypeError(f"{value} must be at least 2")
    return ret


def _checkpoint_list(value):
    try:
        return [int(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"{value} is not a comma separated \
list of integers")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sharpcal",
        description="Calibration and sharpness diagnostics for predictive \
distributions")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    parser.add_argument("--verbose", "-v", action="store_true",
                        help="log at DEBUG level")
    parser.add_argument("--config", default=None,
                        help="JSON file with numerical settings")

    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True

    validate = commands.add_parser("validate", help="check a scenario file")
    validate.add_argument("scenario", help="scenario JSON file")

    scenario = commands.add_parser("scenario", help="scenario utilities")
    scenario_commands = scenario.add_subparsers(dest="action",
                                                metavar="ACTION")
    scenario_commands.required = True
    build = scenario_commands.add_parser(
        "build", help="build a scenario file from a scenario spec")
    build.add_argument("--spec", required=True, help="scenario spec JSON")
    build.add_argument("--out", required=True, help="scenario JSON to write")

    run = commands.add_parser("run", help="run a diagnostic")
    run.add_argument("subcommand", choices=RUN_COMMANDS)
    run.add_argument("--scenario", nargs="+", default=None,
                     help="scenario JSON or scenario spec file(s); scan \
takes several")
    run.add_argument("--reference", default=None,
                     help="scenario whose theta profile is compared against")
    run.add_argument("--probe-config", default=None,
                     help="probe config JSON (truths, budget, basis); \
--seed overrides its seed")
    run.add_argument("--grid", type=_grid_int, default=None,
                     help="probability grid size")
    run.add_argument("--tol", type=float, default=None,
                     help="calibration tolerance, overrides the environment")
    run.add_argument("--n", type=_positive_int, default=None,
                     help="Monte-Carlo draws")
    run.add_argument("--seed", type=int, default=None,
                     help="required by pit, oracle and probe")
    run.add_argument("--bins", type=_positive_int, default=None)
    run.add_argument("--budget", type=_positive_int, default=None)
    run.add_argument("--basis", default=None, choices=("sine", "polynomial"))
    run.add_argument("--basis-size", type=_positive_int, default=None)
    run.add_argument("--checkpoints", type=_checkpoint_list, default=None,
                     help="comma separated horizons, e.g. 2,8,32")
    run.add_argument("--parallel", action="store_true",
                     help="evaluate probe candidates in a process pool")
    run.add_argument("--out", default=None,
                     help="report file, printed to stdout when omitted")
    run.add_argument("--format", choices=("json", "csv"), default=None,
                     help="report format, taken from --out by default")
    return parser


def _scenario_source(path):
    return ScenarioTranslator().set_input(JsonInFile(path))


def _one_scenario(args):
    if not args.scenario:
        raise ArgumentError(f"{args.subcommand} requires --scenario")
    if len(args.scenario) > 1:
        raise ArgumentError(f"{args.subcommand} takes a single --scenario")
    return args.scenario[0]


def _flag(value):
    return str(bool(value)).lower()


def _run_calibration(args, fmt):
    report = CalibrationCheck(args.grid, args.tol)\
        .set_input(_scenario_source(_one_scenario(args)))\
        .run()
    return report, f"max_abs_residual={report.max_abs_residual:.3e} \
calibrated={_flag(report.calibrated)}"


def _run_pit(args, fmt):
    sample = RandomizedPIT(args.n or 10_000, args.seed)\
        .set_input(_scenario_source(_one_scenario(args)))\
        .run()
    bins = args.bins or 20
    frame = histogram_frame(sample, bins)
    report = frame if fmt == "csv" else {
        "sample": sample.to_dict(),
        "histogram": frame.to_dict(orient="records"),
    }
    return report, f"ks={sample.ks_statistic:.4f} \
threshold={sample.ks_threshold:.4f} reject={_flag(sample.reject)}"


def _run_sharpness(args, fmt):
    report = Sharpness(args.grid, args.tol)\
        .set_input(_scenario_source(_one_scenario(args)))\
        .run()
    return report, f"gap={report.gap:.3e} calibrated=true \
equality={_flag(report.equality_condition_met)}"


def _run_decompose(args, fmt):
    report = Decompose()\
        .set_input(_scenario_source(_one_scenario(args)))\
        .run()
    return report, f"var_H_z={report['var_H_z']:.6e} \
var_H_u_formula={report['var_H_u_formula']:.6e}"


def _run_theta(args, fmt):
    reference = None
    if args.reference is not None:
        reference = Theta(args.grid)\
            .set_input(_scenario_source(args.reference))\
            .run()
    profile = Theta(args.grid, reference)\
        .set_input(_scenario_source(_one_scenario(args)))\
        .run()
    summary = f"points={len(profile.theta)}"
    if profile.sup_deviation is not None:
        summary += f" sup_deviation={profile.sup_deviation:.3e}"
    return profile, summary


def _run_asymptotic(args, fmt):
    if not args.checkpoints:
        raise ArgumentError("asymptotic requires --checkpoints")
    source = _scenario_source(_one_scenario(args))
    sharp = AsymptoticCheck(args.checkpoints, args.grid)\
        .set_input(source)\
        .run()
    trend = CalibrationTrend(args.checkpoints, tol=args.tol)\
        .set_input(source)\
        .run()
    report = sharp.to_frame() if fmt == "csv" else {
        "sharpness": sharp.to_dict(),
        "calibration": trend.to_dict(),
    }
    return report, f"inequality_holds={_flag(sharp.inequality_holds)} \
theta_converged={_flag(sharp.theta_converged)} \
calibrated={_flag(trend.calibrated)}"


def _run_oracle(args, fmt):
    report = McOracle(args.n or 1_000_000, args.seed, args.bins)\
        .set_input(_scenario_source(_one_scenario(args)))\
        .run()
    return report, f"var_H_mc={report.var_H_mc:.6e} \
se={report.var_H_se:.1e}"


def _run_probe(args, fmt):
    if args.probe_config is None:
        raise ArgumentError("probe requires --probe-config")
    config = JsonInFile(args.probe_config)
    search = MinimizeSharpness(args.budget, args.seed, args.parallel)
    if args.basis is not None or args.basis_size is not None:
        kwargs = {} if args.basis_size is None else {"size": args.basis_size}
        search.set_piece("basis", args.basis or "sine", **kwargs)
    result = search\
        .set_input(ProbeConfigTranslator().set_input(config))\
        .run()
    return result, f"best_avg_var_F={result.best_avg_var_F:.6e} \
margin={result.margin_vs_avg_var_G:.3e} \
feasible={result.feasible}/{result.budget}"


def _run_scan(args, fmt):
    if not args.scenario:
        raise ArgumentError("scan requires --scenario")
    scan = EqualityGapScan()
    for path in args.scenario:
        name = os.path.splitext(os.path.basename(path))[0]
        scan.add_scenario(name, _scenario_source(path))
    table = scan.run()
    return table, f"rows={len(table)} tensions={int(table['tension'].sum())}"


_RUNNERS = {
    "calibration": _run_calibration,
    "pit": _run_pit,
    "sharpness": _run_sharpness,
    "decompose": _run_decompose,
    "theta": _run_theta,
    "asymptotic": _run_asymptotic,
    "oracle": _run_oracle,
    "probe": _run_probe,
    "scan": _run_scan,
}


def _input_paths(args):
    paths = list(args.scenario or [])
    for path in (args.reference, args.probe_config, args.config):
        if path is not None:
            paths.append(path)
    return paths


def make_manifest(argv, args, config):
    inputs = {path: JsonInFile(path).digest() for path in _input_paths(args)
              if os.path.exists(path)}
    seeds = {} if args.seed is None else {"seed": args.seed}
    tolerances = {
        "analytic_tol": config.analytic_tol,
        "tabulated_tol": config.tabulated_tol,
        "tol": args.tol,
    }
    return RunManifest(command=["sharpcal", *argv], inputs=inputs,
                       seeds=seeds, tolerances=tolerances,
                       timestamp=run_timestamp())


def _emit(writer, args, fmt, report):
    if args.out is not None:
        writer.set_output("report_out", ReportFile(args.out, fmt))
        writer.write(report)
    elif fmt == "csv":
        sys.stdout.write(writer.csv(report))
    else:
        sys.stdout.write(dump_json(writer.payload(report)))


def cmd_run(argv, args, config):
    if args.subcommand in _SEEDED and args.seed is None:
        raise ArgumentError(f"{args.subcommand} requires an explicit --seed")

    fmt = args.format
    if fmt is None:
        fmt = ReportFile(args.out).fmt if args.out is not None else "json"

    writer = ReportWriter(make_manifest(argv, args, config))
    try:
        report, summary = _RUNNERS[args.subcommand](args, fmt)
    except NotCalibratedError as exc:
        _emit(writer, args, fmt, exc.report)
        raise

    _emit(writer, args, fmt, report)
    print(summary, file=sys.stdout if args.out is not None else sys.stderr)
    return 0


def cmd_validate(args):
    doc = JsonInFile(args.scenario).request()
    _DataDef().add_desc(SCENARIO_DOC).check(doc)
    scenario = Scenario.from_spec(doc)
    _DataDef().add_desc(SCENARIO).check(scenario)
    print(f"valid T={scenario.T} tabulated={_flag(scenario.tabulated)} \
bounded={_flag(scenario.bounded)}")
    return 0


def cmd_scenario_build(args):
    scenario = build_scenario(JsonInFile(args.spec).request())
    ReportFile(args.out, "json").request(query=scenario.to_spec())
    print(f"wrote T={scenario.T} scenario to {args.out}")
    return 0


def load_config(path=None):
    """Defaults, then the config file, then the environment"""
    config = Config()
    if path is not None:
        try:
            config.update_config(os.fspath(path))
        except (KeyError, ValueError, OSError) as exc:
            raise ArgumentError(f"bad config {path}: {exc}") from exc
    return set_config(config.apply_env())


def main(argv: Optional[List[str]] = None):
    """Run the command line and return its exit code"""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        config = load_config(args.config)
        if args.command == "validate":
            return cmd_validate(args)
        if args.command == "scenario":
            return cmd_scenario_build(args)
        return cmd_run(argv, args, config)
    except InvariantViolationError as exc:
        for violation in exc.violations:
            print(f"invalid: {violation}", file=sys.stderr)
        return exc.exit_code
    except SharpcalError as exc:
        logger.debug("run failed", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
