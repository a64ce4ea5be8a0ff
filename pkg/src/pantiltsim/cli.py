"""Command line entry points: run scenarios headless, or serve one live.

Exit codes: 0 success, 1 usage error (bad flags, unreadable file), 2
scenario error (invalid scenario content, tracker init failure, busy port).
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace

from .runtime import ScenarioError, run_scenario, write_metrics_csv
from .scenario_io import ScenarioFileError, load_scenario
from .service import serve_scenario

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SCENARIO = 2

_EPILOG = """\
scenario defaults (used for any field a scenario file omits):
  frame 1000x800 px, hfov 60 deg, 15 Hz loop rate
  dead band +-40 px (x) / +-20 px (y); far band +-120 px (x) / +-60 px (y)
  steps 1 deg (past dead band) and +3 deg more (past far band)
  pan limits -90..90 deg, tilt limits -40..90 deg, start pose pan 0 / tilt -20
  tracker: search radius 48 px, accept threshold 0.45, learning rate 0.05
"""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="pantiltsim",
        description="Simulated pan/tilt visual-servoing rig",
        epilog=_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a scenario headless and write metrics",
                           epilog=_EPILOG,
                           formatter_class=argparse.RawDescriptionHelpFormatter)
    run_p.add_argument("scenario", help="path to a scenario YAML file")
    run_p.add_argument("--steps", type=int, default=None,
                       help="override step count (default: scenario value)")
    run_p.add_argument("--seed", type=int, default=None,
                       help="override random seed (default: scenario value)")
    run_p.add_argument("--mode", choices=("faithful", "corrected"), default=None,
                       help="override controller mode (default: scenario value)")
    run_p.add_argument("--out", default="metrics.csv",
                       help="metrics CSV path (default: %(default)s)")

    serve_p = sub.add_parser("serve", help="serve a scenario live over a WebSocket",
                             epilog=_EPILOG,
                             formatter_class=argparse.RawDescriptionHelpFormatter)
    serve_p.add_argument("scenario", help="path to a scenario YAML file")
    serve_p.add_argument("--port", type=int, default=8765,
                         help="listen port (default: %(default)s)")
    serve_p.add_argument("--host", default="127.0.0.1",
                         help="bind address (default: %(default)s)")
    return parser


def _load(path: str):
    try:
        return load_scenario(path)
    except OSError as exc:
        print(f"pantiltsim: cannot read scenario: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE) from exc
    except ScenarioFileError as exc:
        print(f"pantiltsim: invalid scenario: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_SCENARIO) from exc


def cmd_run(args) -> int:
    spec = _load(args.scenario)
    if args.steps is not None:
        spec = replace(spec, steps=args.steps)
    if args.seed is not None:
        spec = replace(spec, seed=args.seed)
    if args.mode is not None:
        spec = replace(spec, ctrl=replace(spec.ctrl, mode=args.mode))
    try:
        records, summary = run_scenario(spec, mode="headless")
    except (ScenarioError, ValueError) as exc:
        print(f"pantiltsim: scenario failed: {exc}", file=sys.stderr)
        return EXIT_SCENARIO
    write_metrics_csv(records, args.out)

    def show(v):
        if v is None:
            return "none"
        return format(v, ".6g") if isinstance(v, float) else str(v)

    print(f"time_to_lock={show(summary.time_to_lock)}")
    print(f"rms_error_after_lock={show(summary.rms_error_after_lock)}")
    print(f"max_overshoot={show(summary.max_overshoot)}")
    print(f"lost_count={summary.lost_count}")
    print(f"mean_fps={show(summary.mean_fps)}")
    return EXIT_OK


def cmd_serve(args) -> int:
    spec = _load(args.scenario)
    try:
        serve_scenario(spec, args.port, args.host)
    except OSError as exc:
        print(f"pantiltsim: cannot bind port {args.port}: {exc}", file=sys.stderr)
        return EXIT_SCENARIO
    return EXIT_OK


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(levelname)s %(message)s")
    try:
        args = _build_parser().parse_args(argv)
        if args.command == "run":
            return cmd_run(args)
        return cmd_serve(args)
    except SystemExit as exc:  # argparse help/usage exits and _load failures
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
