"""Command line entry point.

    convoy-orbit run <scenario> [--out DIR] [--format csv|jsonl] [--plots]
    convoy-orbit validate <scenario>
    convoy-orbit summarize <trace>
    convoy-orbit batch <dir> [--out DIR] [--format csv|jsonl] [--plots] [--jobs N]

Exit codes: 0 success, 2 invalid scenario, 3 simulation aborted.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional, Sequence

from .analysis import summarize
from .scenario import ScenarioError, parse_scenario
from .simulation import SimulationAborted, run_simulation
from .trace_io import TraceFileError, read_trace, write_trace

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_ABORTED = 3

log = logging.getLogger("convoy_orbit")


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


def run_one(scenario: str, out: Path, fmt: str, plots: bool) -> tuple[int, dict]:
    """Run a scenario into ``out``; return (exit code, summary or error record)."""
    try:
        cfg = parse_scenario(scenario)
    except (ScenarioError, FileNotFoundError) as exc:
        return EXIT_INVALID, {"scenario": str(scenario), "error": str(exc)}
    stem = cfg.name or Path(scenario).stem
    code = EXIT_OK
    try:
        trace = run_simulation(cfg)
    except SimulationAborted as exc:
        trace, code = exc.trace, EXIT_ABORTED
        log.error("%s: %s", stem, exc)
    path = write_trace(trace, out / f"{stem}.{fmt}", fmt)
    summary = summarize(trace)
    summary["trace"] = str(path)
    if plots and len(trace):
        from .plots import render_plots

        summary["plots"] = [str(p) for p in render_plots(trace, out / f"{stem}_plots")]
    return code, summary


def _cmd_run(args) -> int:
    code, record = run_one(args.scenario, Path(args.out), args.format, args.plots)
    if code == EXIT_INVALID:
        print(record["error"], file=sys.stderr)
    else:
        _emit(record)
    return code


def _cmd_validate(args) -> int:
    try:
        cfg = parse_scenario(args.scenario)
    except (ScenarioError, FileNotFoundError) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INVALID
    _emit({"scenario": args.scenario, "name": cfg.name, "valid": True, "ticks": cfg.n_steps + 1})
    return EXIT_OK


def _cmd_summarize(args) -> int:
    try:
        trace = read_trace(args.trace)
    except (TraceFileError, ScenarioError, ValueError, KeyError) as exc:
        print(f"cannot summarize {args.trace}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    _emit(summarize(trace))
    return EXIT_OK


def _batch_job(job: tuple[str, str, str, bool]) -> tuple[int, dict]:
    scenario, out, fmt, plots = job
    return run_one(scenario, Path(out), fmt, plots)


def _cmd_batch(args) -> int:
    files = sorted(Path(args.dir).glob("*.yaml")) + sorted(Path(args.dir).glob("*.yml"))
    if not files:
        print(f"no scenario files in {args.dir}", file=sys.stderr)
        return EXIT_INVALID
    out = Path(args.out)
    jobs = [(str(f), str(out / f.stem), args.format, args.plots) for f in files]
    if args.jobs == 1:
        results = [_batch_job(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_batch_job, jobs))
    _emit([rec for _, rec in results])
    return max(code for code, _ in results)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="convoy-orbit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def outputs(sp):
        sp.add_argument("--out", default="out", help="output directory (default: out)")
        sp.add_argument("--format", choices=("csv", "jsonl"), default="csv")
        sp.add_argument("--plots", action="store_true", help="also write SVG figures")

    r = sub.add_parser("run", help="simulate one scenario (file path or bundled name)")
    r.add_argument("scenario")
    outputs(r)
    r.set_defaults(func=_cmd_run)

    v = sub.add_parser("validate", help="check a scenario file")
    v.add_argument("scenario")
    v.set_defaults(func=_cmd_validate)

    s = sub.add_parser("summarize", help="print the JSON summary of a trace file")
    s.add_argument("trace")
    s.set_defaults(func=_cmd_summarize)

    b = sub.add_parser("batch", help="simulate every scenario in a directory")
    b.add_argument("dir")
    outputs(b)
    b.add_argument("--jobs", type=int, default=None, help="worker processes (default: CPU count)")
    b.set_defaults(func=_cmd_batch)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
