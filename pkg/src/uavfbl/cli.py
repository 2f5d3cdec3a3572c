"""Command-line entry point: ``uavfbl <command> [options]``.

Exit codes: 0 ok, 1 usage/config error, 2 verification failure,
3 numeric domain error.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from . import experiments, verify
from .config import ConfigError, load_bundled, load_scenario
from .model import ModelDomainError
from .optimizer import Method

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_DOMAIN = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _load(path):
    return load_bundled() if path is None else load_scenario(path)


def _emit(text: str, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_solve(args, method=None):
    params, cfg = _load(args.config)
    cfg = dataclasses.replace(cfg, seed=args.seed)
    rec = experiments.run_method(params, Method(method or args.method), cfg)
    s = rec.solution
    print(f"method      {s.method.value}")
    print(f"x*          {s.x:.6g} m")
    print(f"m1*, m2*    {s.m1}, {s.m2}")
    print(f"eps_approx  {s.eps_approx:.6e}")
    print(f"eps_exact   {s.eps_exact:.6e}")
    print(f"iterations  {s.iterations}")
    print(f"eval_count  {s.eval_count}")
    if args.out:
        cols = experiments.RunRecord.columns(args.timing)
        _emit(experiments.to_csv([rec.row()], cols), args.out)
    return EXIT_OK


def cmd_landscape(args):
    params, _ = _load(args.config)
    m1 = params.M // 2 if args.m1 is None else args.m1
    m2 = params.M - m1 if args.m2 is None else args.m2
    x_max = params.D if args.x_max is None else args.x_max
    rows = experiments.landscape_rows(params, m1, m2, args.x_min, x_max, args.step)
    _emit(experiments.to_csv(rows, experiments.LANDSCAPE_COLUMNS), args.out)
    return EXIT_OK


def cmd_convergence(args):
    params, cfg = _load(args.config)
    rows = experiments.convergence_rows(params, cfg, args.H, args.seed, args.jobs)
    _emit(experiments.to_csv(rows, experiments.CONVERGENCE_COLUMNS), args.out)
    return EXIT_OK


def cmd_compare(args):
    params, cfg = _load(args.config)
    sweep = experiments.SweepSpec(args.param, tuple(args.values), tuple(args.methods),
                                  args.repetitions)
    rows = experiments.compare_rows(params, cfg, sweep, args.seed, args.jobs)
    cols = experiments.COMPARE_COLUMNS + (["wall_ms"] if args.timing else [])
    _emit(experiments.to_csv(rows, cols), args.out)
    flagged = sum(r["flag"] for r in rows)
    if flagged:
        print(f"warning: {flagged} joint row(s) worse than exhaustive by "
              f"> {experiments.JOINT_MISMATCH_TOL:g} relative", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args):
    params, _ = _load(args.config)
    results = verify.run_all(params)
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


def _number_list(s):
    return [float(v) for v in s.split(",") if v.strip()]


def build_parser():
    p = _Parser(prog="uavfbl", description="UAV relay blocklength/location optimizer")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="scenario file (default: bundled paper.cfg)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="write CSV here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", parents=[common], help="run one method")
    s.add_argument("--method", default="joint", choices=[m.value for m in Method])
    s.add_argument("--timing", action="store_true", help="add wall_ms to the CSV row")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("exhaustive", parents=[common], help="grid-search oracle")
    s.add_argument("--timing", action="store_true")
    s.set_defaults(func=lambda a: cmd_solve(a, Method.EXHAUSTIVE))

    s = sub.add_parser("landscape", parents=[common], help="g, g', g'' versus x")
    s.add_argument("--m1", type=int)
    s.add_argument("--m2", type=int)
    s.add_argument("--x-min", type=float, default=0.0)
    s.add_argument("--x-max", type=float)
    s.add_argument("--step", type=float, default=0.1)
    s.set_defaults(func=cmd_landscape)

    s = sub.add_parser("convergence", parents=[common], help="objective per iteration")
    s.add_argument("--H", type=_number_list, default=[100.0, 120.0, 140.0],
                   help="comma-separated altitudes")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_convergence)

    s = sub.add_parser("compare", parents=[common], help="methods over a sweep")
    s.add_argument("--param", default="M", choices=sorted(experiments.SWEEPABLE))
    s.add_argument("--values", type=_number_list,
                   default=[60, 70, 80, 90, 100, 110, 120, 130, 140])
    s.add_argument("--methods", type=lambda v: v.split(","),
                   default=[m.value for m in Method])
    s.add_argument("--repetitions", type=int, default=1)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--timing", action="store_true", help="add wall_ms column")
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("verify", parents=[common], help="derivative/convexity self-checks")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ModelDomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
