"""Joint solver against exhaustive search and the two fixed baselines over a
sweep (total blocklength by default).

    python3 scripts/compare.py --param M --values 60,70,80,90,100,110,120,130,140 --jobs 4
"""

import argparse
import pathlib

from uavfbl import experiments
from uavfbl.config import load_bundled, load_scenario


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--config")
    ap.add_argument("--param", default="M")
    ap.add_argument("--values", default="60,70,80,90,100,110,120,130,140")
    ap.add_argument("--repetitions", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", default="results")
    args = ap.parse_args()

    params, cfg = load_bundled() if args.config is None else load_scenario(args.config)
    values = tuple(float(v) for v in args.values.split(","))
    spec = experiments.SweepSpec(args.param, values, repetitions=args.repetitions)
    rows = experiments.compare_rows(params, cfg, spec, args.seed, args.jobs)

    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "compare.csv").write_text(
        experiments.to_csv(rows, experiments.COMPARE_COLUMNS), newline="\n")

    methods = [m.value for m in experiments.METHOD_ORDER]
    print(f"{args.param:>6}  " + "  ".join(f"{m:>12}" for m in methods) + "  joint evals")
    for v in values:
        by = {r["method"]: r for r in rows if r["value"] == v and r["repetition"] == 0}
        cells = "  ".join(f"{by[m]['eps_approx']:12.4e}" for m in methods)
        flag = "  FLAG" if by["joint"]["flag"] else ""
        print(f"{v:6g}  {cells}  {by['joint']['eval_count']:>11}{flag}")


if __name__ == "__main__":
    main()
