"""Objective per iteration of the joint solver for several altitudes.

    python3 scripts/convergence.py --H 100,120,140 --t-max 20
"""

import argparse
import dataclasses
import pathlib

from uavfbl import experiments
from uavfbl.config import load_bundled, load_scenario


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--config")
    ap.add_argument("--H", default="100,120,140")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--t-max", type=int)
    ap.add_argument("--out", default="results")
    args = ap.parse_args()

    params, cfg = load_bundled() if args.config is None else load_scenario(args.config)
    if args.t_max:
        cfg = dataclasses.replace(cfg, t_max=args.t_max)
    H = [float(v) for v in args.H.split(",")]
    rows = experiments.convergence_rows(params, cfg, H, args.seed)

    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "convergence.csv").write_text(
        experiments.to_csv(rows, experiments.CONVERGENCE_COLUMNS), newline="\n")

    for h in H:
        trace = [r for r in rows if r["H"] == h]
        final = trace[-1]["eps_approx"]
        settled = next(r["iteration"] for r in trace if r["eps_approx"] == final)
        print(f"H = {h:5.1f}  final eps~ = {final:.6e} at (m1={trace[-1]['m1']}, "
              f"x={trace[-1]['x']:.1f})  reached at iteration {settled}")


if __name__ == "__main__":
    main()
