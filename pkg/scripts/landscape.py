"""g, g' and g'' over x at an even blocklength split, plus the sign-change
landmarks. Also scans m1 to show where the g' root would sit for other splits.

    python3 scripts/landscape.py --out results/
"""

import argparse
import pathlib

import numpy as np

from uavfbl import experiments, model
from uavfbl.config import load_bundled, load_scenario


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--config")
    ap.add_argument("--out", default="results")
    args = ap.parse_args()

    params, _ = load_bundled() if args.config is None else load_scenario(args.config)
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    m1 = params.M // 2
    rows = experiments.landscape_rows(params, m1, params.M - m1, 0.0, params.D, 0.1)
    (out / "landscape.csv").write_text(
        experiments.to_csv(rows, experiments.LANDSCAPE_COLUMNS), newline="\n")
    xs = [r["x"] for r in rows]
    print(f"m1 = m2 = {m1}")
    print("  g'  changes sign at", experiments.sign_changes(xs, [r["g_prime"] for r in rows]))
    print("  g'' changes sign at", experiments.sign_changes(xs, [r["g_second"] for r in rows]))

    # where the landmarks move as the split moves
    grid = np.round(np.arange(0, int(params.D * 10) + 1) * 0.1, 10)
    print("\n  m1    g' root    g'' roots")
    for m1 in np.arange(46.0, 52.5, 0.5):
        m2 = params.M - m1
        gp = experiments.sign_changes(grid, model.approx_error_dx(params, m1, m2, grid))
        gpp = experiments.sign_changes(grid, model.g_second(params, m1, m2, grid))
        print(f"  {m1:4.1f}  {gp}  {gpp}")


if __name__ == "__main__":
    main()
