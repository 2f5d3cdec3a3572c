"""Acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line (also collected into the
terminal summary) and then asserts the criterion at its stated tolerance.
"""

import dataclasses
import time

import numpy as np
import pytest

from uavfbl import cli, model, verify
from uavfbl.experiments import derive_seed, sign_changes
from uavfbl.optimizer import (SolverConfig, baseline_fixed_m, baseline_fixed_x,
                              exhaustive_search, joint_optimize)

from conftest import ACCEPTANCE_LINES, random_scenarios

pytestmark = pytest.mark.acceptance


def report(n, title, passed, detail):
    line = f"{'PASS' if passed else 'FAIL'}  criterion {n} ({title}): {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


def test_1_derivative_fidelity(base):
    t0 = time.perf_counter()
    results = [verify.check_dm1(base), verify.check_g_prime(base),
               verify.check_g_second(base)]
    dt = time.perf_counter() - t0
    ok = all(r.passed for r in results) and dt < 1.0
    detail = "; ".join(f"{r.name} {r.detail}" for r in results) + f"; {dt:.2f}s"
    assert report(1, "derivative fidelity", ok, detail)


def test_2_convexity_in_m1(base):
    t0 = time.perf_counter()
    r = verify.check_convexity_m1(base, n_x=20)
    dt = time.perf_counter() - t0
    assert report(2, "convexity in m1", r.passed and dt < 1.0, f"{r.detail}; {dt:.2f}s")


def test_3_location_landscape(base):
    xs = np.round(np.arange(0, 2001) * 0.1, 10)
    gp = sign_changes(xs, model.approx_error_dx(base, 50, 50, xs))
    gpp = sign_changes(xs, model.g_second(base, 50, 50, xs))
    unique = len(gp) == 1
    gp_mark = unique and abs(gp[0] - 163.4) <= 3.0
    gpp_mark = (len(gpp) == 2 and abs(gpp[0] - 142.5) <= 5.0
                and abs(gpp[1] - 186.5) <= 5.0)
    detail = (f"g' sign changes {gp} (unique={unique}, 163.4+-3 "
              f"{'met' if gp_mark else 'not met, informational'}); "
              f"g'' sign changes {gpp} (142.5/186.5+-5 {'met' if gpp_mark else 'not met'})")
    # landmark misses are informational once the minimum is unique
    assert report(3, "location landscape", unique and gpp_mark, detail)


def test_4_oracle_equivalence(base):
    t0 = time.perf_counter()
    scenarios = [base] + random_scenarios(10, seed=0)
    worst, misses = 0.0, []
    for i, p in enumerate(scenarios):
        ex = exhaustive_search(p)
        for rep in range(5):
            sol, _ = joint_optimize(p, SolverConfig(seed=derive_seed(0, i, rep)))
            rel = abs(sol.eps_approx - ex.eps_approx) / ex.eps_approx
            worst = max(worst, rel)
            if rel > 1e-6:
                misses.append(f"scenario {i} rep {rep}: rel {rel:.2g}")
    dt = time.perf_counter() - t0
    ok = not misses and dt < 60.0
    detail = (f"{len(scenarios) * 5 - len(misses)}/{len(scenarios) * 5} runs within 1e-6, "
              f"worst rel {worst:.3g}; {dt:.1f}s" + (f"; misses: {misses}" if misses else ""))
    assert report(4, "oracle equivalence", ok, detail)


def test_5_convergence(base):
    t0 = time.perf_counter()
    bad = []
    finals = []
    for i, H in enumerate((100.0, 120.0, 140.0)):
        p = dataclasses.replace(base, H=H)
        _, trace = joint_optimize(p, SolverConfig(seed=derive_seed(0, i)))
        obj = np.array(trace.objectives)
        if np.any(np.diff(obj) > 1e-15):
            bad.append(f"H={H:g} increases")
        if abs(obj[-1] - obj[min(10, len(obj) - 1)]) >= 1e-12:
            bad.append(f"H={H:g} still moving after 10 iterations")
        finals.append(f"H={H:g}: {obj[-1]:.4g}")
    dt = time.perf_counter() - t0
    ok = not bad and dt < 1.0
    assert report(5, "convergence", ok, ", ".join(finals + bad) + f"; {dt:.2f}s")


def test_6_baseline_dominance(base):
    j = joint_optimize(base)[0].eps_approx
    fx = baseline_fixed_x(base).eps_approx
    fm = baseline_fixed_m(base).eps_approx
    ok = j < fx and j < fm
    assert report(6, "baseline dominance", ok,
                  f"joint {j:.4g} < FixedX {fx:.4g}, FixedM {fm:.4g}")


def test_7_complexity(base):
    cfg = SolverConfig()
    bound = cfg.t_max * (int(np.ceil(np.log2(base.M / cfg.delta)))
                         + 3 * int(np.ceil(np.log2((base.d2 - base.d1) / cfg.zeta))) + 16)
    counts = [joint_optimize(base, dataclasses.replace(cfg, seed=s))[0].eval_count
              for s in range(5)]
    ex = exhaustive_search(base, cfg).eval_count
    expect = (base.M - 1) * (int(np.floor((base.d2 - base.d1) / cfg.zeta + 1e-9)) + 1)
    ok = max(counts) <= bound and ex == expect and max(counts) < 0.02 * ex
    assert report(7, "complexity", ok,
                  f"joint counts {counts} <= {bound}; exhaustive {ex} == {expect}; "
                  f"ratio {max(counts) / ex:.2%}")


def test_8_determinism(tmp_path):
    def run(cmd, name, *extra):
        out = tmp_path / name
        assert cli.main([cmd, "--seed", "5", "--out", str(out), *extra]) == 0
        return out.read_bytes()

    same = {}
    for cmd in ("convergence", "compare"):
        a = run(cmd, f"{cmd}_a.csv")
        b = run(cmd, f"{cmd}_b.csv")
        c = run(cmd, f"{cmd}_par.csv", "--jobs", "2")
        same[cmd] = a == b == c and len(a) > 0
    assert report(8, "determinism", all(same.values()),
                  ", ".join(f"{k} serial/serial/parallel identical={v}" for k, v in same.items()))
