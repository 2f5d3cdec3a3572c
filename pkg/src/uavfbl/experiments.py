"""Sweeps and tables behind the CLI: location landscape, convergence traces
and method comparison. All tables are lists of dicts written as CSV with
17 significant digits so reruns are byte-identical.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from . import model, optimizer
from .model import ScenarioParams
from .optimizer import Method, SolverConfig

JOINT_MISMATCH_TOL = 1e-6

SWEEPABLE = {"H": "H", "M": "M", "L": "L", "P1": "P1", "P2": "P2", "D": "D"}
METHOD_ORDER = [Method.JOINT, Method.EXHAUSTIVE, Method.FIXED_X, Method.FIXED_M]


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def to_csv(rows: Sequence[Dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([fmt(r[c]) for c in columns])
    return buf.getvalue()


def derive_seed(base: int, *keys: int) -> int:
    """Deterministic 64-bit child seed for (base, keys...)."""
    ss = np.random.SeedSequence(int(base), spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def with_param(params: ScenarioParams, name: str, value) -> ScenarioParams:
    field = SWEEPABLE[name]
    if field == "M":
        return dataclasses.replace(params, M=int(value), B=None, T_max=None)
    return dataclasses.replace(params, **{field: float(value)})


# ---------------------------------------------------------------------------
# Landscape of g(x) at a fixed split
# ---------------------------------------------------------------------------

LANDSCAPE_COLUMNS = ["x", "g", "g_prime", "g_second"]


def landscape_rows(params: ScenarioParams, m1, m2, x_min, x_max, step):
    if not x_min < x_max:
        raise ValueError("x_min must be < x_max")
    if not step > 0:
        raise ValueError("step must be > 0")
    n = int(np.floor((x_max - x_min) / step + 1e-9))
    xs = x_min + step * np.arange(n + 1)
    g = model.g_value(params, m1, m2, xs)
    gp = model.g_prime(params, m1, m2, xs)
    gpp = model.g_second(params, m1, m2, xs)
    return [dict(x=a, g=b, g_prime=c, g_second=d) for a, b, c, d in zip(xs, g, gp, gpp)]


def sign_changes(xs, ys) -> List[float]:
    """Grid points where ``ys`` changes sign (first point of the new sign)."""
    xs, ys = np.asarray(xs), np.sign(np.asarray(ys))
    nz = ys != 0
    xs, ys = xs[nz], ys[nz]
    return [float(v) for v in xs[1:][ys[1:] != ys[:-1]]]


# ---------------------------------------------------------------------------
# Convergence traces
# ---------------------------------------------------------------------------

CONVERGENCE_COLUMNS = ["H", "iteration", "eps_approx", "m1", "x"]


def _convergence_task(args):
    params, cfg, H = args
    _, trace = optimizer.joint_optimize(dataclasses.replace(params, H=float(H)), cfg)
    rows = [dict(H=float(H), iteration=0, eps_approx=trace.initial.eps_approx,
                 m1=trace.initial.m1, x=trace.initial.x)]
    for r in trace.records:
        rows.append(dict(H=float(H), iteration=r.t, eps_approx=r.objective,
                         m1=r.selected.m1, x=r.selected.x))
    return rows


def _run(tasks, fn, jobs):
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, tasks))
    return [fn(t) for t in tasks]


def convergence_rows(params: ScenarioParams, cfg: SolverConfig,
                     H_values: Iterable[float], seed: int, jobs: int = 1):
    tasks = [(params, dataclasses.replace(cfg, seed=derive_seed(seed, i)), H)
             for i, H in enumerate(H_values)]
    out = [row for rows in _run(tasks, _convergence_task, jobs) for row in rows]
    out.sort(key=lambda r: (r["H"], r["iteration"]))
    return out


# ---------------------------------------------------------------------------
# Method comparison
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepSpec:
    swept_parameter: str = "M"
    values: tuple = (60, 70, 80, 90, 100, 110, 120, 130, 140)
    methods: tuple = tuple(METHOD_ORDER)
    repetitions: int = 1

    def __post_init__(self):
        if self.swept_parameter not in SWEEPABLE:
            raise ValueError(f"cannot sweep {self.swept_parameter!r}; choose from {sorted(SWEEPABLE)}")
        if len(self.values) == 0:
            raise ValueError("sweep values must be non-empty")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("sweep values must be strictly increasing")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        object.__setattr__(self, "methods", tuple(Method(m) for m in self.methods))


@dataclass
class RunRecord:
    params: ScenarioParams
    method: Method
    seed: int
    solution: optimizer.Solution
    wall_ms: float

    SCENARIO_FIELDS = ("D", "H", "d1", "d2", "L", "M", "P1", "P2", "beta0_dB", "noise_power")
    SOLUTION_FIELDS = ("x", "m1", "m2", "eps_approx", "eps_exact", "eval_count", "iterations")

    @classmethod
    def columns(cls, timing: bool = False) -> List[str]:
        cols = list(cls.SCENARIO_FIELDS) + ["method", "seed"] + list(cls.SOLUTION_FIELDS)
        return cols + ["wall_ms"] if timing else cols

    def row(self) -> Dict:
        r = {k: getattr(self.params, k) for k in self.SCENARIO_FIELDS}
        r.update(method=self.method.value, seed=self.seed, wall_ms=self.wall_ms)
        r.update({k: getattr(self.solution, k) for k in self.SOLUTION_FIELDS})
        return r


def run_method(params: ScenarioParams, method: Method, cfg: SolverConfig) -> RunRecord:
    t0 = time.perf_counter()
    sol = optimizer.solve(params, method, cfg)
    wall = (time.perf_counter() - t0) * 1e3
    return RunRecord(params, Method(method), cfg.seed, sol, wall)


COMPARE_COLUMNS = ["param", "value", "method", "repetition", "seed", "x", "m1", "m2",
                   "eps_approx", "eps_exact", "eval_count", "iterations", "flag"]


def _compare_task(args):
    params, cfg, name, value, rep = args
    p = with_param(params, name, value)
    rows = []
    for method in METHOD_ORDER:
        if method not in cfg[1]:
            continue
        rec = run_method(p, method, cfg[0])
        s = rec.solution
        rows.append(dict(param=name, value=value, method=method.value, repetition=rep,
                         seed=cfg[0].seed, x=s.x, m1=s.m1, m2=s.m2,
                         eps_approx=s.eps_approx, eps_exact=s.eps_exact,
                         eval_count=s.eval_count, iterations=s.iterations,
                         flag=0, wall_ms=rec.wall_ms))
    by = {r["method"]: r for r in rows}
    j, e = by.get(Method.JOINT.value), by.get(Method.EXHAUSTIVE.value)
    if j and e and j["eps_approx"] > e["eps_approx"] * (1 + JOINT_MISMATCH_TOL):
        j["flag"] = 1
    return rows


def compare_rows(params: ScenarioParams, cfg: SolverConfig, sweep: SweepSpec,
                 seed: int, jobs: int = 1):
    tasks = []
    for i, value in enumerate(sweep.values):
        for rep in range(sweep.repetitions):
            c = dataclasses.replace(cfg, seed=derive_seed(seed, i, rep))
            tasks.append((params, (c, sweep.methods), sweep.swept_parameter, value, rep))
    out = [row for rows in _run(tasks, _compare_task, jobs) for row in rows]
    order = {m.value: k for k, m in enumerate(METHOD_ORDER)}
    out.sort(key=lambda r: (r["value"], order[r["method"]], r["repetition"]))
    return out
