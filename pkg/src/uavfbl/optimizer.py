"""Blocklength/location solvers for the two-hop relay.

``optimize_blocklength`` bisects the surrogate's m1-derivative (convex in a
continuous m1), ``optimize_location`` bisects the sign of g'(x) on
[d1, d2], and ``joint_optimize`` alternates the two with a random
perturbation of m1 each round. ``exhaustive_search`` is the brute-force
grid oracle; ``baseline_fixed_x`` and ``baseline_fixed_m`` solve only one
of the two subproblems.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from . import model
from .model import Allocation, ScenarioParams


class Method(str, enum.Enum):
    JOINT = "joint"
    EXHAUSTIVE = "exhaustive"
    FIXED_X = "fixedx"
    FIXED_M = "fixedm"


@dataclass(frozen=True)
class SolverConfig:
    delta: float = 0.5
    zeta: float = 0.1
    n_max: int = 3
    t_max: int = 10
    seed: int = 0
    early_stop_tol: float = 0.0
    check_unimodal: bool = False
    x_lattice: bool = True

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError("invariant violated: delta > 0")
        if not self.zeta > 0:
            raise ValueError("invariant violated: zeta > 0")
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise ValueError("invariant violated: n_max >= 1 integer")
        if int(self.t_max) != self.t_max or self.t_max < 1:
            raise ValueError("invariant violated: t_max >= 1 integer")
        if self.early_stop_tol < 0:
            raise ValueError("invariant violated: early_stop_tol >= 0")


@dataclass
class Solution:
    x: float
    m1: int
    m2: int
    eps_approx: float
    eps_exact: float
    method: Method
    eval_count: int
    iterations: int = 0


@dataclass
class Candidate:
    m1: int
    x: float
    eps_approx: float


@dataclass
class IterationRecord:
    t: int
    m1_from_alg1: int
    n_l: int
    n_r: int
    candidates: List[Candidate]
    selected: Candidate
    objective: float
    kept_incumbent: bool = False
    multimodal: bool = False


@dataclass
class IterationTrace:
    initial: Candidate
    records: List[IterationRecord] = field(default_factory=list)
    eval_count: int = 0

    @property
    def objectives(self) -> List[float]:
        return [self.initial.eps_approx] + [r.objective for r in self.records]


class EvalCounter:
    """Counts model evaluations (surrogate values or derivatives)."""

    def __init__(self):
        self.n = 0

    def add(self, k: int = 1):
        self.n += k


def _check_feasible(params: ScenarioParams, x: float, m1: int):
    assert params.d1 <= x <= params.d2, (x, params.d1, params.d2)
    assert 1 <= m1 <= params.M - 1


def _make_solution(params, x, m1, method, eval_count, iterations=0) -> Solution:
    m2 = params.M - m1
    e1 = float(model.hop_error(params, x, m1, model.Hop.HOP1))
    e2 = float(model.hop_error(params, x, m2, model.Hop.HOP2))
    return Solution(
        x=float(x), m1=int(m1), m2=int(m2),
        eps_approx=e1 + e2,
        eps_exact=float(model.overall_error(e1, e2)),
        method=method, eval_count=int(eval_count), iterations=iterations,
    )


def optimize_blocklength(params: ScenarioParams, x: float,
                         cfg: Optional[SolverConfig] = None,
                         counter: Optional[EvalCounter] = None) -> Allocation:
    """Best integer split (m1, M - m1) at a fixed UAV position.

    Bisection runs on the sign of the continuous derivative over
    [1, M - 1] until the bracket is at most ``cfg.delta`` wide. The
    integers covering the final bracket (which include floor and ceil of
    the last midpoint) are then compared directly; ties go to the
    smaller m1.
    """
    cfg = cfg or SolverConfig()
    counter = counter or EvalCounter()
    M = params.M
    lb, ub = 1.0, float(M - 1)
    while ub - lb > cfg.delta:
        mid = 0.5 * (lb + ub)
        counter.add()
        if model.d_approx_error_dm1(params, x, mid) > 0:
            ub = mid
        else:
            lb = mid
    lo = max(1, math.floor(lb))
    hi = min(M - 1, math.ceil(ub))
    cands = np.arange(lo, hi + 1)
    vals = model.approx_error(params, x, cands)
    counter.add(len(cands))
    m1 = int(cands[int(np.argmin(vals))])
    return Allocation(m1, M - m1)


def optimize_location(params: ScenarioParams, m1: int, m2: int,
                      cfg: Optional[SolverConfig] = None,
                      counter: Optional[EvalCounter] = None) -> float:
    """Minimizer of the surrogate over x in [d1, d2] for a fixed split.

    Returns d2 when g' < 0 there, d1 when g' > 0 there, and otherwise
    bisects g' to a bracket of width at most ``cfg.zeta``. With
    ``cfg.x_lattice`` the result is the better of the two points of
    ``location_grid`` around the final midpoint; without it, the
    midpoint itself.
    """
    return _locate(params, m1, m2, cfg or SolverConfig(), counter or EvalCounter())[0]


def _locate(params, m1, m2, cfg, counter):
    """optimize_location body; also returns eps~ at x* when it was computed."""
    d1, d2 = params.d1, params.d2

    def slope(x):
        # sign(g') == sign(d eps~/dx); the latter survives eps~ underflow
        counter.add()
        return model.approx_error_dx(params, m1, m2, x)

    if slope(d2) < 0:
        return d2, None
    if slope(d1) > 0:
        return d1, None
    lb, ub = d1, d2
    while ub - lb > cfg.zeta:
        mid = 0.5 * (lb + ub)
        if slope(mid) > 0:
            ub = mid
        else:
            lb = mid
    mid = 0.5 * (lb + ub)
    if not cfg.x_lattice:
        return mid, None
    grid = location_grid(params, cfg.zeta)
    k = int(np.searchsorted(grid, mid))
    pts = grid[max(k - 1, 0):min(k + 1, len(grid))]
    vals = (model.hop_error(params, pts, m1, model.Hop.HOP1)
            + model.hop_error(params, pts, m2, model.Hop.HOP2))
    counter.add(len(pts))
    k = int(np.argmin(vals))
    return float(pts[k]), float(vals[k])


def location_sign_changes(params: ScenarioParams, m1: int, m2: int,
                          n_points: int = 401) -> int:
    """Number of sign changes of g' on a uniform grid over [d1, d2]."""
    xs = np.linspace(params.d1, params.d2, n_points)
    s = np.sign(model.approx_error_dx(params, m1, m2, xs))
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def _clamp(m1: int, M: int) -> int:
    return min(max(m1, 1), M - 1)


def joint_optimize(params: ScenarioParams, cfg: Optional[SolverConfig] = None,
                   init: Optional[Tuple[float, int]] = None
                   ) -> Tuple[Solution, IterationTrace]:
    """Alternate blocklength and location updates with m1 perturbation.

    Each round: best m1 at the current x, then the best x for
    m1 - n_l, m1, m1 + n_r (n_l, n_r uniform on [1, n_max], drawn in that
    order), keeping the (m1, x) pair with the smallest surrogate. The
    current iterate is kept if no candidate beats it, so the objective
    sequence never increases.
    """
    cfg = cfg or SolverConfig()
    M = params.M
    rng = np.random.default_rng(cfg.seed)
    counter = EvalCounter()

    if init is None:
        x, m1 = 0.5 * (params.d1 + params.d2), M // 2
    else:
        x, m1 = float(init[0]), int(init[1])
    m1 = _clamp(m1, M)
    x = min(max(x, params.d1), params.d2)

    obj = float(model.approx_error(params, x, m1))
    counter.add()
    current = Candidate(m1, x, obj)
    trace = IterationTrace(initial=current)

    t_run = 0
    for t in range(1, cfg.t_max + 1):
        t_run = t
        base = optimize_blocklength(params, current.x, cfg, counter).m1
        n_l = int(rng.integers(1, cfg.n_max + 1))
        n_r = int(rng.integers(1, cfg.n_max + 1))
        multimodal = False
        cands = []
        for mc in (_clamp(base - n_l, M), base, _clamp(base + n_r, M)):
            xc, e = _locate(params, mc, M - mc, cfg, counter)
            if e is None:
                e = float(model.approx_error(params, xc, mc))
                counter.add()
            cands.append(Candidate(mc, xc, e))
            if cfg.check_unimodal and location_sign_changes(params, mc, M - mc) > 1:
                multimodal = True
        best = min(cands, key=lambda c: c.eps_approx)
        kept = best.eps_approx > current.eps_approx
        if kept:
            best = current
        change = current.eps_approx - best.eps_approx
        current = best
        trace.records.append(IterationRecord(
            t=t, m1_from_alg1=base, n_l=n_l, n_r=n_r, candidates=cands,
            selected=best, objective=best.eps_approx,
            kept_incumbent=kept, multimodal=multimodal,
        ))
        if cfg.early_stop_tol > 0 and change < cfg.early_stop_tol:
            break

    trace.eval_count = counter.n
    _check_feasible(params, current.x, current.m1)
    sol = _make_solution(params, current.x, current.m1, Method.JOINT,
                         counter.n, t_run)
    return sol, trace


def location_grid(params: ScenarioParams, zeta: float) -> np.ndarray:
    """d1, d1 + zeta, ... with the last point pinned to d2."""
    n = int(math.floor((params.d2 - params.d1) / zeta + 1e-9))
    xs = params.d1 + zeta * np.arange(n + 1, dtype=float)
    xs[-1] = params.d2
    return xs


def exhaustive_search(params: ScenarioParams,
                      cfg: Optional[SolverConfig] = None) -> Solution:
    cfg = cfg or SolverConfig()
    xs = location_grid(params, cfg.zeta)
    m1s = np.arange(1, params.M, dtype=float)
    vals = model.approx_error(params, xs[None, :], m1s[:, None])
    i, j = np.unravel_index(int(np.argmin(vals)), vals.shape)
    return _make_solution(params, xs[j], int(m1s[i]), Method.EXHAUSTIVE,
                          vals.size)


def baseline_fixed_x(params: ScenarioParams,
                     cfg: Optional[SolverConfig] = None) -> Solution:
    counter = EvalCounter()
    x = 0.5 * (params.d1 + params.d2)
    alloc = optimize_blocklength(params, x, cfg, counter)
    return _make_solution(params, x, alloc.m1, Method.FIXED_X, counter.n)


def baseline_fixed_m(params: ScenarioParams,
                     cfg: Optional[SolverConfig] = None) -> Solution:
    counter = EvalCounter()
    m1 = params.M // 2
    x = optimize_location(params, m1, params.M - m1, cfg, counter)
    return _make_solution(params, x, m1, Method.FIXED_M, counter.n)


def solve(params: ScenarioParams, method: Method,
          cfg: Optional[SolverConfig] = None) -> Solution:
    method = Method(method)
    if method is Method.JOINT:
        return joint_optimize(params, cfg)[0]
    if method is Method.EXHAUSTIVE:
        return exhaustive_search(params, cfg)
    if method is Method.FIXED_X:
        return baseline_fixed_x(params, cfg)
    return baseline_fixed_m(params, cfg)
