"""Numerical self-checks of the link model.

The finite-difference oracle re-evaluates the surrogate from scratch in
mpmath (40 digits) so the central differences are not limited by double
rounding where eps~ sits close to 1. Analytic derivatives under test are
looked up in ``derivs`` so a caller can substitute a broken one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import mpmath
import numpy as np

from . import model
from .model import ScenarioParams

MP_DPS = 40
REL_TOL = 1e-6
REL_TOL_SECOND = 1e-5
ABS_FALLBACK = 1e-12
N_SAMPLES = 50


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}  {self.detail}"


# ---------------------------------------------------------------------------
# Extended-precision oracle
# ---------------------------------------------------------------------------

def _mp_hop(params: ScenarioParams, x, m, hop):
    beta0 = mpmath.power(10, mpmath.mpf(params.beta0_dB) / 10)
    if hop == model.Hop.HOP1:
        P, d2 = params.P1, params.H ** 2 + x ** 2
    else:
        P, d2 = params.P2, params.H ** 2 + (params.D - x) ** 2
    g = mpmath.mpf(P) * beta0 / (d2 * params.noise_power)
    V = 1 - (1 + g) ** -2
    f = mpmath.log(2) * mpmath.sqrt(m / V) * (mpmath.log(1 + g, 2) - params.L / m)
    return mpmath.erfc(f / mpmath.sqrt(2)) / 2


def mp_approx_error(params: ScenarioParams, x, m1, m2=None):
    """eps1 + eps2 in extended precision; m2 defaults to M - m1."""
    with mpmath.workdps(MP_DPS):
        x, m1 = mpmath.mpf(x), mpmath.mpf(m1)
        m2 = params.M - m1 if m2 is None else mpmath.mpf(m2)
        return (_mp_hop(params, x, m1, model.Hop.HOP1)
                + _mp_hop(params, x, m2, model.Hop.HOP2))


def mp_hop_error(params: ScenarioParams, x, m, hop):
    with mpmath.workdps(MP_DPS):
        return _mp_hop(params, mpmath.mpf(x), mpmath.mpf(m), hop)


def fd_dm1(params, x, m1, h=1e-8):
    with mpmath.workdps(MP_DPS):
        h = mpmath.mpf(h)
        return float((mp_approx_error(params, x, m1 + h)
                      - mp_approx_error(params, x, m1 - h)) / (2 * h))


def _mp_g(params, m1, m2, x):
    return mpmath.log(mp_approx_error(params, x, m1, m2))


def fd_g_prime(params, m1, m2, x, h=1e-8):
    with mpmath.workdps(MP_DPS):
        x, h = mpmath.mpf(x), mpmath.mpf(h)
        return float((_mp_g(params, m1, m2, x + h) - _mp_g(params, m1, m2, x - h)) / (2 * h))


def fd_g_second(params, m1, m2, x, h=1e-6):
    with mpmath.workdps(MP_DPS):
        x, h = mpmath.mpf(x), mpmath.mpf(h)
        return float((_mp_g(params, m1, m2, x + h) - 2 * _mp_g(params, m1, m2, x)
                      + _mp_g(params, m1, m2, x - h)) / h ** 2)


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------

def compare_to_fd(name, analytic, reference, rel_tol, points) -> CheckResult:
    """Relative error, or absolute ``ABS_FALLBACK * scale`` near zeros."""
    analytic = np.asarray(analytic, dtype=float)
    reference = np.asarray(reference, dtype=float)
    scale = float(np.max(np.abs(reference)))
    floor = ABS_FALLBACK * scale
    worst, where = 0.0, None
    for a, r, p in zip(analytic, reference, points):
        if abs(r) > floor:
            bad = abs(a - r) / abs(r) / rel_tol
        else:
            bad = abs(a - r) / floor if floor > 0 else (0.0 if a == r else np.inf)
        if not np.isfinite(bad) or bad > worst:
            worst, where = bad, (p, a, r)
    ok = worst <= 1.0
    detail = f"worst/tol={worst:.3g}"
    if not ok:
        detail += f" at {where[0]!r}: analytic={where[1]!r} fd={where[2]!r}"
    return CheckResult(name, ok, detail)


DEFAULT_DERIVS = {
    "d_approx_error_dm1": model.d_approx_error_dm1,
    "g_prime": model.g_prime,
    "g_second": model.g_second,
}


def check_dm1(params, derivs=DEFAULT_DERIVS, x=None, n=N_SAMPLES):
    x = 0.5 * (params.d1 + params.d2) if x is None else x
    ms = np.linspace(1.5, params.M - 1.5, n)
    an = derivs["d_approx_error_dm1"](params, x, ms)
    fd = [fd_dm1(params, x, m) for m in ms]
    return compare_to_fd("d_approx_error_dm1", an, fd, REL_TOL, [f"m1={m:.4g}" for m in ms])


def _split(params):
    m1 = params.M // 2
    return m1, params.M - m1


def _x_samples(params, n):
    return np.linspace(0.0, params.D, n + 2)[1:-1]


def check_g_prime(params, derivs=DEFAULT_DERIVS, n=N_SAMPLES):
    m1, m2 = _split(params)
    xs = _x_samples(params, n)
    an = derivs["g_prime"](params, m1, m2, xs)
    fd = [fd_g_prime(params, m1, m2, x) for x in xs]
    return compare_to_fd("g_prime", an, fd, REL_TOL, [f"x={x:.4g}" for x in xs])


def check_g_second(params, derivs=DEFAULT_DERIVS, n=N_SAMPLES):
    m1, m2 = _split(params)
    xs = _x_samples(params, n)
    an = derivs["g_second"](params, m1, m2, xs)
    fd = [fd_g_second(params, m1, m2, x) for x in xs]
    return compare_to_fd("g_second", an, fd, REL_TOL_SECOND, [f"x={x:.4g}" for x in xs])


def check_convexity_m1(params, n_x=20, rate_feasible_only=False):
    """Second differences of eps~ over integer m1 in [2, M-2] are >= 0.

    With ``rate_feasible_only`` only stencils whose three points have
    f > 0 on both hops count; there each hop error is convex in its
    blocklength. Outside that region a hop error follows the concave
    shoulder of Q and the full-range check fails.
    """
    name = "convexity_m1_rate_feasible" if rate_feasible_only else "convexity_m1"
    worst = np.inf
    where = None
    counted = 0
    m1 = np.arange(1, params.M, dtype=float)
    for x in np.linspace(params.d1, params.d2, n_x):
        e = model.approx_error(params, x, m1)
        # m1 = 2 .. M-2 are the interior points of 1 .. M-1
        d2 = e[2:] - 2 * e[1:-1] + e[:-2]
        slack = d2 + 1e-15 * e.max()
        if rate_feasible_only:
            f1 = model.rate_penalty_f(model.snr(params, x, model.Hop.HOP1), m1, params.L)
            f2 = model.rate_penalty_f(model.snr(params, x, model.Hop.HOP2),
                                      params.M - m1, params.L)
            pos = (f1 > 0) & (f2 > 0)
            keep = pos[2:] & pos[1:-1] & pos[:-2]
            slack = np.where(keep, slack, np.inf)
            counted += int(keep.sum())
        else:
            counted += slack.size
        i = int(np.argmin(slack))
        if slack[i] < worst:
            worst, where = slack[i], (x, int(m1[i + 1]), d2[i])
    ok = bool(worst >= 0)
    detail = f"points={counted} min(second diff + slack)={worst:.3g}"
    if not ok:
        detail += f" at x={where[0]:.4g}, m1={where[1]}: {where[2]:.3g}"
    return CheckResult(name, ok, detail)


def check_f_concave(params, n=200):
    gammas = np.geomspace(1e-3, 1e4, 25)
    ms = np.linspace(0.5, 4 * params.M, n)
    G, Mm = np.meshgrid(gammas, ms)
    vals = model.rate_penalty_f_dm2(G, Mm, params.L)
    ok = bool(np.all(vals < 0))
    return CheckResult("f_concave_in_m", ok, f"max f''={vals.max():.3g}")


def check_q_function():
    z = np.linspace(-40, 40, 8001)
    sym = np.max(np.abs(model.q_function(z) + model.q_function(-z) - 1.0))
    zz = np.linspace(-6, 37, 4301)  # steps in Q near 1 vanish below double resolution past -6
    q = model.q_function(zz)
    mono = bool(np.all(np.diff(q) < 0))
    ok = sym <= 1e-14 and mono
    return CheckResult("q_function", ok, f"max|Q(z)+Q(-z)-1|={sym:.3g} decreasing={mono}")


def g_prime_sign_changes(params, m1, m2, x_min=0.0, x_max=None, step=0.1):
    x_max = params.D if x_max is None else x_max
    xs = np.arange(0, int(round((x_max - x_min) / step)) + 1) * step + x_min
    s = np.sign(model.approx_error_dx(params, m1, m2, xs))
    nz = s != 0
    idx = np.nonzero(s[nz][1:] != s[nz][:-1])[0]
    return xs[nz][idx + 1]


def check_unique_minimum(params):
    m1, m2 = _split(params)
    roots = g_prime_sign_changes(params, m1, m2)
    ok = len(roots) == 1
    return CheckResult("unique_location_minimum", ok,
                       f"g' sign changes at {[round(float(r), 2) for r in roots]}")


def check_symmetric_stationarity(params):
    x = params.D / 2
    m = params.M / 2
    gp = float(model.g_prime(params, m, m, x))
    dm = float(model.d_approx_error_dm1(params, x, m))
    scale = float(model.approx_error(params, x, m))
    ok = abs(gp) <= 1e-9 and abs(dm) <= 1e-12 * max(scale, 1e-300) + 1e-300
    return CheckResult("symmetric_stationarity", ok, f"g'(D/2)={gp:.3g} eps~'(M/2)={dm:.3g}")


def run_all(params: ScenarioParams,
            derivs: Optional[Dict[str, Callable]] = None) -> List[CheckResult]:
    derivs = {**DEFAULT_DERIVS, **(derivs or {})}
    results = [
        check_q_function(),
        check_f_concave(params),
        check_dm1(params, derivs),
        check_g_prime(params, derivs),
        check_g_second(params, derivs),
        check_convexity_m1(params, rate_feasible_only=True),
        check_unique_minimum(params),
    ]
    if params.P1 == params.P2 and params.M % 2 == 0:
        results.append(check_symmetric_stationarity(params))
    return results
