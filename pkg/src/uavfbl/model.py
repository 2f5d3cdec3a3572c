"""Finite-blocklength link model for a two-hop UAV decode-and-forward relay.

Hop 1 is controller -> UAV, hop 2 is UAV -> robot. The UAV hovers at
(x, H) between the controller at (0, 0) and the robot at (D, 0). All
channel gains follow the free-space model beta0 / d^2, and each hop's
decoding error is the normal approximation Q(f(gamma, m, L)).

Every function broadcasts over numpy arrays in ``x`` and ``m``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import erfc

LN2 = math.log(2.0)
INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
GAMMA_FLOOR = 1e-12


class ModelDomainError(ValueError):
    """Input outside the region where the link model is defined."""


class Hop(enum.IntEnum):
    HOP1 = 1  # controller -> UAV
    HOP2 = 2  # UAV -> robot


@dataclass(frozen=True)
class ScenarioParams:
    D: float = 200.0
    H: float = 120.0
    d1: float = 30.0
    d2: float = 130.0
    L: float = 100.0
    M: int = 100
    P1: float = 3.0
    P2: float = 1.0
    beta0_dB: float = 50.0
    noise_power: float = 1.0
    B: Optional[float] = None
    T_max: Optional[float] = None

    def __post_init__(self):
        if self.B is not None and self.T_max is not None:
            derived = int(round(self.B * self.T_max))
            if self.M != derived:
                raise ValueError(
                    f"M={self.M} disagrees with round(B*T_max)={derived}"
                )
        self.validate()

    def validate(self):
        checks = [
            (self.D > 0, "D > 0"),
            (self.H > 0, "H > 0"),
            (0 <= self.d1 < self.d2 <= self.D, "0 <= d1 < d2 <= D"),
            (float(self.M).is_integer() and self.M >= 2, "M >= 2 and M integer"),
            (self.L >= 1, "L >= 1"),
            (self.P1 > 0, "P1 > 0"),
            (self.P2 > 0, "P2 > 0"),
            (self.noise_power > 0, "noise_power > 0"),
        ]
        for ok, name in checks:
            if not ok:
                raise ValueError(f"invariant violated: {name}")

    @classmethod
    def from_bandwidth(cls, B: float, T_max: float, **kw) -> "ScenarioParams":
        return cls(M=int(round(B * T_max)), B=B, T_max=T_max, **kw)


@dataclass(frozen=True)
class Allocation:
    m1: int
    m2: int

    def __post_init__(self):
        if self.m1 < 1 or self.m2 < 1:
            raise ValueError(f"blocklengths must be >= 1, got ({self.m1}, {self.m2})")

    @property
    def M(self) -> int:
        return self.m1 + self.m2


def reference_scenario() -> ScenarioParams:
    """Parameters of the reference simulation (B = 1 MHz, T_max = 100 us)."""
    return ScenarioParams.from_bandwidth(1e6, 100e-6)


# ---------------------------------------------------------------------------
# Channel and rate penalty
# ---------------------------------------------------------------------------

def beta0_linear(params: ScenarioParams) -> float:
    return 10.0 ** (params.beta0_dB / 10.0)


def _check_x(x):
    if not np.all(np.isfinite(x)):
        raise ModelDomainError("x must be finite")


def _distance_sq(params: ScenarioParams, x, hop: Hop):
    if hop == Hop.HOP1:
        return params.H ** 2 + x ** 2
    return params.H ** 2 + (params.D - x) ** 2


def _power(params: ScenarioParams, hop: Hop) -> float:
    return params.P1 if hop == Hop.HOP1 else params.P2


def snr(params: ScenarioParams, x, hop: Hop):
    """Received SNR of one hop with the UAV at horizontal position x."""
    x = np.asarray(x, dtype=float)
    _check_x(x)
    gain = _power(params, hop) * beta0_linear(params) / params.noise_power
    return gain / _distance_sq(params, x, hop)


def snr_dx(params: ScenarioParams, x, hop: Hop):
    """d gamma / dx."""
    x = np.asarray(x, dtype=float)
    k = _power(params, hop) * beta0_linear(params) / params.noise_power
    if hop == Hop.HOP1:
        return -2.0 * k * x / (params.H ** 2 + x ** 2) ** 2
    u = params.D - x
    return 2.0 * k * u / (params.H ** 2 + u ** 2) ** 2


def snr_dx2(params: ScenarioParams, x, hop: Hop):
    """d^2 gamma / dx^2."""
    x = np.asarray(x, dtype=float)
    k = _power(params, hop) * beta0_linear(params) / params.noise_power
    u = x if hop == Hop.HOP1 else params.D - x
    H2 = params.H ** 2
    return k * (6.0 * u ** 4 + 4.0 * H2 * u ** 2 - 2.0 * H2 ** 2) / (H2 + u ** 2) ** 4


def _check_gamma(gamma):
    if np.any(~(np.asarray(gamma) >= GAMMA_FLOOR)):
        raise ModelDomainError(f"SNR below floor {GAMMA_FLOOR:g}")


def dispersion(gamma):
    """Channel dispersion V = 1 - (1 + gamma)^-2."""
    gamma = np.asarray(gamma, dtype=float)
    _check_gamma(gamma)
    return 1.0 - (1.0 + gamma) ** -2


def rate_penalty_f(gamma, m, L):
    """Normalized rate gap ln2 * sqrt(m/V) * (log2(1+gamma) - L/m)."""
    m = np.asarray(m, dtype=float)
    V = dispersion(gamma)
    return LN2 * np.sqrt(m / V) * (np.log2(1.0 + gamma) - L / m)


def rate_penalty_f_dm(gamma, m, L):
    A = LN2 / np.sqrt(dispersion(gamma))
    C = np.log2(1.0 + np.asarray(gamma, dtype=float))
    m = np.asarray(m, dtype=float)
    return 0.5 * A * C * m ** -0.5 + 0.5 * A * L * m ** -1.5


def rate_penalty_f_dm2(gamma, m, L):
    A = LN2 / np.sqrt(dispersion(gamma))
    C = np.log2(1.0 + np.asarray(gamma, dtype=float))
    m = np.asarray(m, dtype=float)
    return -0.25 * A * C * m ** -1.5 - 0.75 * A * L * m ** -2.5


def rate_penalty_f_dgamma(gamma, m, L):
    _check_gamma(gamma)
    gamma = np.asarray(gamma, dtype=float)
    m = np.asarray(m, dtype=float)
    s = (1.0 + gamma) ** 2 - 1.0
    gap = np.log2(1.0 + gamma) - L / m
    return np.sqrt(m) * (1.0 - LN2 * gap / s) / np.sqrt(s)


def rate_penalty_f_dgamma2(gamma, m, L):
    _check_gamma(gamma)
    gamma = np.asarray(gamma, dtype=float)
    m = np.asarray(m, dtype=float)
    u = 1.0 + gamma
    s = u ** 2 - 1.0
    gap = np.log2(u) - L / m
    c = np.sqrt(m) / s ** 2.5
    return c * (-1.0 / u - u) * s + 3.0 * c * u * gap * LN2


# ---------------------------------------------------------------------------
# Error probabilities
# ---------------------------------------------------------------------------

def q_function(z):
    """Gaussian tail probability P(Z > z)."""
    return 0.5 * erfc(np.asarray(z, dtype=float) / math.sqrt(2.0))


def normal_pdf(z):
    z = np.asarray(z, dtype=float)
    return INV_SQRT_2PI * np.exp(-0.5 * z * z)


def hop_error(params: ScenarioParams, x, m, hop: Hop):
    gamma = snr(params, x, hop)
    return q_function(rate_penalty_f(gamma, m, params.L))


def overall_error(eps1, eps2):
    """End-to-end decode-and-forward error eps1 + (1 - eps1) * eps2."""
    e1 = np.asarray(eps1, dtype=float)
    e2 = np.asarray(eps2, dtype=float)
    if np.any(~((e1 >= 0) & (e1 <= 1))) or np.any(~((e2 >= 0) & (e2 <= 1))):
        raise ValueError("error probabilities must lie in [0, 1]")
    return e1 + (1.0 - e1) * e2


def approx_error(params: ScenarioParams, x, m1):
    """Surrogate eps1 + eps2 with m2 = M - m1."""
    m1 = np.asarray(m1, dtype=float)
    return (hop_error(params, x, m1, Hop.HOP1)
            + hop_error(params, x, params.M - m1, Hop.HOP2))


def exact_error(params: ScenarioParams, x, m1):
    m1 = np.asarray(m1, dtype=float)
    return overall_error(hop_error(params, x, m1, Hop.HOP1),
                         hop_error(params, x, params.M - m1, Hop.HOP2))


# ---------------------------------------------------------------------------
# Derivatives in the blocklength
# ---------------------------------------------------------------------------

def hop_error_dm(params: ScenarioParams, x, m, hop: Hop):
    """d eps_i / d m_i for a fixed position."""
    gamma = snr(params, x, hop)
    f = rate_penalty_f(gamma, m, params.L)
    return -normal_pdf(f) * rate_penalty_f_dm(gamma, m, params.L)


def hop_error_dm2(params: ScenarioParams, x, m, hop: Hop):
    gamma = snr(params, x, hop)
    f = rate_penalty_f(gamma, m, params.L)
    fp = rate_penalty_f_dm(gamma, m, params.L)
    fpp = rate_penalty_f_dm2(gamma, m, params.L)
    return normal_pdf(f) * (f * fp ** 2 - fpp)


def d_approx_error_dm1(params: ScenarioParams, x, m1):
    """Derivative of the surrogate w.r.t. a continuous m1 (m2 = M - m1)."""
    m1 = np.asarray(m1, dtype=float)
    m2 = params.M - m1
    return (hop_error_dm(params, x, m1, Hop.HOP1)
            - hop_error_dm(params, x, m2, Hop.HOP2))


# ---------------------------------------------------------------------------
# Log-surrogate g(x) = ln(eps1(x) + eps2(x)) at fixed (m1, m2)
# ---------------------------------------------------------------------------

def _hop_terms_x(params: ScenarioParams, m, x, hop: Hop):
    """Return (eps, d eps/dx, d^2 eps/dx^2) for one hop."""
    gamma = snr(params, x, hop)
    L = params.L
    f = rate_penalty_f(gamma, m, L)
    fg = rate_penalty_f_dgamma(gamma, m, L)
    fgg = rate_penalty_f_dgamma2(gamma, m, L)
    pdf = normal_pdf(f)
    de_dg = -pdf * fg
    d2e_dg2 = pdf * (f * fg ** 2 - fgg)
    g1 = snr_dx(params, x, hop)
    g2 = snr_dx2(params, x, hop)
    eps = q_function(f)
    return eps, de_dg * g1, d2e_dg2 * g1 ** 2 + de_dg * g2


def _surrogate_sum(params, m1, m2, x):
    e1 = hop_error(params, x, m1, Hop.HOP1)
    e2 = hop_error(params, x, m2, Hop.HOP2)
    total = e1 + e2
    if np.any(total <= 0):
        raise ModelDomainError("surrogate error underflowed to 0; log undefined")
    return total


def g_value(params: ScenarioParams, m1, m2, x):
    return np.log(_surrogate_sum(params, m1, m2, x))


def g_prime(params: ScenarioParams, m1, m2, x):
    e1, d1, _ = _hop_terms_x(params, m1, x, Hop.HOP1)
    e2, d2, _ = _hop_terms_x(params, m2, x, Hop.HOP2)
    total = e1 + e2
    if np.any(total <= 0):
        raise ModelDomainError("surrogate error underflowed to 0; log undefined")
    return (d1 + d2) / total


def g_second(params: ScenarioParams, m1, m2, x):
    e1, d1, s1 = _hop_terms_x(params, m1, x, Hop.HOP1)
    e2, d2, s2 = _hop_terms_x(params, m2, x, Hop.HOP2)
    total = e1 + e2
    if np.any(total <= 0):
        raise ModelDomainError("surrogate error underflowed to 0; log undefined")
    return ((s1 + s2) * total - (d1 + d2) ** 2) / total ** 2


def approx_error_dx(params: ScenarioParams, m1, m2, x):
    """d eps~/dx; same sign as g'(x) but defined even when eps~ underflows."""
    _, d1, _ = _hop_terms_x(params, m1, x, Hop.HOP1)
    _, d2, _ = _hop_terms_x(params, m2, x, Hop.HOP2)
    return d1 + d2
