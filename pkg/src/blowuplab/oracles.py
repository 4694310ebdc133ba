"""Independent ground-truth generators for the spatially homogeneous limits.

Two problem shapes are covered:

* the space-free source equation u'' = |u|^p, whose conserved energy
  E = v^2/2 - V(u), V(u) = sign(u)|u|^(p+1)/(p+1), turns the blow-up time in
  the monotone-escape regime into the quadrature
  T* = integral over [u0, inf) of du / sqrt(2 E0 + 2 V(u));
* the per-mode linear equation y'' + b0 (1+t)^(-beta) k^2 y' + k^2 y = 0.

Trajectories come from classical fixed-step RK4 with a step of 1e-5 times the
span, refined locally where the solution moves fast, so they are accurate to
well below 1e-8 on the spans used in tests and stay honest through a blow-up.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

__all__ = [
    "OdeProblem",
    "OdeResult",
    "ode_energy",
    "ode_blowup_time",
    "ode_trajectory",
    "linear_mode_trajectory",
    "blowup_time_from_trajectory",
]


@dataclass(frozen=True)
class OdeProblem:
    u0: float
    v0: float
    p: float

    def __post_init__(self):
        if not self.p > 1.0:
            raise ValueError(f"p must exceed 1, got {self.p}")


@dataclass
class OdeResult:
    """Trajectory samples; truncated at the last finite time when the run
    diverged before the end of the requested grid."""

    t: np.ndarray
    u: np.ndarray
    v: np.ndarray
    diverged: bool

    @property
    def t_last(self) -> float:
        return float(self.t[-1])


def ode_energy(u: float, v: float, p: float) -> float:
    """Conserved energy of u'' = |u|^p (the potential is odd in u because the
    force |u|^p is even)."""
    potential = math.copysign(abs(u) ** (p + 1.0) / (p + 1.0), u)
    return 0.5 * v * v - potential


def ode_blowup_time(prob: OdeProblem, rtol: float = 1e-9) -> float:
    """Blow-up time of u'' = |u|^p by adaptive quadrature of the escape
    integral.

    Requires the monotone-escape regime u0 >= 0, v0 >= 0; the rest position
    (0, 0) returns inf.  Other sign patterns fall back to trajectory
    integration with threshold extrapolation.
    """
    u0, v0, p = prob.u0, prob.v0, prob.p
    if u0 == 0.0 and v0 == 0.0:
        return math.inf
    if u0 < 0.0 or v0 < 0.0:
        return blowup_time_from_trajectory(prob)

    e0 = ode_energy(u0, v0, p)

    def speed_sq(u):
        return 2.0 * e0 + 2.0 * u ** (p + 1.0) / (p + 1.0)

    # substitute u = u0 + s^2 near the lower endpoint; removes the
    # inverse-square-root singularity when v0 = 0
    def near(s):
        s = np.asarray(s)
        val = speed_sq(u0 + s * s)
        return 2.0 * s / np.sqrt(val)

    def far(u):
        return 1.0 / np.sqrt(speed_sq(np.asarray(u)))

    split = u0 + 1.0
    t_near, _ = quad(near, 0.0, 1.0, epsabs=0.0, epsrel=rtol / 4, limit=200)
    t_far, _ = quad(far, split, np.inf, epsabs=0.0, epsrel=rtol / 4, limit=200)
    return t_near + t_far


def _rk4_step(rhs, t, u, v, h):
    k1u, k1v = rhs(t, u, v)
    k2u, k2v = rhs(t + 0.5 * h, u + 0.5 * h * k1u, v + 0.5 * h * k1v)
    k3u, k3v = rhs(t + 0.5 * h, u + 0.5 * h * k2u, v + 0.5 * h * k2v)
    k4u, k4v = rhs(t + h, u + h * k3u, v + h * k3v)
    return (
        u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u),
        v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
    )


def _advance(rhs, t, u, v, target, h_base, max_rel=0.05):
    """March (u, v) from t to target, halving the step wherever one step
    would move the state by more than max_rel relatively."""
    while t < target - 1e-15 * max(1.0, target):
        h = min(h_base, target - t)
        while True:
            un, vn = _rk4_step(rhs, t, u, v, h)
            scale = max(abs(u), abs(v), 1.0)
            if not (math.isfinite(un) and math.isfinite(vn)):
                jump = math.inf
            else:
                jump = max(abs(un - u), abs(vn - v)) / scale
            if jump <= max_rel or h <= 1e-16 * max(1.0, target):
                break
            h *= 0.5
        t, u, v = t + h, un, vn
        yield t, u, v


def ode_trajectory(
    prob: OdeProblem, t_grid, divergence_threshold: float = 1e10
) -> OdeResult:
    """Integrate u'' = |u|^p on the given increasing time grid.

    Stops early once |u| passes the divergence threshold and reports the
    samples collected up to the last finite time.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or len(t_grid) < 2 or np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must be increasing with at least two entries")
    p = prob.p

    def rhs(t, u, v):
        return v, abs(u) ** p

    span = float(t_grid[-1] - t_grid[0])
    h_base = 1e-5 * span
    us = [prob.u0]
    vs = [prob.v0]
    t, u, v = float(t_grid[0]), prob.u0, prob.v0
    diverged = False
    for target in t_grid[1:]:
        for t, u, v in _advance(rhs, t, u, v, float(target), h_base):
            if abs(u) > divergence_threshold or not math.isfinite(u):
                diverged = True
                break
        if diverged:
            break
        us.append(u)
        vs.append(v)
    n = len(us)
    return OdeResult(t_grid[:n].copy(), np.array(us), np.array(vs), diverged)


def linear_mode_trajectory(k, beta, b0, u0, v0, t_grid) -> OdeResult:
    """Integrate y'' + b0 (1+t)^(-beta) k^2 y' + k^2 y = 0 on t_grid."""
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or len(t_grid) < 2 or np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must be increasing with at least two entries")
    if t_grid[0] < 0:
        raise ValueError("damping coefficient is defined for t >= 0 only")
    k2 = float(k) * float(k)

    def rhs(t, u, v):
        return v, -k2 * u - b0 * (1.0 + t) ** (-beta) * k2 * v

    span = float(t_grid[-1] - t_grid[0])
    h_base = 1e-5 * span
    us = [float(u0)]
    vs = [float(v0)]
    t, u, v = float(t_grid[0]), float(u0), float(v0)
    for target in t_grid[1:]:
        for t, u, v in _advance(rhs, t, u, v, float(target), h_base):
            pass
        us.append(u)
        vs.append(v)
    return OdeResult(t_grid.copy(), np.array(us), np.array(vs), diverged=False)


def blowup_time_from_trajectory(
    prob: OdeProblem,
    thresholds=(1e8, 1e9, 1e10),
    t_cap: float = 1e4,
) -> float:
    """Estimate the blow-up time from threshold-crossing times.

    Near blow-up w = u^(-(p-1)/2) decays linearly, so crossings are located
    by interpolating w and the finite-threshold bias C * M^(-(p-1)/2) is
    removed by extrapolating over the last two thresholds.
    """
    thresholds = sorted(float(m) for m in thresholds)
    if len(thresholds) < 2:
        raise ValueError("need at least two thresholds to extrapolate")
    p = prob.p
    alpha = 0.5 * (p - 1.0)

    def rhs(t, u, v):
        return v, abs(u) ** p

    def w_of(u):
        return u ** (-alpha)

    t, u, v = 0.0, prob.u0, prob.v0
    h_base = 1e-3
    crossings = {}
    pending = list(thresholds)
    stop_at = thresholds[-1] * 10.0
    while pending and t < t_cap:
        # shrink the step to the local growth timescale once escaping
        if u > 1.0:
            tau = min(u / (abs(v) + 1e-300), math.sqrt(u / (abs(u) ** p + 1e-300)))
            h = min(h_base, 0.02 * tau)
        else:
            h = h_base
        un, vn = _rk4_step(rhs, t, u, v, h)
        while math.isfinite(un) and un > 0 and u > 0 and un > 4.0 * u and h > 1e-16:
            h *= 0.5
            un, vn = _rk4_step(rhs, t, u, v, h)
        tn = t + h
        while pending and (un >= pending[0] or not math.isfinite(un)):
            m = pending[0]
            if math.isfinite(un) and 0 < u < un:
                wm, wp, wn_ = w_of(m), w_of(u), w_of(un)
                frac = (wp - wm) / (wp - wn_)
                crossings[m] = t + frac * h
                pending.pop(0)
            elif not math.isfinite(un):
                break
            else:
                crossings[m] = tn
                pending.pop(0)
        if not math.isfinite(un):
            break
        t, u, v = tn, un, vn
        if u > stop_at:
            break
    if pending:
        raise RuntimeError(
            f"no blow-up beyond {pending[0]:g} before t = {t_cap:g}; "
            "the trajectory does not escape on this horizon"
        )
    m1, m2 = thresholds[-2], thresholds[-1]
    t1, t2 = crossings[m1], crossings[m2]
    a1, a2 = m1**alpha, m2**alpha
    return (t2 * a2 - t1 * a1) / (a2 - a1)
