"""Compactly supported space-time windows and the weak-form bookkeeping.

The window is psi(x, t) = psi1(x)^ell * psi2(t)^eta with
psi1(x) = cutoff(|x| / T^d) and psi2(t) = cutoff(t / T), where `cutoff` is a
smooth non-increasing profile equal to 1 on [0, 1/2] and 0 on [1, inf).  Every
weak-form inequality term is an integral of powers of the window and its
derivatives, and each scales as a pure power of the horizon T; verifying the
fitted slopes against the predicted exponents is how the blow-up mechanism is
checked at desk scale: below the critical exponent every window term decays
while the velocity-mean data term does not.

The transition of the cutoff uses the standard smooth step built from
exp(-1/s), so the window really is infinitely differentiable and no corner
spikes pollute the slope fits.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .exponents import conjugate_exponent
from .grids import Field, Grid, integrate, laplacian
from .model import Params, bump_data, damping_coeff

__all__ = [
    "CutoffSpec",
    "TermBundle",
    "TERM_NAMES",
    "SlopeFit",
    "cutoff",
    "cutoff_d1",
    "cutoff_d2",
    "default_cutoff_spec",
    "psi_parts",
    "weak_residual",
    "weak_identity_terms",
    "term_bundle",
    "slope_fit",
    "predicted_exponents",
    "measure_term_slopes",
    "manufactured_crosscheck",
]


# ---------------------------------------------------------------------------
# cutoff profile


def _pieces(r):
    arr = np.asarray(r, dtype=float)
    if np.any(arr < 0):
        raise ValueError("cutoff is defined for r >= 0")
    mid = (arr > 0.5) & (arr < 1.0)
    s = np.where(mid, 2.0 * (1.0 - arr), 0.5)  # placeholder outside the zone
    fs = np.exp(-1.0 / s)
    f1 = np.exp(-1.0 / (1.0 - s + 1e-300))
    # guard: at s exactly 1 the second factor is exp(-inf) = 0
    f1 = np.where(s >= 1.0, 0.0, f1)
    return arr, mid, s, fs, f1


def cutoff(r):
    """Smooth non-increasing profile: 1 on [0, 1/2], 0 on [1, inf)."""
    arr, mid, s, fs, f1 = _pieces(r)
    out = np.where(arr <= 0.5, 1.0, 0.0)
    h = fs / (fs + f1)
    out = np.where(mid, h, out)
    return float(out) if np.isscalar(r) else out


def cutoff_d1(r):
    """First derivative of `cutoff`; supported on (1/2, 1), nonpositive."""
    arr, mid, s, fs, f1 = _pieces(r)
    g = fs + f1
    num = fs * f1 * (s**-2 + (1.0 - s) ** -2)
    hp = num / g**2
    out = np.where(mid, -2.0 * hp, 0.0)
    return float(out) if np.isscalar(r) else out


def cutoff_d2(r):
    """Second derivative of `cutoff`; supported on (1/2, 1)."""
    arr, mid, s, fs, f1 = _pieces(r)
    g = fs + f1
    inv2 = s**-2 + (1.0 - s) ** -2
    inv4 = s**-4 + (1.0 - s) ** -4
    num = fs * f1 * inv2
    hp = num / g**2
    gp = fs * s**-2 - f1 * (1.0 - s) ** -2
    nump = fs * f1 * (1.0 - 2.0 * s) * inv4
    hpp = nump / g**2 - 2.0 * num * gp / g**3
    out = np.where(mid, 4.0 * hpp, 0.0)
    return float(out) if np.isscalar(r) else out


# ---------------------------------------------------------------------------
# window specification


@dataclass(frozen=True)
class CutoffSpec:
    """Parameters of the space-time window.

    ell, eta   integer powers on the space and time cutoffs, at least 3 and
               large enough that ell - 2p' and eta - 2p' stay positive for
               the exponent p in play (see check_exponents)
    d          space scale exponent: the spatial support has radius T^d
    T          horizon, > 1
    """

    ell: int
    eta: int
    d: float
    T: float

    def __post_init__(self):
        if self.ell < 3 or self.eta < 3:
            raise ValueError(f"ell and eta must be >= 3, got {self.ell}, {self.eta}")
        if not self.d > 0:
            raise ValueError(f"d must be positive, got {self.d}")
        if not self.T > 1:
            raise ValueError(f"T must exceed 1, got {self.T}")

    def check_exponents(self, p: float) -> None:
        pp = conjugate_exponent(p)
        if self.ell <= 2 * pp or self.eta <= 2 * pp:
            raise ValueError(
                f"window powers too small for p = {p}: need ell, eta > {2 * pp}, "
                f"got ell = {self.ell}, eta = {self.eta}"
            )

    @property
    def space_radius(self) -> float:
        return self.T**self.d


def default_cutoff_spec(p: float, d: float, T: float) -> CutoffSpec:
    k = math.ceil(2.0 * conjugate_exponent(p)) + 2
    return CutoffSpec(ell=k, eta=k, d=d, T=T)


def _time_window(spec: CutoffSpec, t: float) -> tuple:
    """psi2^eta and its first two time derivatives at scalar time t."""
    T, eta = spec.T, spec.eta
    tau = t / T
    p2 = cutoff(tau)
    d1 = cutoff_d1(tau) / T
    d2 = cutoff_d2(tau) / T**2
    val = p2**eta
    vel = eta * p2 ** (eta - 1) * d1
    acc = eta * p2 ** (eta - 1) * d2 + eta * (eta - 1) * p2 ** (eta - 2) * d1 * d1
    return val, vel, acc


def _space_window(spec: CutoffSpec, n: int, r):
    """psi1^ell and Lap(psi1^ell) at radii r, via the radial Laplacian
    cutoff'' + (n-1) cutoff'/rho; the origin limit is 0 because the profile
    is flat there."""
    rr = np.asarray(r, dtype=float)
    td = spec.space_radius
    rho = rr / td
    p1 = cutoff(rho)
    d1 = cutoff_d1(rho)
    d2 = cutoff_d2(rho)
    grad_sq = (d1 / td) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(rho > 0, d1 / np.where(rho > 0, rho, 1.0), 0.0)
    lap1 = (d2 + (n - 1) * ratio) / td**2
    ell = spec.ell
    val = p1**ell
    lap = ell * p1 ** (ell - 1) * lap1 + ell * (ell - 1) * p1 ** (ell - 2) * grad_sq
    return val, lap, p1, d1, lap1, grad_sq


def psi_parts(spec: CutoffSpec, params: Params, t: float, r) -> dict:
    """Window and derivatives at time t and radii r.

    Returns psi, psi_t, psi_tt, lap_psi, lap_psi_t as arrays shaped like r.
    """
    val_t, vel_t, acc_t = _time_window(spec, t)
    val_x, lap_x = _space_window(spec, params.n, r)[:2]
    return {
        "psi": val_x * val_t,
        "psi_t": val_x * vel_t,
        "psi_tt": val_x * acc_t,
        "lap_psi": lap_x * val_t,
        "lap_psi_t": lap_x * vel_t,
    }


# ---------------------------------------------------------------------------
# weak-form identity


def weak_identity_terms(u_traj, u0: Field, u1: Field, spec: CutoffSpec, params: Params, T: float) -> dict:
    """All named integrals of the weak identity for a trajectory sampled on a
    uniform time grid covering [0, T].

    The identity moves every derivative onto the window, so only u itself is
    integrated: for a true solution the combination in 'residual' vanishes,
    and for any smooth trajectory it equals minus the windowed integral of
    the strong-form defect.
    """
    if abs(T - spec.T) > 1e-12 * max(1.0, T):
        raise ValueError(f"horizon mismatch: T = {T} but window has T = {spec.T}")
    if len(u_traj) < 2:
        raise ValueError("need at least two time samples")
    grid = u0.grid
    for f in (u1, *u_traj):
        if f.grid != grid:
            raise ValueError("all fields must share one grid")
    if grid.dim != params.n:
        raise ValueError(f"grid dim {grid.dim} does not match params.n = {params.n}")
    if spec.space_radius > grid.half_width:
        raise ValueError(
            f"window radius {spec.space_radius} exceeds box half-width {grid.half_width}"
        )
    spec.check_exponents(params.p)

    times = np.linspace(0.0, T, len(u_traj))
    meas = grid.spacing**grid.dim
    val_x, lap_x = _space_window(spec, params.n, grid.radii())[:2]

    p = params.p
    b0 = params.b0
    beta = params.beta
    n_t = len(times)
    src = np.zeros(n_t)
    m_win = np.zeros(n_t)
    m_lap = np.zeros(n_t)
    for j, f in enumerate(u_traj):
        v = f.values
        if params.nonlinear:
            src[j] = (np.abs(v) ** p * val_x).sum() * meas
        m_win[j] = (v * val_x).sum() * meas
        m_lap[j] = (v * lap_x).sum() * meas

    w_val = np.array([_time_window(spec, t)[0] for t in times])
    w_vel = np.array([_time_window(spec, t)[1] for t in times])
    w_acc = np.array([_time_window(spec, t)[2] for t in times])

    terms = {
        "source": float(np.trapezoid(src * w_val, times)),
        "data_u1": (u1.values * val_x).sum() * meas,
        "data_u0_lap": b0 * (u0.values * lap_x).sum() * meas,
        "data_u0_psit": (u0.values * val_x).sum() * meas * _time_window(spec, 0.0)[1],
        "int_psitt": float(np.trapezoid(m_win * w_acc, times)),
        "int_damping": float(
            np.trapezoid(b0 * (1.0 + times) ** (-beta) * m_lap * w_vel, times)
        ),
        "int_lap": float(np.trapezoid(m_lap * w_val, times)),
        "int_beta": float(
            np.trapezoid(b0 * beta * (1.0 + times) ** (-beta - 1.0) * m_lap * w_val, times)
        ),
    }
    lhs = terms["source"] + terms["data_u1"] - terms["data_u0_lap"] - terms["data_u0_psit"]
    rhs = terms["int_psitt"] + terms["int_damping"] - terms["int_lap"] - terms["int_beta"]
    terms["residual"] = lhs - rhs
    return terms


def weak_residual(u_traj, u0: Field, u1: Field, spec: CutoffSpec, params: Params, T: float) -> float:
    """Left minus right side of the weak identity; 0 for an exact solution."""
    return weak_identity_terms(u_traj, u0, u1, spec, params, T)["residual"]


# ---------------------------------------------------------------------------
# term bundle and slopes

TERM_NAMES = (
    "B_tt",
    "B_t2",
    "B_dx1",
    "B_dx2",
    "B_mix1",
    "B_mix2",
    "B_beta1",
    "B_beta2",
    "D_data",
)

_SURFACE = {1: 2.0, 2: 2.0 * math.pi, 3: 4.0 * math.pi}


@dataclass(frozen=True)
class TermBundle:
    """The eight window integrals bounding the source integral, plus the
    displacement data factor.  All entries are nonnegative because every
    integrand is an absolute power."""

    B_tt: float
    B_t2: float
    B_dx1: float
    B_dx2: float
    B_mix1: float
    B_mix2: float
    B_beta1: float
    B_beta2: float
    D_data: float

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in TERM_NAMES}


def _midpoint(fn, a: float, b: float, cells: int) -> float:
    x = a + (np.arange(cells) + 0.5) * (b - a) / cells
    return float((b - a) / cells * fn(x).sum())


def _refine_midpoint(fn, a: float, b: float, start: int = 256, rtol: float = 1e-3) -> float:
    prev = _midpoint(fn, a, b, start)
    cells = 2 * start
    while cells <= (1 << 22):
        cur = _midpoint(fn, a, b, cells)
        if abs(cur - prev) <= rtol * max(abs(cur), 1e-300):
            return cur
        prev = cur
        cells *= 2
    return prev


def term_bundle(spec: CutoffSpec, params: Params, T: float | None = None) -> TermBundle:
    """Evaluate the window integrals at horizon T by tensor-product midpoint
    quadrature over the exact supports.

    Time-derivative factors live on (T/2, T) and space-derivative factors on
    the shell T^d/2 <= |x| <= T^d.  The damping-decay terms are integrated
    with their time weight rather than its horizon bound, so the fitted
    slopes measure whether the bound is attained in order; in the regime
    where that integral grows the weight's large-time principal part is used
    (see the inline note), which keeps finite-horizon slopes comparable to
    the asymptotic exponents.
    """
    if T is not None:
        spec = replace(spec, T=float(T))
    spec.check_exponents(params.p)
    p = params.p
    pp = conjugate_exponent(p)
    eta, ell = spec.eta, spec.ell
    n, beta = params.n, params.beta
    T = spec.T
    td = spec.space_radius
    sigma = _SURFACE[n]

    def t_tt(t):
        return cutoff(t / T) ** (eta - pp) * np.abs(cutoff_d2(t / T) / T**2) ** pp

    def t_t2(t):
        return cutoff(t / T) ** (eta - 2 * pp) * np.abs(cutoff_d1(t / T) / T) ** (2 * pp)

    def t_eta(t):
        return cutoff(t / T) ** eta

    def t_mix(t):
        return cutoff(t / T) ** (eta - pp) * np.abs(cutoff_d1(t / T) / T) ** pp

    decay = (beta + 1.0) * pp

    def t_betaw(t):
        # When the weighted time integral grows (decay < 1) the +1 shift in
        # (1+t)^(-decay) pollutes finite-horizon slopes by a factor
        # ((1+T)/T)^(1-decay), so the growing case uses the large-time
        # principal part t^(-decay); the two weights agree at beta = -1 and
        # asymptotically everywhere.  The bounded case keeps the exact weight.
        if decay < 1.0:
            with np.errstate(divide="ignore"):
                w = np.where(t > 0, t, 1.0) ** (-decay)
            w = np.where(t > 0, w, 0.0 if decay < 0 else 1.0)
        else:
            w = (1.0 + t) ** (-decay)
        return w * cutoff(t / T) ** eta

    def _shell(r):
        _, _, p1, _, lap1, grad_sq = _space_window(spec, n, r)
        return p1, lap1, grad_sq

    def s_lap(r):
        p1, lap1, grad_sq = _shell(r)
        return p1 ** (ell - pp) * np.abs(lap1) ** pp * sigma * r ** (n - 1)

    def s_grad(r):
        p1, _, grad_sq = _shell(r)
        return p1 ** (ell - 2 * pp) * grad_sq**pp * sigma * r ** (n - 1)

    def s_ell(r):
        return cutoff(r / td) ** ell * sigma * r ** (n - 1)

    i_tt = _refine_midpoint(t_tt, T / 2, T)
    i_t2 = _refine_midpoint(t_t2, T / 2, T)
    i_eta = _refine_midpoint(t_eta, 0.0, T)
    i_mix = _refine_midpoint(t_mix, T / 2, T)
    i_betaw = _refine_midpoint(t_betaw, 0.0, T)
    s_ell_i = _refine_midpoint(s_ell, 0.0, td)
    s_lap_i = _refine_midpoint(s_lap, td / 2, td)
    s_grad_i = _refine_midpoint(s_grad, td / 2, td)

    # data factor: sup-norm of the displacement-data bracket; the time piece
    # |d/dt cutoff(t/T)| at t = 0 vanishes identically for this profile
    rs = td / 2 + (np.arange(1 << 14) + 0.5) * (td / 2) / (1 << 14)
    p1s, lap1s, gss = _shell(rs)
    d_data = float(
        (p1s ** (ell - 1) * np.abs(lap1s)).max()
        + (p1s ** (ell - 2) * gss).max()
        + abs(cutoff_d1(0.0) / T)
    )

    return TermBundle(
        B_tt=i_tt * s_ell_i,
        B_t2=i_t2 * s_ell_i,
        B_dx1=i_eta * s_lap_i,
        B_dx2=i_eta * s_grad_i,
        B_mix1=T ** (-beta * pp) * i_mix * s_lap_i,
        B_mix2=T ** (-beta * pp) * i_mix * s_grad_i,
        B_beta1=i_betaw * s_lap_i,
        B_beta2=i_betaw * s_grad_i,
        D_data=d_data,
    )


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    r2: float


def slope_fit(points) -> SlopeFit:
    """Least squares on (log T, log value) for positive values, >= 4 points."""
    pts = [(float(a), float(b)) for a, b in points]
    if len(pts) < 4:
        raise ValueError(f"need at least 4 points for a slope fit, got {len(pts)}")
    if any(v <= 0 for _, v in pts):
        raise ValueError("slope fit requires positive values")
    x = np.log([a for a, _ in pts])
    y = np.log([v for _, v in pts])
    slope, intercept = np.polyfit(x, y, 1)
    fitted = slope * x + intercept
    ss_res = float(((y - fitted) ** 2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot == 0 else max(0.0, 1.0 - ss_res / ss_tot)
    return SlopeFit(slope=float(slope), r2=min(1.0, r2))


def predicted_exponents(params: Params, d: float) -> dict:
    """Horizon exponent of each bundle term.

    The damping-decay terms add the time-integral contribution
    max(0, 1 - (beta+1) p') to the space-shell exponent; at equality the
    integral grows like log T, which the pure power 0 deliberately caps.
    The data factor is a sup-norm bound, hence -2d with no volume factor.
    """
    p, n, beta = params.p, params.n, params.beta
    if not d > 0:
        raise ValueError(f"d must be positive, got {d}")
    pp = conjugate_exponent(p)
    e_time = -2.0 * pp + 1.0 + n * d
    e_space = -2.0 * d * pp + 1.0 + n * d
    e_mix = -beta * pp - pp - 2.0 * d * pp + 1.0 + n * d
    e_beta = -2.0 * d * pp + n * d + max(0.0, 1.0 - (beta + 1.0) * pp)
    e_data = -2.0 * d
    return {
        "B_tt": e_time,
        "B_t2": e_time,
        "B_dx1": e_space,
        "B_dx2": e_space,
        "B_mix1": e_mix,
        "B_mix2": e_mix,
        "B_beta1": e_beta,
        "B_beta2": e_beta,
        "D_data": e_data,
    }


def measure_term_slopes(params: Params, d: float, horizons, ell=None, eta=None) -> dict:
    """Bundle values over the given horizons plus fitted and predicted
    slopes, keyed by term name."""
    horizons = [float(T) for T in horizons]
    if ell is None or eta is None:
        base = default_cutoff_spec(params.p, d, horizons[0])
        ell = ell or base.ell
        eta = eta or base.eta
    bundles = []
    for T in horizons:
        spec = CutoffSpec(ell=ell, eta=eta, d=d, T=T)
        bundles.append(term_bundle(spec, params).as_dict())
    predicted = predicted_exponents(params, d)
    out = {}
    for name in TERM_NAMES:
        values = [b[name] for b in bundles]
        fit = slope_fit(zip(horizons, values))
        out[name] = {
            "horizons": horizons,
            "values": values,
            "slope": fit.slope,
            "r2": fit.r2,
            "predicted": predicted[name],
            "abs_error": abs(fit.slope - predicted[name]),
        }
    return out


# ---------------------------------------------------------------------------
# manufactured cross-check


def manufactured_crosscheck(
    grid: Grid,
    params: Params,
    spec: CutoffSpec,
    nt: int,
    amplitude: float = 0.5,
    radius: float = 1.0,
) -> dict:
    """Compare the weak-form residual of the manufactured non-solution
    u(t, x) = cos(pi t / T) * bump(x) against the directly quadratured
    windowed strong-form defect.

    The two routes share only the basic quadrature rules: the weak side
    never differentiates u, the strong side uses the analytic time
    derivatives and the spectral Laplacian of the bump.
    """
    T = spec.T
    bump = bump_data(grid, amplitude, radius=radius)
    lap_bump = laplacian(bump)
    times = np.linspace(0.0, T, nt + 1)
    cos_t = np.cos(np.pi * times / T)
    traj = [Field(grid, c * bump.values) for c in cos_t]
    u0 = traj[0]
    u1 = Field(grid, np.zeros(grid.shape))

    weak = weak_residual(traj, u0, u1, spec, params, T)

    meas = grid.spacing**grid.dim
    val_x = _space_window(spec, params.n, grid.radii())[0]
    omega = np.pi / T
    vals = np.zeros(len(times))
    for j, t in enumerate(times):
        c = math.cos(omega * t)
        s = math.sin(omega * t)
        strong = (
            -(omega**2) * c * bump.values
            - c * lap_bump.values
            + damping_coeff(t, params) * omega * s * lap_bump.values
        )
        if params.nonlinear:
            strong = strong - np.abs(c * bump.values) ** params.p
        w_val = _time_window(spec, t)[0]
        vals[j] = (strong * val_x).sum() * meas * w_val
    strong_integral = -float(np.trapezoid(vals, times))
    rel = abs(weak - strong_integral) / max(abs(weak), abs(strong_integral), 1e-300)
    return {"weak": weak, "strong": strong_integral, "rel_diff": rel}
