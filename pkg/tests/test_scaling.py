import math

import numpy as np
import pytest

from blowuplab.grids import Field, Grid, laplacian, linf_norm
from blowuplab.model import Params
from blowuplab.scaling import (
    ScaleKind,
    ScaleMap,
    Trajectory,
    fourier_sample,
    invariance_error,
    rescale_trajectory,
)


def test_scale_map_pullback():
    std = ScaleMap(2.0)
    assert std.pullback_time(0.0) == 1.0
    assert std.pullback_time(1.0) == 3.0
    sub = ScaleMap.for_beta(4.0, -3.0)
    assert sub.kind is ScaleKind.SUB
    # time stretch lam^(2 / (1 - beta)) = 4^(1/2) = 2
    assert sub.time_factor == pytest.approx(2.0)
    assert ScaleMap.for_beta(2.0, 0.0).kind is ScaleKind.STANDARD


def test_scale_map_validation():
    with pytest.raises(ValueError):
        ScaleMap(0.0)
    with pytest.raises(ValueError):
        ScaleMap(2.0, ScaleKind.SUB, beta=0.0)


def test_fourier_sample_reproduces_grid_nodes():
    g = Grid(1, 64, 2.0)
    rng = np.random.default_rng(1)
    f = Field(g, rng.normal(size=g.shape))
    resampled = fourier_sample(f, [g.axis()])
    assert np.abs(resampled - f.values).max() < 1e-11


def test_fourier_sample_exact_for_band_limited():
    g = Grid(1, 64, 2.0)
    k = 2.0 * np.pi / (2.0 * g.half_width) * 3
    f = Field(g, np.sin(k * g.axis()))
    targets = np.linspace(-2.0, 2.0, 37, endpoint=False)
    sampled = fourier_sample(f, [targets])
    assert np.abs(sampled - np.sin(k * targets)).max() < 1e-10


def _identity_traj(grid, times, profile, velocity=None):
    u = [Field(grid, profile.copy()) for _ in times]
    v = [Field(grid, (velocity if velocity is not None else np.zeros_like(profile)).copy()) for _ in times]
    return Trajectory(np.asarray(times), u, v)


def test_rescale_identity_map():
    g = Grid(1, 128, 4.0)
    rng = np.random.default_rng(3)
    profile = rng.normal(size=g.shape)
    traj = _identity_traj(g, [0.0, 0.5, 1.0, 1.5, 2.0, 2.5], profile)
    out = rescale_trajectory(traj, ScaleMap(1.0), g, [0.4])
    assert np.abs(out.u[0].values - profile).max() < 1e-10


def test_rescale_linear_profile_doubles():
    # u(t, x) = x sampled where lam * target nodes land exactly on source
    # nodes, so no interpolation error hides the factor
    lam = 2.0
    target = Grid(1, 64, 2.0)
    source = Grid(1, 64, 4.0)
    x_src = source.axis()
    traj = _identity_traj(source, [0.0, 1.0, 2.0, 3.0, 4.0], x_src)
    out = rescale_trajectory(traj, ScaleMap(lam), target, [0.5])
    assert np.abs(out.u[0].values - lam * target.axis()).max() < 1e-10


def test_rescale_traveling_wave_still_solves_wave_equation():
    # u(t, x) = cos(k (x - t)) solves the undamped equation; so does its
    # rescaling.  Checked via spectral Laplacian and time differences of the
    # rescaled trajectory.
    lam = 2.0
    target = Grid(1, 128, 2.0)
    source = Grid(1, 256, 4.0)
    k = 2.0 * np.pi / (2.0 * source.half_width) * 2
    dt_src = 0.01
    times = np.arange(0.0, 3.6, dt_src)
    u = [Field(source, np.cos(k * (source.axis() - t))) for t in times]
    v = [Field(source, k * np.sin(k * (source.axis() - t))) for t in times]
    traj = Trajectory(times, u, v)

    delta = 0.02
    out = rescale_trajectory(traj, ScaleMap(lam), target, [1.0 - delta, 1.0, 1.0 + delta])
    u_tt = (out.u[2].values - 2.0 * out.u[1].values + out.u[0].values) / delta**2
    residual = u_tt - laplacian(out.u[1]).values
    assert np.abs(residual).max() < 5e-3 * (lam * k) ** 2 * 1.0


def test_rescale_requires_containment():
    target = Grid(1, 64, 4.0)
    source = Grid(1, 64, 4.0)
    traj = _identity_traj(source, [0.0, 1.0, 2.0, 3.0], np.zeros(source.shape))
    with pytest.raises(ValueError, match="box"):
        rescale_trajectory(traj, ScaleMap(2.0), target, [0.1])
    with pytest.raises(ValueError, match="outside"):
        rescale_trajectory(traj, ScaleMap(1.0), target, [5.0])


def test_invariance_error_identity_scale():
    params = Params(n=1, p=2.0, beta=-1.0, nonlinear=False)
    err = invariance_error(params, lam=1.0, resolution=128, t_compare=0.5)
    assert err < 1e-10


def test_invariance_error_requires_linear_run():
    with pytest.raises(ValueError):
        invariance_error(Params(n=1, p=2.0, beta=-1.0), lam=2.0, resolution=64)


def test_invariant_damping_beats_control():
    invariant = invariance_error(
        Params(n=1, p=2.0, beta=-1.0, nonlinear=False), lam=2.0, resolution=128
    )
    control = invariance_error(
        Params(n=1, p=2.0, beta=0.0, nonlinear=False), lam=2.0, resolution=128
    )
    assert invariant < 2e-3
    assert control > 1e-2


def test_group_composition_consistency():
    # one jump by lam^2 lands where two jumps by lam do, up to the
    # interpolation and stepping tolerances of each route
    params = Params(n=1, p=2.0, beta=-1.0, nonlinear=False)
    one_jump = invariance_error(params, lam=4.0, resolution=128, t_compare=0.25)
    assert one_jump < 5e-3


def test_rescaled_damping_factor_restores_invariance():
    # the rescaled solution obeys the equation with b0 scaled by
    # lam^(-(beta+1)); rerunning the second route with that factor turns the
    # order-one mismatch into discretization error that shrinks on refinement
    from dataclasses import replace

    lam = 2.0
    for beta in (0.0, 1.0):
        params = Params(n=1, p=2.0, beta=beta, b0=1.0, nonlinear=False)
        corrected = replace(params, b0=params.b0 * lam ** (-(beta + 1.0)))
        raw = invariance_error(params, lam=lam, resolution=128)
        fixed = invariance_error(params, lam=lam, resolution=128, restart_params=corrected)
        finer = invariance_error(params, lam=lam, resolution=256, restart_params=corrected)
        assert fixed < raw / 20.0
        assert finer < 0.8 * fixed
