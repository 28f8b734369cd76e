import math

import numpy as np
import pytest

from wavefront_scope.distributions import Grid, SampledSignal, parse_distribution
from wavefront_scope.engine import (LambdaSchedule, PhaseRegion, check_sampled_admissible, mirrored_volume,
                                    read_raw,
                                    scaled_volume, wpt_quadrature, wpt_sampled)
from wavefront_scope.errors import NyquistExceeded, ValidationError, WindowUnresolved
from wavefront_scope.windows import parse_window, scale


def _delta_closed_form(w, x0, xs, xis):
    return np.conj(w.eval(x0 - xs))[:, None] * np.exp(-1j * x0 * xis)[None, :]


@pytest.mark.parametrize("name", ["gaussian", "hermite1", "annulus(1,2)"])
def test_delta_quadrature_closed_form(name):
    x0 = 0.3
    d = parse_distribution(f"delta@{x0}")
    for lam in (4.0, 64.0, 1024.0):
        w = scale(parse_window(name, 1), lam)
        xs = np.linspace(0.1, 0.5, 5)
        xis = lam * np.linspace(0.8, 1.2, 4)
        got = wpt_quadrature(d, w, xs, xis)
        assert np.max(np.abs(got - _delta_closed_form(w, x0, xs, xis))) < 1e-9


def test_delta_magnitude_at_the_point():
    d = parse_distribution("delta@0.0")
    w = scale(parse_window("gaussian", 1), 4.0)
    got = wpt_quadrature(d, w, [0.0], [-17.0, 3.0, 250.0])
    assert np.allclose(np.abs(got), math.sqrt(2.0), atol=1e-12)


def test_sampled_matches_quadrature_for_smooth_bump():
    d = parse_distribution("smooth@0.0")
    w = scale(parse_window("gaussian", 1), 16.0)
    sig = d.sample(Grid(math.pi, 14, 1))
    a = wpt_sampled(sig, w, [0.0], [8.0])[0, 0]
    b = wpt_quadrature(d, w, [0.0], [8.0])[0, 0]
    assert abs(a - b) <= 1e-6 * abs(b)


def test_sampled_fft_and_direct_agree():
    d = parse_distribution("heaviside@0.1")
    grid = Grid(math.pi, 14, 1)
    sig = d.sample(grid)
    w = scale(parse_window("hermite1", 1), 64.0)
    xs = np.linspace(-0.2, 0.2, 5)
    xis = 51.3 + grid.dxi * np.arange(9)
    a = wpt_sampled(sig, w, xs, xis, method="direct")
    b = wpt_sampled(sig, w, xs, xis, method="fft")
    assert np.max(np.abs(a - b)) < 1e-10 * max(1.0, np.max(np.abs(a)))


def test_zero_signal_gives_zero():
    grid = Grid(math.pi, 12, 1)
    sig = SampledSignal(grid, np.zeros(grid.size, dtype=complex))
    w = scale(parse_window("gaussian", 1), 16.0)
    assert np.all(wpt_sampled(sig, w, [0.0, 0.1], [10.0, 20.0]) == 0)


def test_conjugate_symmetry_for_real_input():
    d = parse_distribution("heaviside@0.0")
    w = scale(parse_window("gaussian", 1), 32.0)
    xs = np.array([-0.1, 0.0, 0.15])
    xis = np.array([5.0, 20.0, 40.0])
    a = wpt_quadrature(d, w, xs, xis)
    b = wpt_quadrature(d, w, xs, -xis)
    assert np.allclose(a, np.conj(b), atol=1e-10)


def test_delta_decay_statistic_matches_lambda_quarter():
    d = parse_distribution("delta@0.0")
    sched = LambdaSchedule(4.0, 2.0, 8)
    region = PhaseRegion.around(0.0, 1.0, 1, lam_max=sched.lam_max)
    vol = scaled_volume(d, parse_window("gaussian", 1), region, sched)
    D = np.abs(vol.values).reshape(sched.count, -1).max(axis=1)
    assert np.allclose(D, sched.values ** 0.25, rtol=1e-9)


def test_smooth_bump_is_tiny_at_large_scale():
    d = parse_distribution("smooth@0.0")
    sched = LambdaSchedule(1024.0, 2.0, 3)
    region = PhaseRegion.around(0.0, 1.0, 1, lam_max=sched.lam_max)
    for name in ("gaussian", "hermite1", "annulus(1,2)"):
        vol = scaled_volume(d, parse_window(name, 1), region, sched)
        assert np.max(np.abs(vol.values[-1])) <= 1e-8


def test_raw_export_round_trip(tmp_path):
    d = parse_distribution("heaviside@0.0")
    sched = LambdaSchedule(4.0, 2.0, 3)
    region = PhaseRegion(0.0, 0.1, 1.0, 0.1, 3, 3)
    vol = scaled_volume(d, parse_window("gaussian", 1), region, sched)
    p = tmp_path / "v.bin"
    vol.export_raw(p)
    vals, meta = read_raw(p)
    assert np.array_equal(vals, vol.values)
    assert meta["order"] == ["lambda", "x", "xi"]


def test_schedule_and_region_preconditions():
    with pytest.raises(ValidationError):
        LambdaSchedule(4.0, 2.0, 0)
    with pytest.raises(ValidationError):
        LambdaSchedule(0.5, 2.0, 8)
    with pytest.raises(ValidationError):
        PhaseRegion(0.0, 0.2, 0.1, 0.2)
    with pytest.raises(ValidationError):
        PhaseRegion(0.0, 0.2, 1.0, 0.2, n_x=0)


def test_sampled_admissibility():
    grid = Grid(math.pi, 10, 1)
    with pytest.raises(NyquistExceeded):
        check_sampled_admissible(grid, 4096.0, 1.2)
    with pytest.raises(WindowUnresolved):
        check_sampled_admissible(Grid(math.pi, 6, 1), 64.0, 0.1)
    check_sampled_admissible(Grid(math.pi, 18, 1), 4096.0, 1.2)


def test_translation_covariance_2d():
    grid = Grid(math.pi, 8, 2)
    sig = parse_distribution("smooth@(0.1,-0.2)", dim=2).sample(grid)
    w = scale(parse_window("gaussian", 2), 16.0)
    k = (5, -3)
    shifted = SampledSignal(grid, np.roll(sig.values, k, axis=(0, 1)))
    a = np.array(k) * grid.dx
    xs = np.array([[0.0, 0.0], [0.1, 0.2]])
    xis = np.array([[3.0, 4.0], [-6.0, 2.0]])
    lhs = wpt_sampled(shifted, w, xs, xis, method="direct")
    rhs = np.exp(-1j * xis @ a)[None, :] * wpt_sampled(sig, w, xs - a, xis, method="direct")
    assert np.max(np.abs(lhs - rhs)) < 1e-10


@pytest.mark.parametrize("spec,dim,x0,d", [("heaviside@0.1", 1, 0.0, [1.0]),
                                           ("halfplane,nu=(0.6,0.8),c=0.0", 2, [0.0, 0.0], [0.6, 0.8])])
def test_mirrored_volume_matches_direct(spec, dim, x0, d):
    dist = parse_distribution(spec, dim=dim)
    sched = LambdaSchedule(4.0, 2.0, 3)
    region = PhaseRegion.around(x0, d, dim, n_x=3, n_xi=3)
    vol = scaled_volume(dist, parse_window("hermite1", dim), region, sched)
    mir = mirrored_volume(vol)
    direct = scaled_volume(dist, parse_window("hermite1", dim), mir.region, sched)
    assert np.max(np.abs(direct.values - mir.values)) < 1e-12
