import math

import numpy as np
import pytest
from scipy import integrate

from wavefront_scope.distributions import CATALOG, Grid, ground_truth, parse_distribution
from wavefront_scope.errors import ValidationError


def test_delta_sample_is_unit_mass_spike():
    grid = Grid(math.pi, 10, 1)
    v = parse_distribution("delta@0.0").sample(grid).values
    k = grid.nearest_index(0.0)[0]
    assert v[k].real == pytest.approx(2 ** 10 / (2 * math.pi))
    assert v[k].real == pytest.approx(162.97, abs=5e-3)
    assert np.count_nonzero(v) == 1
    assert np.sum(v).real * grid.dx == pytest.approx(1.0)


def test_heaviside_sample():
    grid = Grid(math.pi, 12, 1)
    d = parse_distribution("heaviside@0.0")
    v = d.sample(grid).values.real
    x = grid.axis
    assert np.all(v[x < 0] == 0)
    assert np.allclose(v[x > 0], d.cutoff(x[x > 0]))


def test_smooth_bump_is_band_limited_on_the_grid():
    grid = Grid(math.pi, 12, 1)
    v = parse_distribution("smooth@0.0").sample(grid).values
    c = np.abs(np.fft.fftshift(np.fft.fft(v))) / np.abs(v).sum()
    edge = np.r_[c[:100], c[-100:]]
    assert edge.max() < 1e-12


def test_plancherel_on_sampled_signal():
    grid = Grid(math.pi, 12, 1)
    for spec in ("smooth@0.3", "heaviside@-0.2", "powersing@0.0,a=0.25"):
        v = parse_distribution(spec).sample(grid).values
        lhs = np.sum(np.abs(v) ** 2) * grid.dx
        F = np.fft.fft(v) * grid.dx
        rhs = np.sum(np.abs(F) ** 2) * grid.dxi / (2 * math.pi)
        assert lhs == pytest.approx(rhs, rel=1e-12)


def test_delta_fourier():
    d0 = parse_distribution("delta@0.0")
    assert np.allclose(d0.fourier_analytic(np.array([-50.0, 0.0, 3.3, 1e4])), 1.0)
    assert d0.fourier_analytic(math.pi) == pytest.approx(1.0)
    d1 = parse_distribution("delta@1.0")
    assert d1.fourier_analytic(math.pi) == pytest.approx(-1.0)


def _even_ft_by_quad(f, eta, b):
    # 2 int_0^b f(x) cos(x eta) dx, splitting the oscillations into many pieces
    pts = np.linspace(0.0, b, int(b * eta / math.pi) + 2)
    total = 0.0
    for a0, a1 in zip(pts[:-1], pts[1:]):
        val, _ = integrate.quad(lambda x: f(x) * math.cos(x * eta), a0, a1, limit=200,
                                epsabs=1e-13, epsrel=1e-12)
        total += val
    return 2.0 * total


def test_power_singularity_fourier_against_quadrature():
    d = parse_distribution("powersing@0.0,a=0.5")
    f = lambda x: x ** -0.5 * float(d.cutoff(x))
    b = 2.4
    for eta in (256.0, 512.0):
        ref = _even_ft_by_quad(f, eta, b)
        assert abs(d.fourier_analytic(eta) - ref) < 1e-7 * max(1.0, abs(ref))
    r = abs(d.fourier_analytic(512.0)) / abs(d.fourier_analytic(256.0))
    assert r == pytest.approx(2 ** -0.5, rel=0.05)


def test_heaviside_fourier_against_sampled_fft():
    grid = Grid(math.pi, 16, 1)
    d = parse_distribution("heaviside@0.3")
    v = d.sample(grid).values
    k = np.arange(1, 40)
    eta = k * grid.dxi
    F = np.array([np.sum(v * np.exp(-1j * grid.axis * e)) * grid.dx for e in eta])
    # the trapezoid rule carries an O(dx) jump error
    assert np.max(np.abs(F - d.fourier_analytic(eta))) < 2 * grid.dx


@pytest.mark.parametrize("spec,s", [("delta@0.0", -0.5), ("heaviside@0.0", 0.5),
                                    ("powersing@0.0,a=0.25", 0.25), ("powersing@0.0,a=0.5", 0.0)])
def test_ground_truth_1d(spec, s):
    gt = ground_truth(parse_distribution(spec))
    assert gt.at(0.0, 1.0) == (True, pytest.approx(s))
    assert gt.at(0.0, -1.0) == (True, pytest.approx(s))
    assert not gt.at(0.5, 1.0)[0]


def test_ground_truth_regular_and_2d():
    assert not ground_truth(parse_distribution("smooth@0.0")).at(0.0, 1.0)[0]
    assert not ground_truth(parse_distribution("planewave,k=10")).at(0.0, 1.0)[0]
    gt = ground_truth(parse_distribution("halfplane,nu=(0.6,0.8),c=0.0", dim=2))
    assert gt.at((0.0, 0.0), (0.6, 0.8)) == (True, 0.5)
    assert gt.at((0.8, -0.6), (-0.6, -0.8)) == (True, 0.5)
    assert not gt.at((0.0, 0.0), (-0.8, 0.6))[0]
    assert not gt.at((0.3, 0.3), (0.6, 0.8))[0]


@pytest.mark.parametrize("spec", ["delta@0", "powersing@0,a=0.25", "sum(2*delta@-1;heaviside@1)",
                                  "smooth@0.25", "planewave,k=10"])
def test_spec_round_trip(spec):
    d = parse_distribution(spec)
    assert parse_distribution(d.spec).spec == d.spec


@pytest.mark.parametrize("spec", ["gizmo@0", "delta@0,b=2", "powersing@0,a=1.5", "heaviside@(0,1)"])
def test_bad_specs(spec):
    with pytest.raises(ValidationError):
        parse_distribution(spec)


def test_sum_is_linear():
    s = parse_distribution("sum(2*delta@-1;heaviside@1)")
    a, b = parse_distribution("delta@-1"), parse_distribution("heaviside@1")
    eta = np.linspace(-30, 30, 61)
    assert np.allclose(s.fourier_analytic(eta), 2 * a.fourier_analytic(eta) + b.fourier_analytic(eta))


def test_catalog_lists_every_kind():
    assert {"delta@x0", "heaviside@x0", "smooth@x0"} <= set(CATALOG)


def test_grid_mismatch_rejected():
    with pytest.raises(ValidationError):
        parse_distribution("delta@0").sample(Grid(math.pi, 10, 2))
