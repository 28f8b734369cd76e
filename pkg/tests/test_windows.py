import math

import numpy as np
import pytest
from scipy import integrate

from wavefront_scope.errors import ValidationError
from wavefront_scope.windows import make_annulus, make_gaussian, make_hermite, moment, parse_window, scale


def test_gaussian_values():
    w = make_gaussian(1)
    assert w.eval(0.0) == pytest.approx(1.0)
    ft0, _ = integrate.quad(lambda t: math.exp(-t * t / 2), -np.inf, np.inf)
    assert abs(w.eval_ft(0.0)) == pytest.approx(ft0, rel=1e-12)
    norm2, _ = integrate.quad(lambda t: math.exp(-t * t), -np.inf, np.inf)
    assert w.l2_norm ** 2 == pytest.approx(norm2, rel=1e-12)
    assert norm2 == pytest.approx(math.sqrt(math.pi))


@pytest.mark.parametrize("name", ["gaussian", "hermite1", "hermite2", "bump"])
def test_ft_matches_quadrature(name):
    w = parse_window(name, 1)
    for eta in (0.0, 0.7, 2.5):
        re, _ = integrate.quad(lambda t: (w.eval(t) * np.exp(-1j * t * eta)).real, -40, 40, limit=400)
        im, _ = integrate.quad(lambda t: (w.eval(t) * np.exp(-1j * t * eta)).imag, -40, 40, limit=400)
        assert abs(w.eval_ft(eta) - (re + 1j * im)) < 1e-9


def test_hermite1_moments():
    w = make_hermite(1, 1)
    assert w.eval(0.0) == 0
    assert abs(moment(w, 0)) < 1e-10
    assert moment(w, 1) == pytest.approx(math.sqrt(2 * math.pi), rel=1e-9)


def test_annulus_vanishing_moments_and_plateau():
    w = make_annulus(1, 1.0, 2.0)
    assert abs(w.eval_ft(1.5)) == pytest.approx(1.0)
    # x^k phi = i^k d^k phi_hat(0) and phi_hat vanishes on a neighbourhood of 0
    eta = np.linspace(-0.99, 0.99, 1001)
    assert np.all(w.eval_ft(eta) == 0)
    for k in range(7):
        assert abs(moment(w, k)) < 1e-8
    # low orders also by direct quadrature over the slowly decaying tails
    x = np.linspace(-500, 500, 1000001)
    phi = w.eval(x).real
    assert abs(integrate.trapezoid(phi, x)) < 1e-4
    assert abs(integrate.trapezoid(x * phi, x)) < 1e-4


def test_annulus_2d_ft_is_radial_bump():
    w = make_annulus(2, 1.0, 2.0)
    eta = np.array([[1.5, 0.0], [0.0, 1.5], [0.3, 0.2], [3.0, 0.0]])
    assert np.allclose(w.eval_ft(eta), [1.0, 1.0, 0.0, 0.0], atol=1e-14)


def test_scaled_window():
    w = make_gaussian(1)
    s = scale(w, 4.0)
    assert abs(s.eval(0.0)) == pytest.approx(math.sqrt(2.0))
    s16 = scale(w, 16.0)
    expect = 16 ** -0.25 * math.sqrt(2 * math.pi) * math.exp(-0.5)
    assert abs(s16.eval_ft(4.0)) == pytest.approx(expect, rel=1e-12)
    assert expect == pytest.approx(0.7602, abs=1e-4)
    assert scale(w, 1.0).eval(0.3) == pytest.approx(w.eval(0.3))


@pytest.mark.parametrize("name", ["gaussian", "hermite1", "annulus(1,2)", "bump"])
@pytest.mark.parametrize("lam", [1.0, 16.0, 256.0])
def test_scaling_preserves_norm(name, lam):
    s = scale(parse_window(name, 1), lam)
    x = np.linspace(-500, 500, 2000001) / math.sqrt(lam)
    num = math.sqrt(integrate.trapezoid(np.abs(s.eval(x)) ** 2, x))
    assert num == pytest.approx(s.l2_norm, rel=1e-6)


def test_ft_factors_match_tensor_eval():
    for name in ("gaussian", "hermite1"):
        w = scale(parse_window(name, 2), 9.0)
        a, b = np.linspace(-5, 5, 7), np.linspace(-3, 4, 5)
        f = w.ft_factors([a, b])
        grid = np.stack(np.meshgrid(a, b, indexing="ij"), axis=-1)
        assert np.allclose(np.outer(f[0], f[1]), w.eval_ft(grid), atol=1e-15)


@pytest.mark.parametrize("spec", ["nope", "annulus(2,1)", "annulus(0,1)", "hermite3"])
def test_bad_window_specs(spec):
    with pytest.raises(ValidationError):
        parse_window(spec, 1)
