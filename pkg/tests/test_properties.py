import math

import numpy as np
import pytest

hypothesis = pytest.importorskip("hypothesis")
from hypothesis import given, settings, strategies as st  # noqa: E402

from wavefront_scope.detect import estimate_sobolev, partial_integrals_monotone  # noqa: E402
from wavefront_scope.distributions import Grid, parse_distribution  # noqa: E402
from wavefront_scope.engine import LambdaSchedule, wpt_quadrature, wpt_sampled  # noqa: E402
from wavefront_scope.windows import parse_window, scale  # noqa: E402

lams = st.floats(1.0, 4096.0)
windows = st.sampled_from(["gaussian", "hermite1", "hermite2"])


@settings(max_examples=40, deadline=None)
@given(name=windows, lam=lams, x=st.floats(-3, 3))
def test_scaled_window_formula(name, lam, x):
    w = parse_window(name, 1)
    s = scale(w, lam)
    assert s.eval(x) == pytest.approx(lam ** 0.25 * w.eval(math.sqrt(lam) * x), rel=1e-12, abs=1e-300)
    assert s.eval_ft(x) == pytest.approx(lam ** -0.25 * w.eval_ft(x / math.sqrt(lam)),
                                         rel=1e-12, abs=1e-300)


@settings(max_examples=25, deadline=None)
@given(x0=st.floats(-1.0, 1.0), lam=st.floats(4.0, 1024.0), x=st.floats(-1.0, 1.0),
       xi=st.floats(-2.0, 2.0), name=windows)
def test_delta_closed_form(x0, lam, x, xi, name):
    d = parse_distribution(f"delta@{x0!r}")
    w = scale(parse_window(name, 1), lam)
    got = wpt_quadrature(d, w, [x], [lam * xi])[0, 0]
    exact = np.conj(w.eval(x0 - x)) * np.exp(-1j * x0 * lam * xi)
    assert abs(got - exact) < 1e-9 * max(1.0, lam ** 0.25)


@settings(max_examples=15, deadline=None)
@given(a=st.complex_numbers(max_magnitude=10), b=st.complex_numbers(max_magnitude=10),
       lam=st.floats(4.0, 256.0))
def test_linearity(a, b, lam):
    grid = Grid(math.pi, 12, 1)
    u = parse_distribution("heaviside@0.2").sample(grid)
    v = parse_distribution("smooth@-0.3").sample(grid)
    w = scale(parse_window("gaussian", 1), lam)
    xs, xis = [-0.3, 0.0, 0.2], [lam * 0.9, lam * 1.1]
    combo = type(u)(grid, a * u.values + b * v.values)
    lhs = wpt_sampled(combo, w, xs, xis)
    rhs = a * wpt_sampled(u, w, xs, xis) + b * wpt_sampled(v, w, xs, xis)
    assert np.max(np.abs(lhs - rhs)) <= 1e-10 * (1 + np.max(np.abs(lhs)))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(1e-30, 1e3), min_size=12, max_size=12))
def test_partial_integrals_nondecreasing(J):
    sched = LambdaSchedule(4.0, math.sqrt(2.0), 12)
    est = estimate_sobolev(np.asarray(J), sched, 1)
    assert partial_integrals_monotone(est)


@settings(max_examples=30, deadline=None)
@given(p=st.floats(-6.0, 1.0), c=st.floats(1e-6, 1e6))
def test_sobolev_exponent_of_pure_power(p, c):
    sched = LambdaSchedule.default(1)
    est = estimate_sobolev(c * sched.values ** p, sched, 1)
    assert est.s_star == pytest.approx(-(p + 1) / 2, abs=1e-9)
