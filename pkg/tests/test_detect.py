import math

import numpy as np
import pytest

from wavefront_scope.detect import (INCONCLUSIVE, REGULAR, SINGULAR, Thresholds, analyse_point,
                                    classify, conic_fourier_oracle, decay_statistic, dyadic_radii,
                                    estimate_sobolev, hs_inner_integral, partial_integrals_monotone,
                                    sobolev_from_volume)
from wavefront_scope.distributions import parse_distribution
from wavefront_scope.engine import LambdaSchedule, PhaseRegion, WptVolume, scaled_volume
from wavefront_scope.errors import UnresolvedBand, ValidationError
from wavefront_scope.windows import parse_window

G1 = parse_window("gaussian", 1)


def _synthetic(values_per_lambda, sched):
    region = PhaseRegion(0.0, 0.2, 1.0, 0.2, 1, 1)
    v = np.asarray(values_per_lambda, dtype=complex).reshape(sched.count, 1, 1)
    return WptVolume(region, sched, v, "synthetic", "synthetic")


def test_threshold_rules():
    th = Thresholds()
    assert th.classify(-math.inf, math.nan) == REGULAR
    assert th.classify(-6.0, 0.95) == REGULAR
    assert th.classify(-6.0, 0.5) == INCONCLUSIVE
    assert th.classify(-0.2, 0.1) == SINGULAR
    assert th.classify(-3.0, 0.99) == INCONCLUSIVE


def test_power_law_fit_on_synthetic_volume():
    sched = LambdaSchedule(4.0, math.sqrt(2.0), 12)
    fit = classify(_synthetic(3.0 * sched.values ** -7.0, sched))
    assert fit.slope == pytest.approx(-7.0)
    assert fit.r_squared == pytest.approx(1.0)
    assert fit.classification == REGULAR
    assert len(fit.fit_lambdas) == 6


def test_clamped_values_give_degenerate_regular():
    sched = LambdaSchedule(4.0, 2.0, 10)
    fit = classify(_synthetic(np.r_[np.ones(4), np.zeros(6)], sched))
    assert fit.degenerate and fit.slope == -math.inf and fit.classification == REGULAR


def test_short_schedule_rejected():
    sched = LambdaSchedule(4.0, 2.0, 6)
    with pytest.raises(ValidationError):
        classify(_synthetic(np.ones(6), sched))


def test_estimate_sobolev_from_power_law():
    sched = LambdaSchedule(4.0, math.sqrt(2.0), 21)
    est = estimate_sobolev(sched.values ** -2.0, sched, 1)
    assert est.s_star == pytest.approx(0.5)
    assert partial_integrals_monotone(est)


def test_delta_statistics():
    d = parse_distribution("delta@0.0")
    sched = LambdaSchedule.default(1)
    region = PhaseRegion.around(0.0, 1.0, 1, lam_max=sched.lam_max)
    vol = scaled_volume(d, G1, region, sched)
    assert np.allclose(decay_statistic(vol), sched.values ** 0.25, rtol=1e-9)
    J = hs_inner_integral(vol)
    # J -> |V| ||phi||^2 once the window is narrow compared with K; the Riemann sum
    # over the endpoint-inclusive lattice sees |V| as n_xi * dxi
    k = int(np.argmin(np.abs(sched.values - 1024)))
    v_eff = region.n_xi * 2 * region.xi_half / (region.n_xi - 1)
    assert J[k] == pytest.approx(v_eff * G1.l2_norm ** 2, rel=0.02)
    est = sobolev_from_volume(vol)
    assert est.s_star == pytest.approx(-0.5, abs=0.05)
    assert partial_integrals_monotone(est)
    fit = classify(vol)
    assert fit.classification == SINGULAR and fit.slope == pytest.approx(0.25, abs=0.05)


def test_heaviside_energy_slope():
    res = analyse_point(parse_distribution("heaviside@0.0"), G1, 0.0, 1.0)
    assert res.sobolev.j_slope == pytest.approx(-2.0, abs=0.1)
    assert res.fit.classification == SINGULAR


def test_scale_invariance():
    a = analyse_point(parse_distribution("heaviside@0.0"), G1, 0.0, -1.0)
    b = analyse_point(parse_distribution("sum(1000*heaviside@0.0)"), G1, 0.0, -1.0)
    assert b.fit.slope == pytest.approx(a.fit.slope, abs=1e-9)
    assert b.sobolev.s_star == pytest.approx(a.sobolev.s_star, abs=1e-9)
    assert b.fit.classification == a.fit.classification


def test_locality():
    # a singularity outside the probe neighbourhood does not change the verdict
    a = analyse_point(parse_distribution("heaviside@0.0"), G1, 0.0, 1.0)
    b = analyse_point(parse_distribution("sum(heaviside@0.0;delta@1.2)"), G1, 0.0, 1.0)
    assert b.fit.classification == a.fit.classification
    assert b.sobolev.s_star == pytest.approx(a.sobolev.s_star, abs=1e-6)
    c = analyse_point(parse_distribution("sum(heaviside@0.0;delta@1.2)"), G1, 1.2, 1.0)
    assert c.fit.classification == SINGULAR
    assert c.sobolev.s_star == pytest.approx(-0.5, abs=0.15)


def test_displaced_delta_is_regular():
    res = analyse_point(parse_distribution("delta@0.0"), G1, 0.7, 1.0)
    assert res.fit.classification == REGULAR


@pytest.mark.parametrize("spec,cls,s", [("delta@0.0", SINGULAR, -0.5),
                                        ("heaviside@0.0", SINGULAR, 0.5),
                                        ("powersing@0.0,a=0.25", SINGULAR, 0.25),
                                        ("smooth@0.0", REGULAR, None),
                                        ("planewave,k=10", REGULAR, None)])
def test_conic_oracle_1d(spec, cls, s):
    ver = conic_fourier_oracle(parse_distribution(spec), 0.0, 1.0)
    assert ver.conic_classification == cls
    if s is not None:
        assert ver.conic_sobolev_s == pytest.approx(s, abs=0.05)


def test_conic_oracle_halfplane():
    d = parse_distribution("halfplane,nu=(0.6,0.8),c=0.0", dim=2)
    ver = conic_fourier_oracle(d, (0.0, 0.0), (0.6, 0.8))
    assert ver.conic_classification == SINGULAR
    assert ver.conic_sobolev_s == pytest.approx(0.5, abs=0.05)
    assert ver.conic_decay_slope == pytest.approx(-1.0, abs=0.1)
    tang = conic_fourier_oracle(d, (0.0, 0.0), (-0.8, 0.6))
    assert tang.conic_classification == REGULAR


def test_dyadic_range_too_short():
    with pytest.raises(UnresolvedBand):
        dyadic_radii(1, octaves=3)
