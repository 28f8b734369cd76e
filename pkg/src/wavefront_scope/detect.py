"""Regularity detectors on wave packet volumes and Fourier-side oracles.

Wave packet side:
    D(lambda) = max over the (x, xi) lattice of |W_{phi_lambda} u(x, lambda xi)|
    J(lambda) = Riemann sum of |W_{phi_lambda} u(x, lambda xi)|^2 over K x V
A point is regular when D decays faster than lambda^-n_reg; the critical
Sobolev exponent follows from J ~ lambda^slope as s* = -(slope + n) / 2.

Fourier side (cone Gamma around a direction, local cutoff chi):
    max_{xi in Gamma, R <= |xi| < 2R} |F[chi u](xi)|  and
    int_{Gamma, R <= |xi| < 2R} |F[chi u](xi)|^2 d xi  over dyadic R.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss

from .distributions import Grid, TestDistribution, local_cutoff
from .engine import LambdaSchedule, PhaseRegion, WptVolume, scaled_volume
from .errors import EmptyVolume, UnresolvedBand, Unsupported, ValidationError
from .windows import Window

REGULAR = "REGULAR"
SINGULAR = "SINGULAR"
INCONCLUSIVE = "INCONCLUSIVE"

CLAMP = 1e-300
N_REG = 5.0
R2_MIN = 0.9
# D(lambda) ~ lambda^(-n/4 - s*) at a singular point; the slowest catalog
# singularity (2D jump) gives -1, so -2 separates with margin
SINGULAR_SLOPE = -2.0
PROBE_OFFSETS = (-0.3, 0.0, 0.3)


@dataclass(frozen=True)
class Thresholds:
    n_reg: float = N_REG
    r2_min: float = R2_MIN
    singular_slope: float = SINGULAR_SLOPE

    def classify(self, slope, r2):
        if slope == -math.inf:
            return REGULAR
        if slope <= -self.n_reg and r2 >= self.r2_min:
            return REGULAR
        if slope >= self.singular_slope:
            return SINGULAR
        return INCONCLUSIVE


@dataclass
class DecayFit:
    slope: float
    intercept: float
    r_squared: float
    classification: str
    n_reg: float
    fit_lambdas: list
    degenerate: bool = False

    @property
    def slopes(self):
        return self.slope

    def as_dict(self):
        return {"slope": _num(self.slope), "intercept": _num(self.intercept),
                "r_squared": _num(self.r_squared), "classification": self.classification,
                "n_reg": self.n_reg, "degenerate": self.degenerate,
                "fit_lambdas": [float(v) for v in self.fit_lambdas]}


@dataclass
class SobolevEstimate:
    s_star: float
    j_slope: float
    fit_range: list
    r_squared: float
    partial_integrals: dict = field(default_factory=dict)
    degenerate: bool = False

    def as_dict(self):
        return {"s_star": _num(self.s_star), "j_slope": _num(self.j_slope),
                "fit_range": [float(v) for v in self.fit_range],
                "r_squared": _num(self.r_squared), "degenerate": self.degenerate,
                "partial_integrals": {f"{k:+.6f}": [_num(v) for v in vals]
                                      for k, vals in self.partial_integrals.items()}}


@dataclass
class OracleVerdict:
    conic_decay_slope: float
    conic_classification: str
    conic_sobolev_s: float
    shell_slope: float
    radii: list
    shell_max: list
    shell_energy: list
    agreement: dict = field(default_factory=dict)

    def as_dict(self):
        return {"conic_decay_slope": _num(self.conic_decay_slope),
                "conic_classification": self.conic_classification,
                "conic_sobolev_s": _num(self.conic_sobolev_s),
                "shell_slope": _num(self.shell_slope),
                "radii": [float(r) for r in self.radii],
                "shell_max": [float(v) for v in self.shell_max],
                "shell_energy": [float(v) for v in self.shell_energy],
                "agreement": dict(self.agreement)}


def _num(v):
    """JSON-safe float: infinities become signed strings."""
    v = float(v)
    if math.isfinite(v):
        return v
    return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")


# ---------------------------------------------------------------------------
# log-log fits


def _upper_half(n):
    return slice(n // 2, n)


def _loglog_fit(t, y, floor=None):
    """Least squares of log y on log t; (slope, intercept, r2, degenerate).

    Values at or below the clamp (or below a per-point noise floor) count as
    clamped. More than half clamped returns the -inf sentinel; otherwise the
    regression uses the unclamped points.
    """
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    clamped = y <= CLAMP
    if floor is not None:
        clamped |= y <= np.asarray(floor, dtype=float)
    if 2 * int(np.sum(clamped)) > len(y):
        return -math.inf, -math.inf, 1.0, True
    keep = ~clamped
    ly = np.log(y[keep])
    lt = np.log(t[keep])
    slope, intercept = np.polyfit(lt, ly, 1)
    resid = ly - (slope * lt + intercept)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), r2, False


# ---------------------------------------------------------------------------
# wave packet side


def decay_statistic(vol: WptVolume):
    """D(lambda_j): max of |W| over the probe lattice, clamped below at 1e-300."""
    if vol.values.size == 0:
        raise EmptyVolume("nothing to classify")
    a = np.abs(vol.values).reshape(vol.values.shape[0], -1)
    return np.maximum(a.max(axis=1), CLAMP)


def hs_inner_integral(vol: WptVolume):
    """J(lambda_j): Riemann sum of |W|^2 over K x V with cell weights dx^n dxi^n."""
    if vol.values.size == 0:
        raise EmptyVolume("nothing to classify")
    a = np.abs(vol.values).reshape(vol.values.shape[0], -1)
    return vol.region.cell_weight * np.sum(a * a, axis=1)


def _noise_floor(vol):
    """Per-scale floor: the path's roundoff estimate, and never below 4 eps of the volume peak."""
    peak = float(np.max(np.abs(vol.values))) if vol.values.size else 0.0
    rel = np.full(vol.values.shape[0], 4 * np.finfo(float).eps * peak)
    floor = vol.meta.get("noise_floor") if vol.meta else None
    return rel if floor is None else np.maximum(np.asarray(floor, dtype=float), rel)


def classify(vol: WptVolume, thresholds: Thresholds = Thresholds()) -> DecayFit:
    """Fit log D against log lambda on the upper half of the schedule and classify."""
    if vol.schedule.count < 8:
        raise ValidationError("classification needs a schedule of at least 8 scales")
    lam = vol.lambdas
    D = decay_statistic(vol)
    floor = _noise_floor(vol)
    sl = _upper_half(len(lam))
    slope, icpt, r2, deg = _loglog_fit(lam[sl], D[sl], None if floor is None else floor[sl])
    return DecayFit(slope, icpt, r2, thresholds.classify(slope, r2), thresholds.n_reg,
                    list(lam[sl]), deg)


def partial_integrals(J, lambdas, n, s_values):
    """I(s; Lambda_k) = int_{lambda_0}^{Lambda_k} lambda^(n-1+2s) J d lambda, trapezoid in log lambda."""
    lam = np.asarray(lambdas, dtype=float)
    J = np.asarray(J, dtype=float)
    lt = np.log(lam)
    out = {}
    for s in s_values:
        # d lambda = lambda d(log lambda)
        with np.errstate(over="ignore", invalid="ignore"):
            g = lam ** (n + 2 * s) * J
        steps = 0.5 * (g[1:] + g[:-1]) * np.diff(lt)
        out[float(s)] = np.concatenate([[0.0], np.cumsum(steps)]).tolist()
    return out


def estimate_sobolev(J, schedule: LambdaSchedule, n: int, floor=None) -> SobolevEstimate:
    """Critical exponent s* = -(j_slope + n) / 2 from the upper half of the schedule."""
    lam = schedule.values
    J = np.asarray(J, dtype=float)
    if len(J) != len(lam):
        raise ValidationError("J and schedule lengths differ")
    sl = _upper_half(len(lam))
    f2 = None if floor is None else np.asarray(floor, dtype=float)[sl] ** 2
    slope, _, r2, deg = _loglog_fit(lam[sl], J[sl], f2)
    s_star = math.inf if deg else -(slope + n) / 2.0
    probes = [s_star] if deg else [s_star - 0.3, s_star, s_star + 0.3]
    table = partial_integrals(np.maximum(J, 0.0), lam, n, [p for p in probes if math.isfinite(p)])
    return SobolevEstimate(s_star, slope, list(lam[sl]), r2, table, deg)


def sobolev_from_volume(vol: WptVolume) -> SobolevEstimate:
    return estimate_sobolev(hs_inner_integral(vol), vol.schedule, vol.region.dim,
                            floor=_noise_floor(vol))


def partial_integrals_monotone(est: SobolevEstimate, atol=0.0):
    """I(s; Lambda) nondecreasing in Lambda and in s."""
    keys = sorted(est.partial_integrals)
    rows = [np.asarray(est.partial_integrals[k]) for k in keys]
    ok = all(np.all(np.diff(r) >= -atol) for r in rows)
    for lo, hi in zip(rows[:-1], rows[1:]):
        ok = ok and bool(np.all(hi - lo >= -atol))
    return bool(ok)


# ---------------------------------------------------------------------------
# Fourier side oracle


_GL_T, _GL_W = leggauss(16)


def _gl(a, b, width):
    n = max(1, int(math.ceil((b - a) / width)))
    edges = np.linspace(a, b, n + 1)
    h = 0.5 * np.diff(edges)
    nodes = (edges[:-1, None] + h[:, None] * (_GL_T + 1.0)).ravel()
    return nodes, (h[:, None] * _GL_W).ravel()


def oracle_cutoff(dist: TestDistribution, x0, radius):
    if hasattr(dist, "local_cutoff"):
        return dist.local_cutoff(x0, radius)
    return local_cutoff(x0, radius, dist.dim)


def localized_transform(dist: TestDistribution, chi, grid: Grid | None = None):
    """eta -> F[chi u](eta): analytic when available, else exact sums over the sampled product."""
    probe = np.zeros((1,) if dist.dim == 1 else (1, 2))
    try:
        dist.fourier_with(chi, probe)
        return lambda eta: dist.fourier_with(chi, eta)
    except Unsupported:
        pass
    grid = grid or Grid(dist.L, 16 if dist.dim == 1 else 10, dist.dim)
    sig = dist.sample(grid)
    vals = sig.values * chi(grid.coords())
    nz = np.nonzero(np.abs(vals) > 0)
    box = tuple(slice(int(i.min()), int(i.max()) + 1) for i in nz)
    axes = [grid.axis[s] for s in box]
    vals = vals[box] * grid.dx ** dist.dim

    def ft(eta):
        eta = np.asarray(eta, dtype=float)
        if dist.dim == 1:
            flat = eta.ravel()
            out = np.exp(-1j * np.outer(flat, axes[0])) @ vals
            return out.reshape(eta.shape)
        flat = eta.reshape(-1, 2)
        E1 = np.exp(-1j * np.outer(flat[:, 0], axes[0]))
        E2 = np.exp(-1j * np.outer(flat[:, 1], axes[1]))
        return np.sum((E1 @ vals) * E2, axis=1).reshape(eta.shape[:-1])

    ft.nyquist = grid.nyquist
    # exp(-i eta y) carries an absolute phase error ~ eps |eta y|
    mass = float(np.sum(np.abs(vals)))
    ymax = max(float(np.max(np.abs(a))) for a in axes)
    ft.noise = lambda r: 4 * np.finfo(float).eps * (1.0 + r * ymax) * mass
    return ft


def dyadic_radii(dim=1, r_min=8.0, octaves=None):
    """R = r_min * 2^k; 9 octaves (to 4096) in 1D, 6 (to 512) in 2D by default."""
    octaves = (9 if dim == 1 else 6) if octaves is None else octaves
    if octaves < 4:
        raise UnresolvedBand(f"dyadic range of {octaves} octaves is below 4")
    return r_min * 2.0 ** np.arange(octaves)


def conic_fourier_oracle(dist: TestDistribution, x0, direction, half_angle_deg=10.0,
                         radii=None, chi_radius=0.3, thresholds: Thresholds = Thresholds(),
                         ft=None) -> OracleVerdict:
    """Decay and shell energies of F[chi u] in the cone around ``direction``.

    The shell R <= |xi| < 2R is sampled by composite Gauss-Legendre rules fine
    enough for the oscillation exp(-i y.xi) over the support of chi; in 1D the
    cone is the ray t * direction.
    """
    n = dist.dim
    radii = dyadic_radii(n) if radii is None else np.asarray(radii, dtype=float)
    if len(radii) < 4 or radii[-1] / radii[0] < 8.0 - 1e-9:
        raise UnresolvedBand("dyadic range spans fewer than 4 octaves")
    d = np.atleast_1d(np.asarray(direction, dtype=float))
    d = d / np.linalg.norm(d)
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    chi = oracle_cutoff(dist, x0, chi_radius)
    if ft is None:
        ft = localized_transform(dist, chi)
    nyq = getattr(ft, "nyquist", None)
    if nyq is not None and 2 * radii[-1] >= 0.9 * nyq:
        raise UnresolvedBand(f"shell radius {2 * radii[-1]:g} exceeds the sampled band")
    # phase rate of F[chi u] is bounded by the extent of chi around the origin
    extent = float(np.max(np.abs(x0))) + 2 * chi_radius
    width = 6.0 / extent
    smax, energy = [], []
    for R in radii:
        t, wt = _gl(R, 2 * R, min(width, R / 2))
        if n == 1:
            vals = ft(t * d[0])
            a2 = np.abs(vals) ** 2
            smax.append(float(np.max(np.abs(vals))))
            energy.append(float(np.sum(a2 * wt)))
            continue
        th0 = math.atan2(d[1], d[0])
        ha = math.radians(half_angle_deg)
        # arc length at the outer radius sets the angular panel width
        th, wth = _gl(th0 - ha, th0 + ha, width / (2 * R))
        T, TH = np.meshgrid(t, th, indexing="ij")
        eta = np.stack([T * np.cos(TH), T * np.sin(TH)], -1)
        vals = ft(eta)
        a2 = np.abs(vals) ** 2
        smax.append(float(np.max(np.abs(vals))))
        energy.append(float(np.einsum("ij,i,j->", a2 * T, wt, wth)))
    smax = np.maximum(np.asarray(smax), CLAMP)
    energy = np.maximum(np.asarray(energy), CLAMP)
    sl = _upper_half(len(radii))
    # values near double-precision cancellation level are treated as zero
    floor = np.full(len(radii), 1e-13 * float(np.max(smax)))
    noise = getattr(ft, "noise", None)
    if noise is not None:
        floor += np.array([noise(2 * r) for r in radii])
    slope, _, r2, _ = _loglog_fit(radii[sl], smax[sl], floor[sl])
    e_slope, _, _, deg = _loglog_fit(radii[sl], energy[sl], floor[sl] ** 2 * radii[sl] ** n)
    conic_s = math.inf if deg else -e_slope / 2.0
    return OracleVerdict(slope, thresholds.classify(slope, r2), conic_s, e_slope,
                         list(radii), smax.tolist(), energy.tolist())


# ---------------------------------------------------------------------------
# cross checks


@dataclass
class PointResult:
    window: str
    x0: tuple
    direction: tuple
    fit: DecayFit
    sobolev: SobolevEstimate
    volume: WptVolume | None = None

    def as_dict(self):
        return {"window": self.window, "x0": list(self.x0), "direction": list(self.direction),
                "decay": self.fit.as_dict(), "sobolev": self.sobolev.as_dict()}


def analyse_point(dist, window: Window, x0, direction, schedule=None, x_half=0.2, xi_half=0.2,
                  path="auto", thresholds=Thresholds(), region=None, **kw) -> PointResult:
    schedule = schedule or LambdaSchedule.default(dist.dim)
    if region is None:
        region = PhaseRegion.around(x0, direction, dist.dim, x_half, xi_half,
                                    lam_max=schedule.lam_max)
    vol = scaled_volume(dist, window, region, schedule, path=path, **kw)
    return PointResult(window.name, tuple(np.atleast_1d(x0).tolist()),
                       tuple(np.atleast_1d(direction).tolist()),
                       classify(vol, thresholds), sobolev_from_volume(vol), vol)


def equivalence_check_conic_vs_scaled(dist, window: Window, point, direction,
                                      schedule=None, s_tol=0.15, thresholds=Thresholds(),
                                      oracle_kw=None, **kw):
    """Classification agreement and |s* - conic s| between the two routes."""
    res = analyse_point(dist, window, point, direction, schedule, thresholds=thresholds, **kw)
    ver = conic_fourier_oracle(dist, point, direction, thresholds=thresholds,
                               **(oracle_kw or {}))
    agree = res.fit.classification == ver.conic_classification
    s1, s2 = res.sobolev.s_star, ver.conic_sobolev_s
    both_singular = res.fit.classification == SINGULAR and ver.conic_classification == SINGULAR
    if both_singular:
        gap = abs(s1 - s2)
        s_ok = gap <= s_tol
    else:
        gap = math.nan
        s_ok = True
    ver.agreement = {"classification": agree, "s_gap": _num(gap), "s_within_tol": s_ok}
    return {"window": window.name, "point": list(np.atleast_1d(point).tolist()),
            "direction": list(np.atleast_1d(direction).tolist()),
            "wave_packet": res.as_dict(), "oracle": ver.as_dict(),
            "classification_agrees": agree, "s_star": _num(s1), "conic_sobolev_s": _num(s2),
            "s_gap": _num(gap), "passed": bool(agree and s_ok)}


def window_independence_suite(dist, windows, region: PhaseRegion, schedule: LambdaSchedule,
                              thresholds=Thresholds(), **kw):
    """Per-window classification and s*, with unanimity and the largest pairwise s* spread."""
    if len(windows) < 2:
        raise ValidationError("window independence needs at least two windows")
    rows = []
    for w in windows:
        vol = scaled_volume(dist, w, region, schedule, **kw)
        fit = classify(vol, thresholds)
        est = sobolev_from_volume(vol)
        rows.append({"window": w.name, "classification": fit.classification,
                     "slope": _num(fit.slope), "s_star": _num(est.s_star)})
    classes = {r["classification"] for r in rows}
    finite = [float(r["s_star"]) for r in rows if isinstance(r["s_star"], float)]
    spread = (max(finite) - min(finite)) if len(finite) == len(rows) else math.nan
    return {"rows": rows, "unanimous": len(classes) == 1,
            "classification": classes.pop() if len(classes) == 1 else None,
            "s_star_spread": _num(spread)}


def pointwise_slopes(vol: WptVolume):
    """Decay slope of max_xi |W(x, lambda xi)| at each x probe (-inf when degenerate)."""
    lam = vol.lambdas
    sl = _upper_half(len(lam))
    a = np.abs(vol.values).max(axis=2)
    floor = _noise_floor(vol)
    out = np.empty(a.shape[1])
    for i in range(a.shape[1]):
        out[i] = _loglog_fit(lam[sl], np.maximum(a[sl, i], CLAMP),
                             None if floor is None else floor[sl])[0]
    return out
