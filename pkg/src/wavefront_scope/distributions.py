"""Catalog of tempered test distributions with samplers, Fourier transforms and ground truth.

Every entry is a "raw" profile (delta, jump, power singularity, ...) multiplied
by a smooth cutoff. The cutoff is an erf-smoothed box: the indicator of
[-m, m] convolved with a Gaussian of standard deviation ``soft``. It is
C-infinity, equal to 1 up to ~1e-19 on the plateau and below ~1e-19 outside
its nominal support, and its Fourier transform is closed form, which keeps the
analytic Fourier path exact for every kind.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import special

from .errors import Unsupported, ValidationError

SQRT2 = math.sqrt(2.0)
# distance (in units of ``soft``) from the box edge to the plateau / support edge
EDGE_SIGMAS = 9.0
TAIL_SIGMAS = 12.0  # exp(-72) ~ 5e-32: Gaussian tails beyond this are dropped


# ---------------------------------------------------------------------------
# grids


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid over [-L, L)^n with 2^m points per axis."""

    L: float = math.pi
    m: int = 18
    dim: int = 1

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValidationError(f"grid dimension must be 1 or 2, got {self.dim}")
        if not (1 <= self.m <= 24):
            raise ValidationError(f"grid exponent m={self.m} out of range")
        if not self.L > 0:
            raise ValidationError("grid half-width L must be positive")

    @property
    def size(self):
        return 2 ** self.m

    @property
    def dx(self):
        return 2.0 * self.L / self.size

    @property
    def dxi(self):
        return 2.0 * math.pi / (2.0 * self.L)

    @property
    def nyquist(self):
        return math.pi / self.dx

    @property
    def axis(self):
        return -self.L + self.dx * np.arange(self.size)

    def coords(self):
        """Node coordinates, shape (N,) in 1D or (N, N, 2) in 2D."""
        a = self.axis
        if self.dim == 1:
            return a
        x1, x2 = np.meshgrid(a, a, indexing="ij")
        return np.stack([x1, x2], axis=-1)

    def nearest_index(self, x0):
        idx = np.rint((np.atleast_1d(np.asarray(x0, dtype=float)) + self.L) / self.dx).astype(int)
        return tuple(int(i) % self.size for i in idx)


@dataclass
class SampledSignal:
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        expected = (self.grid.size,) * self.grid.dim
        if self.values.shape != expected:
            raise ValidationError(f"signal shape {self.values.shape} != grid shape {expected}")


# ---------------------------------------------------------------------------
# cutoffs


def gauss_tail_ft(c0, soft, eta):
    """int_{c0}^inf G(y) exp(-i y eta) dy for the centred Gaussian G of std ``soft``.

    Evaluated through the Faddeeva function so that neither factor overflows.
    """
    eta = np.asarray(eta, dtype=float)
    s = soft
    damp = np.exp(-0.5 * (s * eta) ** 2)
    # the Faddeeva term is bounded by exp(-c0^2 / 2 s^2) times the damping
    if c0 >= TAIL_SIGMAS * s:
        return np.zeros(eta.shape, dtype=complex)
    if c0 <= -TAIL_SIGMAS * s:
        return damp.astype(complex)
    z = (c0 + 1j * s * s * eta) / (s * SQRT2)
    phase = np.exp(-0.5 * (c0 / s) ** 2 - 1j * c0 * eta)
    if c0 >= 0:
        return 0.5 * phase * special.wofz(1j * z)
    return damp - 0.5 * phase * special.wofz(-1j * z)


@dataclass(frozen=True)
class ErfBox:
    """1D smooth box: 1_[center-half, center+half] convolved with N(0, soft^2)."""

    center: float = 0.0
    half: float = 5 * math.pi / 8
    soft: float = math.pi / 72

    @property
    def plateau(self):
        return (self.center - self.half + EDGE_SIGMAS * self.soft,
                self.center + self.half - EDGE_SIGMAS * self.soft)

    @property
    def support(self):
        return (self.center - self.half - EDGE_SIGMAS * self.soft,
                self.center + self.half + EDGE_SIGMAS * self.soft)

    def __call__(self, t):
        t = np.asarray(t, dtype=float) - self.center
        k = 1.0 / (self.soft * SQRT2)
        return 0.5 * (special.erf((t + self.half) * k) - special.erf((t - self.half) * k))

    def ft(self, eta):
        eta = np.asarray(eta, dtype=float)
        sinc = 2.0 * self.half * np.sinc(self.half * eta / math.pi)
        return np.exp(-1j * self.center * eta) * sinc * np.exp(-0.5 * (self.soft * eta) ** 2)

    def derivative_tail_ft(self, x0, eta):
        """F[H(t - x0) chi'(t)](eta); chi' is the difference of two shifted Gaussians."""
        eta = np.asarray(eta, dtype=float)
        left, right = self.center - self.half, self.center + self.half
        out = np.exp(-1j * left * eta) * gauss_tail_ft(x0 - left, self.soft, eta)
        out -= np.exp(-1j * right * eta) * gauss_tail_ft(x0 - right, self.soft, eta)
        return out


@dataclass(frozen=True)
class Cutoff:
    """Tensor product of 1D smooth boxes along orthonormal axes (rotated frame in 2D)."""

    boxes: tuple
    frame: tuple | None = None  # rows are the frame axes; None = coordinate axes

    @property
    def dim(self):
        return len(self.boxes)

    def _rotate(self, x):
        x = np.asarray(x, dtype=float)
        if self.dim == 1:
            return x[..., None] if x.ndim == 0 or x.shape[-1:] != (1,) else x
        if self.frame is None:
            return x
        return x @ np.asarray(self.frame).T

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.dim == 1:
            return self.boxes[0](x)
        p = self._rotate(x)
        return self.boxes[0](p[..., 0]) * self.boxes[1](p[..., 1])

    def ft(self, eta):
        eta = np.asarray(eta, dtype=float)
        if self.dim == 1:
            return self.boxes[0].ft(eta)
        q = self._rotate(eta)
        return self.boxes[0].ft(q[..., 0]) * self.boxes[1].ft(q[..., 1])

    def contains_with_margin(self, L):
        """Nominal support lies inside [-L, L)^n with margin L/4."""
        if self.dim == 1 or self.frame is None:
            return all(b.support[0] >= -0.75 * L - 1e-12 and b.support[1] <= 0.75 * L + 1e-12
                       for b in self.boxes)
        corners = np.array([[a, b] for a in self.boxes[0].support for b in self.boxes[1].support])
        pts = corners @ np.asarray(self.frame)
        return bool(np.all(np.abs(pts) <= 0.75 * L + 1e-12))


def default_cutoff(dim, L=math.pi, frame=None):
    """Plateau [-L/2, L/2]^n, support [-3L/4, 3L/4]^n."""
    soft = L / (8 * EDGE_SIGMAS)
    box = ErfBox(0.0, 5 * L / 8, soft)
    if frame is None:
        return Cutoff((box,) * dim)
    # a rotated square must fit the 3L/4 box: shrink it by sqrt(2)
    r = 0.75 * L / math.sqrt(2.0)
    soft2 = r / 40.0
    box2 = ErfBox(0.0, r - EDGE_SIGMAS * soft2, soft2)
    return Cutoff((box2, box2), frame)


def local_cutoff(x0, radius, dim, soft=None):
    """Cutoff equal to 1 near x0, used by the Fourier-side oracles."""
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    soft = radius / 12 if soft is None else soft
    return Cutoff(tuple(ErfBox(float(c), radius, soft) for c in x0))


# ---------------------------------------------------------------------------
# 1D Fourier transforms of singular profiles times a smooth box


_GL16 = leggauss(16)


def _composite_gl(a, b, panel):
    n = max(1, int(math.ceil((b - a) / panel)))
    edges = np.linspace(a, b, n + 1)
    t, w = _GL16
    h = 0.5 * np.diff(edges)
    nodes = (edges[:-1, None] + h[:, None] * (t[None, :] + 1.0)).ravel()
    weights = (h[:, None] * w[None, :]).ravel()
    return nodes, weights


def _oscillatory_sum(nodes, weights, values, eta, sign=-1.0, chunk=512):
    """sum_k w_k f_k exp(sign i t_k eta) for a batch of eta."""
    eta = np.asarray(eta, dtype=float).ravel()
    out = np.empty(eta.shape, dtype=complex)
    wf = weights * values
    for s in range(0, eta.size, chunk):
        e = eta[s:s + chunk, None]
        out[s:s + chunk] = np.exp(sign * 1j * e * nodes[None, :]) @ wf
    return out


def heaviside_box_ft(x0, box: ErfBox, eta):
    """F[H(t - x0) chi(t)](eta), exact.

    Uses f' = chi(x0) delta_x0 + H(t - x0) chi'(t), so f_hat = F[f'] / (i eta);
    small |eta| is integrated directly to avoid the 0/0 cancellation.
    """
    eta = np.asarray(eta, dtype=float)
    out = np.empty(eta.shape, dtype=complex)
    small = np.abs(eta) < 1.0
    big = ~small
    e = eta[big]
    if e.size:
        num = box(x0) * np.exp(-1j * x0 * e) + box.derivative_tail_ft(x0, e)
        out[big] = num / (1j * e)
    if small.any():
        nodes, w = _composite_gl(x0, box.support[1], box.soft)
        out[small] = _oscillatory_sum(nodes, w, box(nodes), eta[small])
    return out


def power_box_ft(x0, a, box: ErfBox, eta):
    """F[|t - x0|^-a chi(t)](eta) to ~1e-12 relative.

    Above the cut frequency the cutoff's Gaussian damping makes the remainder
    below 1e-17 and the pure power law c_a |eta|^(a-1) e^{-i x0 eta} is exact;
    below it the integral is done by Gauss-Jacobi (singular part) plus
    composite Gauss-Legendre (cutoff edges).
    """
    eta = np.asarray(eta, dtype=float)
    out = np.empty(eta.shape, dtype=complex)
    eta_cut = math.sqrt(2 * 40.0) / box.soft
    hi = np.abs(eta) >= eta_cut
    c_a = 2.0 * special.gamma(1.0 - a) * math.sin(math.pi * a / 2.0)
    e = eta[hi]
    out[hi] = c_a * np.abs(e) ** (a - 1.0) * np.exp(-1j * x0 * e)
    lo = ~hi
    if lo.any():
        t1 = min(box.plateau[1] - x0, x0 - box.plateau[0]) * 0.9
        T = max(box.support[1] - x0, x0 - box.support[0])
        emax = float(np.abs(eta[lo]).max())
        nj = 48 + int(emax * t1 / math.pi)
        xj, wj = special.roots_jacobi(nj, 0.0, -a)
        tj = 0.5 * t1 * (xj + 1.0)
        wj = wj * (0.5 * t1) ** (1.0 - a)
        tg, wg = _composite_gl(t1, T, min(box.soft, 2.0 / max(emax, 1.0)))
        wg = wg * tg ** (-a)
        nodes = np.concatenate([tj, tg])
        weights = np.concatenate([wj, wg])
        right = box(x0 + nodes)
        leftv = box(x0 - nodes)
        el = eta[lo]
        val = (_oscillatory_sum(nodes, weights, right, el, -1.0)
               + _oscillatory_sum(nodes, weights, leftv, el, +1.0))
        out[lo] = np.exp(-1j * x0 * el) * val
    return out


# ---------------------------------------------------------------------------
# ground truth


@dataclass
class GroundTruth:
    """Known singular support, wave front directions and critical Sobolev exponents.

    ``singular_points`` holds points in 1D; in 2D a halfplane contributes a line
    stored in ``singular_lines`` as (nu, c). ``critical_s`` maps a point (tuple)
    or line key to s*; directions are unit vectors, or None for "all".
    """

    dim: int
    singular_points: list = field(default_factory=list)
    singular_directions: dict = field(default_factory=dict)
    critical_s: dict = field(default_factory=dict)
    singular_lines: list = field(default_factory=list)

    def at(self, x, direction, tol=1e-9):
        """(is_singular, s*) at phase point (x, direction) per the analytic truth."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        d = np.atleast_1d(np.asarray(direction, dtype=float))
        d = d / np.linalg.norm(d)
        best = math.inf
        for p in self.singular_points:
            if np.linalg.norm(x - np.asarray(p)) <= tol:
                dirs = self.singular_directions[p]
                if dirs is None or any(abs(float(np.dot(d, q)) - 1.0) < 1e-9 for q in dirs):
                    best = min(best, self.critical_s[p])
        for nu, c in self.singular_lines:
            if abs(float(np.dot(x, nu)) - c) <= tol and abs(abs(float(np.dot(d, nu))) - 1.0) < 1e-9:
                best = min(best, self.critical_s[("line", tuple(nu), c)])
        return (best < math.inf), best


# ---------------------------------------------------------------------------
# distributions


class TestDistribution:
    """A compactly supported tempered distribution u = (raw profile) * cutoff."""

    __test__ = False  # not a pytest class
    kind = "abstract"
    has_analytic_ft = True
    real_valued = True

    def __init__(self, dim, cutoff=None, L=math.pi):
        self.dim = dim
        self.L = L
        self.cutoff = cutoff if cutoff is not None else default_cutoff(dim, L)

    # subclasses: _sample_raw(grid) -> array, fourier_with(cutoff, eta), ground_truth()
    def sample(self, grid: Grid) -> SampledSignal:
        if grid.dim != self.dim:
            raise ValidationError(f"grid dimension {grid.dim} != distribution dimension {self.dim}")
        if abs(grid.L - self.L) > 1e-12 or not self.cutoff.contains_with_margin(grid.L):
            raise ValidationError("distribution support does not fit the grid box with margin L/4")
        return SampledSignal(grid, self._sample(grid))

    def fourier_analytic(self, eta):
        """u_hat(eta); ``eta`` shape (...,) in 1D or (..., 2) in 2D."""
        return self.fourier_with(self.cutoff, eta)

    def fourier_with(self, cutoff, eta):
        raise Unsupported(f"{self.kind} has no analytic Fourier path")

    def singular_positions(self):
        """Points (or None) relevant to quadrature phase-rate estimates."""
        return [np.zeros(self.dim)]

    def __mul__(self, c):
        return WeightedSum([(complex(c), self)], self.dim, self.L)

    __rmul__ = __mul__

    def __add__(self, other):
        return WeightedSum([(1.0, self), (1.0, other)], self.dim, self.L)

    def __repr__(self):
        return f"<{self.spec}>"


def _as_point(x0, dim):
    p = np.atleast_1d(np.asarray(x0, dtype=float))
    if p.shape != (dim,):
        raise ValidationError(f"point {x0!r} has wrong dimension for n={dim}")
    return p


class Delta(TestDistribution):
    kind = "delta"

    def __init__(self, x0=0.0, dim=1, **kw):
        super().__init__(dim, **kw)
        self.x0 = _as_point(x0, dim)
        self.spec = f"delta@{_fmt_point(self.x0)}"

    def _sample(self, grid):
        v = np.zeros((grid.size,) * grid.dim, dtype=complex)
        v[grid.nearest_index(self.x0)] = float(self.cutoff(self.x0 if self.dim > 1 else self.x0[0])) / grid.dx ** grid.dim
        return v

    def fourier_with(self, cutoff, eta):
        eta = np.asarray(eta, dtype=float)
        x0 = self.x0 if self.dim > 1 else self.x0[0]
        phase = eta * x0 if self.dim == 1 else eta @ self.x0
        return float(cutoff(x0)) * np.exp(-1j * phase)

    def singular_positions(self):
        return [self.x0]

    def ground_truth(self):
        p = tuple(self.x0)
        dirs = [np.array([1.0]), np.array([-1.0])] if self.dim == 1 else None
        return GroundTruth(self.dim, [p], {p: dirs}, {p: -self.dim / 2.0})


class Heaviside(TestDistribution):
    kind = "heaviside"

    def __init__(self, x0=0.0, dim=1, **kw):
        if dim != 1:
            raise ValidationError("heaviside is one-dimensional; use halfplane in 2D")
        super().__init__(1, **kw)
        self.x0 = float(x0)
        self.spec = f"heaviside@{self.x0:g}"

    def _sample(self, grid):
        x = grid.axis
        h = np.where(x > self.x0, 1.0, np.where(x < self.x0, 0.0, 0.5))
        return (h * self.cutoff(x)).astype(complex)

    def fourier_with(self, cutoff, eta):
        return heaviside_box_ft(self.x0, cutoff.boxes[0], np.asarray(eta, dtype=float))

    def singular_positions(self):
        return [np.array([self.x0])]

    def ground_truth(self):
        p = (self.x0,)
        return GroundTruth(1, [p], {p: [np.array([1.0]), np.array([-1.0])]}, {p: 0.5})


class PowerSingularity(TestDistribution):
    kind = "powersing"

    def __init__(self, x0=0.0, a=0.25, dim=1, **kw):
        if dim != 1:
            raise ValidationError("powersing is one-dimensional")
        if not (0.0 < a < 1.0):
            raise ValidationError(f"power exponent a must satisfy 0 < a < 1, got {a}")
        super().__init__(1, **kw)
        self.x0, self.a = float(x0), float(a)
        self.spec = f"powersing@{self.x0:g},a={self.a:g}"

    def _sample(self, grid):
        x = grid.axis
        with np.errstate(divide="ignore"):
            v = np.abs(x - self.x0) ** (-self.a)
        (i,) = grid.nearest_index(self.x0)
        lo, hi = x[i] - 0.5 * grid.dx - self.x0, x[i] + 0.5 * grid.dx - self.x0
        # cell average of |t|^-a over [lo, hi]
        prim = lambda t: np.sign(t) * np.abs(t) ** (1 - self.a) / (1 - self.a)
        v[i] = (prim(hi) - prim(lo)) / grid.dx
        return (v * self.cutoff(x)).astype(complex)

    def fourier_with(self, cutoff, eta):
        return power_box_ft(self.x0, self.a, cutoff.boxes[0], np.asarray(eta, dtype=float))

    def singular_positions(self):
        return [np.array([self.x0])]

    def ground_truth(self):
        p = (self.x0,)
        return GroundTruth(1, [p], {p: [np.array([1.0]), np.array([-1.0])]}, {p: 0.5 - self.a})


class PlaneWave(TestDistribution):
    kind = "planewave"
    real_valued = False

    def __init__(self, k=10.0, dim=1, **kw):
        super().__init__(dim, **kw)
        self.k = _as_point(k, dim)
        self.spec = f"planewave,k={_fmt_point(self.k)}"

    def _sample(self, grid):
        x = grid.coords()
        ph = x * self.k[0] if self.dim == 1 else x @ self.k
        return np.exp(1j * ph) * self.cutoff(x)

    def fourier_with(self, cutoff, eta):
        eta = np.asarray(eta, dtype=float)
        shift = eta - (self.k[0] if self.dim == 1 else self.k)
        return cutoff.ft(shift)

    def ground_truth(self):
        return GroundTruth(self.dim)


class SmoothBump(TestDistribution):
    """exp(-|x - x0|^2 / (2 width^2)) times the cutoff (which is 1 wherever the Gaussian matters)."""

    kind = "smooth"

    def __init__(self, x0=0.0, width=0.15, dim=1, **kw):
        super().__init__(dim, **kw)
        self.x0 = _as_point(x0, dim)
        self.width = float(width)
        self.spec = f"smooth@{_fmt_point(self.x0)}"

    def _sample(self, grid):
        x = grid.coords()
        d = (x - self.x0[0]) ** 2 if self.dim == 1 else np.sum((x - self.x0) ** 2, axis=-1)
        return (np.exp(-0.5 * d / self.width ** 2) * self.cutoff(x)).astype(complex)

    def fourier_with(self, cutoff, eta):
        eta = np.asarray(eta, dtype=float)
        if cutoff is not self.cutoff:
            # a different localisation changes the product; only the sampled route applies
            raise Unsupported("smooth bump under a foreign cutoff has no closed form")
        w = self.width
        if self.dim == 1:
            return w * math.sqrt(2 * math.pi) * np.exp(-0.5 * (w * eta) ** 2 - 1j * self.x0[0] * eta)
        r2 = np.sum(eta * eta, axis=-1)
        return 2 * math.pi * w * w * np.exp(-0.5 * w * w * r2 - 1j * (eta @ self.x0))

    def singular_positions(self):
        return [self.x0]

    def ground_truth(self):
        return GroundTruth(self.dim)


class HalfPlane(TestDistribution):
    """1_{x.nu > c} in 2D, localised by a smooth box aligned with (nu, nu_perp)."""

    kind = "halfplane"

    def __init__(self, nu=(0.6, 0.8), c=0.0, dim=2, L=math.pi, cutoff=None):
        if dim != 2:
            raise ValidationError("halfplane is two-dimensional")
        nu = np.asarray(nu, dtype=float)
        if nu.shape != (2,) or not np.isclose(np.linalg.norm(nu), 1.0, atol=1e-9):
            raise ValidationError(f"halfplane normal must be a unit 2-vector, got {nu}")
        self.nu = nu
        self.perp = np.array([-nu[1], nu[0]])
        frame = (tuple(nu), tuple(self.perp))
        super().__init__(2, cutoff if cutoff is not None else default_cutoff(2, L, frame), L)
        self.c = float(c)
        self.spec = f"halfplane,nu=({nu[0]:g},{nu[1]:g}),c={self.c:g}"

    def _sample(self, grid):
        x = grid.coords()
        p = x @ self.nu
        h = np.where(p > self.c, 1.0, np.where(p < self.c, 0.0, 0.5))
        return (h * self.cutoff(x)).astype(complex)

    def local_cutoff(self, x0, radius):
        """Oracle localisation: a smooth box in the (nu, nu_perp) frame centred at x0."""
        x0 = np.asarray(x0, dtype=float)
        soft = radius / 12
        return Cutoff((ErfBox(float(x0 @ self.nu), radius, soft),
                       ErfBox(float(x0 @ self.perp), radius, soft)),
                      (tuple(self.nu), tuple(self.perp)))

    def fourier_with(self, cutoff, eta):
        if cutoff.frame is None or not np.allclose(cutoff.frame[0], self.nu):
            raise Unsupported("halfplane transform needs a cutoff aligned with its normal")
        eta = np.asarray(eta, dtype=float)
        along = eta @ self.nu
        across = eta @ self.perp
        return heaviside_box_ft(self.c, cutoff.boxes[0], along) * cutoff.boxes[1].ft(across)

    def singular_positions(self):
        return [self.c * self.nu]

    def ground_truth(self):
        key = ("line", tuple(self.nu), self.c)
        return GroundTruth(2, critical_s={key: 0.5}, singular_lines=[(self.nu, self.c)])


class WeightedSum(TestDistribution):
    kind = "sum"

    def __init__(self, terms, dim, L=math.pi):
        super().__init__(dim, L=L)
        flat = []
        for c, d in terms:
            if d.dim != dim:
                raise ValidationError("summands must share a dimension")
            if isinstance(d, WeightedSum):
                flat.extend((c * c2, d2) for c2, d2 in d.terms)
            else:
                flat.append((c, d))
        self.terms = flat
        self.has_analytic_ft = all(d.has_analytic_ft for _, d in flat)
        self.real_valued = all(complex(c).imag == 0 and d.real_valued for c, d in flat)
        self.spec = "sum(" + ";".join(
            (d.spec if c == 1 else f"{_fmt_scalar(c)}*{d.spec}") for c, d in flat) + ")"

    def sample(self, grid):
        vals = sum(c * d.sample(grid).values for c, d in self.terms)
        return SampledSignal(grid, np.asarray(vals, dtype=complex))

    def fourier_analytic(self, eta):
        return sum(c * d.fourier_analytic(eta) for c, d in self.terms)

    def fourier_with(self, cutoff, eta):
        return sum(c * d.fourier_with(cutoff, eta) for c, d in self.terms)

    def local_cutoff(self, x0, radius):
        for _, d in self.terms:
            if hasattr(d, "local_cutoff"):
                return d.local_cutoff(x0, radius)
        return local_cutoff(x0, radius, self.dim)

    def singular_positions(self):
        return [p for _, d in self.terms for p in d.singular_positions()]

    def ground_truth(self):
        gt = GroundTruth(self.dim)
        for c, d in self.terms:
            if c == 0:
                continue
            g = d.ground_truth()
            for p in g.singular_points:
                if p in gt.critical_s:
                    gt.critical_s[p] = min(gt.critical_s[p], g.critical_s[p])
                else:
                    gt.singular_points.append(p)
                    gt.singular_directions[p] = g.singular_directions[p]
                    gt.critical_s[p] = g.critical_s[p]
            for line in g.singular_lines:
                gt.singular_lines.append(line)
                key = ("line", tuple(line[0]), line[1])
                gt.critical_s[key] = g.critical_s[key]
        return gt


def sample(dist: TestDistribution, grid: Grid) -> SampledSignal:
    return dist.sample(grid)


def fourier_analytic(dist: TestDistribution, eta):
    return dist.fourier_analytic(eta)


def ground_truth(dist: TestDistribution) -> GroundTruth:
    return dist.ground_truth()


# ---------------------------------------------------------------------------
# spec strings


def _fmt_scalar(v):
    v = complex(v)
    return f"{v.real:g}" if v.imag == 0 else f"({v.real:g}{v.imag:+g}j)"


def _fmt_point(p):
    p = np.atleast_1d(p)
    return f"{p[0]:g}" if p.size == 1 else "(" + ",".join(f"{v:g}" for v in p) + ")"


def _parse_point(text, dim):
    text = text.strip()
    try:
        if text.startswith("("):
            vals = [float(v) for v in text.strip("()").split(",")]
        else:
            vals = [float(text)]
    except ValueError:
        raise ValidationError(f"cannot parse point {text!r}") from None
    if len(vals) == 1 and dim == 2:
        raise ValidationError(f"2D point required, got {text!r}")
    return np.array(vals) if dim == 2 else vals[0]


def _split_top(s, sep):
    parts, depth, cur = [], 0, ""
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return parts


def parse_distribution(spec: str, dim: int = 1, L: float = math.pi) -> TestDistribution:
    """Parse e.g. "delta@0.0", "powersing@0.0,a=0.25", "halfplane,nu=(0.6,0.8),c=0.0",
    "sum(delta@-1;heaviside@1)", "smooth@0", "planewave,k=20"."""
    s = spec.strip()
    if s.startswith("sum(") and s.endswith(")"):
        terms = []
        for part in _split_top(s[4:-1], ";"):
            m = re.match(r"^\s*([-+0-9.eE]+)\s*\*\s*(.+)$", part)
            coef, body = (float(m.group(1)), m.group(2)) if m else (1.0, part)
            terms.append((coef, parse_distribution(body, dim, L)))
        if not terms:
            raise ValidationError("empty sum")
        return WeightedSum(terms, dim, L)
    head, *rest = _split_top(s, ",")
    name, _, at = head.partition("@")
    name = name.strip().lower()
    kw = {}
    for item in rest:
        key, eq, val = item.partition("=")
        if not eq:
            raise ValidationError(f"bad parameter {item!r} in {spec!r}")
        kw[key.strip()] = val.strip()
    try:
        dist = _build(name, at, kw, dim, L)
    except ValueError as exc:
        raise ValidationError(f"cannot parse {spec!r}: {exc}") from None
    if dist is None:
        raise ValidationError(f"unknown distribution {spec!r}")
    if kw:
        raise ValidationError(f"unknown parameter(s) {', '.join(sorted(kw))} in {spec!r}")
    return dist


def _build(name, at, kw, dim, L):
    if name == "delta":
        return Delta(_parse_point(at or ("0" if dim == 1 else "(0,0)"), dim), dim, L=L)
    if name == "heaviside":
        return Heaviside(float(at or 0), dim, L=L)
    if name in ("powersing", "power_sing"):
        return PowerSingularity(float(at or 0), float(kw.pop("a", 0.25)), dim, L=L)
    if name in ("smooth", "smooth_bump"):
        x0 = _parse_point(at, dim) if at else (0.0 if dim == 1 else np.zeros(2))
        return SmoothBump(x0, float(kw.pop("width", 0.15)), dim, L=L)
    if name in ("planewave", "plane_wave"):
        return PlaneWave(_parse_point(kw.pop("k", "10"), dim), dim, L=L)
    if name in ("halfplane", "halfplane_indicator"):
        nu = _parse_point(kw.pop("nu", "(0.6,0.8)"), 2)
        return HalfPlane(nu, float(kw.pop("c", 0.0)), dim, L=L)
    return None


CATALOG = {
    "delta@x0": "point mass; s* = -n/2, every direction singular",
    "heaviside@x0": "jump (1D); s* = 1/2, directions +-1",
    "powersing@x0,a=A": "|x-x0|^-a, 0<a<1 (1D); s* = 1/2 - a",
    "planewave,k=K": "smooth oscillation; no singularities",
    "smooth@x0": "Gaussian bump; no singularities",
    "halfplane,nu=(a,b),c=C": "indicator of x.nu > c (2D); s* = 1/2 on the line, directions +-nu",
    "sum(A;B;...)": "weighted sum, optional coefficient prefix 2*delta@0",
}
