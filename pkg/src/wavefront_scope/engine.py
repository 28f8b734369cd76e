"""Wave packet transform W_{phi_lambda} u(x, lambda xi) on phase-space lattices.

Two independent routes compute the same continuum integral

    W_phi u(x, xi) = int conj(phi(y - x)) u(y) exp(-i y.xi) dy

* ``wpt_sampled``: Riemann sum dx^n * sum_y on a sampled signal, evaluated with
  an FFT (probes on a shifted frequency lattice) or exact direct sums.
* ``wpt_quadrature``: the Plancherel form
  (2 pi)^-n int u_hat(eta) conj(phi_hat_lambda(eta - xi)) exp(i x.(eta - xi)) d eta
  by composite Gauss-Legendre quadrature over the window's frequency support.
"""

from __future__ import annotations

import json
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss

from .distributions import Grid, SampledSignal, TestDistribution
from .errors import (NyquistExceeded, ResolutionBudget, Unsupported, ValidationError,
                     WindowUnresolved)
from .windows import ScaledWindow, Window, scale

log = logging.getLogger(__name__)

NYQUIST_SAFETY = 0.9
MAX_WINDOW_STEP = 0.25  # lambda^(1/2) dx must not exceed this
ROUNDOFF_FLOOR = 1e-14  # attainable absolute accuracy relative to the integrand mass
_EPS = float(np.finfo(float).eps)
_GL_T, _GL_W = leggauss(16)


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class LambdaSchedule:
    """Geometric scales lambda_j = lam0 * ratio^j, j = 0..count-1."""

    lam0: float = 4.0
    ratio: float = math.sqrt(2.0)
    count: int = 21

    def __post_init__(self):
        if self.count < 1:
            raise ValidationError("lambda schedule is empty")
        if not self.lam0 >= 1.0:
            raise ValidationError(f"lambda_0 must be >= 1, got {self.lam0}")
        if not self.ratio > 1.0:
            raise ValidationError(f"schedule ratio must exceed 1, got {self.ratio}")

    @property
    def values(self):
        return self.lam0 * self.ratio ** np.arange(self.count)

    @property
    def lam_max(self):
        return float(self.values[-1])

    @classmethod
    def default(cls, dim):
        return cls(4.0, math.sqrt(2.0), 21 if dim == 1 else 13)


def _axis(center, half, n):
    return np.linspace(center - half, center + half, n) if n > 1 else np.array([float(center)])


@dataclass(frozen=True)
class PhaseRegion:
    """Position box K and frequency box V with uniform tensor probe lattices.

    ``n_x`` and ``n_xi`` count points per axis.
    """

    x_center: tuple
    x_half: float
    xi_center: tuple
    xi_half: float
    n_x: int = 9
    n_xi: int = 9

    def __post_init__(self):
        object.__setattr__(self, "x_center", tuple(float(v) for v in np.atleast_1d(self.x_center)))
        object.__setattr__(self, "xi_center", tuple(float(v) for v in np.atleast_1d(self.xi_center)))
        if len(self.x_center) != len(self.xi_center) or len(self.x_center) not in (1, 2):
            raise ValidationError("region centres must share dimension 1 or 2")
        if self.n_x < 1 or self.n_xi < 1:
            raise ValidationError("probe lattices must be nonempty")
        if self.x_half < 0 or self.xi_half < 0:
            raise ValidationError("region half-widths must be nonnegative")
        c = np.abs(np.asarray(self.xi_center))
        if np.all(c <= self.xi_half + 1e-12):
            raise ValidationError("0 lies in the closure of the frequency box V")

    @property
    def dim(self):
        return len(self.x_center)

    @property
    def x_axes(self):
        return [_axis(c, self.x_half, self.n_x) for c in self.x_center]

    @property
    def xi_axes(self):
        return [_axis(c, self.xi_half, self.n_xi) for c in self.xi_center]

    @staticmethod
    def _points(axes):
        if len(axes) == 1:
            return axes[0][:, None]
        a, b = np.meshgrid(*axes, indexing="ij")
        return np.stack([a.ravel(), b.ravel()], axis=-1)

    @property
    def x_points(self):
        return self._points(self.x_axes)

    @property
    def xi_points(self):
        return self._points(self.xi_axes)

    @property
    def cell_weight(self):
        dx = 2 * self.x_half / (self.n_x - 1) if self.n_x > 1 else 1.0
        dxi = 2 * self.xi_half / (self.n_xi - 1) if self.n_xi > 1 else 1.0
        return (dx * dxi) ** self.dim

    @classmethod
    def around(cls, x0, direction, dim, x_half=0.2, xi_half=0.2, n_xi=None,
               lam_max=None, n_x=None):
        """Default neighbourhoods K = x0 + [-x_half, x_half]^n, V = xi0 + [-xi_half, xi_half]^n.

        When ``n_x`` is omitted in 1D the position lattice is refined until its step is
        at most half the narrowest window width lambda_max^(-1/2), so the Riemann sums
        over K resolve the window. 2D defaults to 9 x 9 probes in both K and V.
        """
        x0 = np.atleast_1d(np.asarray(x0, dtype=float))
        d = np.atleast_1d(np.asarray(direction, dtype=float))
        d = d / np.linalg.norm(d)
        if n_x is None:
            n_x = 9
            if lam_max is not None and dim == 1:
                need = int(math.ceil(2 * x_half * 2 * math.sqrt(lam_max))) + 1
                n_x = max(9, need + (1 - need % 2))
        if n_xi is None:
            n_xi = 9
        return cls(tuple(x0), x_half, tuple(d), xi_half, n_x, n_xi)


@dataclass
class WptVolume:
    """W_{phi_lambda_j} u(x, lambda_j xi), indexed (j, x-lattice index, xi-lattice index)."""

    region: PhaseRegion
    schedule: LambdaSchedule
    values: np.ndarray
    window: str
    dist: str
    path: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        expected = (self.schedule.count, self.region.n_x ** self.region.dim,
                    self.region.n_xi ** self.region.dim)
        if self.values.shape != expected:
            raise ValidationError(f"volume shape {self.values.shape} != {expected}")

    @property
    def lambdas(self):
        return self.schedule.values

    def export_raw(self, path):
        """Little-endian float64 (re, im) pairs, lambda-major, then x, then xi; JSON sidecar."""
        data = np.ascontiguousarray(self.values.astype("<c16"))
        with open(path, "wb") as fh:
            fh.write(data.view("<f8").tobytes())
        sidecar = {
            "dtype": "float64 little-endian (re, im) pairs",
            "order": ["lambda", "x", "xi"],
            "shape": list(self.values.shape),
            "lambdas": [float(v) for v in self.lambdas],
            "x_points": self.region.x_points.tolist(),
            "xi_points": self.region.xi_points.tolist(),
            "window": self.window,
            "distribution": self.dist,
            "path": self.path,
        }
        with open(str(path) + ".json", "w", encoding="utf-8") as fh:
            json.dump(sidecar, fh, indent=2)
        return path


def mirrored_volume(vol: WptVolume) -> WptVolume:
    """Volume over the region with V replaced by -V, valid when u and phi are real.

    Then W(x, -xi) = conj(W(x, xi)); negating a centred tensor lattice reverses each axis.
    """
    r = vol.region
    region = PhaseRegion(r.x_center, r.x_half, tuple(-c for c in r.xi_center), r.xi_half,
                         r.n_x, r.n_xi)
    shape = vol.values.shape[:2] + (r.n_xi,) * r.dim
    vals = np.conj(vol.values.reshape(shape))
    vals = np.flip(vals, axis=tuple(range(2, 2 + r.dim))).reshape(vol.values.shape)
    meta = dict(vol.meta, mirrored=True)
    return WptVolume(region, vol.schedule, np.ascontiguousarray(vals), vol.window, vol.dist,
                     vol.path, meta)


def read_raw(path):
    """Inverse of ``WptVolume.export_raw``: returns (values, sidecar dict)."""
    with open(str(path) + ".json", encoding="utf-8") as fh:
        meta = json.load(fh)
    raw = np.fromfile(path, dtype="<f8")
    return raw.view("<c16").reshape(meta["shape"]), meta


# ---------------------------------------------------------------------------
# sampled path


def check_sampled_admissible(grid: Grid, lam: float, xi_max: float):
    """Raise before any transform when the grid cannot represent the request."""
    if lam * xi_max >= NYQUIST_SAFETY * grid.nyquist:
        raise NyquistExceeded(
            f"lambda*|xi| = {lam * xi_max:.4g} exceeds {NYQUIST_SAFETY} x Nyquist {grid.nyquist:.4g}")
    if math.sqrt(lam) * grid.dx > MAX_WINDOW_STEP:
        raise WindowUnresolved(
            f"lambda^(1/2) dx = {math.sqrt(lam) * grid.dx:.3g} > {MAX_WINDOW_STEP}")


def _support_slices(values):
    """Bounding box (per axis slice) of the nonzero samples."""
    nz = np.nonzero(values)
    if nz[0].size == 0:
        return None
    return tuple(slice(int(ix.min()), int(ix.max()) + 1) for ix in nz)


def _lattice_offset(xi, step):
    """If xi (k, n) = xi0 + integer multiples of ``step`` per axis, return (xi0, ints)."""
    base = xi[0]
    q = (xi - base) / step
    ints = np.rint(q)
    if np.max(np.abs(q - ints), initial=0.0) < 1e-9:
        return base, ints.astype(int)
    return None


def wpt_sampled(u: SampledSignal, w: ScaledWindow, x_list, xi_list, method="auto", mass=None):
    """Riemann-sum wave packet transform, shape (len(x_list), len(xi_list)).

    ``method``: "fft" (xi on a shifted FFT lattice: one FFT of the windowed signal per
    x after an exact phase ramp), "direct" (exact exponential sums at arbitrary xi), or
    "auto" (fft when the probes allow it and there are many of them). When ``mass`` is
    a list, the largest absolute Riemann mass dx^n sum |conj(phi) u| is appended.
    """
    grid = u.grid
    n = grid.dim
    x_list = np.asarray(x_list, dtype=float).reshape(-1, n)
    xi_list = np.asarray(xi_list, dtype=float).reshape(-1, n)
    xi_max = float(np.max(np.abs(xi_list))) if xi_list.size else 0.0
    check_sampled_admissible(grid, w.lam, xi_max / w.lam)
    out = np.zeros((len(x_list), len(xi_list)), dtype=complex)
    box = _support_slices(u.values)
    if box is None or not len(x_list) or not len(xi_list):
        return out
    axes = [grid.axis[s] for s in box]
    vals = u.values[box]
    scale_dx = grid.dx ** n
    lattice = _lattice_offset(xi_list, grid.dxi)
    use_fft = method == "fft" or (method == "auto" and lattice is not None and len(xi_list) > 64)
    if method == "fft" and lattice is None:
        raise ValidationError("fft method needs probes on a shifted frequency lattice")
    if mass is not None:
        mass.append(scale_dx * max(_abs_mass(axes, vals, w, x) for x in x_list))
    if use_fft:
        return _sampled_fft(grid, axes, box, vals, w, x_list, xi_list, lattice) * scale_dx
    # exact sums: exp(-i y.xi) factorises per axis
    E = [np.exp(-1j * np.outer(a, xi_list[:, k])) for k, a in enumerate(axes)]
    for i, x in enumerate(x_list):
        if n == 1:
            g = np.conj(w.eval(axes[0] - x[0])) * vals
            out[i] = g @ E[0]
        else:
            Y1, Y2 = np.meshgrid(axes[0] - x[0], axes[1] - x[1], indexing="ij")
            g = np.conj(w.eval(np.stack([Y1, Y2], -1))) * vals
            out[i] = np.einsum("ak,ab,bk->k", E[0], g, E[1], optimize=True)
    return out * scale_dx


def _abs_mass(axes, vals, w, x):
    if len(axes) == 1:
        return float(np.sum(np.abs(w.eval(axes[0] - x[0]) * vals)))
    Y1, Y2 = np.meshgrid(axes[0] - x[0], axes[1] - x[1], indexing="ij")
    return float(np.sum(np.abs(w.eval(np.stack([Y1, Y2], -1)) * vals)))


def _sampled_fft(grid, axes, box, vals, w, x_list, xi_list, lattice):
    xi0, ints = lattice
    n = grid.dim
    N = grid.size
    res = np.empty((len(x_list), len(xi_list)), dtype=complex)
    ramp = np.exp(-1j * axes[0] * xi0[0]) if n == 1 else np.multiply.outer(
        np.exp(-1j * axes[0] * xi0[0]), np.exp(-1j * axes[1] * xi0[1]))
    # exp(-i y (xi0 + k dxi)) with y = -L + j dx: the FFT bin k carries exp(i k dxi L)
    # relative to the fft convention exp(-2 pi i j k / N)
    bins = ints % N
    shift = np.exp(1j * ints * grid.dxi * grid.L)
    for i, x in enumerate(x_list):
        full = np.zeros((N,) * n, dtype=complex)
        if n == 1:
            g = np.conj(w.eval(axes[0] - x[0])) * vals * ramp
        else:
            Y1, Y2 = np.meshgrid(axes[0] - x[0], axes[1] - x[1], indexing="ij")
            g = np.conj(w.eval(np.stack([Y1, Y2], -1))) * vals * ramp
        full[box] = g
        F = np.fft.fftn(full)
        if n == 1:
            res[i] = F[bins[:, 0]] * shift[:, 0]
        else:
            res[i] = F[bins[:, 0], bins[:, 1]] * shift[:, 0] * shift[:, 1]
    return res


# ---------------------------------------------------------------------------
# quadrature path


def _panels(a, b, width):
    n = max(1, int(math.ceil((b - a) / width)))
    edges = np.linspace(a, b, n + 1)
    h = 0.5 * np.diff(edges)
    nodes = (edges[:-1, None] + h[:, None] * (_GL_T[None, :] + 1.0)).ravel()
    weights = (h[:, None] * _GL_W[None, :]).ravel()
    return nodes, weights


def _phase_extent(dist):
    """Largest |y| at which u carries mass; bounds the oscillation rate of u_hat."""
    cut = dist.cutoff
    ext = 0.0
    for b in cut.boxes:
        ext = max(ext, abs(b.support[0]), abs(b.support[1]))
    if cut.dim == 2:
        ext *= math.sqrt(2.0)
    return ext


def _quad_one(uhat, w: ScaledWindow, xi, width, x_axes=None, x_points=None, mass=None):
    """W for one scaled frequency ``xi`` at a tensor lattice (``x_axes``) or at scattered points.

    When ``mass`` is a list, the absolute integrand mass (2 pi)^-n sum |F| is appended to it;
    it bounds the attainable roundoff of the oscillatory sum.
    """
    n = w.dim
    R = w.ft_radius
    rules = [_panels(c - R, c + R, width) for c in xi]
    if n == 1:
        eta, wt = rules[0]
        F = uhat(eta) * np.conj(w.eval_ft(eta - xi[0])) * wt
        if mass is not None:
            mass.append(float(np.sum(np.abs(F))) / (2 * math.pi))
        xs = x_axes[0] if x_axes is not None else x_points[:, 0]
        return np.exp(1j * np.outer(xs, eta - xi[0])) @ F / (2 * math.pi)
    (e1, w1), (e2, w2) = rules
    H1, H2 = np.meshgrid(e1, e2, indexing="ij")
    eta = np.stack([H1, H2], -1)
    F = uhat(eta) * np.conj(w.eval_ft(eta - xi)) * np.outer(w1, w2)
    if mass is not None:
        mass.append(float(np.sum(np.abs(F))) / (2 * math.pi) ** 2)
    if x_axes is not None:
        E1 = np.exp(1j * np.outer(x_axes[0], e1 - xi[0]))
        E2 = np.exp(1j * np.outer(x_axes[1], e2 - xi[1]))
        return (E1 @ F @ E2.T).ravel() / (2 * math.pi) ** 2
    E1 = np.exp(1j * np.outer(x_points[:, 0], e1 - xi[0]))
    E2 = np.exp(1j * np.outer(x_points[:, 1], e2 - xi[1]))
    return np.sum((E1 @ F) * E2, axis=1) / (2 * math.pi) ** 2


def quadrature_width(uhat, w: ScaledWindow, xi, rate, tol=1e-9, max_refine=5, **where):
    """Panel width for the frequency integral, refined until halving changes < tol.

    The change is measured relative to the largest value, floored at ``ROUNDOFF_FLOOR``
    times the absolute integrand mass: below that, cancellation noise dominates.
    """
    width = min(10.0 / max(rate, 1e-3), w.ft_radius / 2)
    prev = _quad_one(uhat, w, xi, width, **where)
    for _ in range(max_refine):
        mass = []
        cur = _quad_one(uhat, w, xi, width / 2, mass=mass, **where)
        err = float(np.max(np.abs(cur - prev)))
        scale = max(float(np.max(np.abs(cur))), ROUNDOFF_FLOOR / tol * mass[0])
        if err <= tol * scale or scale < 1e-300:
            return width  # the coarser rule already meets tol
        width /= 2
        prev = cur
    log.warning("quadrature refinement did not converge (width %.3g)", width)
    return width


def wpt_quadrature(uhat, w: ScaledWindow, x_list, xi_list, rate=None, tol=1e-9):
    """Frequency-side wave packet transform, shape (len(x_list), len(xi_list)).

    ``uhat`` is a TestDistribution (its analytic transform is used) or a callable.
    """
    extent = 3.0
    if isinstance(uhat, TestDistribution):
        if not uhat.has_analytic_ft:
            raise Unsupported(f"{uhat.spec} has no analytic Fourier transform")
        extent = _phase_extent(uhat)
        uhat = uhat.fourier_analytic
    n = w.dim
    x_list = np.asarray(x_list, dtype=float).reshape(-1, n)
    xi_list = np.asarray(xi_list, dtype=float).reshape(-1, n)
    if rate is None:
        rate = float(np.max(np.linalg.norm(x_list, axis=-1), initial=0.0)) + extent
    out = np.empty((len(x_list), len(xi_list)), dtype=complex)
    for k, xi in enumerate(xi_list):
        width = quadrature_width(uhat, w, xi, rate, tol, x_points=x_list)
        out[:, k] = _quad_one(uhat, w, xi, width, x_points=x_list)
    return out


def roundoff_floor(mass, phase):
    """Absolute error of an oscillatory sum with absolute ``mass`` and phases up to ``phase``.

    exp(i t) loses about eps * |t| in absolute accuracy, and the terms add that
    error with weight ``mass``.
    """
    return 4 * _EPS * (1.0 + phase) * mass


def _union_rule(centres, radius, width):
    """Panels of ``width`` covering every [c - radius, c + radius]; returns (lo, nodes, weights)."""
    lo = float(np.min(centres)) - radius
    n = max(1, int(math.ceil((float(np.max(centres)) + radius - lo) / width)))
    left = lo + width * np.arange(n)
    h = 0.5 * width
    nodes = left[:, None] + h * (_GL_T[None, :] + 1.0)
    return lo, nodes.ravel(), np.broadcast_to(h * _GL_W, nodes.shape).ravel()


def _panel_slice(c, radius, lo, width, count):
    p0 = max(0, int(math.floor((c - radius - lo) / width)))
    p1 = min(count, int(math.ceil((c + radius - lo) / width)))
    k = len(_GL_T)
    return slice(p0 * k, p1 * k)


def _slab_quadrature(dist, w, region, lam, rate, tol):
    """One lambda slab on the tensor lattices of ``region``.

    u_hat is evaluated once on a panel grid covering the window supports of all
    frequency probes; each probe uses the panels overlapping its own support.
    """
    uhat = dist.fourier_analytic
    x_axes = region.x_axes
    xi_axes = [lam * a for a in region.xi_axes]
    mid = np.array([a[len(a) // 2] for a in xi_axes])
    width = quadrature_width(uhat, w, mid, rate, tol, x_axes=x_axes)
    R = w.ft_radius
    rules = [_union_rule(a, R, width) for a in xi_axes]
    counts = [len(r[1]) // len(_GL_T) for r in rules]
    n = region.dim
    if n == 1:
        U = uhat(rules[0][1])
    else:
        H1, H2 = np.meshgrid(rules[0][1], rules[1][1], indexing="ij")
        U = uhat(np.stack([H1, H2], -1))
    norm = (2 * math.pi) ** n
    cols = []
    mass = 0.0
    for xi in region._points(xi_axes):
        sl = [_panel_slice(c, R, r[0], width, m) for c, r, m in zip(xi, rules, counts)]
        if n == 1:
            eta, wt = rules[0][1][sl[0]], rules[0][2][sl[0]]
            F = U[sl[0]] * np.conj(w.eval_ft(eta - xi[0])) * wt
            mass = max(mass, float(np.sum(np.abs(F))) / norm)
            cols.append(np.exp(1j * np.outer(x_axes[0], eta - xi[0])) @ F / norm)
            continue
        e1, e2 = rules[0][1][sl[0]] - xi[0], rules[1][1][sl[1]] - xi[1]
        w1, w2 = rules[0][2][sl[0]], rules[1][2][sl[1]]
        fac = w.ft_factors([e1, e2])
        if fac is not None:
            F = U[sl[0], sl[1]] * np.outer(np.conj(fac[0]) * w1, np.conj(fac[1]) * w2)
        else:
            D1, D2 = np.meshgrid(e1, e2, indexing="ij")
            F = U[sl[0], sl[1]] * np.conj(w.eval_ft(np.stack([D1, D2], -1))) * np.outer(w1, w2)
        mass = max(mass, float(np.sum(np.abs(F))) / norm)
        E1 = np.exp(1j * np.outer(x_axes[0], e1))
        E2 = np.exp(1j * np.outer(x_axes[1], e2))
        cols.append((E1 @ F @ E2.T).ravel() / norm)
    phase = rate * (float(np.max(np.abs(np.concatenate(xi_axes)))) + R)
    return np.stack(cols, axis=-1), width, roundoff_floor(mass, phase)


# ---------------------------------------------------------------------------
# volumes


def default_grid(dim, L=math.pi):
    return Grid(L, 18 if dim == 1 else 10, dim)


def choose_grid(dim, lam_max, xi_max, L=math.pi, memory_budget=2 ** 31, m=None):
    """Smallest admissible power-of-two grid (or check the requested exponent)."""
    candidates = [m] if m is not None else range(8, 25 if dim == 1 else 14)
    for mm in candidates:
        g = Grid(L, mm, dim)
        bytes_needed = 16 * 4 * g.size ** dim
        try:
            check_sampled_admissible(g, lam_max, xi_max)
        except (NyquistExceeded, WindowUnresolved):
            if m is not None:
                raise
            continue
        if bytes_needed > memory_budget:
            raise ResolutionBudget(f"grid 2^{mm} per axis needs {bytes_needed / 2**20:.0f} MiB")
        return g
    raise ResolutionBudget("no admissible grid within the memory budget")


def worker_count():
    env = os.environ.get("WFS_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValidationError(f"WFS_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def resolve_path(dist, path):
    if path not in ("sampled", "quadrature", "auto"):
        raise ValidationError(f"unknown path {path!r}")
    if path == "auto":
        return "quadrature" if dist.has_analytic_ft else "sampled"
    if path == "quadrature" and not dist.has_analytic_ft:
        raise Unsupported(f"{dist.spec} has no analytic Fourier transform")
    return path


def scaled_volume(dist: TestDistribution, window: Window, region: PhaseRegion,
                  schedule: LambdaSchedule, path="auto", grid: Grid | None = None,
                  tol=1e-9, workers=None) -> WptVolume:
    """Fill W_{phi_lambda_j} u(x, lambda_j xi) over the region lattice for every lambda_j."""
    if region.dim != dist.dim or window.dim != dist.dim:
        raise ValidationError("distribution, window and region dimensions differ")
    path = resolve_path(dist, path)
    lams = schedule.values
    xi_pts = region.xi_points
    xi_max = float(np.max(np.linalg.norm(xi_pts, axis=-1)))
    signal = None
    if path == "sampled":
        grid = grid or default_grid(dist.dim, dist.L)
        for lam in lams:
            check_sampled_admissible(grid, lam, float(np.max(np.abs(xi_pts))))
        signal = dist.sample(grid)
    x_pts = region.x_points
    rate = float(np.max(np.linalg.norm(x_pts, axis=-1))) + _phase_extent(dist)

    def slab(lam):
        w = scale(window, lam)
        xs = lam * xi_pts
        if path == "sampled":
            mass = []
            vals = wpt_sampled(signal, w, x_pts, xs, mass=mass)
            phase = float(np.max(np.abs(xs))) * signal.grid.L * dist.dim
            return vals, None, roundoff_floor(mass[0] if mass else 0.0, phase)
        return _slab_quadrature(dist, w, region, lam, rate, tol)

    n_workers = workers or worker_count()
    if n_workers > 1 and len(lams) > 1:
        with ThreadPoolExecutor(n_workers) as pool:
            results = list(pool.map(slab, lams))
    else:
        results = [slab(lam) for lam in lams]
    values = np.stack([r[0] for r in results])
    meta = {"grid": None if grid is None else {"L": grid.L, "m": grid.m},
            "panel_widths": [r[1] for r in results] if path == "quadrature" else None,
            "xi_max": xi_max,
            "noise_floor": [r[2] for r in results]}
    return WptVolume(region, schedule, values, window.name, dist.spec, path, meta)
