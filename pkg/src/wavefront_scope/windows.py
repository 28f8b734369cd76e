"""Basic wave packets (Schwartz windows) and their L2-normalised dilations.

Fourier convention throughout the package::

    F[f](eta) = int f(x) exp(-i x.eta) dx,   f(x) = (2 pi)^-n int F[f](eta) exp(i x.eta) deta

One-dimensional windows take coordinate arrays of any shape; two-dimensional
windows take arrays whose last axis has length 2.
"""

from __future__ import annotations

import math
import re
import threading

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate, special
from scipy.interpolate import CubicSpline

from .errors import ValidationError

SQRT2PI = math.sqrt(2.0 * math.pi)


def smooth_step(u):
    """C-infinity step built from exp(-1/t): 0 for u <= 0, 1 for u >= 1."""
    u = np.clip(np.asarray(u, dtype=float), 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        a = np.where(u > 0, np.exp(-1.0 / np.where(u > 0, u, 1.0)), 0.0)
        b = np.where(u < 1, np.exp(-1.0 / np.where(u < 1, 1.0 - u, 1.0)), 0.0)
    return a / (a + b)


def _radius(x, dim):
    x = np.asarray(x, dtype=float)
    if dim == 1:
        return np.abs(x)
    return np.sqrt(np.sum(x * x, axis=-1))


def _radius2(x, dim):
    x = np.asarray(x, dtype=float)
    if dim == 1:
        return x * x
    return x[..., 0] ** 2 + x[..., 1] ** 2


def _gl_pieces(edges, n):
    """Composite Gauss-Legendre nodes/weights over consecutive intervals."""
    t, w = leggauss(n)
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        nodes.append(0.5 * (b - a) * t + 0.5 * (a + b))
        weights.append(0.5 * (b - a) * w)
    return np.concatenate(nodes), np.concatenate(weights)


class Window:
    """A nonzero Schwartz function phi with evaluators for phi and its Fourier transform.

    Subclasses implement ``_eval`` and ``_eval_ft``. Instances are immutable
    once constructed, so evaluators are safe to call from many threads.
    """

    name: str
    dim: int
    analytic_ft: bool = True
    #: phi is real-valued (all catalog windows are)
    real_valued: bool = True
    #: half-width of a box outside which |phi_hat| < 1e-14 * max|phi_hat|
    ft_radius: float
    #: radius beyond which |phi| < 1e-16 * max|phi|; None when not attained on a sane range
    support_radius: float | None

    def __init__(self, name, dim):
        if dim not in (1, 2):
            raise ValidationError(f"window dimension must be 1 or 2, got {dim}")
        self.name = name
        self.dim = dim

    def eval(self, x):
        return self._eval(np.asarray(x, dtype=float))

    def eval_ft(self, eta):
        return self._eval_ft(np.asarray(eta, dtype=float))

    def ft_factors(self, axes):
        """Per-axis 1D factors whose outer product is phi_hat on the tensor grid ``axes``.

        None when the transform does not factorise.
        """
        return None

    @property
    def l2_norm(self):
        return self._l2_norm

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r}, dim={self.dim})"


class GaussianWindow(Window):
    def __init__(self, dim):
        super().__init__("gaussian", dim)
        self._l2_norm = math.pi ** (dim / 4.0)
        self.ft_radius = math.sqrt(2.0 * math.log(1e14))
        self.support_radius = math.sqrt(2.0 * math.log(1e16))

    def _eval(self, x):
        return np.exp(-0.5 * _radius2(x, self.dim)) + 0j

    def _eval_ft(self, eta):
        return SQRT2PI ** self.dim * np.exp(-0.5 * _radius2(eta, self.dim)) + 0j

    def ft_factors(self, axes):
        return [SQRT2PI * np.exp(-0.5 * np.asarray(a, dtype=float) ** 2) + 0j for a in axes]


class HermiteWindow(Window):
    """H_k(x1) exp(-|x|^2/2) with H_1 = x, H_2 = x^2 - 1."""

    def __init__(self, dim, k):
        if k not in (1, 2):
            raise ValidationError(f"hermite order must be 1 or 2, got {k}")
        super().__init__(f"hermite{k}", dim)
        self.k = k
        norm2_1d = math.sqrt(math.pi) * (0.5 if k == 1 else 0.75)
        self._l2_norm = math.sqrt(norm2_1d * math.sqrt(math.pi) ** (dim - 1))
        # |eta|^k exp(-eta^2/2) falls below 1e-14 of its peak
        peak = k ** (k / 2) * math.exp(-k / 2)
        grid = np.linspace(0, 20, 200001)
        prof = grid ** k * np.exp(-0.5 * grid ** 2)
        self.ft_radius = float(grid[np.nonzero(prof > 1e-14 * peak)[0][-1]])
        prof = np.abs(grid ** k - (1 if k == 2 else 0)) * np.exp(-0.5 * grid ** 2)
        self.support_radius = float(grid[np.nonzero(prof > 1e-16 * prof.max())[0][-1]])

    def _poly(self, t):
        return t if self.k == 1 else t * t - 1.0

    def _eval(self, x):
        x1 = x if self.dim == 1 else x[..., 0]
        r = _radius(x, self.dim)
        return (self._poly(x1) * np.exp(-0.5 * r * r)).astype(complex)

    def _eval_ft(self, eta):
        # F[(d/dx)^k g] = (i eta)^k g_hat and H_k e^{-x^2/2} = (-1)^k (d/dx)^k e^{-x^2/2}
        e1 = eta if self.dim == 1 else eta[..., 0]
        r = _radius(eta, self.dim)
        factor = (-1j * e1) if self.k == 1 else -(e1 * e1)
        return factor * SQRT2PI ** self.dim * np.exp(-0.5 * r * r)

    def ft_factors(self, axes):
        out = [SQRT2PI * np.exp(-0.5 * np.asarray(a, dtype=float) ** 2) + 0j for a in axes]
        e1 = np.asarray(axes[0], dtype=float)
        out[0] = out[0] * ((-1j * e1) if self.k == 1 else -(e1 * e1))
        return out


class AnnulusWindow(Window):
    """Window whose Fourier transform is a smooth radial bump on r1 <= |eta| <= r2.

    phi_hat vanishes identically near the origin, so every moment of phi is
    zero. phi itself is tabulated once by quadrature of the inverse transform
    and interpolated with a cubic spline.
    """

    _nodes_per_piece = 256
    _table_step = 1.0 / 256

    def __init__(self, dim, r1, r2):
        if not r1 > 0:
            raise ValidationError(f"annulus requires r1 > 0, got {r1}")
        if not r2 > r1:
            raise ValidationError(f"annulus requires r2 > r1, got r1={r1}, r2={r2}")
        super().__init__(f"annulus({r1:g},{r2:g})", dim)
        self.r1, self.r2 = float(r1), float(r2)
        self.delta = (self.r2 - self.r1) / 4.0
        self.ft_radius = self.r2
        self.support_radius = None
        self._edges = [self.r1, self.r1 + self.delta, self.r2 - self.delta, self.r2]
        k, wk = _gl_pieces(self._edges, self._nodes_per_piece)
        self._k, self._wk = k, wk * self.profile(k)
        # Plancherel: ||phi||^2 = (2pi)^-n int |phi_hat|^2
        if dim == 1:
            norm2 = 2.0 * np.sum(wk * self.profile(k) ** 2) / (2 * math.pi)
        else:
            norm2 = np.sum(wk * self.profile(k) ** 2 * k) / (2 * math.pi)
        self._l2_norm = float(math.sqrt(norm2))
        self._table_max = 512.0 if dim == 1 else 256.0
        t = np.arange(0.0, self._table_max + self._table_step, self._table_step)
        self._spline = CubicSpline(t, self._direct(t), bc_type=((1, 0.0), "not-a-knot"))

    def profile(self, r):
        r = np.asarray(r, dtype=float)
        return smooth_step((r - self.r1) / self.delta) * smooth_step((self.r2 - r) / self.delta)

    def _direct(self, t):
        """Inverse Fourier transform by Gauss-Legendre quadrature; exact radial formula."""
        t = np.asarray(t, dtype=float)
        out = np.empty(t.shape)
        flat, res = t.ravel(), out.ravel()
        tmax = float(flat.max()) if flat.size else 0.0
        if tmax * (self.r2 - self.r1) > 0.8 * math.pi * self._nodes_per_piece:
            n = int(tmax * (self.r2 - self.r1) / math.pi) + 64
            k, wk = _gl_pieces(self._edges, n)
            wk = wk * self.profile(k)
        else:
            k, wk = self._k, self._wk
        for start in range(0, flat.size, 4096):
            tt = flat[start:start + 4096, None]
            if self.dim == 1:
                res[start:start + 4096] = np.cos(tt * k) @ wk / math.pi
            else:
                res[start:start + 4096] = special.j0(tt * k) @ (wk * k) / (2 * math.pi)
        return out

    def _eval(self, x):
        r = _radius(x, self.dim)
        out = np.empty(r.shape)
        inside = r <= self._table_max
        out[inside] = self._spline(r[inside])
        if not inside.all():
            out[~inside] = self._direct(r[~inside])
        return out.astype(complex)

    def _eval_ft(self, eta):
        return self.profile(_radius(eta, self.dim)).astype(complex)


class BumpWindow(Window):
    """Compactly supported exp(1 - 1/(1-|x|^2)); Fourier transform by quadrature."""

    analytic_ft = False

    def __init__(self, dim):
        super().__init__("bump", dim)
        self.support_radius = 1.0
        r, w = _gl_pieces(np.linspace(0.0, 1.0, 9), 32)
        self._r, self._w = r, w * self._profile(r)
        if dim == 1:
            self._l2_norm = math.sqrt(2.0 * np.sum(w * self._profile(r) ** 2))
        else:
            self._l2_norm = math.sqrt(2 * math.pi * np.sum(w * self._profile(r) ** 2 * r))
        grid = np.linspace(0.0, 4000.0, 4001)
        ft = np.abs(self._radial_ft(grid))
        self.ft_radius = float(grid[np.nonzero(ft > 1e-14 * ft[0])[0][-1]])

    @staticmethod
    def _profile(r):
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            v = np.exp(1.0 - 1.0 / (1.0 - r * r))
        return np.where(r < 1.0, v, 0.0)

    def _radial_ft(self, rho):
        rho = np.asarray(rho, dtype=float)
        out = np.empty(rho.shape)
        flat, res = rho.ravel(), out.ravel()
        rmax = float(flat.max()) if flat.size else 0.0
        if rmax > 300:
            r, w = _gl_pieces(np.linspace(0.0, 1.0, 9), int(rmax / 8) + 32)
            w = w * self._profile(r)
        else:
            r, w = self._r, self._w
        for start in range(0, flat.size, 2048):
            q = flat[start:start + 2048, None]
            if self.dim == 1:
                res[start:start + 2048] = 2.0 * (np.cos(q * r) @ w)
            else:
                res[start:start + 2048] = 2 * math.pi * (special.j0(q * r) @ (w * r))
        return out

    def _eval(self, x):
        return self._profile(_radius(x, self.dim)).astype(complex)

    def _eval_ft(self, eta):
        return self._radial_ft(_radius(eta, self.dim)).astype(complex)


class ScaledWindow:
    """phi_lambda(x) = lambda^(n/4) phi(lambda^(1/2) x)."""

    def __init__(self, base: Window, lam: float):
        if not lam >= 1.0:
            raise ValidationError(f"scale factor must be >= 1, got {lam}")
        self.base = base
        self.lam = float(lam)
        self.dim = base.dim
        self._amp = self.lam ** (self.dim / 4.0)
        self._root = math.sqrt(self.lam)

    def eval(self, x):
        return self._amp * self.base.eval(self._root * np.asarray(x, dtype=float))

    def eval_ft(self, eta):
        return self.base.eval_ft(np.asarray(eta, dtype=float) / self._root) / self._amp

    def ft_factors(self, axes):
        f = self.base.ft_factors([np.asarray(a, dtype=float) / self._root for a in axes])
        if f is None:
            return None
        f[0] = f[0] / self._amp
        return f

    @property
    def l2_norm(self):
        return self.base.l2_norm

    @property
    def ft_radius(self):
        return self.base.ft_radius * self._root

    @property
    def support_radius(self):
        r = self.base.support_radius
        return None if r is None else r / self._root


def make_gaussian(dim=1) -> Window:
    return GaussianWindow(dim)


def make_hermite(dim=1, k=1) -> Window:
    return HermiteWindow(dim, k)


_annulus_cache: dict = {}
_annulus_lock = threading.Lock()


def make_annulus(dim=1, r1=1.0, r2=2.0) -> Window:
    # tabulation costs ~1 s; instances are immutable so sharing them is safe
    key = (dim, float(r1), float(r2))
    with _annulus_lock:
        if key not in _annulus_cache:
            _annulus_cache[key] = AnnulusWindow(dim, r1, r2)
        return _annulus_cache[key]


def make_bump(dim=1) -> Window:
    return BumpWindow(dim)


def scale(w: Window, lam: float) -> ScaledWindow:
    return ScaledWindow(w, lam)


_ANNULUS_RE = re.compile(r"^annulus\(\s*([^,]+),\s*([^)]+)\)$")


def parse_window(spec: str, dim: int) -> Window:
    """Resolve a scenario window name: gaussian, hermite1, hermite2, annulus(r1,r2), bump."""
    s = spec.strip().lower()
    if s == "gaussian":
        return make_gaussian(dim)
    if s in ("hermite1", "hermite2"):
        return make_hermite(dim, int(s[-1]))
    if s == "bump":
        return make_bump(dim)
    m = _ANNULUS_RE.match(s)
    if m:
        try:
            r1, r2 = float(m.group(1)), float(m.group(2))
        except ValueError:
            raise ValidationError(f"bad annulus radii in {spec!r}") from None
        return make_annulus(dim, r1, r2)
    raise ValidationError(f"unknown window {spec!r}")


WINDOW_NAMES = ("gaussian", "hermite1", "hermite2", "annulus(r1,r2)", "bump")


def _fd_derivative_at_zero(f, order, h):
    """Central finite difference of a 1D function at 0 (8th-order accurate stencil)."""
    # Richardson-free: a wide stencil from numpy's polynomial fit on symmetric nodes
    m = order + 8
    nodes = h * np.arange(-(m // 2), m // 2 + 1)
    vals = f(nodes)
    coeffs = np.polynomial.polynomial.polyfit(nodes / h, vals.real, len(nodes) - 1)
    coeffs_i = np.polynomial.polynomial.polyfit(nodes / h, vals.imag, len(nodes) - 1)
    fact = math.factorial(order) / h ** order
    return fact * (coeffs[order] + 1j * coeffs_i[order])


def moment(w: Window, alpha) -> float:
    """int x^alpha phi(x) dx.

    Windows with fast spatial decay are integrated directly with adaptive
    quadrature. For windows whose spatial tails decay too slowly for that
    (annulus), the identity int x^alpha phi = i^|alpha| d^alpha phi_hat(0) is used.
    """
    alpha = (int(alpha),) if np.isscalar(alpha) else tuple(int(a) for a in alpha)
    if len(alpha) != w.dim or any(a < 0 for a in alpha) or sum(alpha) > 8:
        raise ValidationError(f"multi-index {alpha} invalid for dim {w.dim} (|alpha| <= 8)")
    if w.support_radius is not None:
        R = 1.5 * w.support_radius if w.support_radius > 1.0 else w.support_radius
        if w.dim == 1:
            f = lambda t: (t ** alpha[0] * w.eval(t)).real
            val, _ = integrate.quad(f, -R, R, epsabs=1e-12, epsrel=1e-12, limit=400)
            return float(val)
        f = lambda t2, t1: (t1 ** alpha[0] * t2 ** alpha[1] * w.eval(np.array([t1, t2]))).real
        val, _ = integrate.dblquad(f, -R, R, -R, R, epsabs=1e-11, epsrel=1e-11)
        return float(val)
    # Fourier route: phi_hat is smooth near 0, use small symmetric stencils per axis
    h = 0.02
    if w.dim == 1:
        d = _fd_derivative_at_zero(lambda e: w.eval_ft(e), alpha[0], h)
    else:
        def along_first(e1):
            return np.array([
                _fd_derivative_at_zero(lambda e2: w.eval_ft(np.stack([np.full_like(e2, a), e2], -1)),
                                       alpha[1], h)
                for a in np.atleast_1d(e1)
            ])
        d = _fd_derivative_at_zero(along_first, alpha[0], h)
    return float((1j ** sum(alpha) * d).real)
