"""Gaussian-kernel transform at complex points, its 1D kernels, and the
representation of the transform through plane-integral data.

All magnitude-sensitive paths work with the weighted value
e^{-|Im z|^2/2h} * T_h f(z), whose defining integrand has a nonpositive real
exponent: it never overflows, for any (z, h).  The unweighted value is
recovered by one final exponential and may round to inf when the weight is
astronomically large; callers that only need decay rates should stay in the
weighted picture.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import geometry
from ._backend import sb_accumulate_batch
from .errors import ValidationError
from .phantoms import SampledField
from .radon import Sinogram

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ComplexPoint:
    """Point of complexified space, stored as a real/imaginary vector pair."""

    re: np.ndarray
    im: np.ndarray

    def __post_init__(self):
        re = np.asarray(self.re, dtype=float).reshape(-1)
        im = np.asarray(self.im, dtype=float).reshape(-1)
        if re.shape != im.shape:
            raise ValidationError("re and im must have the same dimension")
        if re.size not in (2, 3):
            raise ValidationError("only dimensions 2 and 3 are supported")
        if not (np.all(np.isfinite(re)) and np.all(np.isfinite(im))):
            raise ValidationError("complex point components must be finite")
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    @property
    def dim(self) -> int:
        return self.re.size

    @property
    def im_norm(self) -> float:
        return float(np.linalg.norm(self.im))

    def dot(self, omega: np.ndarray) -> complex:
        omega = np.asarray(omega, dtype=float)
        return complex(float(omega @ self.re), float(omega @ self.im))

    def holomorphic_square(self) -> complex:
        """Sum of squared components; distinct from the squared norm."""
        return complex(
            float(self.re @ self.re - self.im @ self.im),
            2.0 * float(self.re @ self.im),
        )

    def shifted(self, delta: np.ndarray) -> "ComplexPoint":
        return ComplexPoint(self.re + np.asarray(delta, dtype=float), self.im)


@dataclass(frozen=True)
class BargmannSample:
    """One transform evaluation: the raw complex value plus its stable weight."""

    point: ComplexPoint
    h: float
    value: complex
    weighted: float

    def __post_init__(self):
        if not (self.h > 0):
            raise ValidationError("h must be positive")
        expect = math.exp(min(0.0, -self.point.im_norm ** 2 / (2.0 * self.h)))
        if np.isfinite(self.value):
            got = expect * abs(self.value)
            if abs(got - self.weighted) > 1e-12 * max(self.weighted, got):
                raise ValidationError("weighted value inconsistent with value")

    @classmethod
    def from_weighted(cls, point: ComplexPoint, h: float, weighted_value: complex) -> "BargmannSample":
        arg = point.im_norm ** 2 / (2.0 * h)
        with np.errstate(over="ignore"):
            value = complex(weighted_value * np.exp(min(arg, 1e6)))
        return cls(point=point, h=h, value=value, weighted=abs(weighted_value))


def _check_h(h: float) -> None:
    if not (isinstance(h, (int, float)) and math.isfinite(h) and h > 0):
        raise ValidationError(f"h must be a positive real, got {h}")
    if h > 1.0:
        warnings.warn("h > 1 is outside the calibrated range", stacklevel=3)


def _sb_quadrature(f: SampledField, h: float, im_max: float, node_scale: float = 1.0):
    """Support-ball quadrature resolving both the Gaussian window (scale
    sqrt(h)) and the plane-wave phase (frequency |Im z|/h)."""
    r = f.support_radius
    gauss = r / math.sqrt(h)
    osc = r * im_max / h
    n_rad = int(np.clip(math.ceil((24 + 3.5 * gauss + 0.55 * osc) * node_scale), 24, 4000))
    if f.dim == 2:
        n_ang = int(np.clip(math.ceil((64 + 8 * gauss + 2.3 * osc) * node_scale), 64, 20000))
    else:
        n_pol = int(np.clip(math.ceil((16 + 2.5 * gauss + 0.4 * osc) * node_scale), 16, 1200))
        n_ang = (n_pol, 2 * n_pol)
    spheres, planes = f.surfaces()
    pts, wts = geometry.ball_quadrature(
        f.dim, f.support_center, r, n_ang, n_rad, spheres=spheres, planes=planes
    )
    return pts, wts, f(pts)


def sb_weighted_batch(
    f: SampledField,
    res: np.ndarray,
    ims: np.ndarray,
    h: float,
    node_scale: float = 1.0,
) -> np.ndarray:
    """Weighted transform e^{-|im|^2/2h} T_h f(re + i im) at a batch of points."""
    _check_h(h)
    res = np.atleast_2d(np.asarray(res, dtype=float))
    ims = np.atleast_2d(np.asarray(ims, dtype=float))
    if res.shape != ims.shape or res.shape[1] != f.dim:
        raise ValidationError("point batch shape mismatch")
    im_max = float(np.linalg.norm(ims, axis=1).max()) if ims.size else 0.0
    pts, wts, fv = _sb_quadrature(f, h, im_max, node_scale)
    return sb_accumulate_batch(pts, wts, fv, res, ims, h)


def sb_weighted(f: SampledField, zeta: ComplexPoint, h: float, node_scale: float = 1.0) -> complex:
    out = sb_weighted_batch(f, zeta.re[None, :], zeta.im[None, :], h, node_scale)
    return complex(out[0])


def sb_direct(f: SampledField, zeta: ComplexPoint, h: float, node_scale: float = 1.0) -> complex:
    """T_h f(zeta) by quadrature over the support ball.  May overflow to inf
    when |Im zeta|^2/2h exceeds the exponent range; see sb_weighted."""
    w = sb_weighted(f, zeta, h, node_scale)
    arg = zeta.im_norm ** 2 / (2.0 * h)
    with np.errstate(over="ignore"):
        return complex(w * np.exp(min(arg, 1e6)))


def sb_sample(f: SampledField, zeta: ComplexPoint, h: float, node_scale: float = 1.0) -> BargmannSample:
    return BargmannSample.from_weighted(zeta, h, sb_weighted(f, zeta, h, node_scale))


def hermite_he_values(k_max: int, x: np.ndarray) -> list:
    """Probabilists' Hermite values He_0..He_k at x (supports complex input)."""
    x = np.asarray(x)
    vals = [np.ones_like(x), x.copy()]
    for j in range(1, k_max):
        vals.append(x * vals[j] - j * vals[j - 1])
    return vals[: k_max + 1]


def hermite_q(dim: int, u) -> np.ndarray:
    """Degree dim-1 polynomial closing the odd-dimension kernel:
    Q(u) = e^{u^2/2} (|D|^{dim-1} e^{-(.)^2/2})(u) / e^{-u^2/2} prefactors
    removed, i.e. the parity-signed probabilists' Hermite polynomial."""
    if dim % 2 == 0:
        raise ValidationError("the Hermite closed form exists only in odd dimension")
    if dim < 1:
        raise ValidationError("dimension must be positive")
    u = np.asarray(u)
    sign = -1.0 if ((dim - 1) // 2) % 2 else 1.0
    return sign * hermite_he_values(dim - 1, u)[dim - 1]


def hermite_coefficient_bound(dim: int) -> float:
    """A with |Q(u)| <= A (1+|u|)^{dim-1}: the sum of |coefficients|."""
    if dim % 2 == 0:
        raise ValidationError("the Hermite closed form exists only in odd dimension")
    basis = np.zeros(dim)
    basis[dim - 1] = 1.0
    coeffs = np.polynomial.hermite_e.herme2poly(basis)
    return float(np.abs(coeffs).sum())


def _w_tail(z: np.ndarray, power: int, nu_max: float) -> np.ndarray:
    """W_p(z) = integral over u in (0, inf) of u^p e^{-u^2/2} e^{-u z} du,
    for Re z >= 0.  Gauss-Legendre panels on [0, 12]; the panel count tracks
    the oscillation frequency |Im z|."""
    t_max = 12.0
    panels = max(6, math.ceil(t_max * max(nu_max, 1.0) / 30.0))
    edges = np.linspace(0.0, t_max, panels + 1)
    gx, gw = geometry.gauss_legendre(24)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    u = (mid[:, None] + half[:, None] * gx[None, :]).ravel()
    w = (half[:, None] * gw[None, :]).ravel()
    base = w * u ** power * np.exp(-0.5 * u * u)
    zf = z.ravel()
    out = np.empty(zf.shape, dtype=complex)
    chunk = max(1, int(4.0e6 // u.size))
    for lo in range(0, zf.size, chunk):
        hi = min(zf.size, lo + chunk)
        out[lo:hi] = np.exp(-np.multiply.outer(zf[lo:hi], u)) @ base
    return out.reshape(z.shape)


def kernel_g(dim: int, s, w, h: float, log_offset: float = 0.0) -> np.ndarray:
    """Kernel G(s, w): the |sigma|^{dim-1} Fourier multiplier applied to the
    Gaussian e^{-(.-w)^2/2h}, evaluated at offset s and complex center w.

    The optional log_offset multiplies the result by e^{log_offset} folded
    into the exponentials, so weighted kernel values stay finite even when
    the kernel itself would overflow.
    """
    if not (h > 0):
        raise ValidationError("h must be positive")
    s = np.asarray(s, dtype=float)
    w = np.asarray(w, dtype=complex)
    s, w = np.broadcast_arrays(s, w)
    p = dim - 1
    rh = math.sqrt(h)
    nu = (s - w.real) / rh
    mu = w.imag / rh
    base = h ** (-0.5 * p)
    expo = 0.5 * (mu * mu - nu * nu) + log_offset
    if dim % 2 == 1:
        q = hermite_q(dim, nu - 1j * mu)
        return base * np.exp(expo + 1j * nu * mu) * q
    # even dimension: |mu + t|^p splits into an odd power (Hermite moments)
    # plus a half-line remainder W_p; uses J(mu, nu) = J(-mu, -nu) to keep
    # the remainder's argument in the decaying half-plane
    sign = np.where(mu < 0.0, -1.0, 1.0)
    mu_a = np.abs(mu)
    nu_a = sign * nu
    he = hermite_he_values(p, nu_a)
    s_he = np.zeros(nu_a.shape, dtype=complex)
    for k in range(p + 1):
        s_he += math.comb(p, k) * (1j ** k) * mu_a ** (p - k) * he[k]
    term1 = np.exp(expo + 1j * nu_a * mu_a) * s_he
    nu_sup = float(np.abs(nu_a).max()) if nu_a.size else 0.0
    wp = _w_tail(mu_a + 1j * nu_a, p, nu_sup)
    term2 = math.sqrt(2.0 / math.pi) * wp * math.exp(min(log_offset, 700.0))
    return base * (term1 + term2)


def kernel_bound(dim: int, s, w, h: float, log_offset: float = 0.0) -> np.ndarray:
    """Frozen-constant envelope dominating |kernel_g| (times e^{log_offset})."""
    from .constants import get_constants

    if not (h > 0):
        raise ValidationError("h must be positive")
    s = np.asarray(s, dtype=float)
    w = np.asarray(w, dtype=complex)
    s, w = np.broadcast_arrays(s, w)
    p = dim - 1
    rh = math.sqrt(h)
    nu = (s - w.real) / rh
    mu = w.imag / rh
    b_n = get_constants().kernel_bound[dim]
    poly = (1.0 + np.hypot(nu, mu)) ** dim
    grow = np.exp(np.minimum(0.5 * (mu * mu - nu * nu) + log_offset, 700.0))
    flat = math.exp(min(log_offset, 700.0))
    return b_n * h ** (-0.5 * p) * poly * (flat + grow)


def kernel_matrix(dim: int, s_grid: np.ndarray, w_values: np.ndarray, h: float,
                  log_offset: float = 0.0) -> np.ndarray:
    """Kernel values on the (s_grid x w_values) product grid."""
    return kernel_g(dim, np.asarray(s_grid)[:, None], np.asarray(w_values)[None, :], h, log_offset)


def sb_from_radon(g: Sinogram, zeta: ComplexPoint, h: float, log_offset: float = 0.0) -> complex:
    """Transform value reconstructed from plane-integral data:
    half * (2 pi)^{-(n-1)/2} h^{(n-1)/2} * double integral of
    kernel_g(s, <omega, zeta - y0>) times the sinogram."""
    _check_h(h)
    if zeta.dim != g.dim:
        raise ValidationError("point dimension differs from sinogram dimension")
    rel_re = zeta.re - g.y0
    w_vals = g.directions @ rel_re + 1j * (g.directions @ zeta.im)
    required = float(np.abs(w_vals.real).max()) + 8.0 * math.sqrt(h)
    pad = 1e-9 * max(1.0, required)
    if g.s_grid[-1] < required - pad or g.s_grid[0] > -required + pad:
        raise ValidationError(
            f"s grid [{g.s_grid[0]}, {g.s_grid[-1]}] must span +-{required:.6g} "
            "to cover the kernel support"
        )
    # rows whose values vanish identically contribute nothing; keeping one
    # zero row on each side of the live band leaves the trapezoid rule exact
    live = np.flatnonzero(np.any(g.values != 0.0, axis=1))
    if live.size == 0:
        return 0.0j
    lo = max(0, int(live[0]) - 1)
    hi = min(g.s_grid.size, int(live[-1]) + 2)
    s_band = g.s_grid[lo:hi]
    gm = kernel_matrix(g.dim, s_band, w_vals, h, log_offset)
    cols = np.trapezoid(gm * g.values[lo:hi], s_band, axis=0)
    total = complex(cols @ g.weights)
    n = g.dim
    return 0.5 * _TWO_PI ** (-0.5 * (n - 1)) * h ** (0.5 * (n - 1)) * total


def sb_from_radon_weighted(g: Sinogram, zeta: ComplexPoint, h: float) -> complex:
    """Stable weighted variant: e^{-|Im zeta|^2/2h} times sb_from_radon."""
    return sb_from_radon(g, zeta, h, log_offset=-zeta.im_norm ** 2 / (2.0 * h))


def growth_bound_check(f: SampledField, zeta: ComplexPoint, h: float,
                       weighted_value: Optional[float] = None) -> bool:
    """Exact-constant growth bound: the weighted transform never exceeds
    (2 pi h)^{n/2} times the sup norm."""
    if weighted_value is None:
        weighted_value = abs(sb_weighted(f, zeta, h))
    rhs = (_TWO_PI * h) ** (0.5 * f.dim) * f.sup_norm
    return weighted_value <= rhs * (1.0 + 1e-12)


def support_side_bound_check(f: SampledField, zeta: ComplexPoint, h: float,
                             weighted_value: Optional[float] = None) -> bool:
    """Exact-constant one-sided support bound for halfspace-cut fields: the
    weighted transform gains e^{-t_+^2/2h} where t_+ is the distance from
    Re zeta to the supporting halfspace along its outward normal."""
    if f.halfspace is None:
        raise ValidationError("support-side bound needs halfspace metadata")
    if weighted_value is None:
        weighted_value = abs(sb_weighted(f, zeta, h))
    t_plus = max(0.0, float((zeta.re - f.halfspace.y0) @ f.halfspace.omega0))
    rhs = (_TWO_PI * h) ** (0.5 * f.dim) * math.exp(-t_plus * t_plus / (2.0 * h)) * f.sup_norm
    return weighted_value <= rhs * (1.0 + 1e-12)


@dataclass(frozen=True)
class FitResult:
    """Least-squares decay fit log(weighted) = log(C) - c/h."""

    c: float
    prefactor: float
    residual: float
    r_squared: float
    vacuous: bool
    h_grid: tuple
    weighted: tuple


def fit_exponential_smallness(f: SampledField, z0: ComplexPoint, h_grid: Sequence[float],
                              node_scale: float = 1.0) -> FitResult:
    """Fit the weighted transform's decay rate in 1/h at a fixed complex point.

    c > 0 indicates exponential smallness at (Re z0, -Im z0); c near 0
    indicates the point carries transform mass.  Purely a numeric indicator.
    """
    h_arr = np.asarray(sorted(h_grid, reverse=True), dtype=float)
    if h_arr.size < 6:
        raise ValidationError("decay fit needs at least 6 h samples")
    if np.any(h_arr <= 0) or np.any(h_arr > 1.0):
        raise ValidationError("h grid must lie in (0, 1]")
    ratios = h_arr[1:] / h_arr[:-1]
    if np.any(np.abs(ratios - ratios[0]) > 1e-6 * ratios[0]):
        raise ValidationError("h grid must be geometrically spaced")
    weighted = np.array([abs(sb_weighted(f, z0, float(h), node_scale)) for h in h_arr])
    live = weighted > 1e-300
    if live.sum() < 2:
        return FitResult(c=math.inf, prefactor=0.0, residual=0.0, r_squared=1.0,
                         vacuous=True, h_grid=tuple(h_arr), weighted=tuple(weighted))
    x = 1.0 / h_arr[live]
    y = np.log(weighted[live])
    slope, intercept = np.polyfit(x, y, 1)
    fitted = slope * x + intercept
    ss_res = float(np.sum((y - fitted) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return FitResult(
        c=float(-slope),
        prefactor=float(np.exp(intercept)),
        residual=math.sqrt(ss_res / x.size),
        r_squared=r2,
        vacuous=False,
        h_grid=tuple(h_arr),
        weighted=tuple(weighted),
    )
