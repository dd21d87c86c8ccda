"""Plane-integral transform with a translated reference point, plus the
restricted-data functionals and classical identities built on it.

The transform of f at (s, omega) relative to y0 is the integral of f over
the hyperplane {x : <x - y0, omega> = s}.  Chords and disks are quadratured
inside the support ball with exact splitting at the phantom's discontinuity
surfaces, so indicator sinogram values carry no smoothing error: a plane
that misses the support ball yields an exact 0.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import geometry
from .errors import ValidationError
from .phantoms import SampledField

_DEFAULT_NDIR = {2: 256, 3: 1024}


@dataclass(frozen=True)
class Sinogram:
    """Sampled translated plane transform on a uniform (s, direction) grid."""

    dim: int
    y0: np.ndarray
    s_grid: np.ndarray
    directions: np.ndarray
    weights: np.ndarray
    values: np.ndarray  # shape (len(s_grid), len(directions))

    def __post_init__(self):
        s = np.asarray(self.s_grid, dtype=float)
        if s.size < 2:
            raise ValidationError("s grid needs at least two samples")
        steps = np.diff(s)
        ds = steps[0]
        if ds <= 0 or not np.allclose(steps, ds, rtol=1e-9, atol=1e-12):
            raise ValidationError("s grid must be uniform and increasing")
        norms = np.linalg.norm(self.directions, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-12):
            raise ValidationError("directions must be unit vectors to 1e-12")
        if self.values.shape != (s.size, self.directions.shape[0]):
            raise ValidationError("values shape must be (n_s, n_directions)")

    @property
    def ds(self) -> float:
        return float(self.s_grid[1] - self.s_grid[0])

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_csv())

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# dim={self.dim}\n")
        buf.write("# y0=" + ",".join(f"{v:.17g}" for v in self.y0) + "\n")
        buf.write(f"# ds={self.ds:.17g}\n")
        for i, s in enumerate(self.s_grid):
            for j in range(self.directions.shape[0]):
                cols = [f"{s:.17g}"]
                cols += [f"{c:.17g}" for c in self.directions[j]]
                cols.append(f"{self.weights[j]:.17g}")
                cols.append(f"{self.values[i, j]:.17g}")
                buf.write(",".join(cols) + "\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "Sinogram":
        dim = None
        y0 = None
        rows = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("dim="):
                    dim = int(body[4:])
                elif body.startswith("y0="):
                    y0 = np.array([float(v) for v in body[3:].split(",")])
                continue
            rows.append([float(v) for v in line.split(",")])
        if dim is None or y0 is None or not rows:
            raise ValidationError("sinogram CSV missing headers or data")
        arr = np.asarray(rows, dtype=float)
        if arr.shape[1] != dim + 3:
            raise ValidationError(f"expected {dim + 3} columns for dim={dim}")
        s_vals = arr[:, 0]
        s_grid = np.unique(s_vals)
        n_s = s_grid.size
        m = arr.shape[0] // n_s
        if n_s * m != arr.shape[0]:
            raise ValidationError("sinogram CSV rows do not form an (s, direction) grid")
        block = arr[:m]
        directions = block[:, 1 : 1 + dim]
        weights = block[:, 1 + dim]
        values = arr[:, 2 + dim].reshape(n_s, m)
        return cls(dim=dim, y0=y0, s_grid=s_grid, directions=directions,
                   weights=weights, values=values)

    @classmethod
    def read_csv(cls, path) -> "Sinogram":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_csv(fh.read())


@dataclass(frozen=True)
class RestrictedWindow:
    """Data window: offsets |s| < alpha and directions <omega, omega0>^2 > 1 - beta^2."""

    y0: np.ndarray
    omega0: np.ndarray
    alpha: float
    beta: float

    def __post_init__(self):
        y0 = np.asarray(self.y0, dtype=float)
        omega0 = np.asarray(self.omega0, dtype=float)
        object.__setattr__(self, "y0", y0)
        nrm = np.linalg.norm(omega0)
        if not np.isfinite(nrm) or abs(nrm - 1.0) > 1e-9:
            raise ValidationError(f"omega0 must be a unit vector, got |omega0| = {nrm}")
        object.__setattr__(self, "omega0", omega0 / nrm)
        if not (self.alpha > 0):
            raise ValidationError(f"alpha must be positive, got {self.alpha}")
        if not (0.0 < self.beta <= 1.0):
            raise ValidationError(f"beta must lie in (0, 1], got {self.beta}")

    def cap_mask(self, directions: np.ndarray) -> np.ndarray:
        dots = np.atleast_2d(directions) @ self.omega0
        return dots * dots > 1.0 - self.beta * self.beta

    def contains_points(self, pts: np.ndarray) -> np.ndarray:
        """Membership in the dependence domain: the union of all window planes.

        x belongs iff some cap direction omega has |<omega, x - y0>| < alpha.
        """
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        v = pts - self.y0
        nv = np.linalg.norm(v, axis=1)
        with np.errstate(invalid="ignore"):
            cosang = np.abs(v @ self.omega0) / np.where(nv > 0, nv, 1.0)
        psi = np.arccos(np.clip(cosang, -1.0, 1.0))  # folded angle to the cap axis
        phi_max = np.arcsin(min(1.0, self.beta))
        reach = psi + phi_max
        min_dot = np.where(reach >= 0.5 * np.pi, 0.0, np.cos(reach))
        return nv * min_dot < self.alpha


def default_s_grid(f: SampledField, y0, n_s: int = 257, s_max: Optional[float] = None) -> np.ndarray:
    """Uniform symmetric s grid covering the support range seen from y0."""
    y0 = np.asarray(y0, dtype=float)
    reach = f.support_radius + float(np.linalg.norm(f.support_center - y0))
    if s_max is None:
        s_max = 1.1 * reach + 0.1
    if s_max < reach:
        raise ValidationError(f"s_max={s_max} does not cover the support range {reach}")
    return np.linspace(-s_max, s_max, int(n_s))


def _chord_values_2d(f, y0, s_grid, dirs, n_chord):
    n_s, m = s_grid.size, dirs.shape[0]
    perp = np.stack([-dirs[:, 1], dirs[:, 0]], axis=1)
    values = np.zeros((n_s, m))
    c = f.support_center
    r = f.support_radius
    chunk = max(1, int(2.0e5 // max(1, n_s)))
    for lo in range(0, m, chunk):
        hi = min(m, lo + chunk)
        w = dirs[lo:hi]
        wp = perp[lo:hi]
        p0 = y0 + s_grid[:, None, None] * w[None, :, :]  # (n_s, mc, 2)
        rel = c - p0
        t0 = np.einsum("ijk,jk->ij", rel, wp)
        d2 = np.einsum("ijk,ijk->ij", rel, rel) - t0 * t0
        disc = r * r - d2
        hit = disc > 0.0
        half = np.sqrt(np.maximum(disc, 0.0))
        t_lo = np.where(hit, t0 - half, 0.0).ravel()
        t_hi = np.where(hit, t0 + half, 0.0).ravel()
        if f.halfspace is not None:
            num = np.einsum("ijk,k->ij", f.halfspace.y0 - p0, f.halfspace.omega0)
            den = wp @ f.halfspace.omega0  # (mc,)
            with np.errstate(divide="ignore", invalid="ignore"):
                t_cut = num / den[None, :]
            t_cut = np.where(np.abs(den[None, :]) < 1e-300, np.nan, t_cut).reshape(-1, 1)
        else:
            t_cut = np.full((t_lo.size, 0), np.nan)
        bounds = geometry.segment_bounds(t_lo, t_hi, t_cut)
        nodes, wts = geometry.panel_nodes(bounds, n_chord)
        npan = nodes.shape[1]
        pts = p0.reshape(-1, 1, 2) + nodes[:, :, None] * np.repeat(
            wp[None, :, :], n_s, axis=0
        ).reshape(-1, 1, 2)
        vals = f(pts.reshape(-1, 2)).reshape(-1, npan)
        values[:, lo:hi] = np.einsum("ij,ij->i", wts, vals).reshape(n_s, hi - lo)
    return values


def _disk_values_3d(f, y0, s_grid, dirs, n_rho, n_az):
    n_s, m = s_grid.size, dirs.shape[0]
    values = np.zeros((n_s, m))
    c = f.support_center
    r = f.support_radius
    phi = 2.0 * np.pi * np.arange(n_az) / n_az
    cphi, sphi = np.cos(phi), np.sin(phi)
    az_w = 2.0 * np.pi / n_az
    chunk = max(1, int(4.0e5 // max(1, n_s * n_az)))
    for lo in range(0, m, chunk):
        hi = min(m, lo + chunk)
        mc = hi - lo
        w = dirs[lo:hi]
        frames = np.stack([geometry.orthonormal_frame(w[j]) for j in range(mc)])  # (mc,2,3)
        e_dirs = (
            frames[:, 0][:, None, :] * cphi[None, :, None]
            + frames[:, 1][:, None, :] * sphi[None, :, None]
        )  # (mc, n_az, 3)
        dist = (c - y0) @ w.T - s_grid[:, None]  # <c - p0, omega>, shape (n_s, mc)
        disc = r * r - dist * dist
        hit = disc > 0.0
        delta = np.where(hit, np.sqrt(np.maximum(disc, 0.0)), 0.0)
        q0 = c[None, None, :] - dist[:, :, None] * w[None, :, :]  # c projected onto the plane
        rho_hi = np.repeat(delta[:, :, None], n_az, axis=2).reshape(-1)
        if f.halfspace is not None:
            num = np.einsum("ijk,k->ij", f.halfspace.y0 - q0, f.halfspace.omega0)
            den = np.einsum("ijk,k->ij", e_dirs, f.halfspace.omega0)  # (mc, n_az)
            with np.errstate(divide="ignore", invalid="ignore"):
                rho_cut = num[:, :, None] / den[None, :, :]
            rho_cut = np.where(np.abs(den[None, :, :]) < 1e-300, np.nan, rho_cut)
            rho_cut = rho_cut.reshape(-1, 1)
        else:
            rho_cut = np.full((rho_hi.size, 0), np.nan)
        bounds = geometry.segment_bounds(0.0, rho_hi, rho_cut)
        nodes, wts = geometry.panel_nodes(bounds, n_rho)
        wts = wts * nodes  # polar measure rho drho
        npan = nodes.shape[1]
        base = np.repeat(q0.reshape(-1, 3), n_az, axis=0)
        evec = np.tile(e_dirs.reshape(-1, 3), (n_s, 1))
        pts = base[:, None, :] + nodes[:, :, None] * evec[:, None, :]
        vals = f(pts.reshape(-1, 3)).reshape(-1, npan)
        cell = np.einsum("ij,ij->i", wts, vals).reshape(n_s, mc, n_az)
        values[:, lo:hi] = az_w * cell.sum(axis=2)
    return values


def radon(
    f: SampledField,
    y0,
    s_grid: Optional[np.ndarray] = None,
    directions: Optional[np.ndarray] = None,
    weights: Optional[np.ndarray] = None,
    n_s: int = 257,
    n_dir: Optional[int] = None,
    n_chord: int = 32,
    n_rho: int = 16,
    n_az: int = 24,
    s_max: Optional[float] = None,
) -> Sinogram:
    """Sample the translated plane transform of f on an (s, direction) grid."""
    y0 = np.asarray(y0, dtype=float)
    if y0.shape != (f.dim,):
        raise ValidationError(f"y0 must have dimension {f.dim}")
    if directions is None:
        directions, weights = geometry.direction_grid(f.dim, n_dir or _DEFAULT_NDIR[f.dim])
    elif weights is None:
        raise ValidationError("custom directions require explicit weights")
    directions = np.asarray(directions, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if s_grid is None:
        s_grid = default_s_grid(f, y0, n_s=n_s, s_max=s_max)
    s_grid = np.asarray(s_grid, dtype=float)
    reach = f.support_radius + float(np.linalg.norm(f.support_center - y0))
    pad = 1e-9 * max(1.0, reach)
    if s_grid.max() < reach - pad or s_grid.min() > -reach + pad:
        raise ValidationError(
            f"s grid [{s_grid.min()}, {s_grid.max()}] must span at least [-{reach}, {reach}]"
        )
    # planes {<x - y0, omega> = s} with |s| > reach miss the support ball
    live = np.abs(s_grid) <= reach * (1.0 + 1e-12) + 1e-12
    values = np.zeros((s_grid.size, directions.shape[0]))
    if np.any(live):
        if f.dim == 2:
            values[live] = _chord_values_2d(f, y0, s_grid[live], directions, n_chord)
        else:
            values[live] = _disk_values_3d(f, y0, s_grid[live], directions, n_rho, n_az)
    return Sinogram(dim=f.dim, y0=y0, s_grid=s_grid, directions=directions,
                    weights=weights, values=values)


def _require_origin(g: Sinogram, what: str) -> None:
    if np.linalg.norm(g.y0) > 1e-12:
        raise ValidationError(f"{what} is defined for sinograms referenced at the origin")


def x_norm(g: Sinogram) -> float:
    """integral of (1 + |s|)^n * (direction-weighted L1 of the values) ds, at y0 = 0."""
    _require_origin(g, "the X-functional")
    col = np.abs(g.values) @ g.weights
    wgt = (1.0 + np.abs(g.s_grid)) ** g.dim
    return float(np.trapezoid(wgt * col, g.s_grid))


def _clipped_trapezoid(s: np.ndarray, y: np.ndarray, a: float) -> float:
    """Trapezoid integral of y over [-a, a], interpolating at the cut points."""
    lo, hi = max(-a, float(s[0])), min(a, float(s[-1]))
    if hi <= lo:
        return 0.0
    inside = (s > lo) & (s < hi)
    xs = np.concatenate([[lo], s[inside], [hi]])
    ys = np.concatenate([[np.interp(lo, s, y)], y[inside], [np.interp(hi, s, y)]])
    return float(np.trapezoid(ys, xs))


def restricted_integral(g: Sinogram, w: RestrictedWindow) -> float:
    """Windowed data functional: offsets |s| < alpha, directions in the cap."""
    if np.linalg.norm(g.y0 - w.y0) > 1e-9:
        raise ValidationError("sinogram reference point differs from the window's y0")
    mask = w.cap_mask(g.directions)
    count = int(mask.sum())
    if count == 0:
        raise ValidationError("direction grid has no samples inside the cap")
    if count < 32:
        raise ValidationError(
            f"direction grid resolves the cap with only {count} samples (need >= 32)"
        )
    col = np.abs(g.values[:, mask]) @ g.weights[mask]
    wgt = (1.0 + np.abs(g.s_grid)) ** g.dim
    return _clipped_trapezoid(g.s_grid, wgt * col, w.alpha)


def _taper_window(n_s: int, fraction: float = 0.05) -> np.ndarray:
    k = max(1, int(round(fraction * n_s)))
    win = np.ones(n_s)
    ramp = np.sin(0.5 * np.pi * np.arange(1, k + 1) / k) ** 2
    win[:k] = ramp
    win[n_s - k :] = ramp[::-1]
    return win


def _padded_fft(g: Sinogram, pad_factor: int = 4):
    """Tapered, centered, zero-padded FFT of the values along s."""
    n_s = g.s_grid.size
    big = pad_factor * n_s
    win = _taper_window(n_s)
    arr = np.zeros((big, g.values.shape[1]))
    off = (big - n_s) // 2
    arr[off : off + n_s] = g.values * win[:, None]
    spec = np.fft.fft(arr, axis=0)
    sigma = 2.0 * np.pi * np.fft.fftfreq(big, d=g.ds)
    return spec, sigma, off


def riesz_filter(g: Sinogram, pad_factor: int = 4) -> np.ndarray:
    """Apply the |sigma|^(n-1) Fourier multiplier along s, per direction."""
    if pad_factor < 4:
        raise ValidationError("zero-padding factor must be at least 4")
    spec, sigma, off = _padded_fft(g, pad_factor)
    spec *= np.abs(sigma[:, None]) ** (g.dim - 1)
    out = np.fft.ifft(spec, axis=0).real
    n_s = g.s_grid.size
    return np.ascontiguousarray(out[off : off + n_s])


def riesz_pairing(gf: Sinogram, gg: Sinogram) -> float:
    """Plancherel-type pairing approximating the volume integral of f * conj(g)."""
    _require_origin(gf, "the pairing")
    _require_origin(gg, "the pairing")
    if gf.dim != gg.dim:
        raise ValidationError("sinogram dimensions differ")
    if gf.s_grid.shape != gg.s_grid.shape or not np.allclose(gf.s_grid, gg.s_grid):
        raise ValidationError("s grids differ")
    if gf.directions.shape != gg.directions.shape or not np.allclose(gf.directions, gg.directions):
        raise ValidationError("direction grids differ")
    filtered = riesz_filter(gg)
    inner = np.trapezoid(gf.values * filtered, gf.s_grid, axis=0)
    total = float(np.dot(inner, gf.weights))
    return 0.5 * (2.0 * np.pi) ** (1 - gf.dim) * total


def sobolev_energy_raw(g: Sinogram, pad_factor: int = 4) -> float:
    """Uncalibrated weighted spectral energy of the sinogram: the direction-
    weighted integral of (1+tau^2)^{(n-1)/2} |FT_s values|^2 over (tau, omega)."""
    _require_origin(g, "the spectral energy")
    spec, sigma, _ = _padded_fft(g, pad_factor)
    amp2 = np.abs(spec * g.ds) ** 2
    wgt = (1.0 + sigma * sigma) ** (0.5 * (g.dim - 1))
    dtau = 2.0 * np.pi / (sigma.size * g.ds)
    return float((amp2 * wgt[:, None]).sum(axis=0) @ g.weights) * dtau


def radon_sobolev_norm(g: Sinogram, pad_factor: int = 4) -> float:
    """Weighted spectral energy of the sinogram, calibrated so that the
    value is dominated by the squared L2 norm of the source function."""
    from .constants import get_constants

    raw = sobolev_energy_raw(g, pad_factor)
    scale = get_constants().sobolev_scale[g.dim]
    return scale * raw


def l1_sinogram_bound_check(f: SampledField, g: Sinogram, rtol: float = 1e-6) -> bool:
    """Check the data-side L1 bound: integral of |values| over (s, omega)
    is at most the sphere measure times the L1 norm of f."""
    from .phantoms import lp_norm

    _require_origin(g, "the L1 bound")
    lhs = float(np.trapezoid(np.abs(g.values), g.s_grid, axis=0) @ g.weights)
    rhs = geometry.SPHERE_MEASURE[g.dim] * lp_norm(f, f.support_center, f.support_radius, 1.0)
    return lhs <= rhs * (1.0 + rtol) + 1e-12
