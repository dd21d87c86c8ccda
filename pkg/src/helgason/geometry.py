"""Direction grids, orthonormal frames, and split-ray ball quadrature.

Every integral in the toolkit reduces to one of two deterministic schemes:

* polar/spherical quadrature over a ball, with each radial ray split exactly
  at the surfaces (spheres, planes) where the integrand loses smoothness,
  then Gauss-Legendre panels per smooth segment;
* uniform-angle (n=2) or Fibonacci-lattice (n=3) direction grids with equal
  weights summing to the sphere measure.

Splitting the rays at known discontinuities keeps Gauss-Legendre at full
order for piecewise-analytic integrands (indicators, cut balls), which is
what makes the closed-form oracle tests meaningful.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import ValidationError

SPHERE_MEASURE = {2: 2.0 * np.pi, 3: 4.0 * np.pi}


@lru_cache(maxsize=None)
def gauss_legendre(k: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the k-point Gauss-Legendre rule on [-1, 1]."""
    if k < 1:
        raise ValidationError(f"Gauss-Legendre order must be positive, got {k}")
    x, w = np.polynomial.legendre.leggauss(int(k))
    return x, w


def gauss_legendre_interval(k: int, lo: float, hi: float) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [lo, hi]."""
    x, w = gauss_legendre(k)
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w


def circle_directions(m: int) -> tuple[np.ndarray, np.ndarray]:
    """m uniformly spaced unit vectors on the circle, weights summing to 2*pi."""
    if m < 1:
        raise ValidationError(f"need at least one direction, got {m}")
    theta = 2.0 * np.pi * np.arange(m) / m
    dirs = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    weights = np.full(m, 2.0 * np.pi / m)
    return dirs, weights


def fibonacci_sphere(m: int) -> tuple[np.ndarray, np.ndarray]:
    """m Fibonacci-lattice points on the unit 2-sphere, weights summing to 4*pi."""
    if m < 1:
        raise ValidationError(f"need at least one direction, got {m}")
    i = np.arange(m, dtype=float)
    offset = 2.0 / m
    y = i * offset - 1.0 + 0.5 * offset
    r = np.sqrt(np.maximum(0.0, 1.0 - y * y))
    phi = i * np.pi * (3.0 - np.sqrt(5.0))
    dirs = np.stack([r * np.cos(phi), y, r * np.sin(phi)], axis=1)
    weights = np.full(m, 4.0 * np.pi / m)
    return dirs, weights


def sphere_gauss_grid(n_pol: int, n_az: int) -> tuple[np.ndarray, np.ndarray]:
    """Product quadrature on the 2-sphere: Gauss-Legendre in the polar cosine
    times a uniform azimuth grid.  Integrates spherical harmonics exactly up
    to degree min(2 n_pol - 1, n_az - 1); preferable to the Fibonacci lattice
    when the integrand carries a concentrated plane-wave phase."""
    if n_pol < 1 or n_az < 1:
        raise ValidationError("need at least one node per sphere axis")
    x, wx = gauss_legendre(n_pol)
    sin_t = np.sqrt(np.maximum(0.0, 1.0 - x * x))
    phi = 2.0 * np.pi * np.arange(n_az) / n_az
    dirs = np.stack(
        [
            np.outer(sin_t, np.cos(phi)).ravel(),
            np.outer(sin_t, np.sin(phi)).ravel(),
            np.outer(x, np.ones(n_az)).ravel(),
        ],
        axis=1,
    )
    weights = np.outer(wx, np.full(n_az, 2.0 * np.pi / n_az)).ravel()
    return dirs, weights


def direction_grid(dim: int, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Default direction set for the given dimension."""
    if dim == 2:
        return circle_directions(m)
    if dim == 3:
        return fibonacci_sphere(m)
    raise ValidationError(f"dimension must be 2 or 3, got {dim}")


def orthonormal_frame(omega: np.ndarray, seed_rank: int = 0) -> np.ndarray:
    """Deterministic orthonormal basis of the hyperplane orthogonal to omega.

    Gram-Schmidt seeded by the coordinate axis of rank ``seed_rank`` when the
    axes are ordered from least to most aligned with omega.  ``seed_rank=0``
    is the production rule; other ranks exist so frame invariance is testable.
    Returns an array of shape (dim-1, dim).
    """
    omega = np.asarray(omega, dtype=float)
    dim = omega.shape[0]
    order = np.argsort(np.abs(omega), kind="stable")
    axis = int(order[seed_rank % dim])
    e = np.zeros(dim)
    e[axis] = 1.0
    u = e - np.dot(e, omega) * omega
    norm = np.linalg.norm(u)
    if norm < 1e-12:
        raise ValidationError("frame seed axis degenerate; omega not a unit vector?")
    u = u / norm
    if dim == 2:
        return u[None, :]
    v = np.cross(omega, u)
    v = v / np.linalg.norm(v)
    return np.stack([u, v])


def ball_rays(dim: int, n_ang) -> tuple[np.ndarray, np.ndarray]:
    """Ray directions and angular weights for polar quadrature over a ball.

    n=2: ``n_ang`` is an int, uniform angles.  n=3: ``n_ang`` is
    ``(n_polar, n_azimuth)``: Gauss-Legendre in the polar cosine tensored
    with uniform azimuths.  Weights sum to the sphere measure.
    """
    if dim == 2:
        return circle_directions(int(n_ang))
    if dim == 3:
        n_pol, n_az = n_ang
        ct, wt = gauss_legendre(int(n_pol))
        st = np.sqrt(np.maximum(0.0, 1.0 - ct * ct))
        phi = 2.0 * np.pi * np.arange(int(n_az)) / int(n_az)
        cp, sp = np.cos(phi), np.sin(phi)
        dirs = np.stack(
            [
                np.outer(st, cp).ravel(),
                np.outer(st, sp).ravel(),
                np.outer(ct, np.ones(int(n_az))).ravel(),
            ],
            axis=1,
        )
        weights = np.outer(wt, np.full(int(n_az), 2.0 * np.pi / int(n_az))).ravel()
        return dirs, weights
    raise ValidationError(f"dimension must be 2 or 3, got {dim}")


def sphere_ray_roots(x0, rays, center, radius) -> np.ndarray:
    """Radii where rays from x0 cross the sphere |x - center| = radius.

    Returns (n_rays, 2) with NaN where a ray misses the sphere.
    """
    rel = np.asarray(center, dtype=float) - np.asarray(x0, dtype=float)
    b = rays @ rel
    disc = b * b - (rel @ rel - radius * radius)
    root = np.sqrt(np.maximum(disc, 0.0))
    out = np.stack([b - root, b + root], axis=1)
    out[disc < 0.0] = np.nan
    return out


def plane_ray_roots(x0, rays, point, normal) -> np.ndarray:
    """Radius where rays from x0 cross the plane <x - point, normal> = 0.

    Returns (n_rays, 1) with NaN for rays parallel to the plane.
    """
    normal = np.asarray(normal, dtype=float)
    denom = rays @ normal
    num = float(np.dot(np.asarray(point, dtype=float) - np.asarray(x0, dtype=float), normal))
    with np.errstate(divide="ignore", invalid="ignore"):
        r = num / denom
    r = np.where(np.abs(denom) < 1e-300, np.nan, r)
    return r[:, None]


def segment_bounds(lo, hi, breakpoints) -> np.ndarray:
    """Sorted panel boundaries on [lo, hi] per ray, breakpoints clipped in.

    lo, hi: scalars or (M,) arrays; breakpoints: (M, K) with NaN allowed.
    Returns (M, K+2); consecutive columns delimit the Gauss-Legendre panels.
    """
    breakpoints = np.atleast_2d(np.asarray(breakpoints, dtype=float))
    m = breakpoints.shape[0]
    lo = np.broadcast_to(np.asarray(lo, dtype=float), (m,)).astype(float)
    hi = np.broadcast_to(np.asarray(hi, dtype=float), (m,)).astype(float)
    clipped = np.clip(breakpoints, lo[:, None], hi[:, None])
    clipped = np.where(np.isfinite(breakpoints), clipped, lo[:, None])
    bounds = np.concatenate([lo[:, None], clipped, hi[:, None]], axis=1)
    bounds.sort(axis=1)
    return bounds


def panel_nodes(bounds: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes/weights for every panel delimited by ``bounds``.

    bounds: (M, S+1).  Returns nodes and weights of shape (M, S*k); zero-width
    panels contribute zero weight.
    """
    glx, glw = gauss_legendre(k)
    lo = bounds[:, :-1]
    half = 0.5 * (bounds[:, 1:] - lo)
    nodes = lo[:, :, None] + half[:, :, None] * (glx + 1.0)
    weights = half[:, :, None] * glw
    m = bounds.shape[0]
    return nodes.reshape(m, -1), weights.reshape(m, -1)


def ball_quadrature(
    dim: int,
    x0,
    rmax: float,
    n_ang,
    n_rad: int,
    spheres=(),
    planes=(),
) -> tuple[np.ndarray, np.ndarray]:
    """Quadrature for integrals over the ball |x - x0| <= rmax.

    Each radial ray is split where it crosses the given spheres
    ``(center, radius)`` and planes ``(point, normal)``; the radial measure
    r^(dim-1) and angular weights are folded into the returned weights.
    Returns (points (N, dim), weights (N,)) with sum(w * f(points))
    approximating the ball integral of f.
    """
    x0 = np.asarray(x0, dtype=float)
    rays, ang_w = ball_rays(dim, n_ang)
    m = rays.shape[0]
    cuts = [np.full((m, 0), np.nan)]
    for center, radius in spheres:
        cuts.append(sphere_ray_roots(x0, rays, center, radius))
    for point, normal in planes:
        cuts.append(plane_ray_roots(x0, rays, point, normal))
    bounds = segment_bounds(0.0, float(rmax), np.concatenate(cuts, axis=1))
    r, w = panel_nodes(bounds, n_rad)
    w = w * r ** (dim - 1) * ang_w[:, None]
    points = x0 + r[:, :, None] * rays[:, None, :]
    return points.reshape(-1, dim), w.reshape(-1)
