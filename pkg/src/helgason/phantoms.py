"""Synthetic compactly supported test functions with certified metadata.

A phantom is an analytic evaluator on R^n (n in {2, 3}) plus support
metadata: a ball certified to contain the support, an optional halfspace
constraint supp f in {<x - y0, omega0> <= 0} with y0 in supp f, and a
certified sup-norm bound.  Norm-like functionals (weighted moment, L^p
norms over balls, the Besov-type modulus seminorm) are computed by
split-ray quadrature so that indicator-type phantoms integrate at full
Gauss-Legendre order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import _backend, geometry
from ._fallback import KIND_BALL, KIND_BUMP, KIND_CUT_BALL, KIND_GAUSSIAN
from .errors import ValidationError

_KIND_CODES = {
    "ball_indicator": KIND_BALL,
    "smooth_bump": KIND_BUMP,
    "halfspace_cut_ball": KIND_CUT_BALL,
    "gaussian_truncated": KIND_GAUSSIAN,
}


@dataclass(frozen=True)
class PhantomSpec:
    """Declarative phantom description; see ``make_phantom``."""

    kind: str
    center: tuple
    radius: float
    amplitude: float = 1.0
    cut: Optional[tuple] = None  # (y0, omega0)
    truncation_radius: Optional[float] = None

    def to_json_dict(self) -> dict:
        cut = None
        if self.cut is not None:
            y0, omega0 = self.cut
            cut = {"y0": list(map(float, y0)), "omega0": list(map(float, omega0))}
        return {
            "kind": self.kind,
            "center": list(map(float, self.center)),
            "radius": float(self.radius),
            "amplitude": float(self.amplitude),
            "cut": cut,
            "truncation_radius": None
            if self.truncation_radius is None
            else float(self.truncation_radius),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "PhantomSpec":
        if not isinstance(data, dict):
            raise ValidationError("phantom spec must be a JSON object")
        try:
            kind = data["kind"]
            center = tuple(float(v) for v in data["center"])
            radius = float(data["radius"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed phantom spec: {exc}") from exc
        cut = data.get("cut")
        cut_t = None
        if cut is not None:
            try:
                cut_t = (
                    tuple(float(v) for v in cut["y0"]),
                    tuple(float(v) for v in cut["omega0"]),
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise ValidationError(f"malformed cut block: {exc}") from exc
        tr = data.get("truncation_radius")
        return cls(
            kind=kind,
            center=center,
            radius=radius,
            amplitude=float(data.get("amplitude", 1.0)),
            cut=cut_t,
            truncation_radius=None if tr is None else float(tr),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json(cls, text: str) -> "PhantomSpec":
        try:
            return cls.from_json_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ValidationError(f"invalid JSON: {exc}") from exc


@dataclass(frozen=True)
class Halfspace:
    """supp f lies in {<x - y0, omega0> <= 0}, with y0 in supp f."""

    y0: np.ndarray
    omega0: np.ndarray


@dataclass(frozen=True)
class SampledField:
    """A compactly supported function given by evaluator plus metadata."""

    dim: int
    support_center: np.ndarray
    support_radius: float
    sup_norm: float
    halfspace: Optional[Halfspace] = None
    contact_tol: float = 0.0
    descriptor: Optional[tuple] = None  # (kind_code, params) for backend eval
    custom_evaluator: Optional[Callable] = None

    def __call__(self, pts) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        single = pts.ndim == 1
        pts = np.atleast_2d(pts)
        if pts.shape[1] != self.dim:
            raise ValidationError(f"points have dimension {pts.shape[1]}, field has {self.dim}")
        if self.descriptor is not None:
            code, params = self.descriptor
            vals = _backend.eval_phantom(code, params, pts)
        else:
            vals = np.asarray(self.custom_evaluator(pts), dtype=float)
        return float(vals[0]) if single else vals

    @property
    def evaluator(self) -> Callable:
        return self.__call__

    def shifted_values(self, pts: np.ndarray, shift: np.ndarray) -> np.ndarray:
        """Evaluate f(x - shift) at the given points."""
        return self(np.atleast_2d(pts) - np.asarray(shift, dtype=float))

    def surfaces(self, shift=None) -> tuple[list, list]:
        """Spheres and planes across which f(. - shift) may be non-smooth."""
        shift = np.zeros(self.dim) if shift is None else np.asarray(shift, dtype=float)
        spheres = [(self.support_center + shift, self.support_radius)]
        planes = []
        if self.halfspace is not None:
            planes.append((self.halfspace.y0 + shift, self.halfspace.omega0))
        return spheres, planes

    @classmethod
    def from_callable(
        cls,
        evaluator: Callable,
        dim: int,
        support_center,
        support_radius: float,
        sup_norm: float,
        halfspace: Optional[Halfspace] = None,
        contact_tol: float = 0.0,
    ) -> "SampledField":
        return cls(
            dim=int(dim),
            support_center=np.asarray(support_center, dtype=float),
            support_radius=float(support_radius),
            sup_norm=float(sup_norm),
            halfspace=halfspace,
            contact_tol=float(contact_tol),
            descriptor=None,
            custom_evaluator=evaluator,
        )


def make_phantom(spec: PhantomSpec, contact_tol: Optional[float] = None) -> SampledField:
    """Realize a PhantomSpec as a SampledField, validating its invariants."""
    if spec.kind not in _KIND_CODES:
        raise ValidationError(f"unknown phantom kind {spec.kind!r}")
    center = np.asarray(spec.center, dtype=float)
    dim = center.shape[0]
    if dim not in (2, 3):
        raise ValidationError(f"phantom dimension must be 2 or 3, got {dim}")
    if not np.isfinite(spec.radius) or spec.radius <= 0:
        raise ValidationError(f"phantom radius must be positive, got {spec.radius}")
    if not np.isfinite(spec.amplitude):
        raise ValidationError("phantom amplitude must be finite")
    code = _KIND_CODES[spec.kind]

    halfspace = None
    if spec.kind == "halfspace_cut_ball":
        if spec.cut is None:
            raise ValidationError("halfspace_cut_ball requires a cut (y0, omega0)")
        y0 = np.asarray(spec.cut[0], dtype=float)
        omega0 = np.asarray(spec.cut[1], dtype=float)
        if y0.shape != (dim,) or omega0.shape != (dim,):
            raise ValidationError("cut vectors must match the phantom dimension")
        nrm = np.linalg.norm(omega0)
        if not np.isfinite(nrm) or abs(nrm - 1.0) > 1e-9:
            raise ValidationError(f"cut normal must be a unit vector, |omega0| = {nrm}")
        omega0 = omega0 / nrm
        if np.linalg.norm(y0 - center) > spec.radius + 1e-12:
            raise ValidationError("cut reference point y0 must lie inside the closed ball")
    elif spec.cut is not None:
        raise ValidationError(f"kind {spec.kind!r} does not accept a cut")

    if spec.kind == "gaussian_truncated":
        if spec.truncation_radius is None or spec.truncation_radius <= 0:
            raise ValidationError("gaussian_truncated requires a positive truncation_radius")
        support_radius = float(spec.truncation_radius)
        params = np.concatenate([center, [spec.radius, spec.amplitude, support_radius]])
    else:
        if spec.truncation_radius is not None:
            raise ValidationError(f"kind {spec.kind!r} does not accept a truncation_radius")
        support_radius = float(spec.radius)
        if spec.kind == "halfspace_cut_ball":
            params = np.concatenate([center, [spec.radius, spec.amplitude], y0, omega0])
            halfspace = Halfspace(y0=y0, omega0=omega0)
        else:
            params = np.concatenate([center, [spec.radius, spec.amplitude]])

    tol = 1e-3 * support_radius if contact_tol is None else float(contact_tol)
    return SampledField(
        dim=dim,
        support_center=center,
        support_radius=support_radius,
        sup_norm=abs(float(spec.amplitude)),
        halfspace=halfspace,
        contact_tol=tol,
        descriptor=(code, params),
        custom_evaluator=None,
    )


_DEFAULT_ANG = {2: 512, 3: (48, 96)}
_DEFAULT_RAD = {2: 24, 3: 16}


def _ball_integral(
    field: SampledField,
    center,
    radius: float,
    weight_fn: Callable[[np.ndarray, np.ndarray], np.ndarray],
    n_ang=None,
    n_rad: Optional[int] = None,
    extra_spheres=(),
    extra_planes=(),
) -> float:
    """integral over ball(center, radius) of weight_fn(points, f(points))."""
    dim = field.dim
    spheres, planes = field.surfaces()
    pts, w = geometry.ball_quadrature(
        dim,
        center,
        radius,
        _DEFAULT_ANG[dim] if n_ang is None else n_ang,
        _DEFAULT_RAD[dim] if n_rad is None else n_rad,
        spheres=list(spheres) + list(extra_spheres),
        planes=list(planes) + list(extra_planes),
    )
    vals = field(pts)
    return float(np.dot(w, weight_fn(pts, vals)))


def weighted_moment(f: SampledField, n_ang=None, n_rad: Optional[int] = None) -> float:
    """|S^(n-1)| * integral of (1 + |x|)^n |f(x)| dx."""
    dim = f.dim

    def wfn(pts, vals):
        return (1.0 + np.linalg.norm(pts, axis=1)) ** dim * np.abs(vals)

    raw = _ball_integral(f, f.support_center, f.support_radius, wfn, n_ang, n_rad)
    return geometry.SPHERE_MEASURE[dim] * raw


def lp_norm(
    f: SampledField,
    region_center,
    region_radius: float,
    p: float,
    n_ang=None,
    n_rad: Optional[int] = None,
) -> float:
    """L^p norm of f over the ball(region_center, region_radius)."""
    if not (np.isfinite(p) and p >= 1.0):
        raise ValidationError(f"p must lie in [1, inf), got {p}")
    region_center = np.asarray(region_center, dtype=float)
    gap = np.linalg.norm(region_center - f.support_center) - float(region_radius) - f.support_radius
    if gap >= 0.0:
        return 0.0

    def wfn(pts, vals):
        return np.abs(vals) ** p

    raw = _ball_integral(f, region_center, float(region_radius), wfn, n_ang, n_rad)
    return float(max(raw, 0.0)) ** (1.0 / p)


_BESOV_ANG = {2: 32, 3: 48}
_BESOV_INNER_ANG = {2: 64, 3: (16, 32)}
_BESOV_INNER_RAD = {2: 12, 3: 6}


def besov_seminorm(
    f: SampledField,
    lam: float,
    p: float,
    n_ang_shift=None,
    n_rad_shift: int = 12,
    gl_shift: int = 4,
    inner_ang=None,
    inner_rad: Optional[int] = None,
) -> float:
    """Integral modulus of continuity (int ||f - f(.-y)||_p^p / |y|^(n+lam*p) dy)^(1/p).

    The radial |y| integral runs on a log-graded grid over
    [1e-4 * R, R] with R = 2 * support_radius + 1; the tail beyond R, where
    the two supports are disjoint, is added analytically as
    2 ||f||_p^p |S^(n-1)| R^(-lam*p) / (lam*p).
    """
    if not (np.isfinite(p) and p >= 1.0):
        raise ValidationError(f"p must lie in [1, inf), got {p}")
    if not (0.0 < lam and lam * p < 1.0):
        raise ValidationError(f"need 0 < lam and lam*p < 1, got lam={lam}, p={p}")
    dim = f.dim
    big_r = 2.0 * f.support_radius + 1.0
    dirs, ang_w = geometry.direction_grid(dim, _BESOV_ANG[dim] if n_ang_shift is None else n_ang_shift)

    # log-graded radial panels in t = log|y|
    t_lo, t_hi = np.log(1e-4 * big_r), np.log(big_r)
    edges = np.linspace(t_lo, t_hi, n_rad_shift + 1)
    glx, glw = geometry.gauss_legendre(gl_shift)
    half = 0.5 * (edges[1:] - edges[:-1])
    t_nodes = (edges[:-1, None] + half[:, None] * (glx + 1.0)).ravel()
    t_weights = (half[:, None] * glw).ravel()
    rho = np.exp(t_nodes)

    spheres, planes = f.surfaces()
    inner_ang = _BESOV_INNER_ANG[dim] if inner_ang is None else inner_ang
    inner_rad = _BESOV_INNER_RAD[dim] if inner_rad is None else inner_rad

    total = 0.0
    for direction, aw in zip(dirs, ang_w):
        for t_w, r_y in zip(t_weights, rho):
            y = r_y * direction
            spheres_y, planes_y = f.surfaces(shift=y)
            pts, w = geometry.ball_quadrature(
                dim,
                f.support_center + 0.5 * y,
                f.support_radius + 0.5 * r_y,
                inner_ang,
                inner_rad,
                spheres=spheres + spheres_y,
                planes=planes + planes_y,
            )
            diff = f(pts) - f.shifted_values(pts, y)
            delta = float(np.dot(w, np.abs(diff) ** p))
            # measure: dy = rho^(n-1) drho dS = rho^n dt dS; weight |y|^(-n-lam*p)
            total += aw * t_w * delta * r_y ** (-lam * p)

    norm_p = lp_norm(f, f.support_center, f.support_radius, p)
    tail = 2.0 * norm_p**p * geometry.SPHERE_MEASURE[dim] * big_r ** (-lam * p) / (lam * p)
    return float(total + tail) ** (1.0 / p)
