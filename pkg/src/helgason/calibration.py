"""One-time calibration of the frozen constants.

Each bound family in the package carries an existential constant.  This
module measures the extremal ratio of (measured quantity) / (bound without
its constant) over the pinned reference suites, inflates the supremum by
the fixed safety margin, and writes the result to ``_data/constants.json``
keyed by a payload checksum.  Downstream inequality checks against these
figures are therefore regressions against the suites in ``suites``; they
certify reproducibility, not the truth of the underlying estimates.

Run ``python -m helgason.calibration`` to regenerate the table.  All inputs
are seeded and pinned, so a rerun on the same platform reproduces the
committed file bit for bit.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path
from typing import Optional

import numpy as np

from . import constants, geometry, suites
from .bargmann import kernel_g, sb_weighted_batch
from .phantoms import besov_seminorm, lp_norm, make_phantom
from .radon import radon, restricted_integral, sobolev_energy_raw, x_norm
from .stability import _UNIT_BALL_VOLUME, certificate_domain, window_scales

_LATTICE_AXIS = 17


def _kernel_ratio(dim: int) -> float:
    """sup |G| / envelope-without-constant over the calibration lattice."""
    s = np.linspace(-10.0, 10.0, _LATTICE_AXIS)
    rew = np.linspace(-5.0, 5.0, _LATTICE_AXIS)
    imw = np.linspace(-5.0, 5.0, _LATTICE_AXIS)
    hs = np.geomspace(0.05, 1.0, _LATTICE_AXIS)
    sv, rv, iv = (a.ravel() for a in np.meshgrid(s, rew, imw, indexing="ij"))
    wv = rv + 1j * iv
    p = dim - 1
    worst = 0.0
    for h in hs:
        rh = math.sqrt(h)
        nu = (sv - rv) / rh
        mu = iv / rh
        g = np.abs(kernel_g(dim, sv, wv, float(h)))
        poly = (1.0 + np.hypot(nu, mu)) ** dim
        grow = np.exp(np.minimum(0.5 * (mu * mu - nu * nu), 700.0))
        env = h ** (-0.5 * p) * poly * (1.0 + grow)
        worst = max(worst, float(np.max(g / env)))
    return worst


def _reference_quantities(config):
    """(field, I, X) for a reference experiment with its window at the origin."""
    f = make_phantom(config.phantom)
    w = config.window
    g = radon(f, w.y0, n_s=config.n_s, n_dir=config.n_dir)
    return f, restricted_integral(g, w), x_norm(g)


def _growth_small(alpha: float, beta: float, gamma: float, h: float) -> float:
    return math.exp(-alpha * alpha / (8.0 * h)) + math.exp(
        -(gamma * beta) ** 2 / (32.0 * h)
    )


def _growth_ratios(dim: int) -> list:
    """Aligned-point sweep: weighted value over the growth RHS without C."""
    w = suites.growth_window(dim)
    gamma = 2.0 * w.alpha / w.beta
    res, ims = suites.growth_zetas(dim)
    mods = np.sqrt((res * res).sum(axis=1) + (ims * ims).sum(axis=1))
    ratios = []
    for _, spec in suites.growth_members(dim):
        f = make_phantom(spec)
        g = radon(f, w.y0, n_s=257)
        I = restricted_integral(g, w)
        X = x_norm(g)
        for h in suites.GROWTH_H:
            wv = np.abs(sb_weighted_batch(f, res, ims, float(h)))
            den = (
                float(h) ** (-0.5 * dim)
                * (1.0 + mods) ** dim
                * (I + X * _growth_small(w.alpha, w.beta, gamma, float(h)))
            )
            ratios.append(float(np.max(wv / den)))
    return ratios


def _reference_growth_ratios() -> dict:
    """Growth ratios at each reference experiment's axis point, per h."""
    out = {2: [], 3: []}
    for config in suites.reference_experiments():
        f, I, X = _reference_quantities(config)
        w = config.window
        n = f.dim
        gamma = 2.0 * w.alpha / w.beta
        y0n = float(np.linalg.norm(w.y0))
        mod = math.sqrt(y0n * y0n + gamma * gamma)
        re = w.y0[None, :]
        im = (gamma * w.omega0)[None, :]
        for h in config.h_grid:
            wv = float(np.abs(sb_weighted_batch(f, re, im, float(h))[0]))
            den = (
                float(h) ** (-0.5 * n)
                * (1.0 + mod + y0n) ** n
                * (I + X * _growth_small(w.alpha, w.beta, gamma, float(h)))
            )
            out[n].append(wv / den)
    return out


def _certificate_band_ratios() -> dict:
    """Growth ratios on the certificate rectangles' horizontal bands, at the
    data-determined h.  These are the points the certificate's second
    hypothesis leans on, so they must be part of the calibrated family."""
    out = {2: [], 3: []}
    for case in suites.CERTIFICATE_CASES:
        f = make_phantom(suites.certificate_phantom(case))
        w = suites.certificate_window(case)
        g = radon(f, w.y0, n_s=257)
        I = restricted_integral(g, w)
        X = x_norm(g)
        if not (0.0 < I < 1.0):
            continue
        h_star = w.alpha ** 2 / (8.0 * abs(math.log(I)))
        dom = certificate_domain(w.alpha, w.beta)
        gamma = dom.b
        xs = np.array([-0.9 * dom.a, 0.0, 0.9 * dom.a])
        ys_pos = np.array([dom.b, dom.b + 0.5 * dom.eps, 0.999 * (dom.b + dom.eps)])
        ys = np.concatenate([-ys_pos[::-1], ys_pos])
        xx, yy = np.meshgrid(xs, ys, indexing="ij")
        res = w.y0[None, :] + xx.ravel()[:, None] * w.omega0[None, :]
        ims = yy.ravel()[:, None] * w.omega0[None, :]
        wv = np.abs(sb_weighted_batch(f, res, ims, h_star))
        mods = np.hypot(xx.ravel(), yy.ravel())
        n = case.dim
        den = (
            h_star ** (-0.5 * n)
            * (1.0 + mods) ** n
            * (I + X * _growth_small(w.alpha, w.beta, gamma, h_star))
        )
        out[n].extend((wv / den).tolist())
    return out


def _certificate_point_ratios() -> dict:
    """Refined-bound ratios on the tiny admissible region, mirroring the
    experiment pipeline's seeded draw exactly."""
    out = {2: [], 3: []}
    for config in suites.reference_experiments():
        f, I, X = _reference_quantities(config)
        w = config.window
        n = f.dim
        if I == 0.0 or I > math.exp(-w.alpha ** 2 / 8.0):
            continue
        M_q = max(1.0, f.sup_norm + X)
        radius_re, radius_im, kappa = window_scales(w.alpha, w.beta)
        h_star = w.alpha ** 2 / (8.0 * abs(math.log(I)))
        rng = np.random.default_rng(config.seed)
        m = 16
        u = rng.standard_normal((m, n))
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        radii = radius_re * rng.uniform(0.0, 0.999, m)
        res = w.y0[None, :] + radii[:, None] * u
        v = rng.standard_normal((m, n))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        im_radii = radius_im * rng.uniform(0.0, 0.999, m)
        ims = im_radii[:, None] * v
        wv = np.abs(sb_weighted_batch(f, res, ims, h_star))
        den = (
            M_q
            * (1.0 + float(np.linalg.norm(w.y0)) + w.alpha / w.beta) ** n
            * math.exp(kappa * math.log(I))
        )
        out[n].extend((wv / den).tolist())
    return out


def _deconv_ratios(dim: int) -> list:
    """measured local norm over the deconvolution RHS without its constant."""
    pts, wts = suites.deconv_region_quadrature(dim)
    center, radius = suites.deconv_region(dim)
    p, lam = suites.DECONV_P, suites.DECONV_LAM
    zeros = np.zeros_like(pts)
    ratios = []
    for _, spec in suites.deconv_members(dim):
        f = make_phantom(spec)
        L_q = besov_seminorm(f, lam, p)
        measured = lp_norm(f, center, radius, p)
        for h in suites.DECONV_H:
            th = sb_weighted_batch(f, pts, zeros, float(h))
            norm_p = float(np.sum(wts * np.abs(th) ** p)) ** (1.0 / p)
            den = float(h) ** (-0.5 * dim) * norm_p + L_q * float(h) ** (0.5 * lam)
            ratios.append(measured / den)
    return ratios


def _reference_deconv_ratios() -> dict:
    """Deconvolution ratios on the tiny admissible region of each reference
    experiment (the geometry the experiment pipeline checks)."""
    out = {2: [], 3: []}
    for config in suites.reference_experiments():
        f, I, X = _reference_quantities(config)
        w = config.window
        n = f.dim
        radius_re, _, _ = window_scales(w.alpha, w.beta)
        L_q = besov_seminorm(f, config.lam, config.p)
        measured = lp_norm(f, w.y0, radius_re, config.p)
        pts, wts = geometry.ball_quadrature(
            n, w.y0, radius_re, 16 if n == 2 else (8, 16), 6
        )
        zeros = np.zeros_like(pts)
        for h in config.h_grid:
            th = sb_weighted_batch(f, pts, zeros, float(h))
            norm_p = float(np.sum(wts * np.abs(th) ** config.p)) ** (1.0 / config.p)
            den = float(h) ** (-0.5 * n) * norm_p + L_q * float(h) ** (0.5 * config.lam)
            out[n].append(measured / den)
    return out


def _stability_ratios() -> dict:
    """Final-bound ratios measured * |log I|^{lam/2} / prefactor-without-C."""
    out = {2: [], 3: []}
    for config in suites.reference_experiments():
        f, I, X = _reference_quantities(config)
        if I == 0.0 or I == 1.0:
            continue
        w = config.window
        n = f.dim
        M_q = max(1.0, f.sup_norm + X)
        L_q = besov_seminorm(f, config.lam, config.p)
        M = max(M_q, L_q)
        radius_re, _, _ = window_scales(w.alpha, w.beta)
        measured = lp_norm(f, w.y0, radius_re, config.p)
        g_vol = _UNIT_BALL_VOLUME[n] * radius_re ** n
        pref = (
            M
            * max(1.0, g_vol ** (1.0 / config.p))
            * (1.0 + float(np.linalg.norm(w.y0)))
            * (w.alpha ** (-n) + w.beta ** (-n) + w.alpha ** config.lam)
        )
        out[n].append(measured * abs(math.log(I)) ** (0.5 * config.lam) / pref)
    return out


def _sobolev_scale(dim: int) -> float:
    """Normalization pinning the spectral energy of the reference Gaussian to
    1/margin times its exact squared L2 norm."""
    f = make_phantom(suites.sobolev_anchor(dim))
    g = radon(f, np.zeros(dim), n_s=suites.SOBOLEV_ANCHOR_NS,
              n_dir=suites.SOBOLEV_ANCHOR_NDIR)
    raw = sobolev_energy_raw(g)
    exact = math.pi ** (0.5 * dim)
    return exact / (constants._MARGIN * raw)


def default_output_path() -> Path:
    return Path(__file__).resolve().parent / "_data" / "constants.json"


def run_calibration(out_path: Optional[Path] = None, verbose: bool = True) -> dict:
    """Measure every constant family, apply the margin, write the table."""

    def say(msg: str) -> None:
        if verbose:
            print(msg, file=sys.stderr)

    margin = constants._MARGIN    # noqa: SLF001  (single source of truth)

    kernel = {}
    for n in (2, 3):
        kernel[n] = margin * _kernel_ratio(n)
        say(f"kernel envelope ratio, dim {n}: {kernel[n] / margin:.6g}")

    growth_pools = {2: [], 3: []}
    for n in (2, 3):
        growth_pools[n].extend(_growth_ratios(n))
    for n, vals in _reference_growth_ratios().items():
        growth_pools[n].extend(vals)
    for n, vals in _certificate_band_ratios().items():
        growth_pools[n].extend(vals)
    growth = {n: margin * max(v) for n, v in growth_pools.items()}
    for n in (2, 3):
        say(f"growth ratio, dim {n}: {growth[n] / margin:.6g} "
            f"({len(growth_pools[n])} samples)")

    cert_pools = _certificate_point_ratios()
    certificate = {n: margin * max(v) for n, v in cert_pools.items()}
    for n in (2, 3):
        say(f"refined-bound ratio, dim {n}: {certificate[n] / margin:.6g}")

    deconv_pools = {2: _deconv_ratios(2), 3: _deconv_ratios(3)}
    for n, vals in _reference_deconv_ratios().items():
        deconv_pools[n].extend(vals)
    deconv = {n: margin * max(v) for n, v in deconv_pools.items()}
    for n in (2, 3):
        say(f"deconvolution ratio, dim {n}: {deconv[n] / margin:.6g}")

    stab_pools = _stability_ratios()
    stability = {n: margin * max(v) for n, v in stab_pools.items()}
    for n in (2, 3):
        say(f"stability ratio, dim {n}: {stability[n] / margin:.6g}")

    sobolev = {n: _sobolev_scale(n) for n in (2, 3)}
    for n in (2, 3):
        say(f"spectral-energy scale, dim {n}: {sobolev[n]:.6g}")

    payload = {
        "kernel_bound": {str(k): v for k, v in kernel.items()},
        "growth_constant": {str(k): v for k, v in growth.items()},
        "certificate_constant": {str(k): v for k, v in certificate.items()},
        "deconv_constant": {str(k): v for k, v in deconv.items()},
        "stability_constant": {str(k): v for k, v in stability.items()},
        "sobolev_scale": {str(k): v for k, v in sobolev.items()},
    }
    doc = {"payload": payload, "version": constants.payload_checksum(payload)}
    path = Path(out_path) if out_path is not None else default_output_path()
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    say(f"wrote {path} (version {doc['version']})")
    constants._CACHE = None    # noqa: SLF001  (force a fresh verified load)
    return doc


if __name__ == "__main__":
    run_calibration()
