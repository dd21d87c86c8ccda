"""Pure NumPy implementations of the hot kernels.

This is the reference backend: the compiled extension in ``_core.pyx``
mirrors these semantics exactly and is selected at import time when
available.  Keep the two in sync; ``tests/test_backends.py`` enforces
agreement.

Phantom descriptor layout (d = point dimension), kinds by code:
  0 ball indicator      params = [center(d), radius, amplitude]
  1 smooth bump         params = [center(d), radius, amplitude]
  2 halfspace-cut ball  params = [center(d), radius, amplitude, y0(d), omega0(d)]
  3 truncated Gaussian  params = [center(d), sigma, amplitude, trunc_radius]
"""

from __future__ import annotations

import numpy as np

KIND_BALL = 0
KIND_BUMP = 1
KIND_CUT_BALL = 2
KIND_GAUSSIAN = 3


def eval_phantom(code: int, params: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Evaluate a phantom descriptor at an (N, d) array of points."""
    d = pts.shape[1]
    center = params[:d]
    dx = pts - center
    r2 = np.einsum("ij,ij->i", dx, dx)
    if code == KIND_BALL:
        radius, amp = params[d], params[d + 1]
        return np.where(r2 <= radius * radius, amp, 0.0)
    if code == KIND_BUMP:
        radius, amp = params[d], params[d + 1]
        out = np.zeros(pts.shape[0])
        u = r2 / (radius * radius)
        inside = u < 1.0
        # exp(1 - 1/(1-u)) underflows cleanly to 0 near the support boundary
        out[inside] = amp * np.exp(1.0 - 1.0 / (1.0 - u[inside]))
        return out
    if code == KIND_CUT_BALL:
        radius, amp = params[d], params[d + 1]
        y0 = params[d + 2 : 2 * d + 2]
        omega0 = params[2 * d + 2 : 3 * d + 2]
        side = (pts - y0) @ omega0
        return np.where((r2 <= radius * radius) & (side <= 0.0), amp, 0.0)
    if code == KIND_GAUSSIAN:
        sigma, amp, rt = params[d], params[d + 1], params[d + 2]
        return np.where(r2 <= rt * rt, amp * np.exp(-r2 / (2.0 * sigma * sigma)), 0.0)
    raise ValueError(f"unknown phantom kind code {code}")


def sb_accumulate_batch(
    pts: np.ndarray,
    weights: np.ndarray,
    fvals: np.ndarray,
    res: np.ndarray,
    ims: np.ndarray,
    h: float,
) -> np.ndarray:
    """Stable weighted Gaussian wavepacket sums over a fixed node set.

    For each row (re, im) of (res, ims) returns

        sum_j w_j f_j exp(-(|re - y_j|^2 + 2i<re - y_j, im>) / (2h)),

    i.e. exp(-|im|^2/2h) * T_h f(re + i*im) on the quadrature nodes y_j.
    The real exponent is nonpositive, so the sum never overflows no matter
    how large |im| is; that is the whole point of this folding.
    """
    m = res.shape[0]
    y2 = np.einsum("ij,ij->i", pts, pts)
    g = weights * fvals
    re2 = np.einsum("ij,ij->i", res, res)
    reim = np.einsum("ij,ij->i", res, ims)
    out = np.empty(m, dtype=np.complex128)
    # chunk the evaluation-point axis to bound the (N, chunk) temporaries
    chunk = max(1, int(4.0e6 // max(1, pts.shape[0])))
    for lo in range(0, m, chunk):
        hi = min(m, lo + chunk)
        a = pts @ res[lo:hi].T
        b = pts @ ims[lo:hi].T
        expo = -(re2[lo:hi][None, :] - 2.0 * a + y2[:, None]) / (2.0 * h)
        np.minimum(expo, 0.0, out=expo)  # guard fp round-off; exact exponent is <= 0
        phase = (b - reim[lo:hi][None, :]) / h
        out[lo:hi] = (g[:, None] * np.exp(expo + 1j * phase)).sum(axis=0)
    return out
