"""Backend selection: compiled extension when available, NumPy otherwise.

``HELGASON_BACKEND`` overrides the choice: ``compiled`` insists on the
extension (ImportError if missing), ``python`` forces the NumPy fallback,
anything else (or unset) means auto.  ``HELGASON_THREADS`` caps the worker
count used for batch wavepacket sums; the default is the machine's CPU
count.  Results are assembled by index, so the thread count never changes
the numbers, only the wall time.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _fallback

_requested = os.environ.get("HELGASON_BACKEND", "auto").strip().lower()
_compiled = None
if _requested in ("auto", "compiled", ""):
    try:
        from . import _core as _compiled  # type: ignore[attr-defined]
    except ImportError:
        _compiled = None
        if _requested == "compiled":
            raise ImportError(
                "HELGASON_BACKEND=compiled but helgason._core is not built; "
                "reinstall with a C compiler or unset the variable"
            )

_impl = _compiled if _compiled is not None else _fallback

BACKEND_NAME = "compiled" if _compiled is not None else "python"


def thread_count() -> int:
    """Worker cap for batch evaluation (HELGASON_THREADS, default: CPUs)."""
    raw = os.environ.get("HELGASON_THREADS", "").strip()
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            return 1
    return max(1, os.cpu_count() or 1)


def eval_phantom(code: int, params: np.ndarray, pts: np.ndarray) -> np.ndarray:
    pts = np.ascontiguousarray(pts, dtype=float)
    if pts.size == 0:
        return np.zeros(pts.shape[0])
    params = np.ascontiguousarray(params, dtype=float)
    return np.asarray(_impl.eval_phantom(int(code), params, pts))


def sb_accumulate_batch(
    pts: np.ndarray,
    weights: np.ndarray,
    fvals: np.ndarray,
    res: np.ndarray,
    ims: np.ndarray,
    h: float,
) -> np.ndarray:
    """Batched stable wavepacket sums; see ``_fallback.sb_accumulate_batch``."""
    pts = np.ascontiguousarray(pts, dtype=float)
    weights = np.ascontiguousarray(weights, dtype=float)
    fvals = np.ascontiguousarray(fvals, dtype=float)
    res = np.ascontiguousarray(np.atleast_2d(res), dtype=float)
    ims = np.ascontiguousarray(np.atleast_2d(ims), dtype=float)
    m = res.shape[0]
    if pts.shape[0] == 0:
        return np.zeros(m, dtype=np.complex128)
    workers = min(thread_count(), m)
    # parallelize only when the work is big enough to amortize the pool
    if workers <= 1 or m * pts.shape[0] < 1_000_000:
        return np.asarray(_impl.sb_accumulate_batch(pts, weights, fvals, res, ims, float(h)))
    blocks = np.array_split(np.arange(m), workers)
    out = np.empty(m, dtype=np.complex128)

    def _run(idx: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        r = _impl.sb_accumulate_batch(
            pts, weights, fvals,
            np.ascontiguousarray(res[idx]), np.ascontiguousarray(ims[idx]), float(h),
        )
        return idx, np.asarray(r)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        for idx, vals in pool.map(_run, [b for b in blocks if b.size]):
            out[idx] = vals
    return out


def sb_accumulate(pts, weights, fvals, re, im, h: float) -> complex:
    """Single-point stable wavepacket sum."""
    res = np.atleast_2d(np.asarray(re, dtype=float))
    ims = np.atleast_2d(np.asarray(im, dtype=float))
    return complex(sb_accumulate_batch(pts, weights, fvals, res, ims, h)[0])
