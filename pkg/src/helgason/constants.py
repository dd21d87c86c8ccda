"""Loader for the frozen calibration constants shipped with the package.

The constants live in ``_data/constants.json`` and are produced once by
``calibration.run_calibration``.  Every figure is an empirically measured
supremum over a pinned family of configurations, inflated by a fixed safety
margin and then frozen.  The loader re-derives the payload checksum on every
read; a mismatch means the file was edited by hand and is rejected.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from importlib import resources
from typing import Dict

from .errors import CalibrationError

_MARGIN = 1.25  # safety factor applied to every measured supremum


def payload_checksum(payload: dict) -> str:
    canon = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:12]


@dataclass(frozen=True)
class Constants:
    """Frozen calibration figures, keyed by ambient dimension."""

    kernel_bound: Dict[int, float]
    growth_constant: Dict[int, float]
    certificate_constant: Dict[int, float]
    deconv_constant: Dict[int, float]
    stability_constant: Dict[int, float]
    sobolev_scale: Dict[int, float]
    version: str


_CACHE: Constants | None = None


def _parse(doc: dict) -> Constants:
    if "payload" not in doc or "version" not in doc:
        raise CalibrationError("constants file is missing payload or version")
    payload = doc["payload"]
    expect = payload_checksum(payload)
    if doc["version"] != expect:
        raise CalibrationError(
            f"constants checksum mismatch: file says {doc['version']}, payload hashes to {expect}"
        )
    def by_dim(key: str) -> Dict[int, float]:
        if key not in payload:
            raise CalibrationError(f"constants payload is missing '{key}'")
        return {int(k): float(v) for k, v in payload[key].items()}

    return Constants(
        kernel_bound=by_dim("kernel_bound"),
        growth_constant=by_dim("growth_constant"),
        certificate_constant=by_dim("certificate_constant"),
        deconv_constant=by_dim("deconv_constant"),
        stability_constant=by_dim("stability_constant"),
        sobolev_scale=by_dim("sobolev_scale"),
        version=doc["version"],
    )


def get_constants() -> Constants:
    """Load, verify, and cache the shipped constants."""
    global _CACHE
    if _CACHE is None:
        ref = resources.files("helgason").joinpath("_data/constants.json")
        try:
            text = ref.read_text(encoding="utf-8")
        except FileNotFoundError as exc:
            raise CalibrationError(
                "constants file not found; run helgason.calibration.run_calibration"
            ) from exc
        _CACHE = _parse(json.loads(text))
    return _CACHE


def constants_version() -> str:
    return get_constants().version
