"""JSON encodings for states, channels, POVMs and results.

Matrices are ``{"re": [[...]], "im": [[...]]}`` in row-major order; a state
adds ``dims`` and ``labels``, a channel is ``{"d_in", "d_out", "kraus"}`` and a
POVM ``{"dim", "label", "elements"}``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .channels import Channel
from .core import DensityMatrix, PureState, ValidationError
from .measures import OptResult, Povm


def matrix_to_json(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=complex)
    return {"re": m.real.tolist(), "im": m.imag.tolist()}


def matrix_from_json(obj: dict) -> np.ndarray:
    try:
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"bad matrix encoding: {exc}") from None
    if re.shape != im.shape:
        raise ValidationError("real and imaginary parts differ in shape")
    return re + 1j * im


def state_to_json(rho) -> dict:
    if isinstance(rho, PureState):
        rho = rho.density()
    return {"dims": list(rho.dims), "labels": list(rho.labels), **matrix_to_json(rho.matrix)}


def state_from_json(obj: dict) -> DensityMatrix:
    m = matrix_from_json(obj)
    if m.ndim == 1 or (m.ndim == 2 and 1 in m.shape and m.shape[0] != m.shape[1]):
        v = m.ravel()
        m = np.outer(v, v.conj())
    return DensityMatrix(m, obj.get("dims"), obj.get("labels"))


def channel_to_json(ch: Channel) -> dict:
    return {"d_in": ch.d_in, "d_out": ch.d_out, "kraus": [matrix_to_json(k) for k in ch.kraus]}


def channel_from_json(obj: dict) -> Channel:
    ch = Channel([matrix_from_json(k) for k in obj["kraus"]])
    if ("d_in" in obj and obj["d_in"] != ch.d_in) or ("d_out" in obj and obj["d_out"] != ch.d_out):
        raise ValidationError("declared channel dimensions do not match the Kraus operators")
    return ch


def povm_to_json(povm: Povm) -> dict:
    return {"dim": povm.dim, "label": povm.label, "elements": [matrix_to_json(m) for m in povm.elements]}


def povm_from_json(obj: dict) -> Povm:
    return Povm([matrix_from_json(m) for m in obj["elements"]], obj.get("label", "B"))


def optresult_to_json(res: OptResult) -> dict:
    return res.to_dict()


def load_json(path) -> dict:
    with open(Path(path), encoding="utf-8") as fh:
        return json.load(fh)


def dump_json(obj, path=None, **kw) -> str:
    """Deterministic encoding (sorted keys, fixed float repr)."""
    text = json.dumps(obj, sort_keys=True, indent=kw.get("indent", 1), allow_nan=True)
    if path is not None:
        Path(path).write_text(text + "\n", encoding="utf-8")
    return text
