"""Coefficient-matrix kernels ``t[n, k] = B(H_n, H_k)``.

A kernel over ``shape_l x shape_s`` is stored densely as one array of shape
``shape_l + shape_s``. Applying it contracts the trailing ``s`` axes with a
rep, which is the truncated form of ``<K phi, psi> = sum t[n,k] psi_n phi_k``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .coeff import HermiteRep, ThetaVector, diff, fourier, log_weight_grid, mul_x
from .errors import DataError, HeadroomError, ShapeError
from .io import fmt, write_json
from .opcalc import apply_expansion, build_expansion
from .weights import AssociatedFunction

__all__ = [
    "GrowthCertificate",
    "KernelRep",
    "kernel_from_bilinear",
    "apply_kernel",
    "kernel_growth_check",
    "kernel_of_operator",
]


def _shape(s) -> tuple[int, ...]:
    out = (int(s),) if np.ndim(s) == 0 else tuple(int(v) for v in s)
    if not out or any(v < 1 for v in out):
        raise ShapeError(f"invalid truncation {s!r}")
    return out


@dataclass(frozen=True)
class GrowthCertificate:
    theta: tuple[float, ...]
    nu: tuple[float, ...]
    C: float
    log_C: float
    argmax: tuple[int, ...]
    shape_l: tuple[int, ...]
    shape_s: tuple[int, ...]

    def to_dict(self) -> dict:
        return {"theta": list(self.theta), "nu": list(self.nu), "C": self.C,
                "log_C": self.log_C, "argmax": list(self.argmax),
                "truncation": [list(self.shape_l), list(self.shape_s)]}


@dataclass(eq=False)
class KernelRep:
    matrix: np.ndarray
    shape_l: tuple[int, ...]
    shape_s: tuple[int, ...]
    growth: GrowthCertificate | None = None
    label: str = ""

    def __post_init__(self):
        self.shape_l, self.shape_s = _shape(self.shape_l), _shape(self.shape_s)
        arr = np.array(self.matrix, dtype=complex)
        if arr.shape != self.shape_l + self.shape_s:
            raise ShapeError(f"matrix shape {arr.shape} != {self.shape_l + self.shape_s}")
        if not np.all(np.isfinite(arr)):
            bad = np.unravel_index(int(np.argmax(~np.isfinite(arr))), arr.shape)
            raise DataError(f"non-finite kernel entry at {tuple(int(i) for i in bad)}")
        arr.setflags(write=False)
        self.matrix = arr

    @property
    def dims_l(self) -> int:
        return len(self.shape_l)

    @property
    def dims_s(self) -> int:
        return len(self.shape_s)

    def to_csv(self, path) -> None:
        """``n,k,re,im`` rows (``n1..,k1..`` columns for several axes) plus a JSON sidecar."""
        if self.dims_l == 1 and self.dims_s == 1:
            header = ["n", "k"]
        else:
            header = ([f"n{i + 1}" for i in range(self.dims_l)]
                      + [f"k{j + 1}" for j in range(self.dims_s)])
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header + ["re", "im"])
            for idx in np.ndindex(*self.matrix.shape):
                z = self.matrix[idx]
                w.writerow([*idx, fmt(z.real), fmt(z.imag)])
        meta = {"label": self.label, "shape_l": list(self.shape_l),
                "shape_s": list(self.shape_s),
                "growth": self.growth.to_dict() if self.growth else None}
        write_json(meta, str(path) + ".json")


def kernel_from_bilinear(B: Callable, shape_l, shape_s) -> KernelRep:
    """``matrix[n, k] = B(n, k)`` with ``n``, ``k`` passed as index tuples
    (plain ints when the corresponding side has one axis)."""
    shape_l, shape_s = _shape(shape_l), _shape(shape_s)
    arr = np.zeros(shape_l + shape_s, dtype=complex)
    for n in np.ndindex(*shape_l):
        nn = n[0] if len(n) == 1 else n
        for k in np.ndindex(*shape_s):
            kk = k[0] if len(k) == 1 else k
            v = complex(B(nn, kk))
            if math.isnan(v.real) or math.isnan(v.imag):
                raise DataError(f"bilinear form returned NaN at n={n}, k={k}")
            arr[n + k] = v
    return KernelRep(arr, shape_l, shape_s, label="bilinear")


def apply_kernel(K: KernelRep, phi: HermiteRep) -> HermiteRep:
    """``out[n] = sum_k matrix[n, k] phi[k]``."""
    if phi.shape != K.shape_s:
        raise ShapeError(f"rep shape {phi.shape} does not match kernel input {K.shape_s}")
    s = K.dims_s
    out = np.tensordot(K.matrix, phi.coeffs, axes=(list(range(K.dims_l, K.dims_l + s)),
                                                   list(range(s))))
    return HermiteRep(out, "operator-output", phi.truncation_loss)


def kernel_growth_check(K: KernelRep, theta, nu, af: AssociatedFunction) -> GrowthCertificate:
    """Minimal ``C`` with ``|t[n,k]| <= C exp[2 sum M(theta sqrt n)] exp[2 sum M(nu sqrt k)]``
    on the truncation. The certificate is also stored on ``K``."""
    th = ThetaVector.coerce(theta, K.dims_l)
    nv = ThetaVector.coerce(nu, K.dims_s)
    wl = log_weight_grid(K.shape_l, th, af)
    ws = log_weight_grid(K.shape_s, nv, af)
    total = wl.reshape(wl.shape + (1,) * K.dims_s) + ws.reshape((1,) * K.dims_l + ws.shape)
    mag = np.abs(K.matrix)
    with np.errstate(divide="ignore"):
        slack = np.log(mag) - total
    flat = int(np.argmax(slack))
    log_c = float(slack.flat[flat])
    argmax = tuple(int(i) for i in np.unravel_index(flat, mag.shape))
    if log_c == -math.inf:
        C = 0.0
    elif total.flat[flat] == 0.0:
        C = float(mag.flat[flat])  # exact when the weight is exp(0)
    else:
        C = math.exp(log_c) if log_c < 709.0 else math.inf
    cert = GrowthCertificate(th.components, nv.components, C, log_c, argmax,
                             K.shape_l, K.shape_s)
    K.growth = cert
    return cert


def _parse_op(op: str) -> tuple[str, int]:
    if op in ("fourier", "mul_x", "diff"):
        return op, 0
    for prefix in ("oscillator^", "oscillator"):
        if op.startswith(prefix) and op[len(prefix):].isdigit():
            N = int(op[len(prefix):])
            if N >= 1:
                return "oscillator", N
    raise ValueError(f"unknown operator tag {op!r} (fourier, mul_x, diff, oscillator^N)")


def kernel_of_operator(op: str, shape) -> KernelRep:
    """Matrix whose column ``k`` is the coefficient image of the unit vector at ``k``.

    ``mul_x`` and ``diff`` act along the first axis and are truncated like the
    coefficient-space operators. ``oscillator^N`` columns are computed on a
    box enlarged by ``2N`` so no image term is lost, then cut back.
    """
    kind, N = _parse_op(op)
    shape = _shape(shape)
    band = {"fourier": 0, "mul_x": 1, "diff": 1, "oscillator": 2 * N}[kind]
    if shape[0] <= band:
        raise HeadroomError(f"{op} needs more than {band} slots, got {shape[0]}")
    cols = np.zeros(shape + shape, dtype=complex)
    exp = build_expansion(N) if kind == "oscillator" else None
    big = (shape[0] + 2 * N + 1,) + shape[1:]
    for k in np.ndindex(*shape):
        if kind == "fourier":
            img = fourier(HermiteRep.unit(k, shape)).coeffs
        elif kind == "mul_x":
            img = mul_x(HermiteRep.unit(k, shape)).coeffs
        elif kind == "diff":
            img = diff(HermiteRep.unit(k, shape)).coeffs
        else:
            img = apply_expansion(exp, HermiteRep.unit(k, big)).coeffs
            img = img[tuple(slice(0, s) for s in shape)]
        cols[(Ellipsis,) + k] = img
    return KernelRep(cols, shape, shape, label=op)
