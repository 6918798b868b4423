"""Hermite representations: analysis, synthesis, weighted norms and the
coefficient-space form of the Fourier transform, ladder, ``x`` and ``d/dx``.

All operators return new :class:`HermiteRep` objects. Anything pushed past
the top of the truncation box is dropped and its magnitude is added to
``truncation_loss`` on the result.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import AlignmentError, DataError, ShapeError
from .hermite import QuadratureRule, hermite_table
from .weights import AssociatedFunction

__all__ = [
    "HermiteRep",
    "ThetaVector",
    "SampledGrid",
    "SeqNorm",
    "analyze",
    "synthesize",
    "seq_norm",
    "log_weight_grid",
    "fourier",
    "ladder",
    "mul_x",
    "diff",
    "pairing",
]

PROVENANCES = ("analyzed", "synthetic", "operator-output")
_I_POWERS = np.array([1, 1j, -1, -1j])
_SQRT_HALF = math.sqrt(0.5)


@dataclass(frozen=True, eq=False)
class HermiteRep:
    """Complex coefficients ``a_n`` over the box ``0 <= n_k < shape[k]``."""

    coeffs: np.ndarray
    provenance: str = "synthetic"
    truncation_loss: float = 0.0

    def __post_init__(self):
        arr = np.array(self.coeffs, dtype=complex)
        if arr.ndim == 0:
            raise ShapeError("coefficients need at least one axis")
        if not np.all(np.isfinite(arr)):
            raise DataError("coefficients contain NaN or Inf")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)
        object.__setattr__(self, "truncation_loss", float(self.truncation_loss))

    @property
    def dims(self) -> int:
        return self.coeffs.ndim

    @property
    def shape(self) -> tuple[int, ...]:
        return self.coeffs.shape

    @classmethod
    def zeros(cls, shape: int | Sequence[int]) -> "HermiteRep":
        return cls(np.zeros(_as_shape(shape), dtype=complex))

    @classmethod
    def unit(cls, index: int | Sequence[int], shape: int | Sequence[int],
             value: complex = 1.0) -> "HermiteRep":
        shape = _as_shape(shape)
        idx = (index,) if np.ndim(index) == 0 else tuple(index)
        if len(idx) != len(shape):
            raise ShapeError("index and shape dimensions differ")
        arr = np.zeros(shape, dtype=complex)
        arr[idx] = value
        return cls(arr)

    def with_coeffs(self, coeffs, loss_increment: float = 0.0) -> "HermiteRep":
        return HermiteRep(coeffs, "operator-output", self.truncation_loss + loss_increment)

    def l2(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.coeffs) ** 2)))

    def __repr__(self):
        return (f"HermiteRep(shape={self.shape}, provenance={self.provenance!r}, "
                f"truncation_loss={self.truncation_loss:.3g})")


@dataclass(frozen=True)
class ThetaVector:
    components: tuple[float, ...]

    def __post_init__(self):
        comps = tuple(float(c) for c in np.atleast_1d(self.components))
        if not comps or any(not c > 0 for c in comps):
            raise ValueError("theta components must be strictly positive")
        object.__setattr__(self, "components", comps)

    @classmethod
    def coerce(cls, theta, dims: int) -> "ThetaVector":
        if not isinstance(theta, ThetaVector):
            theta = cls(tuple(np.atleast_1d(theta)))
        comps = theta.components
        if len(comps) == 1 and dims > 1:
            return cls(comps * dims)
        if len(comps) != dims:
            raise ShapeError(f"theta has {len(comps)} components, rep has {dims} axes")
        return theta


@dataclass(frozen=True)
class SampledGrid:
    """Function values on a tensor grid (one node array per axis)."""

    nodes: tuple[np.ndarray, ...]
    values: np.ndarray


def _as_shape(shape) -> tuple[int, ...]:
    shape = (int(shape),) if np.ndim(shape) == 0 else tuple(int(s) for s in shape)
    if any(s < 1 for s in shape):
        raise ShapeError("truncation sizes must be positive")
    return shape


def _contract_axes(values: np.ndarray, mats: Sequence[np.ndarray]) -> np.ndarray:
    """Apply ``mats[k]`` (shape ``(N_k, order)``) along axis ``k`` of ``values``."""
    out = values
    for axis, m in enumerate(mats):
        out = np.moveaxis(np.tensordot(out, m, axes=([axis], [1])), -1, axis)
    return out


def analyze(f: Callable | SampledGrid, shape: int | Sequence[int],
            rule: QuadratureRule) -> HermiteRep:
    """Fourier-Hermite coefficients ``a_n = int f H_n`` by tensorized quadrature.

    ``f`` is either a vectorized callable taking one array per axis (on the
    ``ij``-indexed node grid) or a :class:`SampledGrid` whose nodes must be the
    rule's nodes; nothing is interpolated.
    """
    shape = _as_shape(shape)
    if rule.order < 2 * max(shape) + 4:
        raise ValueError(f"rule order {rule.order} < 2*max(shape)+4 = {2 * max(shape) + 4}")
    d = len(shape)
    if isinstance(f, SampledGrid):
        if len(f.nodes) != d:
            raise ShapeError(f"sampled grid has {len(f.nodes)} axes, shape has {d}")
        for ax, nodes in enumerate(f.nodes):
            nodes = np.asarray(nodes, dtype=float)
            if nodes.shape != rule.nodes.shape or not np.allclose(nodes, rule.nodes, rtol=0,
                                                                  atol=1e-12):
                raise AlignmentError(f"axis {ax}: samples are not on the quadrature nodes")
        values = np.asarray(f.values)
        if values.shape != (rule.order,) * d:
            raise ShapeError(f"sampled values have shape {values.shape}")
    else:
        grids = np.meshgrid(*([rule.nodes] * d), indexing="ij")
        values = np.asarray(f(*grids))
        values = np.broadcast_to(values, (rule.order,) * d)
    if np.isnan(values).any():
        raise DataError("input function produced NaN")
    w = rule.shifted_weights
    mats = [hermite_table(n - 1, rule.nodes) * w for n in shape]
    coeffs = _contract_axes(values.astype(complex), mats)
    return HermiteRep(coeffs, "analyzed")


def synthesize(rep: HermiteRep, x):
    """``sum_n a_n H_n(x)``.

    For a one-axis rep ``x`` may be a scalar or an array of points; otherwise
    ``x`` has trailing dimension ``d``.
    """
    pts = np.asarray(x, dtype=float)
    if rep.dims == 1:
        flat = pts.reshape(-1, 1)
        out_shape = pts.shape
    else:
        if pts.shape[-1] != rep.dims:
            raise ShapeError(f"points have dimension {pts.shape[-1]}, rep has {rep.dims}")
        flat = pts.reshape(-1, rep.dims)
        out_shape = pts.shape[:-1]
    tables = [hermite_table(n - 1, flat[:, k]) for k, n in enumerate(rep.shape)]
    acc = np.tensordot(rep.coeffs, tables[0], axes=([0], [0]))
    for t in tables[1:]:
        acc = np.einsum("a...p,ap->...p", acc, t)
    out = acc.reshape(out_shape)
    return complex(out) if out.ndim == 0 else out


def log_weight_grid(shape: Sequence[int], theta: ThetaVector, af: AssociatedFunction,
                    factor: float = 2.0) -> np.ndarray:
    """``factor * sum_k M(theta_k sqrt(n_k))`` on the index box."""
    out = np.zeros(tuple(shape))
    for k, (n, th) in enumerate(zip(shape, theta.components)):
        vals = factor * af.many(th * np.sqrt(np.arange(n)))
        idx = [None] * len(shape)
        idx[k] = slice(None)
        out = out + vals[tuple(idx)]
    return out


@dataclass(frozen=True)
class SeqNorm:
    value: float
    log_value: float
    saturated: bool

    def __float__(self):
        return self.value


def _log_sum_exp(logs: np.ndarray) -> float:
    logs = np.asarray(logs, dtype=float).ravel()
    logs = logs[np.isfinite(logs)]
    if logs.size == 0:
        return -math.inf
    top = logs.max()
    rel = np.sort(np.exp(logs - top))[::-1]
    return float(top + math.log(math.fsum(rel)))


def seq_norm(rep: HermiteRep, theta, af: AssociatedFunction) -> SeqNorm:
    """``(sum |a_n|^2 exp[2 sum_k M(theta_k sqrt(n_k))])^{1/2}`` on the truncation.

    Overflow returns ``value = inf`` with ``saturated = True``; ``log_value``
    stays finite.
    """
    theta = ThetaVector.coerce(theta, rep.dims)
    mag = np.abs(rep.coeffs)
    with np.errstate(divide="ignore"):
        logs = 2.0 * np.log(mag) + log_weight_grid(rep.shape, theta, af)
    log_sq = _log_sum_exp(logs[mag > 0])
    log_norm = 0.5 * log_sq
    if log_norm == -math.inf:
        return SeqNorm(0.0, -math.inf, False)
    try:
        return SeqNorm(math.exp(log_norm), log_norm, False)
    except OverflowError:
        return SeqNorm(math.inf, log_norm, True)


def _index_sum(shape: Sequence[int]) -> np.ndarray:
    return sum(np.indices(tuple(shape)))


def fourier(rep: HermiteRep) -> HermiteRep:
    """Multiply ``a_n`` by ``(2 pi)^{d/2} i^{n_1+...+n_d}``."""
    phase = _I_POWERS[_index_sum(rep.shape) % 4]
    scale = math.sqrt(2.0 * math.pi) ** rep.dims
    return rep.with_coeffs(rep.coeffs * (scale * phase))


_SPLITTER = 134217729.0  # 2**27 + 1


def _split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def _two_prod(a, b):
    """``a*b = p + e`` exactly (Dekker)."""
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _sqrt_hi_lo(m: np.ndarray):
    """``sqrt(m)`` as an unevaluated sum ``hi + lo``."""
    hi = np.sqrt(m)
    p, e = _two_prod(hi, hi)
    lo = ((m - p) - e) / (2.0 * hi)
    return hi, lo


def _times_sqrt_real(c: np.ndarray, hi: np.ndarray, lo: np.ndarray) -> np.ndarray:
    p, e = _two_prod(c, hi)
    return p + (e + c * lo)


def _times_sqrt(c: np.ndarray, start: int, axis: int) -> np.ndarray:
    """``c * sqrt(start + j)`` along ``axis``, rounded once from double-double.

    Plain ``c * np.sqrt(m)`` rounds twice; ladder identities such as
    ``L^+ L^- = n`` are then off by up to 3 ulp instead of 1.
    """
    n = c.shape[axis]
    shape = [1] * c.ndim
    shape[axis] = n
    m = np.arange(start, start + n, dtype=float).reshape(shape)
    hi, lo = _sqrt_hi_lo(m)
    with np.errstate(over="ignore", invalid="ignore"):
        re = _times_sqrt_real(c.real, hi, lo)
        im = _times_sqrt_real(c.imag, hi, lo)
    # the split overflows for |c| near max double; fall back there
    plain = c * np.sqrt(m)
    re = np.where(np.isfinite(re), re, plain.real)
    im = np.where(np.isfinite(im), im, plain.imag)
    return re + 1j * im


def _check_axis(rep: HermiteRep, axis: int):
    if not 0 <= axis < rep.dims:
        raise ShapeError(f"axis {axis} out of range for a {rep.dims}-axis rep")


def _lower(c: np.ndarray, axis: int) -> np.ndarray:
    n = c.shape[axis]
    out = np.zeros_like(c)
    src = np.take(c, np.arange(1, n), axis=axis)
    dst = [slice(None)] * c.ndim
    dst[axis] = slice(0, n - 1)
    out[tuple(dst)] = _times_sqrt(src, 1, axis)
    return out


def _raise(c: np.ndarray, axis: int) -> tuple[np.ndarray, float]:
    n = c.shape[axis]
    out = np.zeros_like(c)
    src = np.take(c, np.arange(0, n - 1), axis=axis)
    dst = [slice(None)] * c.ndim
    dst[axis] = slice(1, n)
    out[tuple(dst)] = _times_sqrt(src, 1, axis)
    dropped = math.sqrt(n) * float(np.sqrt(np.sum(np.abs(np.take(c, n - 1, axis=axis)) ** 2)))
    return out, dropped


def ladder(rep: HermiteRep, which: str, axis: int = 0) -> HermiteRep:
    """Annihilation (``"lower"``) or creation (``"raise"``) along ``axis``."""
    _check_axis(rep, axis)
    if which == "lower":
        return rep.with_coeffs(_lower(rep.coeffs, axis))
    if which == "raise":
        out, dropped = _raise(rep.coeffs, axis)
        return rep.with_coeffs(out, dropped)
    raise ValueError(f"ladder direction must be 'raise' or 'lower', got {which!r}")


def mul_x(rep: HermiteRep, axis: int = 0) -> HermiteRep:
    """Multiplication by ``x_axis = (L^- + L^+)/sqrt(2)``."""
    _check_axis(rep, axis)
    up, dropped = _raise(rep.coeffs, axis)
    return rep.with_coeffs((_lower(rep.coeffs, axis) + up) * _SQRT_HALF, dropped * _SQRT_HALF)


def diff(rep: HermiteRep, axis: int = 0) -> HermiteRep:
    """Differentiation ``d/dx_axis = (L^- - L^+)/sqrt(2)``."""
    _check_axis(rep, axis)
    up, dropped = _raise(rep.coeffs, axis)
    return rep.with_coeffs((_lower(rep.coeffs, axis) - up) * _SQRT_HALF, dropped * _SQRT_HALF)


def _fsum_complex(z: np.ndarray) -> complex:
    z = np.asarray(z).ravel()
    return complex(math.fsum(z.real), math.fsum(z.imag))


def pairing(dual: HermiteRep, test: HermiteRep) -> complex:
    """Bilinear ``sum_n b_n a_n`` (no conjugation); boxes are zero-extended."""
    if dual.dims != test.dims:
        raise ShapeError(f"cannot pair a {dual.dims}-axis rep with a {test.dims}-axis rep")
    common = tuple(slice(0, min(a, b)) for a, b in zip(dual.shape, test.shape))
    return _fsum_complex(dual.coeffs[common] * test.coeffs[common])
