"""Orthonormal Hermite functions, their derivatives and Gauss-Hermite rules.

Hermite functions are only ever produced by the normalized three-term
recurrence

    H_{n+1}(x) = x sqrt(2/(n+1)) H_n(x) - sqrt(n/(n+1)) H_{n-1}(x),

seeded with ``H_0(x) = pi^{-1/4} exp(-x^2/2)``. The Gaussian factor is kept
as a separate log-scale so that large ``n`` near the turning point
``sqrt(2n+1)`` does not underflow at the seed.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import QuadratureError, ShapeError

__all__ = [
    "QuadratureRule",
    "HermiteIndex",
    "hermite_eval",
    "hermite_table",
    "hermite_deriv",
    "deriv_coefficients",
    "gauss_hermite",
    "tensor_eval",
]

PI_M14 = math.pi ** -0.25
_RESCALE = 1e150
_MAX_N = 100_000
_MAX_ALPHA = 30


def _recurrence(nmax: int, x: np.ndarray, keep: bool):
    """Run the recurrence up to ``nmax``; return the whole table or the last row."""
    x = np.asarray(x, dtype=float)
    logscale = -0.5 * x * x
    prev = np.zeros_like(x)
    cur = np.full_like(x, PI_M14)
    rows = [np.exp(logscale) * cur] if keep else None
    for n in range(nmax):
        nxt = x * math.sqrt(2.0 / (n + 1)) * cur - math.sqrt(n / (n + 1)) * prev
        prev, cur = cur, nxt
        big = np.abs(cur) > _RESCALE
        if big.any():
            f = np.where(big, 1.0 / _RESCALE, 1.0)
            prev = prev * f
            cur = cur * f
            logscale = logscale + np.where(big, math.log(_RESCALE), 0.0)
        if keep:
            with np.errstate(under="ignore"):
                rows.append(np.exp(logscale) * cur)
    if keep:
        return np.stack(rows)
    with np.errstate(under="ignore", over="ignore"):
        return np.exp(logscale) * cur


def hermite_eval(n: int, x):
    """Orthonormal Hermite function ``H_n`` at ``x`` (scalar or array)."""
    if n < 0:
        return np.zeros_like(np.asarray(x, dtype=float)) if np.ndim(x) else 0.0
    if n > _MAX_N:
        raise ValueError(f"n={n} exceeds supported maximum {_MAX_N}")
    out = _recurrence(n, np.atleast_1d(x), keep=False)
    return out if np.ndim(x) else float(out[0])


def hermite_table(nmax: int, x) -> np.ndarray:
    """Array of shape ``(nmax+1,) + shape(x)`` holding ``H_0 .. H_nmax``."""
    x = np.asarray(x, dtype=float)
    return _recurrence(nmax, x.ravel(), keep=True).reshape((nmax + 1,) + x.shape)


def deriv_coefficients(n: int, alpha: int) -> dict[int, float]:
    """Offsets ``j`` and weights ``g_j`` with ``H_n^{(alpha)} = sum g_j H_{n+j}``.

    Built by applying ``d/dx = (L^- - L^+)/sqrt(2)`` ``alpha`` times, where
    ``L^- H_m = sqrt(m) H_{m-1}`` and ``L^+ H_m = sqrt(m+1) H_{m+1}``.
    """
    if alpha < 0 or alpha > _MAX_ALPHA:
        raise ValueError(f"derivative order must be in [0, {_MAX_ALPHA}]")
    terms = {n: 1.0}
    r2 = math.sqrt(0.5)
    for _ in range(alpha):
        nxt: dict[int, float] = {}
        for m, c in terms.items():
            if m > 0:
                nxt[m - 1] = nxt.get(m - 1, 0.0) + c * math.sqrt(m) * r2
            nxt[m + 1] = nxt.get(m + 1, 0.0) - c * math.sqrt(m + 1) * r2
        terms = nxt
    return {m - n: c for m, c in sorted(terms.items()) if c != 0.0}


def hermite_deriv(n: int, x, alpha: int):
    """``alpha``-th derivative of ``H_n`` via the ladder expansion."""
    if n < 0:
        return hermite_eval(-1, x)
    coeffs = deriv_coefficients(n, alpha)
    table = hermite_table(n + alpha, np.atleast_1d(x))
    out = np.zeros(table.shape[1:])
    for j, c in coeffs.items():
        out += c * table[n + j]
    return out if np.ndim(x) else float(out[0])


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Hermite rule for the weight ``exp(-x^2)``.

    ``log_weights[i] = log(w_i) + x_i^2``, so an integrand ``g`` that already
    carries its Gaussian decay is integrated as ``sum(exp(log_weights) * g)``.
    """

    nodes: np.ndarray
    log_weights: np.ndarray
    order: int

    @property
    def shifted_weights(self) -> np.ndarray:
        return np.exp(self.log_weights)

    @property
    def weights(self) -> np.ndarray:
        with np.errstate(under="ignore"):
            return np.exp(self.log_weights - self.nodes ** 2)

    def integrate(self, g) -> complex | float:
        """``int g(x) dx`` for ``g`` given as values (or a callable) on the nodes."""
        vals = g(self.nodes) if callable(g) else np.asarray(g)
        return np.sum(self.shifted_weights * vals, axis=-1)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["node", "log_weight"])
            for x, lw in zip(self.nodes, self.log_weights):
                w.writerow([f"{x:.16e}", f"{lw:.16e}"])


def gauss_hermite(order: int) -> QuadratureRule:
    """Golub-Welsch rule of the given order (2 <= order <= 2000).

    Nodes are eigenvalues of the Jacobi matrix with off-diagonal
    ``sqrt(k/2)``. The shifted weights ``w_i exp(x_i^2)`` equal the inverse
    Christoffel function ``1 / sum_{k<order} H_k(x_i)^2``, which stays
    representable where the first eigenvector components underflow.
    """
    if not 2 <= order <= 2000:
        raise ValueError("order must be in [2, 2000]")
    off = np.sqrt(np.arange(1, order) / 2.0)
    try:
        nodes = eigh_tridiagonal(np.zeros(order), off, eigvals_only=True)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise QuadratureError(f"tridiagonal eigensolver failed for order {order}") from exc
    if not np.all(np.isfinite(nodes)):
        raise QuadratureError(f"non-finite nodes for order {order}")
    nodes = np.sort(nodes)
    # enforce exact antisymmetry
    nodes = 0.5 * (nodes - nodes[::-1])
    if order % 2:
        nodes[order // 2] = 0.0
    # one Newton step on H_order(x) = 0 using H_order' = sqrt(2 order) H_{order-1} - x H_order
    h_n, h_m = hermite_eval(order, nodes), hermite_eval(order - 1, nodes)
    deriv = math.sqrt(2.0 * order) * h_m - nodes * h_n
    step = np.where(deriv != 0, h_n / np.where(deriv != 0, deriv, 1.0), 0.0)
    nodes = nodes - step
    nodes = 0.5 * (nodes - nodes[::-1])
    # H_k(x)^2 underflows far out, so work with the log-scaled sum
    log_w = _log_inverse_christoffel(order, nodes)
    log_w = 0.5 * (log_w + log_w[::-1])
    return QuadratureRule(nodes=nodes, log_weights=log_w, order=order)


def _log_inverse_christoffel(order: int, x: np.ndarray) -> np.ndarray:
    """``-log sum_{k<order} H_k(x)^2`` with the Gaussian factor tracked in logs."""
    logscale = -0.5 * x * x
    prev = np.zeros_like(x)
    cur = np.full_like(x, PI_M14)
    acc = cur * cur
    for n in range(order - 1):
        nxt = x * math.sqrt(2.0 / (n + 1)) * cur - math.sqrt(n / (n + 1)) * prev
        prev, cur = cur, nxt
        acc = acc + cur * cur
        # squares are accumulated, so rescale well below sqrt(max double)
        big = np.abs(cur) > 1e100
        if big.any():
            f = np.where(big, 1e-100, 1.0)
            prev, cur = prev * f, cur * f
            acc = acc * f * f
            logscale = logscale + np.where(big, math.log(1e100), 0.0)
    return -(np.log(acc) + 2.0 * logscale)


@dataclass(frozen=True)
class HermiteIndex:
    components: tuple[int, ...]

    def __post_init__(self):
        comps = tuple(int(c) for c in self.components)
        if not comps:
            raise ValueError("a Hermite index needs at least one component")
        if any(c < 0 for c in comps):
            raise ValueError("Hermite index components must be nonnegative")
        object.__setattr__(self, "components", comps)

    @property
    def dim(self) -> int:
        return len(self.components)


def tensor_eval(n: HermiteIndex | Sequence[int], x: Sequence[float]) -> float:
    """``H_{n_1}(x_1) ... H_{n_d}(x_d)``."""
    idx = n if isinstance(n, HermiteIndex) else HermiteIndex(tuple(n))
    x = tuple(float(v) for v in np.atleast_1d(x))
    if len(x) != idx.dim:
        raise ShapeError(f"index has dimension {idx.dim}, point has {len(x)}")
    out = 1.0
    for k, xk in zip(idx.components, x):
        out *= hermite_eval(k, xk)
    return out
