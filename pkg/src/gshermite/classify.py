"""Falloff/growth certificates for truncated Hermite representations and a
Gevrey-index estimate from coefficient decay.

A bound ``|a_n| <= C exp(-+ sum M(theta_k sqrt n_k))`` is judged on the
per-index log-slack ``r_n = log|a_n| +- sum M(theta_k sqrt n_k)``. It is
accepted at ``theta`` when the slack over the upper half of the index range
never exceeds its maximum over the lower half, i.e. the fitted constant is
not being pushed up by the tail. Because ``M`` is convex in ``log rho`` the
slack increments between a high and a low index move monotonically in
``theta``, so acceptance is monotone in ``theta`` in one dimension.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .coeff import HermiteRep, ThetaVector, _log_sum_exp, log_weight_grid
from .errors import InsufficientDataError, ShapeError
from .weights import AssociatedFunction, WeightSequence

__all__ = [
    "DecayCertificate",
    "ThetaCheck",
    "classify_test",
    "classify_dual",
    "estimate_gevrey_index",
]

NOISE_FLOOR = 1e-14
SATURATION_LOG = math.log(1e300)
MIN_USABLE = 8
MIN_NONZERO = 32
MIN_AXIS = 16


@dataclass
class ThetaCheck:
    theta: tuple[float, ...]
    holds: bool
    log_C: float
    residual: float
    argmax: tuple[int, ...] | None
    log_weighted_sum: float | None = None


@dataclass
class DecayCertificate:
    mode: str
    verdict: str  # "consistent" | "violated" | "inconclusive"
    theta_witness: tuple[float, ...] | None
    constant_C: float | None
    residual: float
    witness_index: tuple[int, ...] | None = None
    index_range: tuple[int, ...] = ()
    per_theta: list[ThetaCheck] = field(default_factory=list)
    grid_relative: bool = True

    def to_dict(self) -> dict[str, Any]:
        return {
            "mode": self.mode,
            "verdict": self.verdict,
            "theta": list(self.theta_witness) if self.theta_witness else None,
            "C": self.constant_C,
            "residual": self.residual,
            "witness_index": list(self.witness_index) if self.witness_index else None,
            "index_range": list(self.index_range),
            "grid_relative": self.grid_relative,
            "per_theta": [
                {"theta": list(c.theta), "holds": c.holds, "log_C": c.log_C,
                 "residual": c.residual,
                 "argmax": list(c.argmax) if c.argmax is not None else None}
                for c in self.per_theta
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _usable_mask(rep: HermiteRep, relative_floor: float | None) -> np.ndarray:
    mag = np.abs(rep.coeffs)
    if relative_floor is None or mag.max() == 0:
        return mag > 0
    return mag > relative_floor * mag.max()


def _split_head_tail(shape: Sequence[int]) -> np.ndarray:
    """True on the upper half of the total-degree range."""
    total = sum(np.indices(tuple(shape)))
    top = sum(n - 1 for n in shape)
    return total >= (top + 1) / 2


def _check_theta(rep, mask, af, theta, sign, tail):
    mag = np.abs(rep.coeffs)
    weights = log_weight_grid(rep.shape, theta, af, factor=1.0)
    with np.errstate(divide="ignore"):
        slack = np.where(mask, np.log(np.where(mask, mag, 1.0)) + sign * weights, -np.inf)
    flat_arg = int(np.argmax(slack))
    log_c = float(slack.flat[flat_arg])
    head_max = float(np.max(np.where(~tail, slack, -np.inf)))
    tail_max = float(np.max(np.where(tail, slack, -np.inf)))
    log_sum = None
    if sign > 0:
        # log of the theta-norm of the usable coefficients
        log_sum = 0.5 * _log_sum_exp(2.0 * slack[mask])
    if tail_max == -math.inf:
        holds, residual = True, 0.0
    elif head_max == -math.inf:
        holds, residual = False, math.inf
    else:
        residual = tail_max - head_max
        holds = residual <= 1e-12 * max(1.0, abs(head_max))
    if log_sum is not None and log_sum > SATURATION_LOG:
        holds = False
    argmax = tuple(int(i) for i in np.unravel_index(flat_arg, rep.shape))
    return ThetaCheck(theta.components, holds, log_c, residual, argmax, log_sum)


def _check_size(rep: HermiteRep) -> None:
    if min(rep.shape) < MIN_AXIS:
        raise ShapeError(f"classification needs at least {MIN_AXIS} coefficients per axis, "
                         f"got shape {rep.shape}")


def _thetas(grid, dims) -> list[ThetaVector]:
    out = [ThetaVector.coerce(t, dims) for t in grid]
    if not out:
        raise ValueError("theta grid must not be empty")
    return sorted(out, key=lambda t: t.components)


def _aggregate(rep, checks, mode, need_all, prefer_largest, mask, tail):
    index_range = tuple(rep.shape)
    usable_head = bool((mask & ~tail).any())
    usable_tail = bool((mask & tail).any())
    if usable_tail and not usable_head:
        return DecayCertificate(mode, "inconclusive", None, None, 0.0,
                                index_range=index_range, per_theta=checks)
    passing = [c for c in checks if c.holds]
    failing = [c for c in checks if not c.holds]
    ok = (not failing) if need_all else bool(passing)
    if ok:
        pick = (passing[-1] if prefer_largest else passing[0])
        residual = max((c.residual for c in passing), default=0.0)
        return DecayCertificate(mode, "consistent", pick.theta, math.exp(pick.log_C)
                                if pick.log_C > -math.inf else 0.0,
                                _finite(residual), index_range=index_range, per_theta=checks)
    worst = failing[-1] if prefer_largest else failing[0]
    if not need_all:
        # nothing passed: report the most favourable grid point
        worst = checks[0] if prefer_largest else checks[-1]
    return DecayCertificate(mode, "violated", None, None, _finite(worst.residual),
                            witness_index=worst.argmax, index_range=index_range,
                            per_theta=checks)


def _finite(x: float) -> float:
    return float(x) if math.isfinite(x) else float(np.sign(x) * np.finfo(float).max)


def _default_floor(rep: HermiteRep, noise_floor: float | None) -> float | None:
    if noise_floor is not None:
        return noise_floor or None
    # exact synthetic data carries no quadrature round-off
    return None if rep.provenance == "synthetic" else NOISE_FLOOR


def classify_test(rep: HermiteRep, seq: WeightSequence, theta_grid, mode: str = "roumieu",
                  af: AssociatedFunction | None = None,
                  noise_floor: float | None = None) -> DecayCertificate:
    """Ultrafast-falloff certificate: ``|a_n| <= C exp(-sum M(theta_k sqrt n_k))``.

    ``roumieu`` needs one grid theta (the largest passing one is reported),
    ``beurling`` needs all of them. For analyzed or operator-derived reps,
    coefficients below ``1e-14`` of the largest one are treated as zero
    (override with ``noise_floor``; 0 disables it).
    """
    if mode not in ("roumieu", "beurling"):
        raise ValueError("mode must be 'roumieu' or 'beurling'")
    _check_size(rep)
    af = af or AssociatedFunction(seq)
    thetas = _thetas(theta_grid, rep.dims)
    full_mode = "roumieu_some_theta" if mode == "roumieu" else "beurling_all_theta"
    if not np.any(rep.coeffs):
        return DecayCertificate(full_mode, "consistent", thetas[-1].components, 0.0, 0.0,
                                index_range=tuple(rep.shape))
    mask = _usable_mask(rep, _default_floor(rep, noise_floor))
    tail = _split_head_tail(rep.shape)
    checks = [_check_theta(rep, mask, af, th, +1.0, tail) for th in thetas]
    return _aggregate(rep, checks, full_mode, need_all=(mode == "beurling"),
                      prefer_largest=True, mask=mask, tail=tail)


def classify_dual(rep: HermiteRep, seq: WeightSequence, theta_grid, mode: str = "roumieu",
                  af: AssociatedFunction | None = None) -> DecayCertificate:
    """Growth certificate: ``|b_n| <= C exp(sum M(theta_k sqrt n_k))``.

    The Roumieu dual needs the bound at every grid theta, the Beurling dual at
    some theta (the smallest passing one is reported). A constant ``C`` is
    always fitted and reported.
    """
    if mode not in ("roumieu", "beurling"):
        raise ValueError("mode must be 'roumieu' or 'beurling'")
    _check_size(rep)
    af = af or AssociatedFunction(seq)
    thetas = _thetas(theta_grid, rep.dims)
    full_mode = "dual_roumieu_every_theta" if mode == "roumieu" else "dual_beurling_some_theta"
    if not np.any(rep.coeffs):
        return DecayCertificate(full_mode, "consistent", thetas[0].components, 0.0, 0.0,
                                index_range=tuple(rep.shape))
    mask = _usable_mask(rep, None)
    tail = _split_head_tail(rep.shape)
    checks = [_check_theta(rep, mask, af, th, -1.0, tail) for th in thetas]
    return _aggregate(rep, checks, full_mode, need_all=(mode == "roumieu"),
                      prefer_largest=False, mask=mask, tail=tail)


def _profile_fit(n: np.ndarray, y: np.ndarray, kappa: float) -> tuple[float, float]:
    """Least squares ``y ~ c - b n^kappa``; returns (sse, r2)."""
    X = np.column_stack([np.ones_like(n), n ** kappa])
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ coef
    sse = float(resid @ resid)
    sst = float(((y - y.mean()) ** 2).sum())
    return sse, (1.0 - sse / sst) if sst > 0 else 1.0


def estimate_gevrey_index(rep: HermiteRep) -> tuple[float, float]:
    """Estimate ``s`` from decay ``|a_n| ~ c exp(-b n^{1/(2s)})``.

    The exponent ``kappa = 1/(2s)`` is chosen to minimise the residual of the
    linear fit ``log|a_n| = c - b n^kappa`` (the intercept absorbs any overall
    scale). The rep needs at least 32 nonzero coefficients, and only those
    above ``1e-14`` relative to the largest one (at least 8 of them) are used. Returns ``(s_hat, R^2)``.
    """
    if rep.dims != 1:
        raise ValueError("Gevrey index estimation is one-dimensional")
    mag = np.abs(rep.coeffs)
    if np.count_nonzero(mag) < MIN_NONZERO:
        raise InsufficientDataError(f"{np.count_nonzero(mag)} nonzero coefficients "
                                    f"(need {MIN_NONZERO})")
    mask = _usable_mask(rep, NOISE_FLOOR)
    mask[0] = False  # n^kappa is flat at 0 for every kappa
    n = np.nonzero(mask)[0].astype(float)
    if n.size < MIN_USABLE:
        raise InsufficientDataError(f"only {n.size} usable coefficients (need {MIN_USABLE})")
    y = np.log(mag[mask])
    res = minimize_scalar(lambda lk: _profile_fit(n, y, math.exp(lk))[0],
                          bounds=(math.log(0.05), math.log(4.0)), method="bounded",
                          options={"xatol": 1e-10})
    kappa = math.exp(res.x)
    _, r2 = _profile_fit(n, y, kappa)
    return 1.0 / (2.0 * kappa), r2
