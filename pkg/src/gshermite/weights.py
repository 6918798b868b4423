"""Weight sequences {M_p}, their structural conditions and the associated function.

Everything is carried in log-space: ``p**(s*p)`` already overflows a double
near ``p = 150``.
"""
from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Sequence

import numpy as np

from .errors import CapError, SequenceRangeError

__all__ = [
    "Condition",
    "ConditionCertificate",
    "WeightSequence",
    "AssociatedFunction",
    "eval_Mp",
    "check_condition",
    "assoc_eval",
    "assoc_asymptotic_check",
]

GRID_EXPONENTS = range(-10, 21)
M3T_LADDER = tuple(2.0 ** -k for k in range(0, 11))


class Condition(str, Enum):
    M1 = "M1"
    M2 = "M2"
    M3prime = "M3prime"
    M3dprime = "M3dprime"
    M3tprime = "M3tprime"


@dataclass(frozen=True)
class WeightSequence:
    """A positive sequence with ``M_0 = 1``.

    ``kind`` is ``"gevrey_log"`` (``M_p = p^{sp} max(1, log p)^{tp}``) or
    ``"table"`` (explicit values, ``values[0]`` must be 1).
    """

    kind: str
    s: float = 0.5
    t: float = 0.0
    values: tuple[float, ...] = ()
    p_max: int = 200

    def __post_init__(self):
        if self.kind == "gevrey_log":
            if self.s < 0.5 or self.t < 0:
                raise ValueError(f"gevrey_log needs s >= 1/2, t >= 0 (got s={self.s}, t={self.t})")
        elif self.kind == "table":
            if not self.values:
                raise ValueError("table sequence needs at least one value")
            if self.values[0] != 1.0:
                raise ValueError("table sequence must have M_0 = 1")
            if any(not (v > 0 and math.isfinite(v)) for v in self.values):
                raise ValueError("table values must be finite and strictly positive")
            object.__setattr__(self, "values", tuple(float(v) for v in self.values))
            object.__setattr__(self, "p_max", len(self.values) - 1)
        else:
            raise ValueError(f"unknown sequence kind {self.kind!r}")

    @classmethod
    def gevrey_log(cls, s: float, t: float = 0.0, p_max: int = 200) -> "WeightSequence":
        return cls("gevrey_log", s=float(s), t=float(t), p_max=int(p_max))

    @classmethod
    def table(cls, values: Sequence[float]) -> "WeightSequence":
        return cls("table", s=0.0, t=0.0, values=tuple(values))

    @property
    def is_table(self) -> bool:
        return self.kind == "table"

    @property
    def horizon(self) -> int | None:
        """Largest admissible index, or None for closed-form kinds."""
        return len(self.values) - 1 if self.is_table else None

    def log_Mp(self, p):
        """log M_p for an integer or an integer array."""
        arr = np.asarray(p)
        if arr.size and (arr < 0).any():
            raise SequenceRangeError("negative index")
        if self.is_table:
            if arr.size and arr.max() > len(self.values) - 1:
                raise SequenceRangeError(
                    f"index {int(arr.max())} outside table of length {len(self.values)}")
            out = np.log(np.asarray(self.values))[arr]
        else:
            pf = arr.astype(float)
            with np.errstate(divide="ignore", invalid="ignore"):
                logp = np.where(pf > 0, np.log(np.where(pf > 0, pf, 1.0)), 0.0)
                out = self.s * pf * logp
                if self.t:
                    out = out + self.t * pf * np.log(np.maximum(1.0, logp))
        return out if np.ndim(out) else float(out)

    def to_dict(self) -> dict[str, Any]:
        if self.is_table:
            return {"kind": "table", "values": list(self.values)}
        return {"kind": "gevrey_log", "s": self.s, "t": self.t}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict[str, Any], p_max: int = 200) -> "WeightSequence":
        kind = d.get("kind")
        if kind == "gevrey_log":
            return cls.gevrey_log(d["s"], d.get("t", 0.0), p_max=d.get("p_max", p_max))
        if kind in ("table", "explicit_table"):
            return cls.table(d["values"])
        raise ValueError(f"unknown sequence kind {kind!r}")

    @classmethod
    def from_json(cls, text: str, p_max: int = 200) -> "WeightSequence":
        return cls.from_dict(json.loads(text), p_max=p_max)


def eval_Mp(seq: WeightSequence, p: int) -> float:
    """M_p itself (may overflow to inf for large p; use ``seq.log_Mp`` instead)."""
    if p < 0:
        raise SequenceRangeError("negative index")
    if p == 0:
        return 1.0
    if seq.is_table:
        if p >= len(seq.values):
            raise SequenceRangeError(f"index {p} outside table of length {len(seq.values)}")
        return seq.values[p]
    try:
        return math.exp(seq.log_Mp(p))
    except OverflowError:
        return math.inf


# ---------------------------------------------------------------------------
# condition certificates


@dataclass
class ConditionCertificate:
    condition: Condition
    verdict: str  # "holds_up_to_pmax" | "fails" | "undecided"
    p_max: int
    witness: int | None = None
    constants: dict[str, float] | None = None
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.verdict == "holds_up_to_pmax"

    def to_dict(self) -> dict[str, Any]:
        return {
            "condition": self.condition.value,
            "verdict": self.verdict,
            "witness": self.witness,
            "constants": self.constants,
            "p_max": self.p_max,
            "details": self.details,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _log_table(seq: WeightSequence, upto: int) -> np.ndarray:
    if seq.is_table and upto > seq.horizon:
        raise SequenceRangeError(f"p_max={upto} exceeds table horizon {seq.horizon}")
    return np.asarray(seq.log_Mp(np.arange(upto + 1)), dtype=float)


STABLE_LOG_EXCESS = 0.05


def _stable_sup(logterms: np.ndarray) -> tuple[float, int, bool]:
    """sup of a log-sequence, its first argmax, and whether the second half
    of the range adds at most ``STABLE_LOG_EXCESS`` to the first-half sup."""
    k = int(np.argmax(logterms))
    half = (len(logterms) - 1) // 2
    excess = float(logterms[k] - np.max(logterms[:half + 1]))
    return float(logterms[k]), k, excess <= STABLE_LOG_EXCESS


def _check_m1(seq, p_max):
    lm = _log_table(seq, p_max + 1 if not seq.is_table else min(p_max + 1, seq.horizon))
    top = len(lm) - 2
    excess = 2 * lm[1:top + 1] - lm[:top] - lm[2:top + 2]
    tol = 1e-12 * np.maximum(1.0, np.abs(lm[1:top + 1]))
    bad = np.nonzero(excess > tol)[0]
    if bad.size:
        return ConditionCertificate(Condition.M1, "fails", p_max, witness=int(bad[0]) + 1,
                                    details={"excess_log": float(excess[bad[0]])})
    return ConditionCertificate(Condition.M1, "holds_up_to_pmax", p_max,
                                details={"min_log_gap": float(-excess.max()) if excess.size else 0.0})


def _min_split(lm: np.ndarray) -> np.ndarray:
    """min over 0 <= q <= p of log M_q + log M_{p-q}, for every p."""
    out = np.empty_like(lm)
    for p in range(len(lm)):
        out[p] = np.min(lm[:p + 1] + lm[p::-1])
    return out


def _grid_search(seq, condition, logterm_of, grid, p_max, name, const_name):
    """Scan ``grid`` in order and certify with the first stable value."""
    last = None
    for g in grid:
        logterms = logterm_of(g)
        logc, arg, stable = _stable_sup(logterms)
        if stable:
            return ConditionCertificate(
                condition, "holds_up_to_pmax", p_max,
                constants={name: g, const_name: math.exp(logc), f"log_{const_name}": logc},
                details={"argmax_p": arg})
        last = (g, logterms)
    g, logterms = last
    half = (len(logterms) - 1) // 2
    head = float(np.max(logterms[:half + 1]))
    witness = int(half + 1 + np.argmax(logterms[half + 1:] > head + STABLE_LOG_EXCESS))
    return ConditionCertificate(
        condition, "fails", p_max, witness=witness,
        details={f"largest_{name}": g, "log_excess": float(logterms[witness] - head)})


def _check_m2(seq, p_max):
    lm = _log_table(seq, p_max)
    split = _min_split(lm)
    p = np.arange(len(lm))
    grid = [2.0 ** k for k in GRID_EXPONENTS]
    return _grid_search(seq, Condition.M2, lambda H: lm - p * math.log(H) - split,
                        grid, p_max, "H", "A")


def _half_p_log_p(p: np.ndarray) -> np.ndarray:
    pf = p.astype(float)
    return 0.5 * pf * np.log(np.where(pf > 0, pf, 1.0))


def _check_m3dprime(seq, p_max):
    lm = _log_table(seq, p_max)
    p = np.arange(len(lm))
    base = _half_p_log_p(p) - lm
    grid = [2.0 ** k for k in GRID_EXPONENTS]
    return _grid_search(seq, Condition.M3dprime, lambda L: base - p * math.log(L),
                        grid, p_max, "L", "C")


def _check_m3tprime(seq, p_max):
    lm = _log_table(seq, p_max)
    p = np.arange(len(lm))
    base = _half_p_log_p(p) - lm
    # g_p = log M_p / p - log(p)/2 -> +inf is what "every L" needs
    half = p_max // 2
    g = -base[1:] / p[1:]
    g_rising = bool(g[-1] - g[half - 1] > 1e-9)
    ladder = []
    witness = None
    for L in M3T_LADDER:
        logc, arg, stable = _stable_sup(base - p * math.log(L))
        finite = stable or g_rising
        ladder.append({"L": L, "log_C": logc, "argmax_p": arg, "finite": finite})
        if not finite and witness is None:
            witness = arg
    logs = np.array([r["log_C"] for r in ladder])
    inv = np.log(1.0 / np.array(M3T_LADDER))
    trend = float(np.polyfit(inv, logs, 1)[0]) if len(ladder) > 1 else 0.0
    details = {"ladder": ladder, "log_C_slope_vs_log_inv_L": trend,
               "g_tail_rising": g_rising}
    if witness is None:
        return ConditionCertificate(Condition.M3tprime, "holds_up_to_pmax", p_max, details=details)
    return ConditionCertificate(Condition.M3tprime, "fails", p_max, witness=witness, details=details)


def _check_m3prime(seq, p_max, eps=0.1):
    lm = _log_table(seq, p_max)
    logr = lm[:-1] - lm[1:]          # log(M_{p-1}/M_p), p = 1..p_max
    p = np.arange(1, p_max + 1, dtype=float)
    partial = math.fsum(np.exp(logr))
    tail = slice(p_max // 2, p_max)
    a = -float(np.polyfit(np.log(p[tail]), logr[tail], 1)[0])
    details = {"partial_sum": partial, "tail_exponent": a}
    trend = "undecided"
    if a > 1 + eps:
        trend = "converge"
    elif a < 1 - eps:
        trend = "diverge"
    else:
        # borderline ~1/p: compare p*r_p against 1/(log p)^b
        pt = p[tail]
        b = -float(np.polyfit(np.log(np.log(pt)), logr[tail] + np.log(pt), 1)[0])
        details["log_exponent"] = b
        if b > 1 + eps:
            trend = "converge"
        elif b < 1 - eps:
            trend = "diverge"
    details["trend"] = trend
    if trend == "converge":
        return ConditionCertificate(Condition.M3prime, "holds_up_to_pmax", p_max, details=details)
    if trend == "diverge":
        return ConditionCertificate(Condition.M3prime, "fails", p_max, witness=p_max, details=details)
    return ConditionCertificate(Condition.M3prime, "undecided", p_max, details=details)


_CHECKS = {
    Condition.M1: _check_m1,
    Condition.M2: _check_m2,
    Condition.M3prime: _check_m3prime,
    Condition.M3dprime: _check_m3dprime,
    Condition.M3tprime: _check_m3tprime,
}


def check_condition(seq: WeightSequence, which: Condition | str, p_max: int | None = None
                    ) -> ConditionCertificate:
    """Numerically test one structural condition on ``p <= p_max``.

    M.2 and M.3'' search ``H, L`` over ``2**k, -10 <= k <= 20`` and report the
    first grid value whose required constant is already attained in the first
    half of the range. M.3' is a trend verdict, never a proof.
    """
    which = Condition(which)
    if p_max is None:
        p_max = seq.p_max
    if p_max < 4:
        raise ValueError("p_max must be at least 4")
    return _CHECKS[which](seq, p_max)


# ---------------------------------------------------------------------------
# associated function


class AssociatedFunction:
    """Memoized ``M(rho) = sup_p (p log rho - log M_p)``.

    For closed-form (log-convex) sequences the maximizer is located by a
    galloping search on the increments followed by a local check over a
    window of ``run`` indices on both sides. Tables are scanned exhaustively.
    """

    def __init__(self, seq: WeightSequence, hard_cap: int = 2 ** 44, run: int = 64):
        self.seq = seq
        self.hard_cap = hard_cap
        self.run = run
        self._cache: dict[float, tuple[float, int]] = {}
        self._lock = threading.Lock()

    def __call__(self, rho: float) -> float:
        return self.evaluate(rho)[0]

    def evaluate(self, rho: float) -> tuple[float, int]:
        rho = float(rho)
        hit = self._cache.get(rho)
        if hit is not None:
            return hit
        if not rho > 0:
            if rho == 0:
                res = (0.0, 0)  # only the p = 0 term survives
            else:
                raise ValueError(f"rho must be positive (got {rho})")
        else:
            res = self._table_sup(rho) if self.seq.is_table else self._gallop(rho)
        with self._lock:
            self._cache.setdefault(rho, res)
        return res

    def many(self, rhos) -> np.ndarray:
        rhos = np.asarray(rhos, dtype=float)
        flat = rhos.ravel()
        uniq, inv = np.unique(flat, return_inverse=True)
        vals = np.array([self.evaluate(r)[0] for r in uniq])
        return vals[inv].reshape(rhos.shape)

    def _terms(self, lo: int, hi: int, logrho: float) -> np.ndarray:
        p = np.arange(lo, hi)
        return p * logrho - self.seq.log_Mp(p)

    def _table_sup(self, rho):
        logrho = math.log(rho)
        terms = self._terms(0, self.seq.horizon + 1, logrho)
        k = int(np.argmax(terms))
        if k == len(terms) - 1 and len(terms) > 1 and terms[-1] > terms[-2]:
            raise CapError(f"maximizer for rho={rho} reaches the end of the table (p={k})")
        return float(terms[k]), k

    def _gallop(self, rho):
        logrho = math.log(rho)
        lm = self.seq.log_Mp

        def rising(p):  # term(p) > term(p-1)
            return logrho - (lm(p) - lm(p - 1)) > 0

        if not rising(1):
            lo = 0
        else:
            lo, hi = 1, 2
            while rising(hi):
                lo, hi = hi, hi * 2
                if hi > self.hard_cap:
                    raise CapError(
                        f"maximizer for rho={rho} exceeds hard cap {self.hard_cap}; "
                        f"last rising index {lo}")
            while hi - lo > 1:
                mid = (lo + hi) // 2
                if rising(mid):
                    lo = mid
                else:
                    hi = mid
        a = max(0, lo - self.run)
        terms = self._terms(a, lo + self.run + 1, logrho)
        k = int(np.argmax(terms))
        if k == len(terms) - 1:
            raise CapError(f"no sustained decrease after p={a + k} for rho={rho}")
        return float(terms[k]), a + k


def assoc_eval(af: AssociatedFunction, rho: float) -> tuple[float, int]:
    """``(M(rho), maximizer)``."""
    if not rho > 0:
        raise ValueError("rho must be positive")
    return af.evaluate(rho)


def assoc_asymptotic_check(af: AssociatedFunction, s: float, t: float,
                           rho_grid: Sequence[float], tol: float = 0.3) -> dict[str, Any]:
    """Compare ``log M(rho)`` against ``(1/s) log rho - (t/s) log log rho``."""
    rows = []
    for rho in rho_grid:
        if rho < 100:
            raise ValueError("asymptotic check needs rho >= 1e2")
        value, pstar = af.evaluate(rho)
        predicted = math.log(rho) / s - (t / s) * math.log(math.log(rho))
        ratio = math.log(value) / predicted
        rows.append({"rho": float(rho), "M": value, "maximizer": pstar,
                     "log_M": math.log(value), "predicted_log": predicted, "ratio": ratio})
    devs = [abs(r["ratio"] - 1) for r in rows]
    approaching = all(b <= a + 1e-12 for a, b in zip(devs, devs[1:]))
    return {"s": s, "t": t, "rows": rows, "final_deviation": devs[-1],
            "approaching": approaching, "stabilizes": devs[-1] <= tol}
