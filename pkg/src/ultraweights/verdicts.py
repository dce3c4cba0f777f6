"""Three-valued verdicts, interval brackets, and the finite-data trend tests.

Deciding "sup_k r_k < infinity" from finitely many samples is impossible, so
every asymptotic decision in this package goes through one of the trend tests
below, which compare dyadic tail windows and return an explicit Inconclusive
when the data does not certify either outcome.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, asdict
from enum import Enum
from typing import Any

import numpy as np

# Tolerances shared across modules.  Sequence values live in the natural-log
# domain, so comparisons use an additive tolerance on logs.
LOG_TOL = 1e-9
TREND_SLACK = 1e-3
TREND_SLOPE = 0.05
# Overflow guard: a trajectory value beyond exp(700) is treated as a growth
# certificate rather than propagated as inf.
LOG_CLAMP = 700.0


class Status(Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    INCONCLUSIVE = "Inconclusive"

    def __bool__(self) -> bool:
        return self is Status.HOLDS


@dataclass(frozen=True)
class Interval:
    """A bracket [lo, hi] around an exactly defined real quantity."""

    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"invalid bracket [{self.lo}, {self.hi}]")

    @property
    def mid(self) -> float:
        if math.isinf(self.hi):
            return self.hi
        return 0.5 * (self.lo + self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def finite(self) -> bool:
        return math.isfinite(self.hi)

    def __add__(self, other: "Interval | float") -> "Interval":
        if isinstance(other, Interval):
            return Interval(self.lo + other.lo, self.hi + other.hi)
        return Interval(self.lo + other, self.hi + other)

    __radd__ = __add__

    def scale(self, c: float) -> "Interval":
        """Multiply by a non-negative constant."""
        if c < 0:
            raise ValueError("scale expects c >= 0")
        return Interval(self.lo * c, self.hi * c)

    @staticmethod
    def point(x: float) -> "Interval":
        return Interval(x, x)


@dataclass
class Verdict:
    """Outcome of an asymptotic check, with the evidence that produced it.

    `witness` is the extremizing index/point (or counterexample location),
    `trajectory` a subsample of the tested functional, `pairing` the
    (alpha, beta) matches found by family-level quantifier searches.
    """

    status: Status
    relation: str = ""
    lhs: str = ""
    rhs: str = ""
    witness: Any = None
    trajectory: list = field(default_factory=list)
    pairing: list = field(default_factory=list)
    grid: list = field(default_factory=list)
    note: str = ""

    @property
    def holds(self) -> bool:
        return self.status is Status.HOLDS

    @property
    def fails(self) -> bool:
        return self.status is Status.FAILS

    @property
    def inconclusive(self) -> bool:
        return self.status is Status.INCONCLUSIVE

    def exit_code(self) -> int:
        return {Status.HOLDS: 0, Status.FAILS: 1, Status.INCONCLUSIVE: 3}[self.status]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["status"] = self.status.value
        d["trajectory_sample"] = d.pop("trajectory")
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), default=_jsonable, **kw)

    def __repr__(self) -> str:  # keep pytest output readable
        extra = f", witness={self.witness!r}" if self.witness is not None else ""
        note = f", note={self.note!r}" if self.note else ""
        rel = f"{self.relation}: " if self.relation else ""
        return f"Verdict({rel}{self.status.value}{extra}{note})"


def _jsonable(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, Interval):
        return {"lo": x.lo, "hi": x.hi}
    if isinstance(x, Status):
        return x.value
    return str(x)


def combine_all(verdicts, note: str = "") -> Status:
    """Conjunction: Fails dominates, then Inconclusive, then Holds."""
    statuses = [v.status if isinstance(v, Verdict) else v for v in verdicts]
    if any(s is Status.FAILS for s in statuses):
        return Status.FAILS
    if any(s is Status.INCONCLUSIVE for s in statuses):
        return Status.INCONCLUSIVE
    return Status.HOLDS


def subsample(xs, values, limit: int = 24) -> list:
    """Thin a trajectory to at most `limit` (x, value) pairs for reports."""
    xs = np.asarray(xs)
    values = np.asarray(values, dtype=float)
    if len(xs) <= limit:
        idx = np.arange(len(xs))
    else:
        idx = np.unique(np.linspace(0, len(xs) - 1, limit).round().astype(int))
    return [(float(xs[i]), float(values[i])) for i in idx]


def _windows(m: int) -> tuple[slice, slice, slice] | None:
    """Dyadic tail windows [m/8,m/4), [m/4,m/2), [m/2,m] as index slices."""
    if m < 16:
        return None
    w3 = slice(m // 2, m)
    w2 = slice(m // 4, m // 2)
    w1 = slice(m // 8, m // 4)
    return w1, w2, w3


def trend_bounded(
    values,
    xs=None,
    *,
    slack: float = TREND_SLACK,
    slope_tol: float = TREND_SLOPE,
    relation: str = "",
    lhs: str = "",
    rhs: str = "",
) -> Verdict:
    """Decide whether a sampled functional stays bounded above.

    Holds when the max over the last dyadic window exceeds the max over the
    previous one by at most `slack`, or when the window maxima increase with
    geometrically decaying increments (ratio <= 3/4), which certifies
    convergence to a finite limit from below.  Fails when the regression of
    the values on log(x) over the last half has slope > `slope_tol`, the
    window maxima increase across three consecutive dyadic windows, and the
    slope persists between the last two windows (saturating trajectories
    lose slope; genuine growth keeps it) -- or when a value overflows the
    clamp.  Anything else is Inconclusive: finite data cannot decide a sup.
    """
    values = np.asarray(values, dtype=float)
    xs = np.arange(1, len(values) + 1, dtype=float) if xs is None else np.asarray(xs, dtype=float)
    meta = dict(relation=relation, lhs=lhs, rhs=rhs, trajectory=subsample(xs, values))
    if len(values) != len(xs):
        raise ValueError("values and xs length mismatch")

    bad = ~np.isfinite(values)
    clamped = values >= LOG_CLAMP
    if np.any(np.isnan(values)):
        i = int(np.argmax(np.isnan(values)))
        return Verdict(Status.INCONCLUSIVE, witness=xs[i], note="NaN in trajectory", **meta)
    if np.any(clamped | (bad & (values > 0))):
        i = int(np.argmax(clamped | bad))
        return Verdict(Status.FAILS, witness=float(xs[i]), note="overflow growth certificate", **meta)

    m = len(values)
    win = _windows(m)
    if win is None:
        return Verdict(Status.INCONCLUSIVE, note=f"too few samples ({m}) for windowed trend", **meta)
    w1, w2, w3 = win
    m1, m2, m3 = (float(np.max(values[w])) for w in (w1, w2, w3))
    i_max = int(np.argmax(values))
    meta["witness"] = float(xs[i_max])

    if m3 <= m2 + slack:
        return Verdict(Status.HOLDS, note=f"window maxima {m2:.6g} -> {m3:.6g}", **meta)
    gap21, gap32 = m2 - m1, m3 - m2
    if gap21 > 0 and gap32 <= 0.75 * gap21:
        r = gap32 / gap21
        limit = m3 + gap32 * r / (1.0 - r)
        return Verdict(
            Status.HOLDS,
            note=f"window increments decay geometrically (ratio {r:.3g}), extrapolated bound {limit:.6g}",
            **meta,
        )

    half = slice(m // 4, m)
    slope = _regression_slope(np.log(xs[half]), values[half])
    slope2 = _regression_slope(np.log(xs[w2]), values[w2])
    slope3 = _regression_slope(np.log(xs[w3]), values[w3])
    persistent = slope3 >= 0.9 * max(slope2, 0.0)
    if slope > slope_tol and m2 > m1 + slack and m3 > m2 + slack and persistent:
        return Verdict(
            Status.FAILS,
            note=f"growth certified: slope {slope:.4g} over log x, maxima {m1:.6g} < {m2:.6g} < {m3:.6g}",
            **meta,
        )
    return Verdict(
        Status.INCONCLUSIVE,
        note=f"maxima rose {m2:.6g} -> {m3:.6g}, slope {slope:.4g}"
        + ("" if persistent else f" decaying ({slope2:.4g} -> {slope3:.4g})"),
        **meta,
    )


def _regression_slope(x: np.ndarray, y: np.ndarray) -> float:
    x = x - x.mean()
    denom = float(x @ x)
    if denom == 0.0:
        return 0.0
    return float(x @ (y - y.mean())) / denom


def trend_to_infinity(values, xs=None, **kw) -> Verdict:
    """Certify that a sampled functional grows without bound (mirror test)."""
    v = trend_bounded(values, xs, **kw)
    flip = {Status.HOLDS: Status.FAILS, Status.FAILS: Status.HOLDS, Status.INCONCLUSIVE: Status.INCONCLUSIVE}
    note = {"Fails": "growth certified", "Holds": "trajectory stays bounded"}.get(v.status.value, v.note)
    return Verdict(flip[v.status], relation=v.relation, lhs=v.lhs, rhs=v.rhs,
                   witness=v.witness, trajectory=v.trajectory, note=note)


def trend_liminf_positive(values, xs=None, *, relation: str = "", lhs: str = "", rhs: str = "") -> Verdict:
    """Decide whether a positive sampled functional stays bounded away from 0.

    liminf v > 0 iff sup(-log v) < infinity, so this reuses `trend_bounded`
    on -log(values); non-positive values become overflow certificates.
    """
    values = np.asarray(values, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        neg_log = np.where(values > 0, -np.log(np.maximum(values, 1e-300)), np.inf)
    v = trend_bounded(neg_log, xs, relation=relation, lhs=lhs, rhs=rhs)
    xs_arr = np.arange(1, len(values) + 1) if xs is None else np.asarray(xs)
    v.trajectory = subsample(xs_arr, values)
    if v.holds:
        v.note = "liminf bounded away from zero: " + v.note
    elif v.fails:
        v.note = "decay to zero certified: " + v.note
    return v
