"""Built-in weight families with closed-form evaluators, tails, and envelopes.

These entries are the ground truth of the test suite: each carries exact (or
tightly bracketed) tail sums and, where available, closed-form reference
values for the integral transforms and the Young conjugate.  Entries are
addressed by URI-like names, e.g. seq:gevrey?s=2, fn:power?beta=0.5,
mat:omega?fn=power&beta=0.5.

Closed forms used:
  - Gevrey index s: log M_k = s log k!, mu_k = k^s, tail sum via the Hurwitz
    zeta tail (trigamma for s = 2), with an integral-test bracket otherwise.
  - geometric-quadratic base q: log M_k = k^2 log q, mu_k = q^{2k-1},
    exact geometric tails.
  - power weight t^beta: kappa = t^beta/(1-beta), P(ir) = r^beta/cos(pi beta/2),
    conjugate (x/beta)(log(x/beta) - 1) for x >= beta.
  - squared-log weight (max(0, log t))^2: kappa = log^2 t + 2 log t + 2 on
    t >= 1 (2t below), conjugate x^2/4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable
from urllib.parse import parse_qsl

import numpy as np
from scipy.special import gammaln, polygamma

from .errors import CatalogError
from .func_core import Envelope, WeightFn, WeightMatrix, matrix_from_omega
from .seq_core import WeightSeq
from .verdicts import Interval

__all__ = [
    "make_gevrey",
    "make_factorial",
    "make_q_gevrey",
    "make_exp_gevrey_member",
    "make_power_weight",
    "make_log_square_weight",
    "make_linear_weight",
    "constant_matrix",
    "exp_gevrey_matrix",
    "resolve",
    "entries",
    "CatalogEntry",
]

_ZETA_PARTIAL_N = 10_000


# -- sequences ---------------------------------------------------------------


def make_gevrey(s: float) -> WeightSeq:
    """The factorial-power sequence log M_k = s log k!, quotients mu_k = k^s.

    Non-quasianalytic exactly when s > 1; s <= 1 is rejected (the harmonic
    boundary).  Tails: exact trigamma for s = 2, otherwise a partial sum to
    10^4 plus the integral-test bracket [((s-1)(K+1)^{s-1})^{-1},
    ((s-1)K^{s-1})^{-1}].
    """
    if not s > 1:
        raise ValueError(f"gevrey index must be > 1 (got {s}); s = 1 is the quasianalytic boundary")

    def ev(kk: np.ndarray) -> np.ndarray:
        return s * gammaln(kk + 1.0)

    if s == 2:

        def tail(k: int) -> Interval:
            v = float(polygamma(1, k))
            pad = abs(v) * 1e-13
            return Interval(v - pad, v + pad)

    else:

        def tail(k: int) -> Interval:
            kk = np.arange(k, _ZETA_PARTIAL_N + 1, dtype=float)
            partial = float(np.sum(kk**-s))
            top = float(_ZETA_PARTIAL_N)
            return Interval(
                partial + 1.0 / ((s - 1.0) * (top + 1.0) ** (s - 1.0)),
                partial + 1.0 / ((s - 1.0) * top ** (s - 1.0)),
            )

    seq = WeightSeq(f"gevrey(s={s:g})", ev, tail=tail, is_weight_seq=True)
    seq.quotient_proxy = lambda kk: s * np.log(np.maximum(kk, 1.0))
    return seq


def make_factorial() -> WeightSeq:
    """log M_k = log k!: quasianalytic (harmonic quotient tail), still a weight sequence."""
    seq = WeightSeq("factorial", lambda kk: gammaln(kk + 1.0), is_weight_seq=True)
    seq.quotient_proxy = lambda kk: np.log(np.maximum(kk, 1.0))
    return seq


def make_q_gevrey(q: float) -> WeightSeq:
    """log M_k = k^2 log q for q > 1: geometric quotients q^{2k-1}, exact tails.

    The standard example without moderate growth.
    """
    if not q > 1:
        raise ValueError("base must be > 1")
    lq = math.log(q)

    def tail(k: int) -> Interval:
        v = math.exp(-(2 * k - 1) * lq) / (1.0 - math.exp(-2 * lq))
        pad = v * 1e-14
        return Interval(v - pad, v + pad)

    seq = WeightSeq(f"qgevrey(q={q:g})", lambda kk: kk**2 * lq, tail=tail, is_weight_seq=True)
    seq.quotient_proxy = lambda kk: (2 * kk - 1) * lq
    return seq


def make_exp_gevrey_member(p: float, a: float) -> WeightSeq:
    """Mixed polynomial-geometric quotients mu_k = k^p e^{a k}.

    log M_k = p log k! + a k(k+1)/2.  Tail bracketed by an adaptive partial
    sum plus a geometric remainder bound.  As a one-parameter family in `a`
    this is the catalog's example where the inverse-moderate-growth and
    shifted-liminf conditions genuinely hold together.
    """
    if p < 0 or a <= 0:
        raise ValueError("need p >= 0 and a > 0")

    def ev(kk: np.ndarray) -> np.ndarray:
        return p * gammaln(kk + 1.0) + a * kk * (kk + 1.0) / 2.0

    def tail(k: int) -> Interval:
        # sum_{j>=k} j^-p e^-aj: extend the partial sum until the geometric
        # remainder bound is negligible against it
        span = max(64, int(40.0 / a))
        js = np.arange(k, k + span + 1, dtype=float)
        partial = float(np.sum(js**-p * np.exp(-a * js))) if p else float(np.sum(np.exp(-a * js)))
        top = k + span + 1
        rem = top**-p * math.exp(-a * top) / (1.0 - math.exp(-a))
        return Interval(partial, partial + rem)

    seq = WeightSeq(f"expgevrey(p={p:g},a={a:g})", ev, tail=tail, is_weight_seq=True)
    seq.quotient_proxy = lambda kk: p * np.log(np.maximum(kk, 1.0)) + a * kk
    return seq


# -- functions -----------------------------------------------------------------


def _pow_vec(ts: np.ndarray, beta: float) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.where(ts > 0, np.exp(beta * np.log(np.maximum(ts, 1e-300))), 0.0)


def make_power_weight(beta: float) -> WeightFn:
    """omega(t) = t^beta for beta in (0,1): the strong weight workhorse.

    Exact envelope (beta, 0, 1).  Attached references: kappa = t^beta/(1-beta),
    P(ir) = r^beta / cos(pi beta / 2), conjugate (x/beta)(log(x/beta)-1) for
    x >= beta and -1 below (the objective peaks at the y = 0 boundary there).
    """
    if not 0 < beta < 1:
        raise ValueError("exponent must lie in (0, 1)")

    def om(ts: np.ndarray) -> np.ndarray:
        return _pow_vec(ts, beta)

    def phi_star_ref(xs):
        xs = np.asarray(xs, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            interior = (xs / beta) * (np.log(np.maximum(xs, 1e-300) / beta) - 1.0)
        return np.where(xs >= beta, interior, -1.0)

    return WeightFn(
        f"power(beta={beta:g})",
        om,
        envelope=Envelope(beta, 0.0, 1.0),
        normalized=False,
        kappa_ref=lambda ts: _pow_vec(np.asarray(ts, dtype=float), beta) / (1.0 - beta),
        poisson_ref=lambda rs: _pow_vec(np.asarray(rs, dtype=float), beta) / math.cos(math.pi * beta / 2.0),
        phi_star_ref=phi_star_ref,
    )


def make_log_square_weight() -> WeightFn:
    """omega(t) = (max(0, log t))^2: a normalized pre-weight with phi(y) = y^2.

    It is non-quasianalytic and doubling but has no growth-doubling constant
    (no H with 2 omega(t) <= omega(Ht) + H), so the members of its canonical
    matrix are inequivalent.  kappa(t) = log^2 t + 2 log t + 2 for t >= 1 and
    2t below; conjugate x^2/4.
    """

    def om(ts: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore"):
            ly = np.maximum(np.log(np.maximum(ts, 1e-300)), 0.0)
        return ly * ly

    def kappa_ref(ts):
        ts = np.asarray(ts, dtype=float)
        with np.errstate(divide="ignore"):
            lt = np.log(np.maximum(ts, 1e-300))
        return np.where(ts >= 1.0, lt * lt + 2.0 * lt + 2.0, 2.0 * ts)

    return WeightFn(
        "logsq",
        om,
        envelope=Envelope(0.5, 17.0, 1.0),  # max(log^2 t - sqrt t) ~ 16.31
        normalized=True,
        kappa_ref=kappa_ref,
        phi_star_ref=lambda xs: np.asarray(xs, dtype=float) ** 2 / 4.0,
    )


def make_linear_weight() -> WeightFn:
    """omega(t) = t: quasianalytic; conjugate x log x - x for x >= 1, -1 below.

    No envelope is attached (no theta < 1 works), so the integral transforms
    refuse it; it exercises the conjugate and predicate paths.
    """

    def phi_star_ref(xs):
        xs = np.asarray(xs, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            interior = xs * (np.log(np.maximum(xs, 1e-300)) - 1.0)
        return np.where(xs >= 1.0, interior, -1.0)

    return WeightFn(
        "linear",
        lambda ts: np.asarray(ts, dtype=float),
        envelope=None,
        normalized=False,
        phi_star_ref=phi_star_ref,
    )


# -- matrices ------------------------------------------------------------------


def constant_matrix(seq: WeightSeq, grid=None) -> WeightMatrix:
    """The one-parameter family whose every member is the same sequence."""
    return WeightMatrix(
        f"constant[{seq.name}]",
        lambda alpha: seq,
        grid=grid,
        provenance={"source": seq.name, "construction": "constant family"},
    )


def exp_gevrey_matrix(p: float = 2.0, grid=None) -> WeightMatrix:
    """Family alpha -> mu^(alpha)_k = k^p e^{alpha k}, increasing in alpha."""
    return WeightMatrix(
        f"expgevrey[p={p:g}]",
        lambda alpha: make_exp_gevrey_member(p, alpha),
        grid=grid,
        provenance={"construction": "polynomial-geometric quotient family", "p": p},
    )


# -- registry and URIs ----------------------------------------------------------


@dataclass(frozen=True)
class CatalogEntry:
    kind: str  # sequence | function | matrix
    key: str
    params: str
    doc: str
    make: Callable[..., object]


def entries() -> list[CatalogEntry]:
    return [
        CatalogEntry("sequence", "seq:gevrey", "s > 1", "factorial power (k!)^s; exact zeta/trigamma tails", make_gevrey),
        CatalogEntry("sequence", "seq:factorial", "", "k!; quasianalytic reference sequence", make_factorial),
        CatalogEntry("sequence", "seq:qgevrey", "q > 1", "q^(k^2); geometric quotients, no moderate growth", make_q_gevrey),
        CatalogEntry("sequence", "seq:expgevrey", "p >= 0, a > 0", "quotients k^p e^(a k)", make_exp_gevrey_member),
        CatalogEntry("function", "fn:power", "beta in (0,1)", "t^beta with closed-form transforms", make_power_weight),
        CatalogEntry("function", "fn:logsq", "", "(max(0, log t))^2, normalized pre-weight", make_log_square_weight),
        CatalogEntry("function", "fn:linear", "", "t; quasianalytic, conjugate checks only", make_linear_weight),
        CatalogEntry("matrix", "mat:omega", "fn=power&beta=..., fn=logsq", "canonical matrix of a weight function", None),
        CatalogEntry("matrix", "mat:gevrey", "s > 1", "constant family of a Gevrey sequence", None),
        CatalogEntry("matrix", "mat:qgevrey", "q > 1", "constant family of a q-Gevrey sequence", None),
        CatalogEntry("matrix", "mat:expgevrey", "p >= 0", "family with quotients k^p e^(alpha k)", None),
    ]


def _params(query: str) -> dict[str, str]:
    return dict(parse_qsl(query, keep_blank_values=True))


def _fn_from_params(p: dict[str, str]) -> WeightFn:
    kind = p.get("fn", "power")
    if kind == "power":
        return make_power_weight(float(p.get("beta", 0.5)))
    if kind == "logsq":
        return make_log_square_weight()
    if kind == "linear":
        return make_linear_weight()
    raise CatalogError(f"unknown function kind {kind!r}")


def resolve(uri: str, grid=None):
    """Resolve a catalog URI to a WeightSeq, WeightFn, or WeightMatrix."""
    if ":" not in uri:
        raise CatalogError(f"malformed entry URI {uri!r}")
    head, _, query = uri.partition("?")
    p = _params(query)
    try:
        if head == "seq:gevrey":
            return make_gevrey(float(p["s"]))
        if head == "seq:factorial":
            return make_factorial()
        if head == "seq:qgevrey":
            return make_q_gevrey(float(p["q"]))
        if head == "seq:expgevrey":
            return make_exp_gevrey_member(float(p.get("p", 2)), float(p["a"]))
        if head == "seq:csv":
            from .seq_core import seq_from_csv

            with open(p["path"], "r", encoding="utf-8") as fh:
                return seq_from_csv(p.get("name", p["path"]), fh.read(), is_weight_seq=bool(int(p.get("weight", "0"))))
        if head == "fn:power":
            return make_power_weight(float(p["beta"]))
        if head == "fn:logsq":
            return make_log_square_weight()
        if head == "fn:linear":
            return make_linear_weight()
        if head == "mat:omega":
            return matrix_from_omega(_fn_from_params(p), grid=grid)
        if head == "mat:gevrey":
            return constant_matrix(make_gevrey(float(p["s"])), grid=grid)
        if head == "mat:qgevrey":
            return constant_matrix(make_q_gevrey(float(p["q"])), grid=grid)
        if head == "mat:expgevrey":
            return exp_gevrey_matrix(float(p.get("p", 2)), grid=grid)
    except KeyError as e:
        raise CatalogError(f"{uri!r}: missing parameter {e}") from None
    except ValueError as e:
        raise CatalogError(f"{uri!r}: {e}") from None
    raise CatalogError(f"unknown catalog entry {uri!r}")
