import json
import math

import numpy as np
import pytest

from ultraweights.verdicts import (
    Interval,
    Status,
    Verdict,
    combine_all,
    trend_bounded,
    trend_liminf_positive,
    trend_to_infinity,
)


def test_interval_basics():
    iv = Interval(1.0, 2.0)
    assert iv.mid == 1.5 and iv.width == 1.0 and iv.finite
    assert (iv + Interval(0.5, 0.5)).lo == 1.5
    assert iv.scale(2.0).hi == 4.0
    assert not Interval(0.0, math.inf).finite
    with pytest.raises(ValueError):
        Interval(2.0, 1.0)


def test_verdict_json_roundtrip():
    v = Verdict(Status.HOLDS, relation="preceq", lhs="a", rhs="b", witness=3, note="x")
    d = json.loads(v.to_json())
    assert d["status"] == "Holds" and d["relation"] == "preceq"
    assert "trajectory_sample" in d
    assert v.exit_code() == 0
    assert Verdict(Status.FAILS).exit_code() == 1
    assert Verdict(Status.INCONCLUSIVE).exit_code() == 3


def test_combine_all_ordering():
    H, F, I = Status.HOLDS, Status.FAILS, Status.INCONCLUSIVE
    assert combine_all([Verdict(H), Verdict(H)]) is H
    assert combine_all([Verdict(H), Verdict(I)]) is I
    assert combine_all([Verdict(I), Verdict(F)]) is F


def test_trend_bounded_on_constant():
    ks = np.arange(1, 257)
    assert trend_bounded(np.zeros(256), ks).holds


def test_trend_bounded_on_decreasing():
    ks = np.arange(1, 257, dtype=float)
    assert trend_bounded(1.0 / ks, ks).holds


def test_trend_bounded_saturating_fast():
    # c - d log(k)/k converges with geometrically decaying window increments
    ks = np.arange(2, 514, dtype=float)
    v = trend_bounded(1.5 - 3.0 * np.log(ks) / ks, ks)
    assert v.holds


def test_trend_bounded_saturating_slowly_is_not_certified_growth():
    # c - d / log k converges, but so slowly that only a non-Fails outcome
    # is defensible at this scale: the window slope decays
    ks = np.arange(2, 514, dtype=float)
    v = trend_bounded(1.5 - 3.0 / np.log(ks), ks)
    assert not v.fails


def test_trend_bounded_certifies_log_growth():
    ks = np.arange(1, 513, dtype=float)
    v = trend_bounded(np.log(ks), ks)
    assert v.fails


def test_trend_bounded_certifies_power_growth():
    ks = np.arange(1, 513, dtype=float)
    assert trend_bounded(ks**0.25, ks).fails


def test_trend_bounded_overflow_certificate():
    vals = np.linspace(0, 800, 64)
    v = trend_bounded(vals, np.arange(1, 65))
    assert v.fails and "overflow" in v.note


def test_trend_bounded_too_short_is_inconclusive():
    assert trend_bounded(np.zeros(8), np.arange(1, 9)).inconclusive


def test_trend_to_infinity_mirrors():
    ks = np.arange(1, 513, dtype=float)
    assert trend_to_infinity(np.log(ks), ks).holds
    assert trend_to_infinity(np.zeros(512), ks).fails


def test_trend_liminf_positive():
    ks = np.arange(1, 513, dtype=float)
    assert trend_liminf_positive(np.full(512, 0.3), ks).holds
    assert trend_liminf_positive(1.0 / ks, ks).fails
    # a zero in the tail is an immediate decay certificate
    vals = np.full(512, 0.3)
    vals[-5] = 0.0
    assert trend_liminf_positive(vals, ks).fails
