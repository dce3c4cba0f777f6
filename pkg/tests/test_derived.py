import math

import numpy as np
import pytest

from ultraweights.catalog import exp_gevrey_matrix, make_power_weight
from ultraweights.derived import derive_family, seq_K, seq_L, seq_Q, seq_S, seq_underline_L
from ultraweights.errors import DivergentTail, NotAWeightSequence
from ultraweights.func_core import matrix_from_omega, omega_tilde_from_seq, poisson_imag
from ultraweights.seq_core import (
    WeightSeq,
    is_log_convex,
    is_strongly_log_convex,
    log_convex_minorant,
    seq_preceq,
)
from ultraweights.verdicts import Status

PI2_6 = math.pi**2 / 6


# -- L ---------------------------------------------------------------------------


def test_L_first_term_trigamma(gevrey2):
    L = seq_L(gevrey2, 64)
    assert math.exp(L.log_m(1)) == pytest.approx(6 / math.pi**2, rel=1e-9)


def test_L_zeroth_term(gevrey2):
    assert seq_L(gevrey2, 16).log_m(0) == 0.0


def test_L_grows_past_factorial(gevrey2, factorial):
    # (L_k/k!)^{1/k} -> infinity
    from ultraweights.verdicts import trend_to_infinity

    n = 256
    L = seq_L(gevrey2, n)
    vals = (L.values(n)[1:] - factorial.values(n)[1:]) / np.arange(1, n + 1)
    assert trend_to_infinity(vals).holds


def test_L_requires_weight_sequence():
    pos = WeightSeq.from_values("wiggle", [0.0, 1.0, 0.5, 2.0])
    with pytest.raises(NotAWeightSequence):
        seq_L(pos, 3)


def test_L_spread_is_small_for_analytic_tails(gevrey2):
    assert seq_L(gevrey2, 128).spread < 1e-10


def test_underline_L_below_L_and_convex(gevrey2):
    n = 128
    L = seq_L(gevrey2, n)
    uL = seq_underline_L(gevrey2, n)
    assert np.all(uL.values(n) <= L.values(n) + 1e-9)
    assert is_log_convex(uL, n).holds


def test_underline_L_matches_hull_oracle(gevrey2):
    # hull of the L output computed independently
    n = 96
    buffer = max(16, n // 4)
    L = seq_L(gevrey2, n + buffer)
    want = log_convex_minorant(L, n).values(n)
    got = seq_underline_L(gevrey2, n).values(n)
    assert np.allclose(got, want, atol=1e-12)


# -- S ---------------------------------------------------------------------------


def test_S_sigma1_is_one(gevrey2, gevrey15):
    for m in (gevrey2, gevrey15):
        S = seq_S(m, 32)
        assert math.exp(S.sigma_log[0]) == pytest.approx(1.0, abs=1e-12)


def test_S_tau1_trigamma(gevrey2):
    S = seq_S(gevrey2, 32)
    assert S.tau[0] == pytest.approx(1.0 + PI2_6, rel=1e-10)


def test_S_strongly_log_convex(gevrey2):
    assert is_strongly_log_convex(seq_S(gevrey2, 256), 256).holds


def test_S_preceq_L(gevrey2):
    n = 256
    assert seq_preceq(seq_S(gevrey2, n), seq_L(gevrey2, n), n).holds


def test_sigma_below_mu_trend(gevrey2):
    # sigma_k / mu_k stays bounded; the recorded rescale constant witnesses it
    n = 256
    S = seq_S(gevrey2, n)
    from ultraweights.verdicts import trend_bounded

    assert trend_bounded(S.sigma_log - gevrey2.log_mu(n)).holds
    assert S.rescale_c < 4.0


# -- K ---------------------------------------------------------------------------


def test_K_zeroth_term_exact(gevrey2):
    assert seq_K(gevrey2, 32).log_m(0) == 0.0


def test_K_is_weight_sequence(gevrey2):
    K = seq_K(gevrey2, 128)
    assert is_log_convex(K, 128).holds


def test_K_bounded_by_M(gevrey2):
    from ultraweights.verdicts import trend_bounded

    n = 128
    K = seq_K(gevrey2, n)
    vals = K.values(n) - gevrey2.values(n)
    assert trend_bounded(vals[1:]).holds


def test_K_grows_past_factorial(gevrey2, factorial):
    from ultraweights.verdicts import trend_to_infinity

    n = 256
    K = seq_K(gevrey2, n)
    vals = (K.values(n)[1:] - factorial.values(n)[1:]) / np.arange(1, n + 1)
    assert trend_to_infinity(vals).holds


# -- Q ---------------------------------------------------------------------------


def test_Q_log_convex_exactly(gevrey2):
    Q = seq_Q(gevrey2, 64)
    d2 = np.diff(Q.values(64), 2)
    assert np.min(d2) >= -1e-12  # sup of linear forms over a common grid


def test_Q_dominates_single_probe(gevrey2):
    Q = seq_Q(gevrey2, 64)
    w = omega_tilde_from_seq(gevrey2)
    p1 = poisson_imag(w, 1.0)
    ks = np.arange(0, 65)
    # log r = 0 probe: raw values dominate -P(i)/2 (up to batch-vs-scalar noise)
    assert np.all(Q.log_q_raw >= -p1 / 2 - 1e-5)


def test_Q_sandwich_between_kappa_sups(gevrey2):
    # P/2 squeezed between kappa/4 and (2/pi) kappa transfers to the sup
    from ultraweights.func_core import kappa_assoc

    n = 32
    Q = seq_Q(gevrey2, n)
    w = omega_tilde_from_seq(gevrey2)
    rho = np.linspace(math.log(1e-2), math.log(1e6), 400)
    kap = np.asarray(kappa_assoc(w, np.exp(rho)))
    ks = np.arange(0, n + 1) + 0.5
    hi_env = np.max(np.outer(ks, rho) - kap[None, :] / 4.0, axis=1)
    lo_env = np.max(np.outer(ks, rho) - kap[None, :] * (2.0 / math.pi), axis=1)
    assert np.all(Q.log_q_raw <= hi_env + 1e-3)
    assert np.all(Q.log_q_raw >= lo_env - 1e-3)


def test_Q_completeness_bound_recorded(gevrey2):
    Q = seq_Q(gevrey2, 64)
    assert 0 < Q.completeness_bound < 0.1


def test_Q_quasianalytic_refused(factorial):
    with pytest.raises(DivergentTail):
        seq_Q(factorial, 16)


# -- families -----------------------------------------------------------------------


@pytest.fixture(scope="module")
def power_mat():
    return matrix_from_omega(make_power_weight(0.5))


def test_family_sigma_one_everywhere(power_mat):
    fam = derive_family(power_mat, "S", 64)
    for a in fam.grid:
        assert math.exp(fam.member(a).sigma_log[0]) == pytest.approx(1.0, abs=1e-9)


def test_family_underlineL_below_L(power_mat):
    fam_u = derive_family(power_mat, "underlineL", 64)
    fam_l = derive_family(power_mat, "L", 64)
    for a in fam_u.grid:
        assert np.all(fam_u.member(a).values(64) <= fam_l.member(a).values(64) + 1e-9)


def test_family_provenance_and_spread(power_mat):
    fam = derive_family(power_mat, "S", 64)
    assert fam.provenance["construction"] == "S"
    assert "sigma_rescale" in fam.provenance
    assert "tail_spread" in fam.provenance


def test_family_K_members_all_equivalent_for_power(power_mat):
    # value-doubling of the averaged transforms makes the K members equivalent
    from ultraweights.seq_core import seq_equivalent

    fam = derive_family(power_mat, "K", 128)
    assert seq_equivalent(fam.member(0.125), fam.member(8.0), 128).holds


def test_family_kappa_doubling(power_mat):
    from ultraweights.relations import cond_kappa_doubling

    assert cond_kappa_doubling(power_mat).holds


def test_family_monotone_warning_tolerated():
    fam = derive_family(exp_gevrey_matrix(2.0, grid=[0.5, 1.0, 2.0]), "L", 48)
    assert isinstance(fam.warnings, list)  # populated or not, never raises
