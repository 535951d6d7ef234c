import math
import warnings

import numpy as np
import pytest

from oracles import a_cdf
from vlsf.bounds import (
    Regime,
    asymptotic_rate,
    converse_rate,
    finite_k_second_order,
    lift_report,
    petrov_tail,
    random_coding_bound,
    sum_lower_tail_approx,
    table_rows,
    tail_prob_mc,
)
from vlsf.channel import a_moments, capacity, dispersion, j_constant
from vlsf.codebook import Schedule
from vlsf.errors import DomainError, ValidationError

C1, V1 = capacity(1.0), dispersion(1.0)


@pytest.mark.parametrize("t", [-0.5, 0.2, 0.4])
def test_tail_mc_single_symbol_against_closed_form(t):
    est = tail_prob_mc(1, t, 1.0, 200_000, seed=3)
    assert abs(est.estimate - a_cdf(t, 1.0)) < 5 * est.stderr + 1e-9


def test_tail_mc_edges():
    assert tail_prob_mc(10, -math.inf, 1.0, 100, seed=0).estimate == 0.0
    assert tail_prob_mc(10, 1e9, 1.0, 100, seed=0).estimate == 1.0
    with pytest.raises(ValidationError):
        tail_prob_mc(0, 1.0, 1.0, 100, seed=0)


def test_tail_mc_workers_invariant():
    a = tail_prob_mc(50, 15.0, 1.0, 20_000, seed=5, workers=1)
    b = tail_prob_mc(50, 15.0, 1.0, 20_000, seed=5, workers=4)
    assert a == b


def test_petrov_basics():
    mom = a_moments(1.0)
    assert petrov_tail(100, 0.0, mom) == pytest.approx(0.5)
    with pytest.raises(DomainError):
        petrov_tail(100, -0.1, mom)
    with pytest.warns(UserWarning):
        petrov_tail(8, 5.0, mom)


def test_lower_tail_is_skewed_up():
    # the lower tail of a sum with negative skew is heavier than Gaussian
    n = 500
    thr = n * C1 - 1.5 * math.sqrt(n * V1)
    from vlsf.channel import q_func

    assert sum_lower_tail_approx(n, thr, 1.0) > q_func(1.5)


def test_lower_tail_continuity_at_mean():
    n = 300
    a = sum_lower_tail_approx(n, n * C1 - 1e-9, 1.0)
    b = sum_lower_tail_approx(n, n * C1 + 1e-9, 1.0)
    assert a == pytest.approx(0.5, abs=1e-6) and b == pytest.approx(0.5, abs=1e-6)


def _bound(times=(40, 80, 120), gamma=20.0, m=64, **kw):
    return random_coding_bound(Schedule(times), gamma, m, 1.0, kw.pop("trials", 20_000), kw.pop("seed", 1), **kw)


def test_bound_structure():
    r = _bound()
    assert len(r.marginal_tail) == 3 and len(r.joint_tail) == 2
    assert all(j <= m for j, m in zip(r.joint_tail, r.marginal_tail))
    assert r.n_upper_joint <= r.n_upper_marginal
    assert 40 <= r.n_upper <= 120
    assert r.eps_upper == pytest.approx(r.marginal_tail[-1] + 63 * math.exp(-20.0))
    assert r.log_union_term == pytest.approx(math.log(63) - 20.0)


def test_bound_mode_selects_estimate():
    j = _bound(mode="joint")
    m = _bound(mode="marginal")
    assert j.n_upper == j.n_upper_joint and m.n_upper == m.n_upper_marginal
    with pytest.raises(ValidationError):
        _bound(mode="other")


def test_bound_single_message_has_no_union_term():
    r = _bound(m=1)
    assert r.eps_upper == r.marginal_tail[-1]


def test_bound_single_time():
    r = _bound(times=(60,))
    assert r.n_upper == 60.0


def test_bound_monotone_in_threshold():
    lo, hi = _bound(gamma=10.0), _bound(gamma=25.0)
    assert all(a <= b for a, b in zip(lo.marginal_tail, hi.marginal_tail))
    assert lo.n_upper <= hi.n_upper


def test_bound_raw_tail_drops_slack():
    r = _bound()
    assert all(a <= b for a, b in zip(r.raw_marginal_tail, r.marginal_tail))


def test_bound_thread_invariance():
    a = _bound(trials=3 * 4096 + 7, workers=1)
    b = _bound(trials=3 * 4096 + 7, workers=8)
    assert a == b


def test_bound_large_log_m():
    r = random_coding_bound(Schedule((100, 200)), 10.0, None, 1.0, 1000, 0, log_m=1000.0)
    assert r.eps_upper == math.inf


def test_bound_validation():
    with pytest.raises(ValidationError):
        _bound(gamma=math.inf)
    with pytest.raises(ValidationError):
        random_coding_bound(Schedule((5,)), 1.0, None, 1.0, 10, 0)


def test_lift():
    inner = _bound()
    lifted = lift_report(inner, 0.1)
    assert lifted.eps_upper == pytest.approx(0.1 + 0.9 * inner.eps_upper)
    assert lifted.n_upper == pytest.approx(0.9 * inner.n_upper)
    assert lifted.times == (0,) + inner.times
    with pytest.raises(ValidationError):
        lift_report(inner, 1.0)


def test_k1_rate_and_converse_values():
    assert asymptotic_rate(Regime.K1_MAXPOWER, 1000, 1e-3, 1.0).rate == pytest.approx(0.2902, abs=2e-4)
    assert converse_rate(1000, 1e-3, 1.0) == pytest.approx(0.34693, abs=1e-4)


@pytest.mark.parametrize("k, want", [(2, 0.853), (3, 0.922), (4, 0.954)])
def test_eps_capacity_fractions(k, want):
    assert asymptotic_rate(Regime.FINITE_K, 1000, 1e-3, 1.0, k=k).eps_capacity_ratio == pytest.approx(want, abs=2e-3)


def test_finite_k_monotone_in_k():
    for n in np.logspace(3, 6, 13):
        r = [asymptotic_rate(Regime.FINITE_K, n, 1e-3, 1.0, k=k).rate for k in (2, 3, 4)]
        assert r[0] < r[1] < r[2]


def test_finite_k_outside_domain():
    with pytest.raises(DomainError):
        finite_k_second_order(1e4, 5, 1e-3, 1.0)
    with pytest.raises(DomainError):
        asymptotic_rate(Regime.FINITE_K, 1e4, 1e-3, 1.0, k=1)


def test_achievability_rates_increase_with_n():
    grid = np.logspace(3, 6, 13)
    for regime, k in [
        (Regime.K1_MAXPOWER, None),
        (Regime.FINITE_K, 3),
        (Regime.KINF_MAXPOWER, None),
        (Regime.KINF_AVGPOWER_ACH, None),
    ]:
        rates = [asymptotic_rate(regime, n, 1e-3, 1.0, k=k).rate for n in grid]
        assert all(b > a for a, b in zip(rates, rates[1:])), regime


def test_asymptotic_point_validation():
    with pytest.raises(DomainError):
        asymptotic_rate(Regime.K1_MAXPOWER, 1000, 1.5, 1.0)
    with pytest.raises(ValueError):
        asymptotic_rate("nonsense", 1000, 1e-3, 1.0)


def test_table_rows():
    rows = table_rows(1e4, 1e-3, 1.0)
    by = {(r["scenario"], r["feedback"], r["power"]): r for r in rows}
    no_fb = by[("K=1", "no_feedback", "max_power")]
    fb = by[("K=1", "feedback", "max_power")]
    assert fb["second_lower_value"] == no_fb["second_lower_value"]
    kinf = by[("K=inf", "stop_feedback", "max_power")]
    want = -math.sqrt(1e4 * 4 * C1 * math.log(j_constant(1.0)) / (1 - 1e-3))
    assert kinf["second_lower_value"] == pytest.approx(want)
    for k in (2, 3, 4):
        row = by[(f"K={k}", "stop_feedback", "max_power")]
        assert row["rate_lower"] == pytest.approx(asymptotic_rate(Regime.FINITE_K, 1e4, 1e-3, 1.0, k=k).rate)
