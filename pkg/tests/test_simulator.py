import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import chi2_contingency

from oracles import literal_decode
from vlsf.channel import capacity, dispersion, j_constant
from vlsf.codebook import Schedule
from vlsf.errors import ResourceError, ValidationError
from vlsf.optimizer import CodeDesign, design_vlsf_code, k_infinity_design
from vlsf.simulator import (
    decide,
    decode_recorded,
    lorden_bound,
    martingale_check,
    renewal_bound,
    simulate_code,
    simulate_renewal,
    write_trace_csv,
)


def small_design(times, gamma, m, p_zero=0.0, P=1.0):
    has_zero = p_zero > 0
    sched = Schedule(((0,) if has_zero else ()) + tuple(times))
    return CodeDesign(
        schedule=sched,
        gamma=gamma,
        log_m=math.log(m),
        p_zero=p_zero,
        eps_prime=0.0,
        n_target=float(times[-1]),
        n_prime=float(times[-1]),
        eps_target=0.5,
        snr=P,
        k=sched.k,
        has_zero_time=has_zero,
    )


def test_decide_hand_case():
    scores = np.array(
        [
            [[0.0, 5.0], [1.0, 0.0], [2.0, 9.0]],  # messages 1 and 2 cross at time 0 -> 2
            [[0.0, 5.0], [0.0, 4.0], [0.0, 0.0]],  # only 0 crosses at time 1
            [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0]],  # nobody crosses -> forced, 0
        ]
    )
    stop, decision, crossed = decide(scores, np.array([1.0, 5.0]))
    assert stop.tolist() == [0, 1, 1]
    assert decision.tolist() == [2, 0, 0]
    assert crossed.tolist() == [True, True, False]


def test_minus_infinity_threshold_stops_immediately():
    d = small_design((3, 8), -math.inf, 8)
    s = simulate_code(d, 8192, seed=1)
    assert s.stop_histogram["3"] == 8192 and s.tau_mean == 3.0
    assert s.eps_hat == pytest.approx(7 / 8, abs=4 * math.sqrt(7 / 64 / 8192))


def test_single_message_never_errs():
    d = small_design((5, 20), 3.0, 1)
    assert simulate_code(d, 5000, seed=2).eps_hat == 0.0


def test_histogram_and_range_invariants():
    d = small_design((4, 9, 15), 0.0, 4, p_zero=0.2)
    s = simulate_code(d, 6000, seed=3, j_slack=False)
    assert sum(s.stop_histogram.values()) == s.trials
    assert 0 <= s.tau_mean <= 15
    assert s.zero_decodes == s.stop_histogram["0"]
    assert s.errors == round(s.eps_hat * s.trials)


def _compare(a, b, key):
    se = math.hypot(getattr(a, key + "_stderr"), getattr(b, key + "_stderr"))
    assert abs(getattr(a, key if key != "eps" else "eps_hat") - getattr(b, key if key != "eps" else "eps_hat")) < 4.5 * se


def test_fast_and_explicit_agree_in_distribution():
    d = small_design((2, 5, 9), 0.3, 4)
    fast = simulate_code(d, 30_000, seed=4, j_slack=False, method="fast")
    slow = simulate_code(d, 30_000, seed=5, j_slack=False, method="explicit")
    assert abs(fast.eps_hat - slow.eps_hat) < 4.5 * math.hypot(fast.eps_stderr, slow.eps_stderr)
    assert abs(fast.tau_mean - slow.tau_mean) < 4.5 * math.hypot(fast.tau_stderr, slow.tau_stderr)
    keys = sorted(fast.stop_histogram)
    table = np.array([[fast.stop_histogram[k] for k in keys], [slow.stop_histogram[k] for k in keys]])
    table = table[:, table.sum(axis=0) > 0]
    assert chi2_contingency(table).pvalue > 1e-4


def test_fast_path_handles_unit_segments():
    d = small_design((1, 2), -0.5, 3)
    fast = simulate_code(d, 30_000, seed=6, j_slack=False, method="fast")
    slow = simulate_code(d, 30_000, seed=7, j_slack=False, method="explicit")
    assert abs(fast.eps_hat - slow.eps_hat) < 4.5 * math.hypot(fast.eps_stderr, slow.eps_stderr)
    assert abs(fast.tau_mean - slow.tau_mean) < 4.5 * math.hypot(fast.tau_stderr, slow.tau_stderr)


@pytest.mark.parametrize("method", ["fast", "explicit"])
def test_lower_threshold_never_stops_later(method):
    d = small_design((3, 6, 10), 1.0, 4)
    hi = simulate_code(d, 3000, seed=8, method=method, record=True)
    lo = simulate_code(d, 3000, seed=8, method=method, record=True, gamma=-1.0)
    assert np.all(lo.trace["tau"] <= hi.trace["tau"])


@pytest.mark.parametrize("method", ["fast", "explicit"])
def test_thread_count_does_not_change_results(method):
    d = small_design((3, 6), 0.5, 4, p_zero=0.1)
    a = simulate_code(d, 3 * 4096 + 11, seed=9, method=method, workers=1)
    b = simulate_code(d, 3 * 4096 + 11, seed=9, method=method, workers=8)
    assert a == b


def test_fixed_codebook_mode():
    d = small_design((3, 6), 0.0, 4)
    s = simulate_code(d, 2000, seed=10, fixed_codebook=True)
    assert s.method == "explicit-fixed"
    with pytest.raises(ValidationError):
        simulate_code(d, 10, seed=0, fixed_codebook=True, method="fast")


def test_resource_limits():
    d = design_vlsf_code(2000, 3, 0.05, 1.0)
    with pytest.raises(ResourceError):
        simulate_code(d, 10, seed=0)
    with pytest.raises(ResourceError):
        simulate_code(d, 10, seed=0, m=2**14 + 1)
    with pytest.raises(ResourceError):
        simulate_code(d, 10, seed=0, m=4096, method="explicit")


def test_simulate_validation():
    d = small_design((3, 6), 0.0, 4)
    with pytest.raises(ValidationError):
        simulate_code(d, 10, seed=0, method="magic")
    with pytest.raises(ValidationError):
        simulate_code(k_infinity_design(None, 1e-3, 1.0, n_prime=1e4), 10, seed=0)


def test_trace_csv(tmp_path):
    d = small_design((3, 6), 0.0, 4, p_zero=0.3)
    s = simulate_code(d, 50, seed=11, record=True)
    path = tmp_path / "trace.csv"
    write_trace_csv(s, path)
    rows = np.loadtxt(path, delimiter=",", skiprows=1, dtype=int)
    assert rows.shape == (50, 6)
    assert rows[:, 5].sum() == s.errors
    with pytest.raises(ValidationError):
        write_trace_csv(simulate_code(d, 5, seed=0), path)


@given(
    st.integers(1, 4),
    st.lists(st.integers(1, 6), min_size=1, max_size=2, unique=True),
    st.floats(-4.0, 3.0),
    st.sampled_from([0.5, 1.0, 4.0]),
    st.integers(0, 2**32 - 1),
)
def test_production_decoder_matches_literal(m, times, gamma, P, seed):
    times = tuple(sorted(times))
    rng = np.random.default_rng(seed)
    T = 50
    from vlsf.codebook import codeword_rows

    cw = codeword_rows(rng, (T, m), Schedule(times), P)
    noise = rng.standard_normal((T, times[-1]))
    w = rng.integers(0, m, T)
    tau, dec = decode_recorded(cw, noise, w, Schedule(times), gamma, P, j_slack=False)
    y = cw[np.arange(T), w] + noise
    for i in range(T):
        assert (tau[i], dec[i]) == literal_decode(cw[i].tolist(), y[i].tolist(), times, gamma, P, j_slack=False)


def test_renewal_deterministic_increments():
    mu, gamma, ell = 0.3, 7.0, 2
    st_ = simulate_renewal(
        ell, gamma, 1.0, 100, seed=0, increment_sampler=lambda rng, n: np.full(n, mu), drift=mu
    )
    g = gamma / ell
    assert st_.xi_mean == math.ceil(g / mu)
    assert st_.lorden_bound == pytest.approx(g / mu + 1.0)
    assert st_.xi_mean <= st_.lorden_bound


def test_renewal_zero_threshold_geometric_relation():
    st_ = simulate_renewal(50, 0.0, 1.0, 20_000, seed=1)
    assert st_.xi_mean >= 1.0
    assert st_.xi_mean <= 1.0 / st_.p_first_positive + 3 * st_.xi_ci


def test_renewal_design_guarantee():
    d = k_infinity_design(None, 1e-3, 1.0, n_prime=1e4)
    st_ = simulate_renewal(d.grid_spacing, d.gamma, 1.0, 20_000, seed=2)
    assert st_.tau_mean <= 1e4 + 3 * d.grid_spacing * st_.xi_ci
    assert st_.xi_mean <= st_.lorden_bound + 3 * st_.xi_ci


def test_renewal_preconditions():
    with pytest.raises(ValidationError):
        simulate_renewal(1, 10.0, 1.0, 10, seed=0)  # C < ln J at l = 1
    with pytest.raises(ValidationError):
        simulate_renewal(0, 10.0, 1.0, 10, seed=0)
    with pytest.raises(ValidationError):
        simulate_renewal(5, 10.0, 1.0, 10, seed=0, increment_sampler=lambda r, n: np.ones(n))
    with pytest.raises(ValidationError):
        lorden_bound(1.0, 0.0, 1.0)


def test_renewal_bound_analytic():
    d = k_infinity_design(None, 1e-3, 1.0, n_prime=1e4)
    b = renewal_bound(d)
    assert b["n_upper_inner"] <= 1e4
    assert b["eps_upper"] == pytest.approx(d.p_zero + (1 - d.p_zero) * 1e-4)


def test_martingale_conventions():
    assert martingale_check(0, 1.0, 10, seed=0).mean == 1.0
    with pytest.raises(ValidationError):
        martingale_check(-1, 1.0, 10, seed=0)


@pytest.mark.parametrize("n, P", [(1, 1.0), (5, 1.0), (20, 0.5)])
def test_martingale_identity(n, P):
    assert martingale_check(n, P, 10**6, seed=3).passed


def test_martingale_heavy_tail_at_high_snr():
    # at P = 4 exp(-A) has infinite variance: the mass sits in rare huge
    # draws, so a feasible sample mean lands far below the true value 1
    rep = martingale_check(20, 4.0, 10**6, seed=4)
    assert 0.0 < rep.mean < 0.5
