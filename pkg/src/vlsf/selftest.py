"""Quick invariant checks with small trial counts (well under a minute)."""

from __future__ import annotations

import math
import time
import warnings

import numpy as np

from vlsf.bounds import Regime, asymptotic_rate, bound_design, converse_rate, petrov_tail, tail_prob_mc
from vlsf.channel import a_moments, capacity, dispersion, nested_log, q_func, q_inverse, sample_a
from vlsf.codebook import check_power, generate_codebook
from vlsf.optimizer import design_vlsf_code, k_infinity_design, kkt_refine, schedule_for_first_time
from vlsf.simulator import martingale_check, simulate_code, simulate_renewal
from vlsf.streams import TAG_MOMENTS, stream


def _check(name, fn):
    t0 = time.perf_counter()
    try:
        passed, value, target = fn()
    except Exception as exc:  # report, never abort the whole run
        passed, value, target = False, f"{type(exc).__name__}: {exc}", None
    return {
        "check": name,
        "passed": bool(passed),
        "value": value,
        "target": target,
        "seconds": round(time.perf_counter() - t0, 1),
    }


def run(seed: int = 0) -> list[dict]:
    P = 1.0
    checks = []

    def rate_ratios():
        got = [asymptotic_rate(Regime.K1_MAXPOWER, 1000, 1e-3, P).eps_capacity_ratio]
        got += [asymptotic_rate(Regime.FINITE_K, 1000, 1e-3, P, k=k).eps_capacity_ratio for k in (2, 3, 4)]
        want = [0.836, 0.853, 0.922, 0.954]
        return all(abs(a - b) <= 0.002 for a, b in zip(got, want)), [round(g, 4) for g in got], want

    def nested():
        v = nested_log(3, 1000)
        return abs(v - 0.659) <= 5e-4, v, 0.659

    def q_round_trip():
        err = max(abs(q_inverse(q_func(x)) - x) for x in (-3, -1, 0, 1, 3))
        return err < 1e-9, err, 1e-9

    def moments():
        a = sample_a(10**6, P, stream(seed, TAG_MOMENTS))
        ok = abs(a.mean() - capacity(P)) < 4 * math.sqrt(dispersion(P) / a.size)
        ok &= abs(a.var() / dispersion(P) - 1) < 0.01
        return ok, [float(a.mean()), float(a.var())], [capacity(P), dispersion(P)]

    def mu3():
        v = a_moments(P).mu3
        return abs(v + 0.5) < 1e-12, v, -0.5

    def martingale():
        reps = [martingale_check(n, P, 10**6, seed) for n in (1, 5)]
        return all(r.passed for r in reps), [round(r.mean, 4) for r in reps], 1.0

    def petrov():
        n = 2000
        z = math.sqrt(math.log(math.log(n)))
        thr = n * capacity(P) - z * math.sqrt(n * dispersion(P))
        mc = tail_prob_mc(n, thr, P, 10**6, seed).estimate
        pt = petrov_tail(n, z, a_moments(P).negated())
        return abs(pt / mc - 1) < 0.15, [pt, mc], "15% relative"

    def power():
        g, sched = schedule_for_first_time(2, 50.0, P)
        cb = generate_codebook(16, sched, P, seed)
        return bool(check_power(cb, sched, P)), cb.m, "all prefixes within n_k P"

    def dominance():
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            d = design_vlsf_code(2000, 3, 0.05, P)
        sim = simulate_code(d, 4096, seed, m=256)
        b = bound_design(d, 10**5, seed, m=256)
        ok = sim.eps_hat <= b.eps_upper + 3 * math.hypot(sim.eps_stderr, b.mc_stderr["eps_upper"])
        ok &= sim.tau_mean <= b.n_upper + 3 * math.hypot(sim.tau_stderr, b.mc_stderr["n_upper"])
        return ok, [sim.eps_hat, sim.tau_mean], [b.eps_upper, b.n_upper]

    def kkt():
        gamma, sched = schedule_for_first_time(3, 1e4, P)
        rep = kkt_refine(sched, gamma, P)
        return rep.gap < 0 and abs(rep.gap_ratio - 1) <= 0.3, rep.gap, rep.predicted_gap

    def renewal():
        d = k_infinity_design(None, 1e-3, P, n_prime=1e4)
        st = simulate_renewal(d.grid_spacing, d.gamma, P, 10**4, seed)
        ok = st.tau_mean <= 1e4 + 3 * d.grid_spacing * st.xi_ci and st.xi_mean <= st.lorden_bound
        return ok, st.tau_mean, 1e4

    def ordering():
        grid = np.logspace(3, 6, 13)
        worst = math.inf
        for n in grid:
            ach = [asymptotic_rate(Regime.K1_MAXPOWER, n, 1e-3, P).rate]
            ach += [asymptotic_rate(Regime.FINITE_K, n, 1e-3, P, k=k).rate for k in (2, 3)]
            ach += [asymptotic_rate(Regime.KINF_MAXPOWER, n, 1e-3, P).rate]
            ach += [asymptotic_rate(Regime.KINF_AVGPOWER_ACH, n, 1e-3, P).rate]
            worst = min(worst, converse_rate(n, 1e-3, P) - max(ach))
        return worst > 0, worst, "> 0"

    for name, fn in [
        ("rate_ratios", rate_ratios),
        ("nested_log", nested),
        ("q_inverse", q_round_trip),
        ("sample_moments", moments),
        ("third_moment", mu3),
        ("martingale", martingale),
        ("petrov_tail", petrov),
        ("power_constraint", power),
        ("bound_dominance", dominance),
        ("kkt_gap", kkt),
        ("renewal", renewal),
        ("rate_ordering", ordering),
    ]:
        checks.append(_check(name, fn))
    return checks
