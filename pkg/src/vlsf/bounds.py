"""Non-asymptotic and asymptotic bounds for VLSF codes.

The random-coding bound is evaluated by Monte Carlo on the i.i.d. sum of
per-symbol information densities; the moderate-deviations tail and all
closed-form rate expansions are evaluated directly.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from vlsf.channel import (
    MomentSet,
    a_moments,
    as_channel,
    binary_entropy,
    capacity,
    dispersion,
    j_constant,
    nested_log,
    q_func,
    q_inverse,
    sample_a_sum,
)
from vlsf.codebook import Schedule
from vlsf.errors import DomainError, ValidationError
from vlsf.streams import TAG_TAIL, TAG_BOUND, run_blocks


@dataclass(frozen=True)
class TailEstimate:
    estimate: float
    stderr: float
    trials: int


def _binomial_stderr(p: float, n: int) -> float:
    return math.sqrt(max(p * (1.0 - p), 0.0) / n)


def tail_prob_mc(
    n: int, threshold: float, P: float, trials: int, seed: int, workers: int = 1
) -> TailEstimate:
    """Monte Carlo estimate of P[A_1 + ... + A_n < threshold]."""
    n = int(n)
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    if threshold == -math.inf:
        return TailEstimate(0.0, 0.0, int(trials))

    def block(rng, size, _):
        return int(np.count_nonzero(sample_a_sum(n, P, size, rng) < threshold))

    hits = sum(run_blocks(block, trials, seed, TAG_TAIL, workers))
    p = hits / trials
    return TailEstimate(p, _binomial_stderr(p, trials), int(trials))


def petrov_tail(n: int, z: float, moments: MomentSet) -> float:
    """Leading moderate-deviations term for P[sum of n centred i.i.d. >= z sigma sqrt(n)].

    Returns Q(z) exp(z^3 mu3 / (6 sqrt(n) sigma^3)); the
    O(n^{-1/2} e^{-z^2/2}) remainder is not included.
    """
    if z < 0:
        raise DomainError(f"moderate-deviations tail needs z >= 0, got {z}")
    if z > 2.0 * n ** (1.0 / 6.0):
        warnings.warn(
            f"z = {z:.3g} is beyond 2 n^(1/6) = {2 * n ** (1 / 6):.3g}; approximation unreliable",
            stacklevel=2,
        )
    sigma = moments.sigma
    return q_func(z) * math.exp(z**3 * moments.mu3 / (6.0 * math.sqrt(n) * sigma**3))


def sum_lower_tail_approx(n: float, threshold: float, P) -> float:
    """Moderate-deviations approximation of P[A_1 + ... + A_n < threshold].

    The lower tail of the sum is the upper tail of the centred variables
    C - A_i, whose third moment is -mu3.
    """
    ch = as_channel(P)
    z = (n * ch.capacity - threshold) / math.sqrt(n * ch.dispersion)
    mom = a_moments(ch.snr).negated()
    if z >= 0:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return petrov_tail(n, z, mom)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return 1.0 - petrov_tail(n, -z, a_moments(ch.snr))


@dataclass(frozen=True)
class BoundReport:
    """Random-coding bound on error probability and mean decoding time.

    ``marginal_tail[k]`` estimates P[S_{n_k} < gamma + (k+1) ln J] and
    ``joint_tail[i]`` the probability that the path stays below every
    threshold up to time n_{i+1}. ``raw_marginal_tail`` drops the ln J slack.
    When ``p_zero > 0`` the top-level bounds include the decode-at-zero lift
    and the ``*_inner`` fields hold the unlifted values.
    """

    mode: str
    times: tuple[int, ...]
    gamma: float
    log_m: float
    snr: float
    eps_upper: float
    n_upper: float
    marginal_tail: tuple[float, ...]
    raw_marginal_tail: tuple[float, ...]
    joint_tail: tuple[float, ...]
    mc_stderr: dict
    log_union_term: float
    n_upper_joint: float
    n_upper_marginal: float
    trials: int
    seed: int
    p_zero: float = 0.0
    eps_upper_inner: float | None = None
    n_upper_inner: float | None = None
    j_slack: bool = True

    def to_dict(self) -> dict:
        return asdict(self)


def _log_m_minus_one(m, log_m):
    if m is not None:
        m = int(m)
        if m < 1:
            raise ValidationError(f"M must be >= 1, got {m}")
        return -math.inf if m == 1 else math.log(m - 1), math.log(m)
    if log_m is None:
        raise ValidationError("give either m or log_m")
    if log_m < 0:
        raise ValidationError(f"log_m must be >= 0, got {log_m}")
    # (M - 1) <= M, so using ln M keeps the bound valid
    return (-math.inf if log_m == 0 else float(log_m)), float(log_m)


def random_coding_bound(
    schedule: Schedule,
    gamma: float,
    m: int | None,
    P: float,
    trials: int,
    seed: int,
    mode: str = "joint",
    *,
    log_m: float | None = None,
    j_slack: bool = True,
    workers: int = 1,
) -> BoundReport:
    """Evaluate the random-coding bound for a threshold decoder.

    The power-violation term is zero because every codeword segment lies
    on its power sphere. Each trial draws one path of partial sums at the
    decoding times, so the joint probabilities share the path.
    """
    if mode not in ("joint", "marginal"):
        raise ValidationError(f"mode must be 'joint' or 'marginal', got {mode!r}")
    if not math.isfinite(gamma):
        raise ValidationError(f"gamma must be finite, got {gamma}")
    ch = as_channel(P)
    log_m1, lm = _log_m_minus_one(m, log_m)
    times = np.array(schedule.times)
    seg = np.array(schedule.segment_lengths())
    K = schedule.k
    slack = ch.log_j if j_slack else 0.0
    thresholds = gamma + slack * np.arange(1, K + 1)
    gaps = np.diff(times).astype(float)

    def block(rng, size, _):
        s = np.zeros(size)
        below = np.empty((K, size), dtype=bool)
        raw = np.empty((K, size), dtype=bool)
        for k in range(K):
            s = s + sample_a_sum(seg[k], ch.snr, size, rng)
            below[k] = s < thresholds[k]
            raw[k] = s < gamma
        joint = np.logical_and.accumulate(below, axis=0)
        y_joint = times[0] + gaps @ joint[:-1] if K > 1 else np.full(size, float(times[0]))
        y_marg = times[0] + gaps @ below[:-1] if K > 1 else np.full(size, float(times[0]))
        return (
            below.sum(axis=1),
            raw.sum(axis=1),
            joint.sum(axis=1),
            (math.fsum(y_joint), math.fsum(y_joint**2)),
            (math.fsum(y_marg), math.fsum(y_marg**2)),
        )

    parts = run_blocks(block, trials, seed, TAG_BOUND, workers)
    marg = sum(p[0] for p in parts) / trials
    raw = sum(p[1] for p in parts) / trials
    joint = sum(p[2] for p in parts) / trials

    def mean_and_se(idx):
        s1 = math.fsum(p[idx][0] for p in parts)
        s2 = math.fsum(p[idx][1] for p in parts)
        mean = s1 / trials
        var = max(s2 / trials - mean * mean, 0.0) * trials / max(trials - 1, 1)
        return mean, math.sqrt(var / trials)

    nj, nj_se = mean_and_se(3)
    nm, nm_se = mean_and_se(4)
    log_union = log_m1 - gamma
    union = math.exp(log_union) if log_union < 700 else math.inf
    eps_upper = float(marg[-1]) + union
    stderr = {
        "marginal_tail": [_binomial_stderr(p, trials) for p in marg],
        "raw_marginal_tail": [_binomial_stderr(p, trials) for p in raw],
        "joint_tail": [_binomial_stderr(p, trials) for p in joint[:-1]],
        "eps_upper": _binomial_stderr(float(marg[-1]), trials),
        "n_upper_joint": nj_se,
        "n_upper_marginal": nm_se,
    }
    stderr["n_upper"] = nj_se if mode == "joint" else nm_se
    return BoundReport(
        mode=mode,
        times=schedule.times,
        gamma=float(gamma),
        log_m=lm,
        snr=ch.snr,
        eps_upper=eps_upper,
        n_upper=nj if mode == "joint" else nm,
        marginal_tail=tuple(float(x) for x in marg),
        raw_marginal_tail=tuple(float(x) for x in raw),
        joint_tail=tuple(float(x) for x in joint[:-1]),
        mc_stderr=stderr,
        log_union_term=log_union,
        n_upper_joint=nj,
        n_upper_marginal=nm,
        trials=int(trials),
        seed=int(seed),
        j_slack=j_slack,
    )


def lift_report(inner: BoundReport, p_zero: float) -> BoundReport:
    """Apply decode-at-zero randomisation with probability ``p_zero``."""
    if not 0.0 <= p_zero < 1.0:
        raise ValidationError(f"p_zero must lie in [0, 1), got {p_zero}")
    q = 1.0 - p_zero
    se = dict(inner.mc_stderr)
    for key in ("eps_upper", "n_upper", "n_upper_joint", "n_upper_marginal"):
        se[key] = q * se[key]
    return BoundReport(
        **{
            **asdict(inner),
            "mc_stderr": se,
            "times": (0,) + inner.times,
            "eps_upper": p_zero + q * inner.eps_upper,
            "n_upper": q * inner.n_upper,
            "n_upper_joint": q * inner.n_upper_joint,
            "n_upper_marginal": q * inner.n_upper_marginal,
            "p_zero": float(p_zero),
            "eps_upper_inner": inner.eps_upper,
            "n_upper_inner": inner.n_upper,
        }
    )


def bound_design(design, trials: int, seed: int, mode: str = "joint", *, m: int | None = None, workers: int = 1):
    """Bound a :class:`~vlsf.optimizer.CodeDesign`, including its zero-time lift.

    ``m`` overrides the design's message count (e.g. a capped M used in
    simulation); the design's threshold and schedule are kept.
    """
    if design.schedule is None:
        raise ValidationError("infinite-schedule designs are bounded by the renewal analysis")
    inner_times = design.inner_schedule()
    inner = random_coding_bound(
        inner_times,
        design.gamma,
        m,
        design.snr,
        trials,
        seed,
        mode,
        log_m=None if m is not None else design.log_m,
        workers=workers,
    )
    return lift_report(inner, design.p_zero) if design.has_zero_time else inner


# ---------------------------------------------------------------- asymptotics


class Regime(str, enum.Enum):
    K1_MAXPOWER = "K1_maxpower"
    K1_AVGPOWER = "K1_avgpower"
    FINITE_K = "finiteK"
    KINF_MAXPOWER = "Kinf_maxpower"
    KINF_AVGPOWER_ACH = "Kinf_avgpower_ach"
    CONVERSE = "converse"


@dataclass(frozen=True)
class AsymptoticPoint:
    regime: str
    k: float
    n: float
    eps: float
    snr: float
    rate: float
    log_m: float
    dropped_terms: tuple[str, ...] = field(default_factory=tuple)

    @property
    def eps_capacity_ratio(self) -> float:
        return self.rate / (capacity(self.snr) / (1.0 - self.eps))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["k"] = "inf" if self.k == math.inf else int(self.k)
        d["dropped_terms"] = ";".join(self.dropped_terms)
        return d


def _check_point(n, eps, P):
    if not n > 0:
        raise DomainError(f"average decoding time must be positive, got {n}")
    if not 0.0 < eps < 1.0:
        raise DomainError(f"eps must lie in (0, 1), got {eps}")
    if not P > 0:
        raise DomainError(f"SNR must be positive, got {P}")


def finite_k_second_order(n: float, k: int, eps: float, P: float) -> float:
    """sqrt(N ln_(K-1)(N) V / (1 - eps)); DomainError where it is undefined."""
    inner = nested_log(k - 1, n)
    if inner < 0:
        raise DomainError(f"ln_({k - 1})({n}) = {inner:.4g} < 0; second-order term undefined")
    return math.sqrt(n * inner * dispersion(P) / (1.0 - eps))


def asymptotic_rate(regime, n: float, eps: float, P: float, k: int | None = None) -> AsymptoticPoint:
    """Rate ln M / N of one asymptotic expansion with its remainder dropped."""
    regime = Regime(regime if not isinstance(regime, dict) else regime["regime"])
    _check_point(n, eps, P)
    C, V = capacity(P), dispersion(P)
    if regime is Regime.K1_MAXPOWER:
        log_m = n * C - math.sqrt(n * V) * q_inverse(eps) + 0.5 * math.log(n)
        k, dropped = 1, ("O(1)",)
    elif regime is Regime.K1_AVGPOWER:
        Pe = P / (1.0 - eps)
        log_n = math.log(n)
        if log_n < 0:
            raise DomainError(f"ln N < 0 at N = {n}")
        log_m = n * capacity(Pe) - math.sqrt(n * log_n * dispersion(Pe))
        k, dropped = 1, ("O(sqrt(N))",)
    elif regime is Regime.FINITE_K:
        if k is None or int(k) < 2:
            raise DomainError(f"finite-K expansion needs K >= 2, got {k}")
        k = int(k)
        log_m = n * C / (1.0 - eps) - finite_k_second_order(n, k, eps, P)
        dropped = ("O(sqrt(N / ln_(K-1)(N)))",)
    elif regime is Regime.KINF_MAXPOWER:
        log_m = (
            n * C / (1.0 - eps)
            - math.sqrt(n * 4.0 * C * math.log(j_constant(P)) / (1.0 - eps))
            - math.log(n)
        )
        k, dropped = math.inf, ("O(1)",)
    elif regime is Regime.KINF_AVGPOWER_ACH:
        log_m = n * C / (1.0 - eps) - math.log(n)
        k, dropped = math.inf, ("O(1)",)
    else:
        return _converse_point(n, eps, P)
    return AsymptoticPoint(regime.value, k, float(n), float(eps), float(P), log_m / n, log_m, dropped)


def _converse_point(n, eps, P) -> AsymptoticPoint:
    log_m = (n * capacity(P) + binary_entropy(eps)) / (1.0 - eps)
    return AsymptoticPoint(Regime.CONVERSE.value, math.inf, float(n), float(eps), float(P), log_m / n, log_m, ())


def converse_rate(n: float, eps: float, P: float) -> float:
    """Upper bound (N C / (1 - eps) + h_b(eps) / (1 - eps)) / N."""
    _check_point(n, eps, P)
    return _converse_point(n, eps, P).rate


def table_rows(n: float, eps: float, P: float, k_values=(2, 3, 4)) -> list[dict]:
    """One row per cell group of the performance summary table.

    Numeric columns are ln M contributions at (N, eps, P); order-only
    terms (O(.)) are left empty and flagged.
    """
    _check_point(n, eps, P)
    C, V, lnJ = capacity(P), dispersion(P), math.log(j_constant(P))
    Pe = P / (1.0 - eps)
    nv_q = -math.sqrt(n * V) * q_inverse(eps)
    avg_k1 = -math.sqrt(n * math.log(n) * dispersion(Pe))
    rows = [
        ("K=1", "no_feedback", "max_power", "N C(P)", n * C, "-sqrt(N V(P)) Q^-1(eps)", nv_q,
         "-sqrt(N V(P)) Q^-1(eps)", nv_q, "tan2015Third;polyanskiy2010Channel"),
        ("K=1", "no_feedback", "avg_power", "N C(P/(1-eps))", n * capacity(Pe),
         "-sqrt(N ln N V(P/(1-eps)))", avg_k1, "-sqrt(N ln N V(P/(1-eps)))", avg_k1, "yang2015Optimal"),
        ("K=1", "feedback", "max_power", "N C(P)", n * C, "-sqrt(N V(P)) Q^-1(eps)", nv_q,
         "-sqrt(N V(P)) Q^-1(eps)", nv_q, "tan2015Third;fong2015feedbacknot"),
        ("K=1", "feedback", "avg_power", "N C(P/(1-eps))", n * capacity(Pe), "-O(ln_(K)(N))", None,
         "+sqrt(N ln N V(P/(1-eps)))", -avg_k1, "truongfong2017logL"),
    ]
    for k in k_values:
        if int(k) < 2:
            continue
        try:
            second = -finite_k_second_order(n, int(k), eps, P)
        except DomainError:
            second = None
        for power in ("max_power", "avg_power"):
            rows.append((f"K={int(k)}", "stop_feedback", power, "N C(P)/(1-eps)", n * C / (1 - eps),
                         "-sqrt(N ln_(K-1)(N) V(P)/(1-eps))", second, "+O(1)", None,
                         "finiteK_achievability;truong2016gaussian"))
    rows.append(("K=inf", "stop_feedback", "max_power", "N C(P)/(1-eps)", n * C / (1 - eps),
                 "-sqrt(N 4 C(P) ln J(P)/(1-eps))", -math.sqrt(n * 4 * C * lnJ / (1 - eps)), "+O(1)", None,
                 "Kinf_achievability;truong2016gaussian"))
    rows.append(("K=inf", "stop_feedback", "avg_power", "N C(P)/(1-eps)", n * C / (1 - eps), "-ln N",
                 -math.log(n), "+O(1)", None, "truong2016gaussian"))
    keys = ("scenario", "feedback", "power", "first_order", "first_order_value", "second_lower",
            "second_lower_value", "second_upper", "second_upper_value", "citation")
    out = []
    for row in rows:
        d = dict(zip(keys, row))
        lower = d["second_lower_value"]
        d["rate_lower"] = None if lower is None else (d["first_order_value"] + lower) / n
        d["n"], d["eps"], d["snr"] = float(n), float(eps), float(P)
        out.append(d)
    return out
