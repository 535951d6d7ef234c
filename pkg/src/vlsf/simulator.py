"""End-to-end Monte Carlo of the threshold-decoded VLSF scheme.

Two score generators feed one decoder:

* ``fast`` draws, per segment, the sufficient statistics of the scores.
  The true message needs the noise component along its codeword (one
  normal) and the residual noise energy (one chi-square); an impostor
  segment is an independent uniform sphere point, so its inner product
  with the received segment is ``sqrt(d P) |y| U`` where ``U`` is the first
  coordinate of a uniform unit vector. This is exact in distribution.
* ``explicit`` draws codewords and noise symbol by symbol and sums
  :func:`info_density_increment`. It is required for a fixed codebook.

Messages are indexed from 0. A trial that never crosses is decoded to
message 0 at n_K, and so is a decode-at-zero trial.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace
from typing import Callable

import numpy as np

from vlsf.channel import as_channel, capacity, info_density_increment, sample_a_sum
from vlsf.codebook import Schedule, codeword_rows, generate_codebook
from vlsf.errors import ResourceError, ValidationError
from vlsf.streams import TAG_MARTINGALE, TAG_RENEWAL, TAG_SIMULATE, run_blocks

DEFAULT_M_CAP = 2**14
CHUNK_ELEMENTS = 2**21
Z95 = 1.959963984540054


# ---------------------------------------------------------------- decoder


def thresholds_for(k: int, gamma: float, P, j_slack: bool = True) -> np.ndarray:
    """gamma + k ln J at the k-th decoding time, k = 1..K."""
    slack = as_channel(P).log_j if j_slack else 0.0
    return gamma + slack * np.arange(1, k + 1)


def decide(scores: np.ndarray, thresholds: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Stopping rule and decoder on accumulated scores.

    Parameters
    ----------
    scores : array of shape (trials, M, K)
        S_{m, n_k} for every message at every decoding time.
    thresholds : array of shape (K,)

    Returns
    -------
    stop : int array, index k of the stopping time
    decision : int array, largest crossing message (0 if none crossed)
    crossed : bool array, False for a forced decision at n_K
    """
    scores = np.asarray(scores, float)
    T, M, K = scores.shape
    hit = scores >= np.asarray(thresholds, float)[None, None, :]
    any_k = hit.any(axis=1)
    crossed = any_k.any(axis=1)
    stop = np.where(crossed, np.argmax(any_k, axis=1), K - 1)
    at_stop = hit[np.arange(T), :, stop]
    last = M - 1 - np.argmax(at_stop[:, ::-1], axis=1)
    decision = np.where(crossed, last, 0)
    return stop, decision, crossed


# ---------------------------------------------------------------- score generators


def explicit_scores(codewords: np.ndarray, y: np.ndarray, schedule: Schedule, P: float) -> np.ndarray:
    """S_{m, n_k} by summing per-symbol information densities.

    ``codewords`` has shape (M, n_K) or (T, M, n_K); ``y`` has shape (T, n_K).
    """
    y = np.asarray(y, float)
    x = np.asarray(codewords, float)
    if x.ndim == 2:
        x = x[None]
    inc = info_density_increment(x, y[:, None, :], P)
    cum = np.cumsum(inc, axis=-1)
    idx = np.array(schedule.times) - 1
    out = np.where(idx[None, None, :] >= 0, cum[..., np.maximum(idx, 0)], 0.0)
    return out


def decode_recorded(
    codewords: np.ndarray,
    noise: np.ndarray,
    w: np.ndarray,
    schedule: Schedule,
    gamma: float,
    P: float,
    j_slack: bool = True,
):
    """Run the production decoder on recorded codebooks and noise.

    ``codewords`` is (M, n_K) for a shared codebook or (T, M, n_K) for one
    codebook per trial; ``noise`` is (T, n_K); ``w`` holds transmitted indices.
    Returns (stop_time, decision) per trial.
    """
    codewords = np.asarray(codewords, float)
    w = np.asarray(w, int)
    T = len(w)
    sent = codewords[w] if codewords.ndim == 2 else codewords[np.arange(T), w]
    y = sent + noise
    scores = explicit_scores(codewords, y, schedule, P)
    stop, decision, _ = decide(scores, thresholds_for(schedule.k, gamma, P, j_slack))
    return np.array(schedule.times)[stop], decision


def _fast_scores(rng: np.random.Generator, T: int, M: int, w: np.ndarray, seg, P: float) -> np.ndarray:
    c0 = capacity(P)
    c = P / (2.0 * (1.0 + P))
    K = len(seg)
    out = np.empty((T, M, K))
    s = np.zeros((T, M))
    rows = np.arange(T)
    for j, d in enumerate(seg):
        if d > 0:
            g = rng.standard_normal(T)
            rest = rng.chisquare(d - 1, T) if d > 1 else np.zeros(T)
            root = math.sqrt(d * P)
            energy = d * P + 2.0 * root * g + g * g + rest
            base = d * (c0 - 0.5 * P) - c * energy
            if d > 1:
                u = 2.0 * rng.beta(0.5 * (d - 1), 0.5 * (d - 1), (T, M)) - 1.0
            else:
                u = 2.0 * rng.integers(0, 2, (T, M)) - 1.0
            inc = base[:, None] + root * np.sqrt(energy)[:, None] * u
            inc[rows, w] = base + d * P + root * g
            s = s + inc
        out[:, :, j] = s
    return out


def _explicit_scores_fresh(rng, T, M, w, schedule, P):
    x = codeword_rows(rng, (T, M), schedule, P)
    z = rng.standard_normal((T, schedule.n_max))
    y = x[np.arange(T), w] + z
    return explicit_scores(x, y, schedule, P)


def _explicit_scores_fixed(rng, T, codewords, w, schedule, P):
    z = rng.standard_normal((T, schedule.n_max))
    y = codewords[w] + z
    return explicit_scores(codewords, y, schedule, P)


# ---------------------------------------------------------------- stats


@dataclass(frozen=True)
class SimStats:
    """Outcome of an end-to-end simulation.

    Confidence half-widths are 95% normal intervals. ``stop_histogram``
    maps a decoding time (``"0"`` for decode-at-zero) or ``"forced@n_K"``
    to a count.
    """

    trials: int
    errors: int
    eps_hat: float
    eps_stderr: float
    eps_ci: float
    tau_mean: float
    tau_stderr: float
    tau_ci: float
    stop_histogram: dict
    zero_decodes: int
    m: int
    gamma: float
    times: tuple[int, ...]
    seed: int
    method: str
    j_slack: bool = True
    trace: dict | None = field(default=None, repr=False, compare=False)

    def to_dict(self, include_trace: bool = False) -> dict:
        d = asdict(self)
        d["trace"] = (
            {k: np.asarray(v).tolist() for k, v in self.trace.items()} if include_trace and self.trace else None
        )
        return d


def _design_times(design) -> tuple[Schedule, float, bool]:
    if design.schedule is None:
        raise ValidationError("end-to-end simulation needs a finite schedule; use simulate_renewal")
    if design.has_zero_time:
        return design.inner_schedule(), design.p_zero, True
    return design.schedule, 0.0, False


def simulate_code(
    design,
    trials: int,
    seed: int,
    *,
    m: int | None = None,
    gamma: float | None = None,
    fixed_codebook: bool = False,
    method: str = "auto",
    j_slack: bool = True,
    workers: int = 1,
    record: bool = False,
    m_cap: int = DEFAULT_M_CAP,
) -> SimStats:
    """Simulate the VLSF scheme of ``design``.

    Parameters
    ----------
    design : CodeDesign
    m : int, optional
        Message count; defaults to the design's own M, which must fit under
        ``m_cap``. Impostors are never subsampled.
    gamma : float, optional
        Threshold override (``-inf`` makes every message cross at once).
    fixed_codebook : bool
        Reuse one codebook for all trials instead of a fresh one per trial.
    method : {"auto", "fast", "explicit"}
        ``auto`` picks ``fast`` unless the codebook is fixed.
    record : bool
        Keep per-trial (W, D, tau, decision, error) in ``trace``.
    """
    if method not in ("auto", "fast", "explicit"):
        raise ValidationError(f"unknown method {method!r}")
    inner, p_zero, has_zero = _design_times(design)
    P = float(design.snr)
    m = design.m if m is None else int(m)
    if m is None:
        raise ResourceError(f"design M = exp({design.log_m:.4g}) exceeds the cap {m_cap}; pass m")
    if m < 1:
        raise ValidationError(f"M must be >= 1, got {m}")
    if m > m_cap:
        raise ResourceError(f"M = {m} exceeds the cap of {m_cap} messages")
    gamma = float(design.gamma if gamma is None else gamma)
    if fixed_codebook and method == "fast":
        raise ValidationError("the fast method draws a fresh codebook per trial")
    if method == "auto":
        method = "explicit" if fixed_codebook else "fast"
    n_k = inner.n_max
    if method == "explicit" and m * n_k > CHUNK_ELEMENTS:
        raise ResourceError(f"explicit simulation of {m} x {n_k} symbols exceeds {CHUNK_ELEMENTS}")
    thr = thresholds_for(inner.k, gamma, P, j_slack)
    seg = inner.segment_lengths()
    inner_times = np.array(inner.times)
    codewords = generate_codebook(m, inner, P, seed).codewords if fixed_codebook else None
    per_trial = m * (n_k if method == "explicit" else inner.k)
    chunk = max(1, CHUNK_ELEMENTS // max(per_trial, 1))

    def block(rng, size, _):
        w = rng.integers(0, m, size)
        zero = rng.random(size) < p_zero if has_zero else np.zeros(size, bool)
        tau = np.empty(size)
        dec = np.empty(size, dtype=np.int64)
        forced = np.zeros(size, bool)
        for a in range(0, size, chunk):
            b = min(size, a + chunk)
            T = b - a
            if method == "fast":
                scores = _fast_scores(rng, T, m, w[a:b], seg, P)
            elif codewords is None:
                scores = _explicit_scores_fresh(rng, T, m, w[a:b], inner, P)
            else:
                scores = _explicit_scores_fixed(rng, T, codewords, w[a:b], inner, P)
            stop, decision, crossed = decide(scores, thr)
            tau[a:b] = inner_times[stop]
            dec[a:b] = decision
            forced[a:b] = ~crossed
        tau[zero] = 0.0
        dec[zero] = 0
        forced[zero] = False
        err = dec != w
        return w, zero, tau, dec, err, forced

    parts = run_blocks(block, trials, seed, TAG_SIMULATE, workers)
    w, zero, tau, dec, err, forced = (np.concatenate(x) for x in zip(*parts))
    errors = int(err.sum())
    eps_hat = errors / trials
    eps_se = math.sqrt(max(eps_hat * (1.0 - eps_hat), 0.0) / trials)
    tau_mean = math.fsum(tau) / trials
    tau_var = math.fsum((tau - tau_mean) ** 2) / max(trials - 1, 1)
    tau_se = math.sqrt(tau_var / trials)
    hist: dict[str, int] = {}
    if has_zero:
        hist["0"] = int(zero.sum())
    crossing = ~zero & ~forced
    for t in inner.times:
        hist[str(t)] = int(np.count_nonzero(crossing & (tau == t)))
    hist[f"forced@{n_k}"] = int(forced.sum())
    trace = None
    if record:
        trace = {
            "trial": np.arange(trials),
            "W": w,
            "D": zero.astype(int),
            "tau": tau.astype(int),
            "decision": dec,
            "error": err.astype(int),
        }
    return SimStats(
        trials=int(trials),
        errors=errors,
        eps_hat=eps_hat,
        eps_stderr=eps_se,
        eps_ci=Z95 * eps_se,
        tau_mean=tau_mean,
        tau_stderr=tau_se,
        tau_ci=Z95 * tau_se,
        stop_histogram=hist,
        zero_decodes=int(zero.sum()),
        m=m,
        gamma=gamma,
        times=(0,) + inner.times if has_zero else inner.times,
        seed=int(seed),
        method=method + ("-fixed" if codewords is not None else ""),
        j_slack=j_slack,
        trace=trace,
    )


def write_trace_csv(stats: SimStats, path) -> None:
    """Per-trial trace as CSV with columns trial, W, D, tau, decision, error."""
    if stats.trace is None:
        raise ValidationError("simulation was run without record=True")
    cols = ["trial", "W", "D", "tau", "decision", "error"]
    data = np.column_stack([np.asarray(stats.trace[c], dtype=np.int64) for c in cols])
    np.savetxt(path, data, fmt="%d", delimiter=",", header=",".join(cols), comments="")


# ---------------------------------------------------------------- renewal


@dataclass(frozen=True)
class RenewalStats:
    """First-passage statistics of the grid-sampled score walk.

    ``xi_mean`` counts grid steps; ``lorden_bound`` is gamma'/mu + m/mu^2
    with the drift lower bound ``mu`` and the empirical second moment.
    """

    trials: int
    xi_mean: float
    xi_stderr: float
    xi_ci: float
    lorden_bound: float
    drift: float
    second_moment: float
    gamma_step: float
    grid_spacing: int
    p_first_positive: float
    max_steps: int
    seed: int

    @property
    def tau_mean(self) -> float:
        return self.grid_spacing * self.xi_mean

    def to_dict(self) -> dict:
        d = asdict(self)
        d["tau_mean"] = self.tau_mean
        return d


def lorden_bound(gamma_step: float, drift: float, second_moment: float) -> float:
    """Uniform bound gamma/mu + m/mu^2 on the mean first-passage time."""
    if not drift > 0:
        raise ValidationError(f"drift must be positive, got {drift}")
    return gamma_step / drift + second_moment / drift**2


def simulate_renewal(
    grid_spacing: int,
    gamma: float,
    P: float,
    trials: int,
    seed: int,
    *,
    increment_sampler: Callable[[np.random.Generator, int], np.ndarray] | None = None,
    drift: float | None = None,
    workers: int = 1,
    max_steps: int = 10**6,
) -> RenewalStats:
    """Steps xi until the walk of B_j = (sum of l increments - ln J) / l
    reaches gamma / l.

    ``increment_sampler(rng, size)`` replaces the channel increments (the
    caller then supplies ``drift``).
    """
    ell = int(grid_spacing)
    if ell < 1:
        raise ValidationError(f"grid spacing must be >= 1, got {grid_spacing}")
    ch = as_channel(P)
    if increment_sampler is None:
        mu = ch.capacity - ch.log_j / ell
        if not mu > 0:
            raise ValidationError(
                f"drift lower bound C - ln J / l = {mu:.4g} is not positive for l = {ell}"
            )

        def increment_sampler(rng, size):
            return (sample_a_sum(ell, ch.snr, size, rng) - ch.log_j) / ell

    else:
        if drift is None:
            raise ValidationError("a custom increment sampler needs an explicit drift")
        mu = float(drift)
        if not mu > 0:
            raise ValidationError(f"drift must be positive, got {mu}")
    target = gamma / ell

    def block(rng, size, _):
        s = np.zeros(size)
        xi = np.zeros(size, dtype=np.int64)
        active = np.ones(size, bool)
        sq_sum, count, first_pos = 0.0, 0, 0
        for step in range(1, max_steps + 1):
            idx = np.flatnonzero(active)
            inc = increment_sampler(rng, idx.size)
            if step == 1:
                first_pos = int(np.count_nonzero(inc > 0))
            sq_sum += math.fsum(inc * inc)
            count += idx.size
            s[idx] += inc
            done = idx[s[idx] >= target]
            xi[done] = step
            active[done] = False
            if not active.any():
                break
        else:
            raise ResourceError(f"walk did not cross within {max_steps} steps")
        return math.fsum(xi), math.fsum(xi.astype(float) ** 2), sq_sum, count, first_pos

    parts = run_blocks(block, trials, seed, TAG_RENEWAL, workers)
    s1 = math.fsum(p[0] for p in parts)
    s2 = math.fsum(p[1] for p in parts)
    mean = s1 / trials
    var = max(s2 / trials - mean * mean, 0.0) * trials / max(trials - 1, 1)
    se = math.sqrt(var / trials)
    m2 = math.fsum(p[2] for p in parts) / sum(p[3] for p in parts)
    return RenewalStats(
        trials=int(trials),
        xi_mean=mean,
        xi_stderr=se,
        xi_ci=Z95 * se,
        lorden_bound=lorden_bound(target, mu, m2),
        drift=mu,
        second_moment=m2,
        gamma_step=target,
        grid_spacing=ell,
        p_first_positive=sum(p[4] for p in parts) / trials,
        max_steps=max_steps,
        seed=int(seed),
    )


# ---------------------------------------------------------------- martingale


@dataclass(frozen=True)
class MartingaleReport:
    n: int
    snr: float
    mean: float
    stderr: float
    trials: int
    passed: bool

    @property
    def z_score(self) -> float:
        return 0.0 if self.stderr == 0 else (self.mean - 1.0) / self.stderr


def martingale_check(n: int, P: float, trials: int, seed: int, workers: int = 1) -> MartingaleReport:
    """Empirical E[exp(-(A_1 + ... + A_n))], which equals 1 exactly.

    Passes when 1 lies within 4 standard errors. For P >= 1 the summand has
    infinite variance, so the standard error is itself noisy.
    """
    n = int(n)
    if n < 0:
        raise ValidationError(f"n must be >= 0, got {n}")
    if n == 0:
        return MartingaleReport(0, float(P), 1.0, 0.0, int(trials), True)

    def block(rng, size, _):
        v = np.exp(-sample_a_sum(n, P, size, rng))
        return math.fsum(v), math.fsum(v * v)

    parts = run_blocks(block, trials, seed, TAG_MARTINGALE, workers)
    s1 = math.fsum(p[0] for p in parts)
    s2 = math.fsum(p[1] for p in parts)
    mean = s1 / trials
    var = max(s2 / trials - mean * mean, 0.0) * trials / max(trials - 1, 1)
    se = math.sqrt(var / trials)
    return MartingaleReport(n, float(P), mean, se, int(trials), abs(mean - 1.0) <= 4.0 * se)


def with_threshold(design, gamma: float):
    """Copy of ``design`` with a different threshold (and matching ln M = gamma - ln N')."""
    return replace(design, gamma=float(gamma), log_m=float(gamma) - math.log(design.n_prime))


def renewal_bound(design) -> dict:
    """Analytic error and mean-time bounds of a uniform-grid design.

    Uses Lorden's bound with the exact increment drift and second moment
    (both known in closed form), then applies the decode-at-zero lift.
    """
    if design.grid_spacing is None:
        raise ValidationError("design has no grid spacing")
    ch = as_channel(design.snr)
    ell = design.grid_spacing
    mu = ch.capacity - ch.log_j / ell
    second = mu * mu + ch.dispersion / ell
    xi_bound = lorden_bound(design.gamma / ell, mu, second)
    q = 1.0 - design.p_zero
    inner_eps = math.exp(design.log_m - design.gamma)
    return {
        "mode": "renewal",
        "grid_spacing": ell,
        "gamma": design.gamma,
        "log_m": design.log_m,
        "snr": ch.snr,
        "drift": mu,
        "second_moment": second,
        "xi_bound": xi_bound,
        "eps_upper_inner": inner_eps,
        "n_upper_inner": ell * xi_bound,
        "p_zero": design.p_zero,
        "eps_upper": design.p_zero + q * inner_eps,
        "n_upper": q * ell * xi_bound,
    }
