"""Decoding-time schedules and full code designs.

Pipeline for finite K: solve the inner (K - 1)-time code whose thresholds
make every decoding time hit its nested-log crossing, pick the threshold so
the predicted mean decoding time equals N', then prepend a randomised
decode-at-zero time. The K = infinity design uses a uniform grid.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import brentq, minimize

from vlsf.bounds import Regime, asymptotic_rate, sum_lower_tail_approx
from vlsf.channel import ChannelParams, as_channel, nested_log, q_func
from vlsf.codebook import Schedule
from vlsf.errors import ConvergenceError, DomainError, InfeasibleError, ValidationError

RESIDUAL_RTOL = 1e-6


def newton_root(
    f_and_derivative: Callable[[float], tuple[float, float]],
    x0: float,
    tol: float = 1e-10,
    max_iter: int = 100,
    max_halvings: int = 30,
) -> float:
    """Damped Newton iteration for a scalar root.

    Steps are halved (up to ``max_halvings`` times) whenever the residual
    does not decrease or the function leaves its domain (returns nan).
    Returns x with |f(x)| < tol; raises ConvergenceError otherwise.
    """
    if not tol > 0:
        raise ValidationError(f"tol must be positive, got {tol}")
    x = float(x0)
    fx, dfx = f_and_derivative(x)
    if not math.isfinite(fx):
        raise ConvergenceError("function undefined at the starting point", last=x, residual=fx)
    for it in range(max_iter):
        if abs(fx) < tol:
            return x
        if not math.isfinite(dfx) or dfx == 0 or abs(dfx) < 1e-300:
            raise ConvergenceError(
                f"vanishing derivative at x = {x!r}", last=x, residual=fx, iterations=it
            )
        step = fx / dfx
        for _ in range(max_halvings + 1):
            x_new = x - step
            f_new, df_new = f_and_derivative(x_new)
            if math.isfinite(f_new) and abs(f_new) < abs(fx):
                break
            step *= 0.5
        else:
            raise ConvergenceError(
                f"no residual decrease after {max_halvings} halvings",
                last=x,
                residual=fx,
                iterations=it,
            )
        x, fx, dfx = x_new, f_new, df_new
    if abs(fx) < tol:
        return x
    raise ConvergenceError(f"no convergence in {max_iter} iterations", last=x, residual=fx, iterations=max_iter)


# ---------------------------------------------------------------- schedules


def _nested_log_and_slope(depth: int, n: float) -> tuple[float, float]:
    """ln_(depth)(n) and its derivative; nan outside the domain."""
    value, slope = n, 1.0
    for _ in range(depth):
        if not value > 0:
            return math.nan, math.nan
        slope /= value
        value = math.log(value)
    return value, slope


def _domain_start(depth: int) -> float:
    """Smallest n with ln_(depth)(n) >= 0, i.e. the exp tower of height depth - 1 at 1."""
    x = 1.0
    for _ in range(depth - 1):
        x = math.exp(x)
    return x


def crossing_residual(n: float, depth: int, level: float, ch: ChannelParams) -> tuple[float, float]:
    """h(n) = n C - sqrt(n ln_(depth)(n) V) - level, and h'(n)."""
    L, dL = _nested_log_and_slope(depth, n)
    if not (L >= 0):
        return math.nan, math.nan
    root = math.sqrt(n * L * ch.dispersion)
    h = n * ch.capacity - root - level
    if root == 0:
        return h, (ch.capacity if ch.dispersion == 0 else -math.inf)
    dh = ch.capacity - ch.dispersion * (L + n * dL) / (2.0 * root)
    return h, dh


def decoding_time_roots(k: int, gamma: float, P) -> np.ndarray:
    """Real-valued solutions n_1..n_K of the nested-log crossing equations.

    Time n_k solves ``gamma + K ln J = n C - sqrt(n ln_(K-k+1)(n) V)``.
    No ordering check; see :func:`solve_decoding_times`.
    """
    k = int(k)
    if k < 1:
        raise ValidationError(f"K must be >= 1, got {k}")
    ch = as_channel(P)
    level = gamma + k * ch.log_j
    out = np.empty(k)
    for idx in range(1, k + 1):
        depth = k - idx + 1
        lo = _domain_start(depth)
        first_order = level / ch.capacity
        if not first_order > lo:
            raise InfeasibleError(
                f"threshold {gamma:.4g} too small: time {idx} of {k} falls below the "
                f"ln_({depth}) domain (n >= {lo:.4g})"
            )
        if ch.dispersion == 0:
            out[idx - 1] = first_order
            continue
        # start right of the root; h is convex there so Newton descends monotonically
        x = first_order
        while not crossing_residual(x, depth, level, ch)[0] > 0:
            x = 2.0 * x + 1.0
        tol = max(level, 1.0) * 1e-13
        out[idx - 1] = newton_root(lambda n: crossing_residual(n, depth, level, ch), x, tol=tol)
    return out


def round_times(real_times) -> tuple[int, ...]:
    """Nearest integer for interior times, ceiling for the last one.

    Times colliding after rounding are merged with a warning.
    """
    real_times = list(real_times)
    ints = [int(round(t)) for t in real_times[:-1]] + [int(math.ceil(real_times[-1] - 1e-9))]
    merged = sorted(set(ints))
    if len(merged) < len(ints):
        warnings.warn(
            f"decoding times {ints} collide after rounding; merged into {merged} (K reduced)",
            RuntimeWarning,
            stacklevel=3,
        )
    return tuple(merged)


def solve_decoding_times(k: int, gamma: float, P) -> Schedule:
    """Schedule whose every time sits on its nested-log crossing for ``gamma``."""
    real = decoding_time_roots(k, gamma, P)
    if np.any(np.diff(real) <= 1e-9 * real[1:]):
        raise InfeasibleError(f"degenerate schedule: solved times {real} are not strictly increasing")
    return Schedule(round_times(real), real_times=tuple(real))


def schedule_residuals(real_times, gamma: float, P) -> np.ndarray:
    """Relative residuals of the crossing equations at the given real times."""
    ch = as_channel(P)
    k = len(real_times)
    level = gamma + k * ch.log_j
    return np.array(
        [
            crossing_residual(n, k - i, level, ch)[0] / max(abs(level), 1.0)
            for i, n in enumerate(real_times)
        ]
    )


def predicted_mean_time(real_times, gamma: float, P) -> float:
    """n_1 + sum (n_{i+1} - n_i) P[S_{n_i} below threshold], tails by moderate deviations."""
    ch = as_channel(P)
    level = gamma + len(real_times) * ch.log_j
    t = np.asarray(real_times, float)
    tails = [sum_lower_tail_approx(n, level, ch) for n in t[:-1]]
    return float(t[0] + np.dot(np.diff(t), tails))


# ---------------------------------------------------------------- designs


@dataclass(frozen=True)
class CodeDesign:
    """All parameters of a VLSF code design.

    ``schedule`` holds the full schedule (with the decode-at-zero time when
    ``has_zero_time``); it is None for the uniform-grid K = infinity design,
    which sets ``grid_spacing`` instead. The message count is kept as
    ``log_m`` because realistic designs have M far beyond float range.
    """

    schedule: Schedule | None
    gamma: float
    log_m: float
    p_zero: float
    eps_prime: float
    n_target: float
    n_prime: float
    eps_target: float
    snr: float
    k: float
    has_zero_time: bool = True
    grid_spacing: int | None = None
    log_m_predicted: float | None = None
    dropped_term_budget: float | None = None
    metadata: dict = field(default_factory=dict, compare=False)

    @property
    def m(self) -> int | None:
        """floor(M) when exactly representable as a float, else None."""
        if self.log_m > 53 * math.log(2.0):
            return None
        return max(1, int(math.floor(math.exp(self.log_m) + 1e-9)))

    @property
    def rate(self) -> float:
        return self.log_m / self.n_target

    def inner_schedule(self) -> Schedule:
        if self.schedule is None:
            raise ValidationError("design has no finite schedule")
        if not self.has_zero_time:
            return self.schedule
        real = self.schedule.real_times[1:] if self.schedule.real_times else None
        return Schedule(self.schedule.times[1:], real_times=real)

    def to_dict(self) -> dict:
        d = asdict(self)
        if self.schedule is not None:
            d["schedule"] = {
                "times": list(self.schedule.times),
                "real_times": None if self.schedule.real_times is None else list(self.schedule.real_times),
            }
        d["k"] = "inf" if self.k == math.inf else int(self.k)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "CodeDesign":
        d = dict(d)
        sched = d.get("schedule")
        if sched is not None:
            real = sched.get("real_times")
            d["schedule"] = Schedule(tuple(sched["times"]), real_times=None if real is None else tuple(real))
        d["k"] = math.inf if d["k"] in ("inf", math.inf) else int(d["k"])
        names = {f for f in cls.__dataclass_fields__}
        unknown = set(d) - names
        if unknown:
            raise ValidationError(f"unknown design fields: {sorted(unknown)}")
        return cls(**d)


def _eps_prime_finite(n_prime: float) -> float:
    return 1.0 / math.sqrt(n_prime * math.log(n_prime))


def _solve_n_prime(n_target: float, eps: float, eps_prime: Callable[[float], float]) -> float:
    """N' with N = N' (1 - eps) / (1 - eps'(N'))."""

    def g(x):
        return x * (1.0 - eps) - n_target * (1.0 - eps_prime(x))

    g_lo = g(n_target)
    if g_lo > 1e-12 * n_target:
        raise InfeasibleError(
            f"eps = {eps:.4g} is below the inner error eps'_N = {eps_prime(n_target):.4g}"
        )
    if g_lo >= -1e-12 * n_target:
        return float(n_target)
    return brentq(g, n_target, n_target / (1.0 - eps), xtol=1e-12 * n_target, rtol=1e-15)


def _p_zero(eps: float, eps_prime: float) -> float:
    p = (eps - eps_prime) / (1.0 - eps_prime)
    if -1e-12 < p < 0:
        p = 0.0
    if p < 0:
        raise InfeasibleError(f"eps = {eps} below eps'_N = {eps_prime}")
    if p > 0.999:
        warnings.warn(f"decode-at-zero probability {p:.6f} exceeds 0.999", RuntimeWarning, stacklevel=3)
    return p


def _gamma_for_mean_time(k_inner: int, n_prime: float, ch: ChannelParams) -> tuple[float, np.ndarray]:
    """Threshold whose crossing schedule has predicted mean decoding time N'."""

    def excess(gamma):
        times = decoding_time_roots(k_inner, gamma, ch)
        return predicted_mean_time(times, gamma, ch) - n_prime

    try:
        second = math.sqrt(n_prime * max(nested_log(k_inner, n_prime), 0.0) * ch.dispersion)
    except DomainError as exc:
        raise InfeasibleError(f"N' = {n_prime:.4g} too small for K = {k_inner + 1}: {exc}") from exc
    hi = n_prime * ch.capacity
    lo = hi - second - k_inner * ch.log_j
    step = max(second, 1.0)
    for _ in range(60):
        try:
            if excess(lo) < 0:
                break
        except InfeasibleError:
            raise InfeasibleError(
                f"no threshold places the mean decoding time at N' = {n_prime:.4g} with K = {k_inner + 1}"
            ) from None
        lo -= step
        step *= 2.0
    else:
        raise InfeasibleError("could not bracket the design threshold")
    gamma = brentq(excess, lo, hi, xtol=1e-10, rtol=1e-15)
    return gamma, decoding_time_roots(k_inner, gamma, ch)


def dropped_term_budget(n_prime: float, k: int, eps: float, eps_prime: float, ch: ChannelParams) -> float:
    """Size of the lower-order terms separating the constructive ln M from
    the two-term expansion: the third-order sqrt term, ln N', the (K-1) ln J
    slack and the N vs N' conversion."""
    third = math.sqrt(n_prime * ch.dispersion / max(nested_log(k - 1, n_prime), 1e-12))
    conversion = n_prime * eps_prime * ch.capacity / (1.0 - eps)
    return third + math.log(n_prime) + (k - 1) * ch.log_j + conversion


def design_vlsf_code(n_target: float, k: int, eps: float, P) -> CodeDesign:
    """Finite-K design: decode-at-zero with probability p, else an inner
    (K - 1)-time code with error 1 / sqrt(N' ln N')."""
    k = int(k)
    if k < 2:
        raise ValidationError(f"finite-K design needs K >= 2, got {k}")
    if not 0.0 < eps < 1.0:
        raise ValidationError(f"eps must lie in (0, 1), got {eps}")
    if not n_target > math.e:
        raise InfeasibleError(f"N = {n_target} too small")
    ch = as_channel(P)
    clamped = eps < _eps_prime_finite(n_target)
    if clamped:
        # no room for decode-at-zero: the inner code takes the whole budget
        warnings.warn(
            f"eps = {eps:.4g} is below 1/sqrt(N ln N) = {_eps_prime_finite(n_target):.4g}; "
            "using p = 0 and N' = N",
            RuntimeWarning,
            stacklevel=2,
        )
        n_prime, eps_prime, p = float(n_target), float(eps), 0.0
    else:
        n_prime = _solve_n_prime(n_target, eps, _eps_prime_finite)
        eps_prime = _eps_prime_finite(n_prime)
        p = _p_zero(eps, eps_prime)
    gamma, real = _gamma_for_mean_time(k - 1, n_prime, ch)
    inner = round_times(real)
    schedule = Schedule((0,) + inner, real_times=(0.0,) + tuple(real))
    log_m = gamma - math.log(n_prime)
    predicted = asymptotic_rate(Regime.FINITE_K, n_target, eps, ch.snr, k=k).log_m
    return CodeDesign(
        schedule=schedule,
        gamma=gamma,
        log_m=log_m,
        p_zero=p,
        eps_prime=eps_prime,
        n_target=float(n_target),
        n_prime=n_prime,
        eps_target=float(eps),
        snr=ch.snr,
        k=len(schedule.times),
        log_m_predicted=predicted,
        dropped_term_budget=dropped_term_budget(n_prime, k, eps, eps_prime, ch),
        metadata={
            "residuals": schedule_residuals(real, gamma, ch).tolist(),
            "predicted_mean_time_inner": predicted_mean_time(real, gamma, ch),
            "predicted_rate_ratio": predicted / n_target / (ch.capacity / (1.0 - eps)),
            "dropped_terms": ["O(sqrt(N / ln_(K-1)(N)))"],
            "requested_k": k,
            "inner_error_clamped": clamped,
        },
    )


def n_target_from_inner(n_prime: float, eps: float, eps_prime: float) -> float:
    """Average decoding time N = N' (1 - eps) / (1 - eps')."""
    return n_prime * (1.0 - eps) / (1.0 - eps_prime)


def k_infinity_design(
    n_target: float | None,
    eps: float,
    P,
    *,
    n_prime: float | None = None,
    gamma_offset: float = 0.0,
) -> CodeDesign:
    """Uniform-grid design with spacing round(sqrt(N' ln J / C)) and inner error 1/N'.

    Give either ``n_target`` (N) or ``n_prime`` (N', the inner code's mean
    decoding time). ``gamma_offset`` fills the unspecified O(1) slot.
    """
    if not 0.0 < eps < 1.0:
        raise ValidationError(f"eps must lie in (0, 1), got {eps}")
    ch = as_channel(P)
    if n_prime is None:
        disc = n_target * n_target - 4.0 * (1.0 - eps) * n_target
        if disc < 0:
            raise InfeasibleError(f"N = {n_target} too small for eps = {eps}")
        n_prime = (n_target + math.sqrt(disc)) / (2.0 * (1.0 - eps))
    n_prime = float(n_prime)
    eps_prime = 1.0 / n_prime
    p = _p_zero(eps, eps_prime)
    n_target = n_target_from_inner(n_prime, eps, eps_prime)
    raw = math.sqrt(n_prime * max(ch.log_j, 0.0) / ch.capacity)
    spacing = int(round(raw))
    if spacing < 1:
        warnings.warn(f"grid spacing {raw:.3g} < 1; using 1", RuntimeWarning, stacklevel=2)
        spacing = 1
    drift = ch.capacity - ch.log_j / spacing
    if not drift > 0:
        raise InfeasibleError(f"increment drift C - ln J / l = {drift:.4g} is not positive")
    gamma = n_prime * ch.capacity - spacing * ch.capacity - n_prime / spacing * ch.log_j + gamma_offset
    log_m = gamma - math.log(n_prime)
    predicted = asymptotic_rate(Regime.KINF_MAXPOWER, n_target, eps, ch.snr).log_m
    return CodeDesign(
        schedule=None,
        gamma=gamma,
        log_m=log_m,
        p_zero=p,
        eps_prime=eps_prime,
        n_target=n_target,
        n_prime=n_prime,
        eps_target=float(eps),
        snr=ch.snr,
        k=math.inf,
        has_zero_time=True,
        grid_spacing=spacing,
        log_m_predicted=predicted,
        metadata={"gamma_offset": gamma_offset, "drift_lower_bound": drift, "dropped_terms": ["O(1)"]},
    )


# ---------------------------------------------------------------- KKT refinement


@dataclass(frozen=True)
class KKTReport:
    n_tilde: tuple[float, ...]
    n_star: tuple[float, ...]
    delta_n: tuple[float, ...]
    g_values: tuple[float, ...]
    f_values: tuple[float, ...]
    big_f_values: tuple[float, ...]
    n_of_n_tilde: float
    n_of_n_star: float
    gap: float
    predicted_gap: float | None
    l_constant: float
    residuals: tuple[float, ...]
    iterations: int
    delta_over_sqrt_n: tuple[float, ...]

    @property
    def gap_ratio(self) -> float | None:
        return None if not self.predicted_gap else self.gap / self.predicted_gap

    def to_dict(self) -> dict:
        d = asdict(self)
        d["gap_ratio"] = self.gap_ratio
        return d


class _MeanTimeModel:
    """Smoothed mean decoding time with n_K fixed and P[below] ~ Q(g(n))."""

    def __init__(self, n_last: float, level: float, ch: ChannelParams):
        self.n_last, self.level = n_last, level
        self.C, self.V = ch.capacity, ch.dispersion

    def g(self, n):
        return (n * self.C - self.level) / np.sqrt(n * self.V)

    def dg(self, n):
        return (n * self.C + self.level) / (2.0 * n * np.sqrt(n * self.V))

    def d2g(self, n):
        return (-0.5 * n * self.C - 1.5 * self.level) / (2.0 * math.sqrt(self.V) * n**2.5)

    def parts(self, free):
        n = np.asarray(free, float)
        g = self.g(n)
        phi = np.exp(-0.5 * g * g) / math.sqrt(2.0 * math.pi)
        F = 1.0 - q_func(g)
        f = phi * self.dg(n)
        df = phi * (self.d2g(n) - g * self.dg(n) ** 2)
        return g, F, f, df

    def objective(self, free):
        n = np.append(np.asarray(free, float), self.n_last)
        return float(n[0] + np.dot(np.diff(n), q_func(self.g(n[:-1]))))

    def gradient(self, free):
        n = np.append(np.asarray(free, float), self.n_last)
        _, F, f, _ = self.parts(n[:-1])
        prev = np.concatenate(([0.0], F[:-1]))
        return F - prev - np.diff(n) * f

    def hessian(self, free):
        n = np.append(np.asarray(free, float), self.n_last)
        _, _, f, df = self.parts(n[:-1])
        m = len(free)
        H = np.diag(2.0 * f - np.diff(n) * df)
        for i in range(m - 1):
            H[i, i + 1] = H[i + 1, i] = -f[i]
        return H


def kkt_refine(
    schedule: Schedule, gamma: float, P, tol: float = 1e-10, max_iter: int = 100
) -> KKTReport:
    """Solve the first-order conditions of the smoothed mean decoding time.

    Free variables are n_1..n_{K-1}; n_K and the threshold stay fixed.
    Damped Newton with the exact tridiagonal Hessian.
    """
    ch = as_channel(P)
    times = np.array(schedule.real_times if schedule.real_times else schedule.times, float)
    K = len(times)
    if K < 2:
        raise ValidationError("refinement needs at least two decoding times")
    level = gamma + K * ch.log_j
    model = _MeanTimeModel(times[-1], level, ch)
    x = times[:-1].copy()
    grad = model.gradient(x)
    it = 0
    for it in range(1, max_iter + 1):
        if np.max(np.abs(grad)) < tol:
            break
        try:
            step = np.linalg.solve(model.hessian(x), grad)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError("singular Hessian", last=x.tolist(), residual=grad.tolist()) from exc
        norm = np.max(np.abs(grad))
        for _ in range(31):
            cand = x - step
            ordered = np.all(np.diff(np.append(cand, times[-1])) > 0) and cand[0] > 0
            if ordered:
                g_new = model.gradient(cand)
                if np.all(np.isfinite(g_new)) and np.max(np.abs(g_new)) < norm:
                    break
            step = 0.5 * step
        else:
            raise ConvergenceError("damped Newton stalled", last=x.tolist(), residual=grad.tolist())
        x, grad = cand, g_new
    else:
        if np.max(np.abs(grad)) >= tol:
            raise ConvergenceError("KKT refinement did not converge", last=x.tolist(), residual=grad.tolist())
    g, F, f, _ = model.parts(x)
    n_tilde_obj = model.objective(times[:-1])
    n_star_obj = model.objective(x)
    C, V = ch.capacity, ch.dispersion
    L = (math.log(math.sqrt(2.0 * math.pi)) + 1.0 / math.sqrt(2.0 * math.pi) - 1.0) * math.sqrt(V) / C
    try:
        depth = nested_log(K, times[0])
        predicted = -L * math.sqrt(times[0] / depth) if depth > 0 else None
    except DomainError:
        predicted = None
    delta = x - times[:-1]
    return KKTReport(
        n_tilde=tuple(times[:-1]),
        n_star=tuple(x),
        delta_n=tuple(delta),
        g_values=tuple(g),
        f_values=tuple(f),
        big_f_values=tuple(F),
        n_of_n_tilde=n_tilde_obj,
        n_of_n_star=n_star_obj,
        gap=n_star_obj - n_tilde_obj,
        predicted_gap=predicted,
        l_constant=L,
        residuals=tuple(grad),
        iterations=it,
        delta_over_sqrt_n=tuple(delta / np.sqrt(times[:-1])),
    )


def schedule_for_first_time(k: int, n_first: float, P) -> tuple[float, Schedule]:
    """Threshold and crossing schedule whose first time equals ``n_first``."""
    ch = as_channel(P)
    depth_val = nested_log(k, n_first)
    gamma = n_first * ch.capacity - math.sqrt(n_first * max(depth_val, 0.0) * ch.dispersion) - k * ch.log_j
    return gamma, solve_decoding_times(k, gamma, ch)


# ---------------------------------------------------------------- eps' diagnostic


def epsilon_prime_diagnostic(design: CodeDesign) -> dict:
    """Compare the design's inner error 1/sqrt(N' ln N') with the error that
    minimises the mean decoding time at the same ln M (report only).

    Free variables are the threshold and the last decoding time; interior
    times follow the crossing equations.
    """
    if design.schedule is None:
        raise ValidationError("diagnostic applies to finite-K designs")
    ch = as_channel(design.snr)
    inner = np.array(design.inner_schedule().real_times, float)
    k_in = len(inner)
    eps, log_m = design.eps_target, design.log_m

    def total_time(params):
        gamma, n_last = params
        try:
            interior = decoding_time_roots(k_in, gamma, ch)[:-1]
        except (InfeasibleError, ConvergenceError):
            return math.inf, math.nan
        t = np.append(interior, n_last)
        if np.any(np.diff(t) <= 0):
            return math.inf, math.nan
        level = gamma + k_in * ch.log_j
        n_in = predicted_mean_time(t, gamma, ch)
        e_in = sum_lower_tail_approx(n_last, level, ch) + math.exp(log_m - gamma)
        if not e_in < eps:
            return math.inf, e_in
        return n_in * (1.0 - eps) / (1.0 - e_in), e_in

    start = np.array([design.gamma, inner[-1]])
    n_design, e_design = total_time(start)
    res = minimize(
        lambda p: total_time(p)[0],
        start,
        method="Nelder-Mead",
        options={"xatol": 1e-6, "fatol": 1e-9, "maxiter": 4000},
    )
    n_star, e_star = total_time(res.x)
    scale = math.sqrt(design.n_prime / math.log(design.n_prime))
    return {
        "eps_prime_design": design.eps_prime,
        "eps_prime_model_at_design": e_design,
        "eps_prime_star": e_star,
        "n_design": n_design,
        "n_star": n_star,
        "n_gap": n_star - n_design,
        "third_order_scale": scale,
        "gap_over_scale": (n_star - n_design) / scale,
        "converged": bool(res.success),
    }
