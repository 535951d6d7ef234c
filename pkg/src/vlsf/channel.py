"""Scalar math of the unit-noise AWGN channel.

All information quantities are in nats. The information density is always
taken against the i.i.d. ``N(0, 1 + P)`` output law; the gap to the true
output law of spherical inputs is covered by ``ln J(P)`` per segment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.hermite_e import hermegauss
from scipy.special import erfc, ndtri

from vlsf.errors import DomainError

_GH_NODES, _GH_WEIGHTS = hermegauss(64)
_GH_WEIGHTS = _GH_WEIGHTS / math.sqrt(2.0 * math.pi)


def _check_snr(P: float) -> float:
    P = float(P)
    if not P > 0 or not math.isfinite(P):
        raise DomainError(f"SNR must be positive and finite, got {P!r}")
    return P


def capacity(P: float) -> float:
    """C(P) = ln(1 + P) / 2."""
    return 0.5 * math.log1p(_check_snr(P))


def dispersion(P: float) -> float:
    """V(P) = P (P + 2) / (2 (1 + P)^2)."""
    P = _check_snr(P)
    return P * (P + 2.0) / (2.0 * (1.0 + P) ** 2)


def j_constant(P: float) -> float:
    """Uniform bound on the ratio of the spherical-input output density to
    the Gaussian-input one."""
    P = _check_snr(P)
    return 27.0 * math.sqrt(math.pi / 8.0) * (1.0 + P) / math.sqrt(1.0 + 2.0 * P)


def nested_log(k: int, x: float) -> float:
    """k-fold nested natural logarithm.

    Defined for k = 1 when x > 0 and for k > 1 when ``nested_log(k - 1, x) > 0``.
    Raises DomainError everywhere else.
    """
    if int(k) != k or k < 1:
        raise DomainError(f"nesting depth must be a positive integer, got {k!r}")
    value = float(x)
    for depth in range(int(k)):
        if not value > 0:
            raise DomainError(f"ln_({k})({x}) undefined: ln_({depth})({x}) = {value} <= 0")
        value = math.log(value)
    return value


def binary_entropy(eps: float) -> float:
    """Binary entropy in nats; 0 at both endpoints."""
    eps = float(eps)
    if not 0.0 <= eps <= 1.0:
        raise DomainError(f"probability outside [0, 1]: {eps!r}")
    if eps == 0.0 or eps == 1.0:
        return 0.0
    return -eps * math.log(eps) - (1.0 - eps) * math.log1p(-eps)


def q_func(x):
    """Gaussian upper tail Q(x). Works on scalars and arrays."""
    if np.ndim(x) == 0:
        return 0.5 * math.erfc(float(x) / math.sqrt(2.0))
    return 0.5 * erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))


def q_inverse(p: float) -> float:
    """Functional inverse of Q on (0, 1)."""
    p = float(p)
    if not 0.0 < p < 1.0:
        raise DomainError(f"Q^-1 needs p in (0, 1), got {p!r}")
    x = -float(ndtri(p))
    # one Newton polish on Q itself; dQ/dx = -phi(x)
    phi = math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
    if phi > 0:
        x += (q_func(x) - p) / phi
    return x


def info_density_increment(x, y, P: float):
    """Per-symbol ln[N(y; x, 1) / N(y; 0, 1 + P)]. Broadcasts over arrays."""
    P = _check_snr(P)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = 0.5 * math.log1p(P) - 0.5 * (y - x) ** 2 + y**2 / (2.0 * (1.0 + P))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class MomentSet:
    """Mean, variance and third central moment of a per-symbol increment."""

    mean: float
    variance: float
    mu3: float

    @property
    def sigma(self) -> float:
        return math.sqrt(self.variance)

    def negated(self) -> "MomentSet":
        """Moments of ``-X`` given those of ``X``."""
        return MomentSet(-self.mean, self.variance, -self.mu3)


def a_moments(P: float) -> MomentSet:
    """Moments of A = C + c (1 - Z^2 + 2 Z / sqrt(P)), c = P / (2 (1 + P)).

    The third central moment is a degree-6 polynomial in Z, integrated
    exactly by 64-point Gauss-Hermite quadrature.
    """
    P = _check_snr(P)
    c = P / (2.0 * (1.0 + P))
    d = 2.0 / math.sqrt(P)
    z = _GH_NODES
    centred = c * (1.0 - z * z + d * z)
    mu3 = float(np.sum(_GH_WEIGHTS * centred**3))
    return MomentSet(mean=capacity(P), variance=dispersion(P), mu3=mu3)


@dataclass(frozen=True)
class ChannelParams:
    """SNR plus derived constants.

    Build with :meth:`from_snr`. Direct construction skips validation so
    that tests can stub degenerate channels (e.g. zero dispersion).
    """

    snr: float
    capacity: float
    dispersion: float
    j_constant: float

    @classmethod
    def from_snr(cls, P: float) -> "ChannelParams":
        P = _check_snr(P)
        return cls(P, capacity(P), dispersion(P), j_constant(P))

    @property
    def log_j(self) -> float:
        return math.log(self.j_constant) if self.j_constant > 0 else -math.inf

    def moments(self) -> MomentSet:
        return a_moments(self.snr)


def as_channel(P_or_channel) -> ChannelParams:
    if isinstance(P_or_channel, ChannelParams):
        return P_or_channel
    return ChannelParams.from_snr(P_or_channel)


def sample_a(size, P: float, rng: np.random.Generator) -> np.ndarray:
    """Draw i.i.d. copies of A directly from standard normals."""
    P = _check_snr(P)
    c = P / (2.0 * (1.0 + P))
    z = rng.standard_normal(size)
    return capacity(P) + c * (1.0 - z * z + (2.0 / math.sqrt(P)) * z)


def sample_a_sum(n: int, P: float, size, rng: np.random.Generator) -> np.ndarray:
    """Draw sums of ``n`` i.i.d. copies of A using two variates per sum.

    With G = sum(Z) / sqrt(n) and W = sum(Z^2) - G^2, G ~ N(0, 1) and
    W ~ chi^2_{n-1} independently, so the sum is exact in distribution.
    """
    P = _check_snr(P)
    n = int(n)
    if n == 0:
        return np.zeros(size)
    c = P / (2.0 * (1.0 + P))
    g = rng.standard_normal(size)
    w = rng.chisquare(n - 1, size) if n > 1 else np.zeros(size)
    return n * capacity(P) + c * (n - g * g - w + (2.0 / math.sqrt(P)) * math.sqrt(n) * g)
