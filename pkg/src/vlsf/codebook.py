"""Per-segment spherical random codebooks under the nested power constraint."""

from __future__ import annotations

import io
import json
import math
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from vlsf.errors import ResourceError, ValidationError
from vlsf.streams import TAG_CODEBOOK, stream

DEFAULT_MAX_ELEMENTS = 2**24
POWER_RTOL = 1e-9

_MAGIC = b"VLSFCB1\n"


@dataclass(frozen=True)
class Schedule:
    """Strictly increasing decoding times n_1 < ... < n_K (channel uses).

    ``real_times`` optionally keeps the continuous solution the integer
    times were rounded from.
    """

    times: tuple[int, ...]
    real_times: tuple[float, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        times = tuple(int(t) for t in self.times)
        if any(t != orig for t, orig in zip(times, self.times)):
            raise ValidationError(f"decoding times must be integers: {self.times}")
        if not times:
            raise ValidationError("a schedule needs at least one decoding time")
        if times[0] < 0:
            raise ValidationError(f"decoding times must be non-negative: {times}")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValidationError(f"decoding times must be strictly increasing: {times}")
        object.__setattr__(self, "times", times)
        if self.real_times is not None:
            object.__setattr__(self, "real_times", tuple(float(t) for t in self.real_times))

    @property
    def k(self) -> int:
        return len(self.times)

    @property
    def n_max(self) -> int:
        return self.times[-1]

    def segment_lengths(self) -> tuple[int, ...]:
        prev = (0,) + self.times[:-1]
        return tuple(t - p for t, p in zip(self.times, prev))


def sample_sphere_point(dim: int, radius: float, rng: np.random.Generator) -> np.ndarray:
    """Uniform point on the sphere of the given radius in R^dim."""
    if int(dim) < 1:
        raise ValidationError(f"sphere dimension must be >= 1, got {dim}")
    if not radius > 0:
        raise ValidationError(f"sphere radius must be positive, got {radius}")
    return sphere_points(rng, (), int(dim), radius)


def sphere_points(rng: np.random.Generator, batch: tuple, dim: int, radius) -> np.ndarray:
    """Array of shape ``batch + (dim,)`` of independent uniform sphere points."""
    g = rng.standard_normal(batch + (dim,))
    norms = np.linalg.norm(g, axis=-1, keepdims=True)
    # a zero Gaussian vector has probability 0; redraw defensively
    while np.any(norms == 0):
        bad = norms[..., 0] == 0
        g[bad] = rng.standard_normal((int(bad.sum()), dim))
        norms = np.linalg.norm(g, axis=-1, keepdims=True)
    return g * (np.asarray(radius)[..., None] if np.ndim(radius) else radius) / norms


@dataclass(frozen=True)
class Codebook:
    """M codewords of length n_K, stored row-wise and read-only."""

    m: int
    seed: int
    schedule: Schedule
    snr: float
    codewords: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.codewords.setflags(write=False)

    def segments(self, index: int) -> list[np.ndarray]:
        row = self.codewords[index]
        bounds = (0,) + self.schedule.times
        return [row[a:b] for a, b in zip(bounds, bounds[1:])]

    def __eq__(self, other):
        if not isinstance(other, Codebook):
            return NotImplemented
        return (
            (self.m, self.seed, self.schedule, self.snr) == (other.m, other.seed, other.schedule, other.snr)
            and np.array_equal(self.codewords, other.codewords)
        )

    __hash__ = None


def codeword_rows(
    rng: np.random.Generator, batch: tuple, schedule: Schedule, P: float
) -> np.ndarray:
    """Draw codewords of shape ``batch + (n_K,)``, each segment on its sphere."""
    out = np.empty(batch + (schedule.n_max,))
    start = 0
    for length in schedule.segment_lengths():
        if length:
            out[..., start : start + length] = sphere_points(rng, batch, length, math.sqrt(length * P))
        start += length
    return out


def generate_codebook(
    m: int,
    schedule: Schedule,
    P: float,
    seed: int,
    max_elements: int = DEFAULT_MAX_ELEMENTS,
) -> Codebook:
    """Independent codewords; codeword ``i`` draws from stream ``(seed, i)``."""
    m = int(m)
    if m < 1:
        raise ValidationError(f"need at least one message, got M={m}")
    if not P > 0:
        raise ValidationError(f"SNR must be positive, got {P}")
    if m * schedule.n_max > max_elements:
        raise ResourceError(
            f"codebook of {m} x {schedule.n_max} symbols exceeds budget of {max_elements}"
        )
    rows = np.empty((m, schedule.n_max))
    for i in range(m):
        rows[i] = codeword_rows(stream(seed, TAG_CODEBOOK, i), (), schedule, P)
    return Codebook(m=m, seed=int(seed), schedule=schedule, snr=float(P), codewords=rows)


@dataclass(frozen=True)
class PowerReport:
    ok: bool
    per_codeword: np.ndarray
    prefix_energy: np.ndarray

    def __bool__(self):
        return self.ok


def check_power(codebook: Codebook | np.ndarray, schedule: Schedule, P: float) -> PowerReport:
    """Check ||x^{n_k}||^2 <= n_k P (1 + 1e-9) for every codeword and prefix."""
    rows = codebook.codewords if isinstance(codebook, Codebook) else np.asarray(codebook, float)
    rows = np.atleast_2d(rows)
    if rows.shape[-1] != schedule.n_max:
        raise ValidationError(
            f"codeword length {rows.shape[-1]} does not match n_K = {schedule.n_max}"
        )
    cum = np.cumsum(rows**2, axis=1)
    idx = np.array(schedule.times) - 1
    energy = np.where(idx >= 0, cum[:, np.maximum(idx, 0)], 0.0)
    limit = np.array(schedule.times, dtype=float) * P * (1.0 + POWER_RTOL)
    per = np.all(energy <= limit, axis=1)
    return PowerReport(ok=bool(per.all()), per_codeword=per, prefix_energy=energy)


def _header(cb: Codebook) -> dict:
    return {"M": cb.m, "K": cb.schedule.k, "times": list(cb.schedule.times), "P": cb.snr, "seed": cb.seed}


def save_codebook(cb: Codebook, path, fmt: str = "binary") -> None:
    """Write a codebook. Binary: magic, u32 header length, JSON header,
    little-endian float64 rows. CSV: ``# {json header}`` then one row per
    codeword."""
    path = Path(path)
    header = json.dumps(_header(cb), sort_keys=True)
    if fmt == "binary":
        blob = header.encode()
        with path.open("wb") as fh:
            fh.write(_MAGIC)
            fh.write(struct.pack("<I", len(blob)))
            fh.write(blob)
            fh.write(np.ascontiguousarray(cb.codewords, dtype="<f8").tobytes())
    elif fmt == "csv":
        buf = io.StringIO()
        np.savetxt(buf, cb.codewords, delimiter=",", fmt="%.17g")
        path.write_text(f"# {header}\n" + buf.getvalue())
    else:
        raise ValidationError(f"unknown codebook format {fmt!r}")


def load_codebook(path) -> Codebook:
    path = Path(path)
    raw = path.read_bytes()
    if raw.startswith(_MAGIC):
        off = len(_MAGIC)
        (hlen,) = struct.unpack("<I", raw[off : off + 4])
        header = json.loads(raw[off + 4 : off + 4 + hlen])
        data = np.frombuffer(raw[off + 4 + hlen :], dtype="<f8").astype(float)
    else:
        text = raw.decode()
        first, _, body = text.partition("\n")
        if not first.startswith("# "):
            raise ValidationError(f"{path} is not a codebook file")
        header = json.loads(first[2:])
        data = np.loadtxt(io.StringIO(body), delimiter=",", ndmin=2).ravel()
    schedule = Schedule(tuple(header["times"]))
    rows = data.reshape(header["M"], schedule.n_max)
    return Codebook(m=header["M"], seed=header["seed"], schedule=schedule, snr=header["P"], codewords=rows)
