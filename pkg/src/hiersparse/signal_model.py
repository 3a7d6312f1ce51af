"""Observation grids, atomic signals, multipath channel synthesis and noise.

An observation grid holds the sensor positions of one physical dimension
(subcarrier frequencies in Hz, or antenna positions in wavelengths). The
atomic signal of a target parameter ``u`` over a grid ``g`` is
``exp(-2j*pi*g*u)``; a multipath channel is a sparse combination of
Kronecker products of per-dimension atomic signals.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, ZeroChannel, ZeroNoise

# Substream tag for noise draws, so noise never replays the draws used for
# channel parameters seeded from the same trial seed.
_NOISE_STREAM = 1

_UNIFORMITY_RTOL = 1e-12


class GridKind(enum.Enum):
    FREQUENCY = "frequency"
    SPACE = "space"


@dataclass(frozen=True)
class ObservationGrid:
    """Uniformly spaced sensor positions for one dimension.

    ``values`` are dimensionless after pairing: frequencies in Hz pair with
    delays in seconds, positions in wavelengths pair with angle cosines.
    """

    values: np.ndarray
    kind: GridKind

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", vals)
        if vals.ndim != 1 or vals.size < 1:
            raise ValueError("grid values must be a nonempty 1-D vector")
        if vals.size > 1:
            steps = np.diff(vals)
            if np.any(steps <= 0):
                raise ValueError("grid values must be strictly increasing")
            if np.max(np.abs(steps - steps[0])) > _UNIFORMITY_RTOL * abs(steps[0]):
                raise ValueError("grid spacing must be uniform")

    @property
    def count(self) -> int:
        return self.values.size

    @property
    def spacing(self) -> float:
        if self.count < 2:
            raise ValueError("spacing undefined for a single-point grid")
        return float(self.values[1] - self.values[0])

    @classmethod
    def frequency(cls, n: int, spacing: float, start: float = 0.0) -> "ObservationGrid":
        """Pilot-frequency grid: start + k*spacing, k = 0..n-1."""
        return cls(start + spacing * np.arange(n), GridKind.FREQUENCY)

    @classmethod
    def space(cls, n: int, spacing: float = 0.5) -> "ObservationGrid":
        """ULA positions in wavelengths, half-wavelength by default."""
        return cls(spacing * np.arange(n), GridKind.SPACE)


@dataclass(frozen=True)
class TargetDomain:
    """Closed search interval for one target parameter."""

    u_min: float
    u_max: float

    def __post_init__(self):
        if not self.u_max > self.u_min:
            raise ValueError("target domain requires u_max > u_min")

    @property
    def width(self) -> float:
        return self.u_max - self.u_min

    @classmethod
    def for_grid(cls, grid: ObservationGrid) -> "TargetDomain":
        """Default domain: delays [0, 1/spacing] or angle cosines [-1, 1]."""
        if grid.kind is GridKind.FREQUENCY:
            return cls(0.0, 1.0 / grid.spacing)
        return cls(-1.0, 1.0)


@dataclass(frozen=True)
class PathSet:
    """Complex gains and per-dimension target parameters of K paths."""

    gains: np.ndarray  # (K,) complex
    params: np.ndarray  # (K, D) real

    def __post_init__(self):
        gains = np.atleast_1d(np.asarray(self.gains, dtype=np.complex128))
        params = np.asarray(self.params, dtype=np.float64)
        if params.ndim == 1:
            params = params[:, None]
        object.__setattr__(self, "gains", gains)
        object.__setattr__(self, "params", params)
        if gains.size < 1:
            raise ValueError("a path set needs at least one path")
        if params.shape[0] != gains.size:
            raise DimensionMismatch("one parameter row per path required")

    @property
    def count(self) -> int:
        return self.gains.size

    @property
    def ndim(self) -> int:
        return self.params.shape[1]


@dataclass
class Observation:
    """Noisy measurement y = h + n with the noise variance that produced it."""

    y: np.ndarray
    sigma2: float
    true_channel: np.ndarray | None = None
    seed: int | None = None

    def __post_init__(self):
        self.y = np.asarray(self.y, dtype=np.complex128)
        if self.sigma2 < 0:
            raise ValueError("sigma2 must be non-negative")


def atomic_signal(grid: ObservationGrid, u: float) -> np.ndarray:
    """Unit-modulus response exp(-2j*pi*grid*u) of a single path."""
    return np.exp(-2j * np.pi * grid.values * np.float64(u))


def atomic_signals(grid: ObservationGrid, us: np.ndarray) -> np.ndarray:
    """Column-stacked atomic signals, shape (N, len(us))."""
    us = np.asarray(us, dtype=np.float64)
    return np.exp(-2j * np.pi * np.outer(grid.values, us))


def synth_channel(grids: list[ObservationGrid], paths: PathSet) -> np.ndarray:
    """Sum over paths of gain times the Kronecker product of per-dimension
    atomic signals, slowest-varying dimension first."""
    if paths.ndim != len(grids):
        raise DimensionMismatch(
            f"paths carry {paths.ndim} parameters but {len(grids)} grids given"
        )
    n_total = math.prod(g.count for g in grids)
    h = np.zeros(n_total, dtype=np.complex128)
    for gain, prm in zip(paths.gains, paths.params):
        atom = atomic_signal(grids[0], prm[0])
        for g, u in zip(grids[1:], prm[1:]):
            atom = np.kron(atom, atomic_signal(g, u))
        h += gain * atom
    return h


def add_noise(h: np.ndarray, target_snr_db: float, rng_seed: int) -> Observation:
    """Add circularly-symmetric complex Gaussian noise at the requested SNR.

    The noise variance follows from SNR = ||h||^2 / (N sigma^2). Passing
    ``target_snr_db = inf`` returns the noiseless channel with sigma2 = 0.
    Noise draws come from the dedicated substream ``(rng_seed, 1)`` of
    numpy's default generator, so they are deterministic per seed and
    disjoint from channel-parameter draws seeded with the same integer.
    """
    h = np.asarray(h, dtype=np.complex128)
    energy = float(np.real(np.vdot(h, h)))
    if energy == 0.0:
        raise ZeroChannel("cannot set an SNR for a zero channel")
    if math.isinf(target_snr_db) and target_snr_db > 0:
        return Observation(y=h.copy(), sigma2=0.0, true_channel=h, seed=rng_seed)
    n = h.size
    sigma2 = energy / (n * 10.0 ** (target_snr_db / 10.0))
    rng = np.random.default_rng([rng_seed, _NOISE_STREAM])
    noise = math.sqrt(sigma2 / 2.0) * (
        rng.standard_normal(n) + 1j * rng.standard_normal(n)
    )
    return Observation(y=h + noise, sigma2=sigma2, true_channel=h, seed=rng_seed)


def measure_snr(h: np.ndarray, sigma2: float) -> float:
    """Linear SNR ||h||^2 / (N sigma^2)."""
    if sigma2 <= 0:
        raise ZeroNoise("sigma2 must be positive to measure an SNR")
    h = np.asarray(h, dtype=np.complex128)
    return float(np.real(np.vdot(h, h))) / (h.size * sigma2)
