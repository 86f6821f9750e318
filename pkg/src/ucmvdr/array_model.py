"""Uniform linear array geometry, interference scenarios and snapshot simulation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

SeedLike = Union[int, Sequence[int]]


@dataclass(frozen=True)
class UlaGeometry:
    """N-element uniform linear array with spacing given in wavelengths."""

    num_sensors: int
    spacing_over_wavelength: float = 0.5

    def __post_init__(self):
        if int(self.num_sensors) != self.num_sensors or self.num_sensors < 2:
            raise ValueError(f"num_sensors must be an integer >= 2, got {self.num_sensors!r}")
        if not self.spacing_over_wavelength > 0:
            raise ValueError("spacing_over_wavelength must be positive")
        object.__setattr__(self, "num_sensors", int(self.num_sensors))
        object.__setattr__(self, "spacing_over_wavelength", float(self.spacing_over_wavelength))


@dataclass(frozen=True)
class SourceSpec:
    """Planewave source at direction cosine ``direction_cosine`` with linear ``power``."""

    direction_cosine: float
    power: float

    def __post_init__(self):
        _check_direction(self.direction_cosine)
        if not self.power > 0:
            raise ValueError(f"source power must be positive, got {self.power!r}")
        object.__setattr__(self, "direction_cosine", float(self.direction_cosine))
        object.__setattr__(self, "power", float(self.power))

    @classmethod
    def from_db(cls, direction_cosine: float, power_db: float, noise_power: float = 1.0):
        """Build a source from its power in dB relative to ``noise_power`` (i.e. INR)."""
        return cls(direction_cosine, noise_power * 10.0 ** (power_db / 10.0))


@dataclass(frozen=True)
class UlaScenario:
    """Interference-plus-noise environment seen by a ULA steered to ``look_direction``.

    The desired signal is never part of the scenario: training snapshots are
    signal-free.
    """

    geometry: UlaGeometry
    look_direction: float = 0.0
    interferers: tuple[SourceSpec, ...] = field(default_factory=tuple)
    noise_power: float = 1.0

    def __post_init__(self):
        _check_direction(self.look_direction)
        object.__setattr__(self, "interferers", tuple(self.interferers))
        if not self.noise_power > 0:
            raise ValueError("noise_power must be positive")
        dirs = [s.direction_cosine for s in self.interferers]
        if len(set(dirs)) != len(dirs):
            raise ValueError("interferer directions must be distinct")

    @property
    def num_sensors(self) -> int:
        return self.geometry.num_sensors


@dataclass(frozen=True, eq=False)
class SnapshotBatch:
    """N x L block of snapshots (one column per snapshot) and the seed that produced it."""

    data: np.ndarray
    seed: object = None

    def __post_init__(self):
        data = np.asarray(self.data, dtype=complex)
        if data.ndim != 2 or data.shape[1] < 1:
            raise ValueError("snapshot data must be an N x L matrix with L >= 1")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def num_snapshots(self) -> int:
        return self.data.shape[1]


def _check_direction(u):
    if not -1.0 <= u <= 1.0:
        raise ValueError(f"direction cosine must lie in [-1, 1], got {u!r}")


def steering_vector(geometry: UlaGeometry, u: float) -> np.ndarray:
    """Array manifold vector ``exp(-j 2 pi (d/lambda) u n)``, n = 0..N-1."""
    _check_direction(u)
    n = np.arange(geometry.num_sensors)
    return np.exp(-2j * np.pi * geometry.spacing_over_wavelength * u * n)


def steering_matrix(geometry: UlaGeometry, grid) -> np.ndarray:
    """Stack steering vectors for every direction in ``grid`` as columns (N x K)."""
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    if np.any(np.abs(grid) > 1.0):
        raise ValueError("direction cosines must lie in [-1, 1]")
    n = np.arange(geometry.num_sensors)[:, None]
    return np.exp(-2j * np.pi * geometry.spacing_over_wavelength * n * grid[None, :])


def ensemble_covariance(scenario: UlaScenario):
    """Interference-plus-noise ensemble covariance ``sum_i p_i v_i v_i^H + s_w I``."""
    from .covariance import CovarianceMatrix

    n = scenario.num_sensors
    sigma = scenario.noise_power * np.eye(n, dtype=complex)
    for src in scenario.interferers:
        v = steering_vector(scenario.geometry, src.direction_cosine)
        sigma += src.power * np.outer(v, v.conj())
    # exact Hermitian symmetry regardless of rounding in the outer products
    sigma = 0.5 * (sigma + sigma.conj().T)
    return CovarianceMatrix(sigma, kind="ensemble")


def make_rng(seed: SeedLike) -> np.random.Generator:
    """PCG64 generator keyed by an int or a tuple of ints such as ``(base_seed, trial)``."""
    if isinstance(seed, np.random.SeedSequence):
        return np.random.default_rng(seed)
    entropy = [int(s) for s in np.atleast_1d(seed)]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def complex_normal(rng: np.random.Generator, shape, power=1.0) -> np.ndarray:
    """Circular complex Gaussian draws with ``E|x|^2 = power``."""
    scale = np.sqrt(np.asarray(power, dtype=float) / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def generate_snapshots(scenario: UlaScenario, num_snapshots: int, seed: SeedLike) -> SnapshotBatch:
    """Draw ``num_snapshots`` signal-free snapshots ``x = sum_i a_i v_i + n``.

    Amplitudes and noise are independent across sources and snapshots. The
    result is a deterministic function of ``seed``.
    """
    if num_snapshots < 1:
        raise ValueError("num_snapshots must be >= 1")
    rng = make_rng(seed)
    n = scenario.num_sensors
    sources = scenario.interferers
    x = complex_normal(rng, (n, num_snapshots), scenario.noise_power)
    if sources:
        vmat = steering_matrix(scenario.geometry, [s.direction_cosine for s in sources])
        powers = np.array([s.power for s in sources])[:, None]
        amps = complex_normal(rng, (len(sources), num_snapshots), powers)
        x = x + vmat @ amps
    return SnapshotBatch(x, seed)
