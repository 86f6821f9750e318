"""Conventional and MVDR-family beamformer weights.

SMI and diagonally loaded MVDR are both :func:`mvdr_weights`, just fed a
sample or a loaded covariance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .array_model import UlaGeometry, steering_vector
from .covariance import hermitian_solve

DISTORTIONLESS_TOL = 1e-10


class DistortionlessViolation(ValueError):
    """Weights do not have unit gain in the look direction."""


@dataclass(frozen=True, eq=False)
class WeightVector:
    """Length-N complex weights with unit response ``w^H v(u0) = 1`` at ``look_direction``."""

    weights: np.ndarray
    look_direction: float = 0.0
    spacing_over_wavelength: float = 0.5

    def __post_init__(self):
        w = np.array(self.weights, dtype=complex).ravel()
        if w.size < 2:
            raise ValueError("need at least two weights")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        err = abs(self.response() - 1.0)
        if not err < DISTORTIONLESS_TOL:
            raise DistortionlessViolation(
                f"|w^H v(u0) - 1| = {err:.3g} exceeds {DISTORTIONLESS_TOL:g} (u0={self.look_direction})"
            )

    @property
    def geometry(self) -> UlaGeometry:
        return UlaGeometry(self.weights.size, self.spacing_over_wavelength)

    def response(self, u=None) -> complex:
        """Complex gain ``w^H v(u)``; defaults to the look direction."""
        u = self.look_direction if u is None else u
        return complex(np.vdot(self.weights, steering_vector(self.geometry, u)))

    def __len__(self):
        return self.weights.size

    def __array__(self, dtype=None, copy=None):
        return self.weights if dtype is None else self.weights.astype(dtype)


def cbf_weights(geometry: UlaGeometry, u0: float) -> WeightVector:
    """Conventional (delay-and-sum) beamformer ``v(u0) / N``."""
    v0 = steering_vector(geometry, u0)
    return WeightVector(v0 / geometry.num_sensors, u0, geometry.spacing_over_wavelength)


def mvdr_weights(cov, geometry: UlaGeometry, u0: float) -> WeightVector:
    """Capon/MVDR weights ``C^{-1} v0 / (v0^H C^{-1} v0)``.

    ``cov`` may be the ensemble covariance (ensemble MVDR), a sample
    covariance (SMI) or a diagonally loaded sample covariance (DL MVDR).
    Propagates :class:`~ucmvdr.covariance.IllConditionedError`.
    """
    v0 = steering_vector(geometry, u0)
    x = hermitian_solve(cov, v0)
    return WeightVector(x / np.vdot(v0, x), u0, geometry.spacing_over_wavelength)
