"""Beamformer performance metrics: WNG, notch depth and output power split."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .array_model import UlaGeometry, UlaScenario, steering_matrix, steering_vector


@dataclass(frozen=True)
class MetricsRecord:
    """Output-power breakdown of one weight vector in one scenario (linear units)."""

    wng: float
    notch_depth_per_interferer: tuple[float, ...]
    interferer_power: float
    noise_power: float
    interferer_power_per_source: tuple[float, ...] = ()

    @property
    def total_output(self) -> float:
        return self.interferer_power + self.noise_power

    @property
    def notch_depth(self) -> float:
        """Notch depth at the first interferer (NaN when there is none)."""
        nd = self.notch_depth_per_interferer
        return nd[0] if nd else float("nan")


def _w(w) -> np.ndarray:
    return np.asarray(getattr(w, "weights", w), dtype=complex)


def white_noise_gain(w) -> float:
    """``1 / ||w||^2``."""
    w = _w(w)
    norm2 = np.vdot(w, w).real
    if norm2 == 0:
        raise ValueError("white noise gain undefined for zero weights")
    return 1.0 / norm2


def notch_depth(w, u_interferer: float) -> float:
    """Beampattern power ``|w^H v(u_I)|^2``."""
    weights = _w(w)
    spacing = getattr(w, "spacing_over_wavelength", 0.5)
    v = steering_vector(UlaGeometry(weights.size, spacing), u_interferer)
    return float(abs(np.vdot(weights, v)) ** 2)


def output_powers(w, scenario: UlaScenario) -> MetricsRecord:
    """Interferer power ``sum_i p_i |w^H v_i|^2`` and noise power ``s_w ||w||^2``."""
    weights = _w(w)
    if weights.size != scenario.num_sensors:
        raise ValueError("weight length does not match the scenario array")
    norm2 = np.vdot(weights, weights).real
    if scenario.interferers:
        vmat = steering_matrix(scenario.geometry, [s.direction_cosine for s in scenario.interferers])
        nd = np.abs(weights.conj() @ vmat) ** 2
        per_source = nd * np.array([s.power for s in scenario.interferers])
    else:
        nd = per_source = np.zeros(0)
    return MetricsRecord(
        wng=1.0 / norm2,
        notch_depth_per_interferer=tuple(float(x) for x in nd),
        interferer_power=float(per_source.sum()),
        noise_power=float(scenario.noise_power * norm2),
        interferer_power_per_source=tuple(float(x) for x in per_source),
    )


def output_sinr(w, scenario: UlaScenario) -> float:
    """Ensemble output SINR ``|w^H v0|^2 / (w^H Sigma w)`` for a unit-power look-direction signal."""
    weights = _w(w)
    v0 = steering_vector(scenario.geometry, scenario.look_direction)
    rec = output_powers(weights, scenario)
    return float(abs(np.vdot(weights, v0)) ** 2 / rec.total_output)


def to_db(x):
    """``10 log10`` that maps exact zeros to ``-inf`` without warnings."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(x)
