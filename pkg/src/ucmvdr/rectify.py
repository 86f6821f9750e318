"""Unit circle rectification of SMI weights (the UC MVDR beamformer).

Sample zeros of the SMI array polynomial are pushed radially onto the unit
circle. Zeros that land inside the CBF null-to-null main lobe around the
look direction are instead parked on the nearest CBF first null, so the
main lobe stays intact. The weights are then rebuilt from the rectified
zeros with unit gain at the look direction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arraypoly import ZeroSet, find_zeros, synthesize_from_zeros, weights_to_polynomial, wrap_angle
from .beamformers import WeightVector


@dataclass(frozen=True, eq=False)
class ProjectionReport:
    """Zeros before and after rectification, index-aligned."""

    original_zeros: ZeroSet
    projected_zeros: ZeroSet
    mainlobe_moved: tuple[int, ...]
    look_direction: float = 0.0

    @property
    def num_sensors(self) -> int:
        return len(self.original_zeros) + 1

    @property
    def collapsed(self) -> bool:
        """True when two or more main-lobe zeros were sent to the same first null."""
        moved = self.projected_zeros.zeros[list(self.mainlobe_moved)]
        return moved.size != np.unique(np.round(moved, 12)).size

    def rows(self):
        """One dict per zero, for tabular serialization."""
        moved = set(self.mainlobe_moved)
        for i, (xi, xh) in enumerate(zip(self.original_zeros.zeros, self.projected_zeros.zeros)):
            yield {
                "index": i,
                "orig_re": xi.real,
                "orig_im": xi.imag,
                "orig_radius": abs(xi),
                "orig_angle": float(np.angle(xi)),
                "proj_re": xh.real,
                "proj_im": xh.imag,
                "proj_angle": float(np.angle(xh)),
                "mainlobe_moved": int(i in moved),
            }


def project_zeros(zeros, u0: float, num_sensors: int) -> ProjectionReport:
    """Project ``zeros`` onto the unit circle with main-lobe exclusion.

    With ``delta = wrap(angle - pi u0)``: if ``|delta| > 2 pi / N`` the zero
    becomes ``exp(j angle)``; otherwise it moves to
    ``exp(j (pi u0 + sign(delta) 2 pi / N))`` where ``sign(0) = +1``.
    """
    zs = zeros if isinstance(zeros, ZeroSet) else ZeroSet(zeros)
    if len(zs) == 0:
        raise ValueError("no zeros to project")
    edge = 2 * np.pi / num_sensors
    omega = np.angle(zs.zeros)
    delta = wrap_angle(omega - np.pi * u0)
    inside = np.abs(delta) <= edge
    side = np.where(delta >= 0, 1.0, -1.0)
    new_angle = np.where(inside, np.pi * u0 + side * edge, omega)
    # cos/sin construction gives |z| = 1 to the last bit, unlike dividing by |z|
    projected = np.cos(new_angle) + 1j * np.sin(new_angle)
    moved = tuple(int(i) for i in np.flatnonzero(inside))
    return ProjectionReport(zs, ZeroSet(projected, 1.0), moved, float(u0))


def uc_mvdr_weights(smi_weights: WeightVector, geometry=None):
    """Unit-circle rectified MVDR weights from SMI (or any distortionless) weights.

    Returns ``(weights, report)``. ``geometry`` is optional and only checked
    for consistency with the weight length.
    """
    n = len(smi_weights)
    if geometry is not None and geometry.num_sensors != n:
        raise ValueError(f"geometry has {geometry.num_sensors} sensors but weights have {n}")
    u0 = smi_weights.look_direction
    sample = find_zeros(weights_to_polynomial(smi_weights))
    report = project_zeros(sample, u0, n)
    return synthesize_from_zeros(report.projected_zeros, u0), report
