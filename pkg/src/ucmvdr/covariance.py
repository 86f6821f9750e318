"""Sample covariance estimation, diagonal loading and Hermitian PD solves."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

KINDS = ("ensemble", "sample", "loaded")

#: minimum eigenvalue / maximum eigenvalue below which a solve is refused
CONDITION_THRESHOLD = 1e-12


class IllConditionedError(np.linalg.LinAlgError):
    """Raised when a covariance matrix is not safely positive definite."""


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    """Hermitian N x N covariance matrix tagged with how it was obtained."""

    entries: np.ndarray
    kind: str = "sample"

    def __post_init__(self):
        a = np.array(self.entries, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("covariance must be a square matrix")
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        scale = max(np.abs(a).max(), np.finfo(float).tiny)
        if np.abs(a - a.conj().T).max() > 1e-12 * scale:
            raise ValueError("covariance matrix is not Hermitian")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def eigvalsh(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)


def _entries(a) -> np.ndarray:
    return a.entries if isinstance(a, CovarianceMatrix) else np.asarray(a)


def sample_covariance(batch) -> CovarianceMatrix:
    """SCM ``(1/L) sum_l x_l x_l^H`` of a :class:`SnapshotBatch` (or raw N x L array)."""
    x = np.asarray(getattr(batch, "data", batch), dtype=complex)
    if x.ndim != 2 or x.shape[1] < 1:
        raise ValueError("expected an N x L snapshot matrix with L >= 1")
    s = x @ x.conj().T / x.shape[1]
    return CovarianceMatrix(0.5 * (s + s.conj().T), kind="sample")


def diagonal_load(cov, delta: float) -> CovarianceMatrix:
    """Return ``S + delta I``. ``delta`` is in linear power units."""
    if not delta >= 0:
        raise ValueError(f"loading factor must be >= 0, got {delta!r}")
    s = _entries(cov)
    if delta == 0:
        kind = cov.kind if isinstance(cov, CovarianceMatrix) else "sample"
        return cov if isinstance(cov, CovarianceMatrix) else CovarianceMatrix(s, kind)
    return CovarianceMatrix(s + delta * np.eye(s.shape[0]), kind="loaded")


def hermitian_solve(a, b) -> np.ndarray:
    """Solve ``A x = b`` for Hermitian positive definite ``A`` via Cholesky.

    Raises
    ------
    IllConditionedError
        If the smallest eigenvalue of ``A`` is not above
        ``CONDITION_THRESHOLD`` times the largest one (e.g. an unloaded SCM
        built from fewer snapshots than sensors).
    """
    a = _entries(a)
    b = np.asarray(b, dtype=complex)
    eig = np.linalg.eigvalsh(a)
    if not eig[-1] > 0 or eig[0] <= CONDITION_THRESHOLD * eig[-1]:
        raise IllConditionedError(
            f"matrix is not safely positive definite (eigenvalue range {eig[0]:.3g} .. {eig[-1]:.3g})"
        )
    try:
        factor = la.cho_factor(a, lower=True, check_finite=False)
    except la.LinAlgError as exc:  # pragma: no cover - guarded by the eigenvalue test
        raise IllConditionedError(str(exc)) from exc
    return la.cho_solve(factor, b, check_finite=False)
