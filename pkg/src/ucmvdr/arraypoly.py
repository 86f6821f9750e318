"""Array polynomials of half-wavelength ULA beamformers.

The array polynomial of weights ``w`` is ``P(z) = sum_n conj(w_n) z^{-n}``,
so the beampattern is ``B(u) = P(exp(j pi u))`` and every zero of ``P`` on
the unit circle is a perfect null.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .array_model import steering_matrix
from .beamformers import WeightVector

LEADING_COEF_TOL = 1e-14
RESIDUAL_TOL = 1e-8
LOOK_ZERO_TOL = 1e-9


class DegenerateLeadingCoefficient(ValueError):
    """The first polynomial coefficient vanishes, so the degree drops below N-1."""


class ZeroAtLookDirection(ValueError):
    """A zero sits on the look direction; unit gain there cannot be imposed."""


@dataclass(frozen=True, eq=False)
class ArrayPolynomial:
    """Coefficients ``c_0..c_{N-1}`` of ``P(z) = sum_n c_n z^{-n}``."""

    coefficients: np.ndarray

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=complex).ravel()
        if c.size < 2:
            raise ValueError("array polynomial needs at least two coefficients")
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    @property
    def degree(self) -> int:
        return self.coefficients.size - 1

    def __call__(self, z):
        return evaluate(self.coefficients, z)


@dataclass(frozen=True, eq=False)
class ZeroSet:
    """Factored form ``gain * prod_n (1 - zeros[n] z^{-1})``."""

    zeros: np.ndarray
    gain: complex = 1.0

    def __post_init__(self):
        z = np.array(self.zeros, dtype=complex).ravel()
        z.setflags(write=False)
        object.__setattr__(self, "zeros", z)
        object.__setattr__(self, "gain", complex(self.gain))

    def __len__(self):
        return self.zeros.size

    @property
    def radii(self) -> np.ndarray:
        return np.abs(self.zeros)

    @property
    def angles(self) -> np.ndarray:
        return principal_angle(self.zeros)

    def coefficients(self) -> np.ndarray:
        """Expand back to ``c_0..c_{N-1}``."""
        return self.gain * expand_zeros(self.zeros).astype(complex)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.full(z.shape, self.gain, dtype=complex)
        for zk in self.zeros:
            out = out * (1.0 - zk / z)
        return out


def principal_angle(z) -> np.ndarray:
    """Argument of ``z`` mapped into (-pi, pi]."""
    a = np.angle(z)
    return np.where(a <= -np.pi, a + 2 * np.pi, a)


def wrap_angle(a) -> np.ndarray:
    """Wrap real angles into (-pi, pi]."""
    a = np.asarray(a, dtype=float)
    w = np.mod(a + np.pi, 2 * np.pi) - np.pi
    return np.where(w <= -np.pi, w + 2 * np.pi, w)


def sort_zeros(zeros) -> np.ndarray:
    """Order by principal angle, ties broken by radius."""
    zeros = np.asarray(zeros, dtype=complex)
    order = np.lexsort((np.abs(zeros), principal_angle(zeros)))
    return zeros[order]


def _require_half_wavelength(spacing):
    if not np.isclose(spacing, 0.5, rtol=0, atol=1e-12):
        raise ValueError(
            f"array polynomial mapping z = exp(j pi u) needs d/lambda = 1/2, got {spacing}"
        )


def weights_to_polynomial(w: WeightVector) -> ArrayPolynomial:
    _require_half_wavelength(w.spacing_over_wavelength)
    return ArrayPolynomial(np.conj(w.weights))


def polynomial_to_weights(p: ArrayPolynomial, u0: float = 0.0) -> WeightVector:
    return WeightVector(np.conj(p.coefficients), u0, 0.5)


def evaluate(coefficients, z) -> np.ndarray:
    """Evaluate ``sum_n c_n z^{-n}`` at ``z`` (scalar or array)."""
    c = np.asarray(coefficients, dtype=complex)
    z = np.asarray(z, dtype=complex)
    # Horner in w = 1/z
    zinv = 1.0 / z
    out = np.zeros(z.shape, dtype=complex)
    for ck in c[::-1]:
        out = out * zinv + ck
    return out


def zero_residuals(coefficients, zeros) -> np.ndarray:
    """``|P(xi)| / max|c|`` per zero, evaluated in whichever variable stays bounded.

    Outside the unit circle this is ``|P(xi)|`` itself; inside it is
    ``|xi^{N-1} P(xi)|`` so that zeros near the origin are not penalised for
    the pole of ``P`` at ``z = 0``.
    """
    c = np.asarray(coefficients, dtype=complex)
    zeros = np.asarray(zeros, dtype=complex)
    scale = np.abs(c).max()
    out = np.empty(zeros.shape, dtype=float)
    outside = np.abs(zeros) >= 1.0
    if np.any(outside):
        out[outside] = np.abs(evaluate(c, zeros[outside]))
    if np.any(~outside):
        out[~outside] = np.abs(np.polyval(c, zeros[~outside]))
    return out / scale


def companion_roots(coefficients) -> np.ndarray:
    """Roots of ``c_0 x^{m} + c_1 x^{m-1} + ... + c_m`` from the companion matrix."""
    c = np.asarray(coefficients, dtype=complex)
    m = c.size - 1
    if m == 0:
        return np.empty(0, dtype=complex)
    comp = np.zeros((m, m), dtype=complex)
    comp[0, :] = -c[1:] / c[0]
    comp[np.arange(1, m), np.arange(m - 1)] = 1.0
    return np.linalg.eigvals(comp)


def aberth_refine(coefficients, roots, max_iter: int = 50, tol: float = 1e-15) -> np.ndarray:
    """Polish approximate roots with the Aberth-Ehrlich simultaneous iteration."""
    c = np.asarray(coefficients, dtype=complex)
    dc = c[:-1] * np.arange(c.size - 1, 0, -1)
    z = np.array(roots, dtype=complex)
    m = z.size
    for _ in range(max_iter):
        p = np.polyval(c, z)
        dp = np.polyval(dc, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            diff = z[:, None] - z[None, :]
            diff[np.arange(m), np.arange(m)] = np.inf
            repulsion = np.sum(1.0 / diff, axis=1)
            step = ratio / (1.0 - ratio * repulsion)
        step = np.where(np.isfinite(step), step, 0.0)
        z = z - step
        if np.all(np.abs(step) <= tol * np.maximum(np.abs(z), 1.0)):
            break
    return z


def find_zeros(p: ArrayPolynomial) -> ZeroSet:
    """Factor ``P(z) = G prod (1 - xi_n z^{-1})`` with ``G = c_0``.

    Zeros come from the companion-matrix eigenvalues; if any residual is
    above ``RESIDUAL_TOL`` they are polished by Aberth iteration. Output is
    sorted by angle, then radius.
    """
    if not isinstance(p, ArrayPolynomial):
        p = ArrayPolynomial(p)
    c = p.coefficients
    if np.abs(c[0]) <= LEADING_COEF_TOL * np.abs(c).max():
        raise DegenerateLeadingCoefficient(
            f"|c_0| = {abs(c[0]):.3g} is negligible; polynomial degree is below {p.degree}"
        )
    zeros = companion_roots(c)
    if zero_residuals(c, zeros).max(initial=0.0) >= RESIDUAL_TOL:
        refined = aberth_refine(c, zeros)
        if zero_residuals(c, refined).max() < zero_residuals(c, zeros).max():
            zeros = refined
    return ZeroSet(sort_zeros(zeros), c[0])


def leja_order(zeros) -> np.ndarray:
    """Reorder zeros so each maximizes its product of distances to those already chosen.

    Expanding in this order keeps partial products well scaled; expanding an
    angle-sorted list instead builds up large intermediate coefficients that
    later cancel, costing several digits at N ~ 50.
    """
    zeros = np.asarray(zeros)
    n = zeros.size
    if n < 3:
        return zeros
    remaining = list(range(n))
    first = int(np.argmax(np.abs(zeros)))
    order = [first]
    remaining.remove(first)
    score = np.zeros(n)
    with np.errstate(divide="ignore"):
        while remaining:
            score += np.log(np.abs(zeros - zeros[order[-1]]))
            idx = np.asarray(remaining)
            nxt = int(idx[np.argmax(score[idx])])
            order.append(nxt)
            remaining.remove(nxt)
    return zeros[order]


def expand_zeros(zeros) -> np.ndarray:
    """Monic coefficients of ``prod (1 - xi_n z^{-1})`` in extended precision (Leja-ordered)."""
    zeros = leja_order(np.asarray(zeros, dtype=np.clongdouble))
    a = np.zeros(zeros.size + 1, dtype=np.clongdouble)
    a[0] = 1
    for k, zk in enumerate(zeros, start=1):
        a[1:k + 1] = a[1:k + 1] - zk * a[:k]
    return a


def synthesize_from_zeros(zeros, u0: float = 0.0) -> WeightVector:
    """Weights whose array polynomial has exactly ``zeros`` and ``P(exp(j pi u0)) = 1``.

    Implements ``prod (1 - xi_n z^{-1}) / (1 - xi_n z_look^{-1})``; any gain
    carried by a :class:`ZeroSet` is ignored. Repeated zeros are allowed.
    """
    zeros = np.asarray(getattr(zeros, "zeros", zeros), dtype=complex)
    z_look = np.exp(1j * np.pi * u0)
    if zeros.size and np.min(np.abs(zeros - z_look)) < LOOK_ZERO_TOL:
        raise ZeroAtLookDirection(f"a zero lies within {LOOK_ZERO_TOL:g} of exp(j pi u0), u0={u0}")
    monic = expand_zeros(zeros)
    # P(z_look) equals prod(1 - xi/z_look); summing the expanded series instead
    # makes the unit-gain constraint exact up to the final rounding
    z_inv = np.clongdouble(1 / z_look) ** np.arange(monic.size)
    coeffs = (monic / np.sum(monic * z_inv)).astype(complex)
    return WeightVector(np.conj(coeffs), u0, 0.5)


def beampattern(w: WeightVector, grid) -> np.ndarray:
    """Complex gain ``B(u) = w^H v(u)`` at each direction cosine in ``grid``."""
    vmat = steering_matrix(w.geometry, grid)
    return w.weights.conj() @ vmat


def polynomial_beampattern(p, grid) -> np.ndarray:
    """``P(exp(j pi u))`` from coefficients or a :class:`ZeroSet`."""
    z = np.exp(1j * np.pi * np.asarray(grid, dtype=float))
    if isinstance(p, ZeroSet):
        return p(z)
    return evaluate(getattr(p, "coefficients", p), z)


def cbf_zeros(num_sensors: int, u0: float = 0.0) -> np.ndarray:
    """Nulls of the N-element CBF: the N-th roots of unity except the look point, rotated to ``u0``."""
    k = np.arange(1, num_sensors)
    return sort_zeros(np.exp(1j * (np.pi * u0 + 2 * np.pi * k / num_sensors)))
