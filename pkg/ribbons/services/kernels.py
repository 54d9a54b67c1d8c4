"""
Radial kernel functions φ(α) whose gradients appear in the linking, writhe,
Biot-Savart and helicity integrands.

φ behaves like 1/(4πα) at α → 0 in every family. Removable singularities at
the antipode of S³ are evaluated with truncated even series in u = α − π.
"""
import enum
import logging
import math
from dataclasses import dataclass

import numpy as np

from ..exceptions import KernelDomainError, UnsupportedFormatError
from .geometry import Space

logger = logging.getLogger(__name__)

FOUR_PI = 4.0 * math.pi
FOUR_PI_SQ = 4.0 * math.pi ** 2

# Series switch radius around removable singularities
SERIES_RADIUS = 1e-4

# Biot-Savart kernels use φ₀ = PHI0_SIGN · φ
PHI0_SIGN = -1.0


class TransportFormat(str, enum.Enum):
    LEFT = 'left'
    PARALLEL = 'parallel'
    EUCLIDEAN = 'euclidean'


@dataclass(frozen=True)
class KernelFamily:
    """Kernel selection for one (space, transport format) pair."""
    space: Space
    format: TransportFormat

    def __post_init__(self):
        space = Space.parse(self.space)
        fmt = TransportFormat(self.format)
        if space is Space.EUCLIDEAN and fmt is TransportFormat.PARALLEL:
            fmt = TransportFormat.EUCLIDEAN
        if fmt is TransportFormat.LEFT and space is not Space.SPHERE3:
            raise UnsupportedFormatError(
                f"unsupported format: left translation is only available on s3, not {space.value}"
            )
        if fmt is TransportFormat.EUCLIDEAN and space is not Space.EUCLIDEAN:
            raise UnsupportedFormatError(f"unsupported format: euclidean kernel on {space.value}")
        object.__setattr__(self, 'space', space)
        object.__setattr__(self, 'format', fmt)

    @classmethod
    def for_space(cls, space, format='parallel'):
        return cls(Space.parse(space), TransportFormat(str(format).lower()))

    @property
    def is_left(self):
        return self.format is TransportFormat.LEFT

    def __str__(self):
        return f"{self.space.value}/{self.format.value}"


def _alpha(family, alpha):
    a = np.asarray(alpha, dtype=float)
    if np.any(a <= 0):
        raise KernelDomainError(f"Kernel argument must be positive, got min α = {np.min(a)}")
    if family.space is Space.SPHERE3 and np.any(a > math.pi + 1e-12):
        raise KernelDomainError(f"S³ kernel argument must be ≤ π, got max α = {np.max(a)}")
    return np.minimum(a, math.pi) if family.space is Space.SPHERE3 else a


def _out(value):
    value = np.asarray(value)
    return float(value) if value.ndim == 0 else value


def _near_pi(family, a):
    return np.abs(a - math.pi) < SERIES_RADIUS if family.space is Space.SPHERE3 else np.zeros_like(a, dtype=bool)


def _closed(a, near, fn):
    # evaluate fn away from the series region only, to keep warnings quiet
    safe = np.where(near, 1.0, a)
    with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
        return fn(safe)


# ---------------------------------------------------------------------------
# φ, φ′, φ″
# ---------------------------------------------------------------------------

def phi(family, alpha):
    a = _alpha(family, alpha)
    space, fmt = family.space, family.format
    if space is Space.EUCLIDEAN:
        return _out(1.0 / (FOUR_PI * a))
    if space is Space.HYPERBOLIC3:
        return _out(1.0 / (FOUR_PI * np.sinh(a)))

    near = _near_pi(family, a)
    u = a - math.pi
    u2 = u * u
    if fmt is TransportFormat.LEFT:
        closed = _closed(a, near, lambda t: (math.pi - t) / np.tan(t))
        series = -1.0 + u2 / 3.0 + u2 * u2 / 45.0 + 2.0 * u2 ** 3 / 945.0
    else:
        closed = _closed(a, near, lambda t: (math.pi - t) / np.sin(t))
        series = 1.0 + u2 / 6.0 + 7.0 * u2 * u2 / 360.0 + 31.0 * u2 ** 3 / 15120.0
    return _out(np.where(near, series, closed) / FOUR_PI_SQ)


def phi_prime(family, alpha):
    a = _alpha(family, alpha)
    space, fmt = family.space, family.format
    if space is Space.EUCLIDEAN:
        return _out(-1.0 / (FOUR_PI * a * a))
    if space is Space.HYPERBOLIC3:
        return _out(-np.cosh(a) / (FOUR_PI * np.sinh(a) ** 2))

    near = _near_pi(family, a)
    u = a - math.pi
    u2 = u * u
    if fmt is TransportFormat.LEFT:
        closed = _closed(a, near, lambda t: -1.0 / np.tan(t) - (math.pi - t) / np.sin(t) ** 2)
        series = u * (2.0 / 3.0 + 4.0 * u2 / 45.0 + 12.0 * u2 * u2 / 945.0)
    else:
        closed = _closed(a, near, lambda t: -(1.0 + (math.pi - t) / np.tan(t)) / np.sin(t))
        series = u * (1.0 / 3.0 + 7.0 * u2 / 90.0 + 31.0 * u2 * u2 / 2520.0)
    return _out(np.where(near, series, closed) / FOUR_PI_SQ)


def phi_double_prime(family, alpha):
    a = _alpha(family, alpha)
    space, fmt = family.space, family.format
    if space is Space.EUCLIDEAN:
        return _out(1.0 / (2.0 * math.pi * a ** 3))
    if space is Space.HYPERBOLIC3:
        s = np.sinh(a)
        return _out((np.cosh(a) ** 2 + 1.0) / (FOUR_PI * s ** 3))

    near = _near_pi(family, a)
    u = a - math.pi
    u2 = u * u
    if fmt is TransportFormat.LEFT:
        def closed_form(t):
            csc2 = 1.0 / np.sin(t) ** 2
            return 2.0 * csc2 + 2.0 * (math.pi - t) * csc2 / np.tan(t)
        series = 2.0 / 3.0 + 12.0 * u2 / 45.0 + 60.0 * u2 * u2 / 945.0
    else:
        def closed_form(t):
            csc = 1.0 / np.sin(t)
            cot = 1.0 / np.tan(t)
            return 2.0 * csc * cot + (math.pi - t) * csc * (cot * cot + csc * csc)
        series = 1.0 / 3.0 + 7.0 * u2 / 30.0 + 31.0 * u2 * u2 / 504.0
    closed = _closed(a, near, closed_form)
    return _out(np.where(near, series, closed) / FOUR_PI_SQ)


def radial_scale(space, alpha):
    """α, sin α or sinh α: the factor relating ∇α to the chord x − y."""
    a = np.asarray(alpha, dtype=float)
    if space is Space.SPHERE3:
        return np.sin(a)
    if space is Space.HYPERBOLIC3:
        return np.sinh(a)
    return a


def phi_prime_over_radial(family, alpha):
    """
    φ′(α) divided by radial_scale(α), the coefficient shared by every
    determinant-form integrand. Finite at the S³ antipode.
    """
    a = _alpha(family, alpha)
    space, fmt = family.space, family.format
    if space is Space.EUCLIDEAN:
        return _out(-1.0 / (FOUR_PI * a ** 3))
    if space is Space.HYPERBOLIC3:
        s = np.sinh(a)
        return _out(-np.cosh(a) / (FOUR_PI * s ** 3))

    near = _near_pi(family, a)
    u = a - math.pi
    u2 = u * u
    if fmt is TransportFormat.LEFT:
        closed = _closed(a, near, lambda t: (-1.0 / np.tan(t) - (math.pi - t) / np.sin(t) ** 2) / np.sin(t))
        coeff = 2.0 / 3.0 + 4.0 * u2 / 45.0 + 12.0 * u2 * u2 / 945.0
    else:
        closed = _closed(a, near, lambda t: -(1.0 + (math.pi - t) / np.tan(t)) / np.sin(t) ** 2)
        coeff = 1.0 / 3.0 + 7.0 * u2 / 90.0 + 31.0 * u2 * u2 / 2520.0
    # φ′ = u·coeff and sin α = −sin u, so the ratio is −coeff·u/sin u = −coeff/sinc(u/π)
    series = -coeff / np.sinc(u / math.pi)
    return _out(np.where(near, series, closed) / FOUR_PI_SQ)


# ---------------------------------------------------------------------------
# Singular-part remainders
# ---------------------------------------------------------------------------

_REMAINDER_SERIES = {
    # (space, format): coefficients of f(α) = φ − 1/(4πα) in powers of α
    (Space.SPHERE3, TransportFormat.PARALLEL): (
        -1.0 / FOUR_PI_SQ, 1.0 / (24 * math.pi), -1.0 / (24 * math.pi ** 2), 7.0 / (1440 * math.pi),
    ),
    (Space.SPHERE3, TransportFormat.LEFT): (
        -1.0 / FOUR_PI_SQ, -1.0 / (12 * math.pi), 1.0 / (12 * math.pi ** 2), -1.0 / (180 * math.pi),
    ),
    (Space.HYPERBOLIC3, TransportFormat.PARALLEL): (
        0.0, -1.0 / (24 * math.pi), 0.0, 7.0 / (1440 * math.pi),
    ),
}


def phi_remainder(family, alpha, order=0):
    """
    Bounded remainder of φ (order 0), φ′ (order 1) or φ″ (order 2) after
    removing 1/(4πα), −1/(4πα²) or 1/(2πα³). Uses the power series within
    SERIES_RADIUS of α = 0.
    """
    if order not in (0, 1, 2):
        raise ValueError(f"order must be 0, 1 or 2, got {order}")
    a = _alpha(family, alpha)
    if family.space is Space.EUCLIDEAN:
        return _out(np.zeros_like(a))

    singular = (1.0 / (FOUR_PI * a), -1.0 / (FOUR_PI * a * a), 1.0 / (2.0 * math.pi * a ** 3))[order]
    value = (phi, phi_prime, phi_double_prime)[order](family, a)
    closed = np.asarray(value) - singular

    coeffs = np.array(_REMAINDER_SERIES[(family.space, family.format)])
    for _ in range(order):
        coeffs = coeffs[1:] * np.arange(1, len(coeffs))
    series = np.polynomial.polynomial.polyval(a, coeffs)
    return _out(np.where(a < SERIES_RADIUS, series, closed))


# ---------------------------------------------------------------------------
# φ₀ and φ₁ (Biot-Savart side)
# ---------------------------------------------------------------------------

def phi0(family, alpha):
    return _out(PHI0_SIGN * np.asarray(phi(family, alpha)))


def _phi1_alpha(alpha):
    a = np.asarray(alpha, dtype=float)
    if np.any(a < 0) or np.any(a > math.pi):
        raise KernelDomainError(f"φ₁ is defined on [0, π], got α in [{np.min(a)}, {np.max(a)}]")
    return a


def phi1(alpha):
    """φ₁(α) = −α(2π − α)/(16π²), the left-translation Biot-Savart correction kernel."""
    a = _phi1_alpha(alpha)
    return _out(-a * (2.0 * math.pi - a) / (16.0 * math.pi ** 2))


def phi1_prime(alpha):
    a = _phi1_alpha(alpha)
    return _out((a - math.pi) / (8.0 * math.pi ** 2))


# ---------------------------------------------------------------------------
# Radial Laplacian
# ---------------------------------------------------------------------------

def laplacian_coefficient(space, alpha):
    """Coefficient c(α) in the radial Laplacian Δf = f″ + c(α)·f′."""
    a = np.asarray(alpha, dtype=float)
    if space is Space.SPHERE3:
        return 2.0 / np.tan(a)
    if space is Space.HYPERBOLIC3:
        return 2.0 / np.tanh(a)
    return 2.0 / a


def radial_pde_residual(family, alpha):
    """
    Residual of the radial equation φ satisfies away from α = 0: Δφ on R³ and
    for the S³ left kernel (a constant there), Δφ − φ for the S³ parallel
    kernel, Δφ + φ on H³.
    """
    a = np.asarray(alpha, dtype=float)
    if np.any(a <= 0) or (family.space is Space.SPHERE3 and np.any(a >= math.pi)):
        raise KernelDomainError("radial_pde_residual needs α strictly inside the smooth domain")
    lap = np.asarray(phi_double_prime(family, a)) + laplacian_coefficient(family.space, a) * np.asarray(
        phi_prime(family, a)
    )
    if family.space is Space.HYPERBOLIC3:
        return _out(lap + np.asarray(phi(family, a)))
    if family.space is Space.SPHERE3 and family.format is TransportFormat.PARALLEL:
        return _out(lap - np.asarray(phi(family, a)))
    return _out(lap)
