"""
Closed curves, unit normal fields and ribbons on R³, S³ and H³.

Curves are stored as uniform samples of a periodic parameter. A ClosedCurve's
parameter is arclength; a Loop may use any uniform parameter (a ribbon's edge
keeps the base curve's arclength as its parameter).
"""
import logging
import math

import numpy as np
from scipy import interpolate

from ..exceptions import EmbeddingError, InvalidTangentError, UnsupportedFormatError
from . import geometry
from .geometry import Space
from .spectral import (
    fourier_antiderivative,
    fourier_derivative,
    fourier_evaluate,
    fourier_resample,
)

logger = logging.getLogger(__name__)

MIN_SAMPLES = 8
OVERSAMPLE = 8
SELF_INTERSECTION_TOL = 1e-6
SPACING_TOL = 0.01
NEWTON_STEPS = 4


def _block_rows(n_inner, budget=1 << 20):
    return max(1, min(256, budget // max(n_inner, 1)))


def _segment_distances(p0, d1, q0, d2):
    """Minimum Euclidean distance between segments p0 + s·d1 and q0 + t·d2, s, t ∈ [0, 1]."""
    r = p0 - q0
    a = np.sum(d1 * d1, axis=-1)
    e = np.sum(d2 * d2, axis=-1)
    b = np.sum(d1 * d2, axis=-1)
    c = np.sum(d1 * r, axis=-1)
    f = np.sum(d2 * r, axis=-1)
    denom = a * e - b * b
    with np.errstate(divide='ignore', invalid='ignore'):
        s = np.where(denom > 1e-30, np.clip((b * f - c * e) / denom, 0.0, 1.0), 0.0)
        t = (b * s + f) / e
        s = np.where(t < 0.0, np.clip(-c / a, 0.0, 1.0), np.where(t > 1.0, np.clip((b - c) / a, 0.0, 1.0), s))
    t = np.clip(t, 0.0, 1.0)
    diff = r + s[..., None] * d1 - t[..., None] * d2
    return np.linalg.norm(diff, axis=-1)


def min_self_distance(points):
    """Smallest chordal distance between non-adjacent segments of a closed polygon."""
    points = np.asarray(points, dtype=float)
    n = len(points)
    if n < 4:
        return math.inf
    starts = points
    dirs = np.roll(points, -1, axis=0) - points
    best = math.inf
    step = _block_rows(n)
    for lo in range(0, n, step):
        hi = min(n, lo + step)
        i = np.arange(lo, hi)[:, None]
        j = np.arange(n)[None, :]
        gap = np.abs(i - j)
        gap = np.minimum(gap, n - gap)
        dist = _segment_distances(starts[lo:hi, None, :], dirs[lo:hi, None, :], starts[None], dirs[None])
        dist = np.where(gap >= 2, dist, math.inf)
        best = min(best, float(np.min(dist)))
    return best


class Loop:
    """Uniform samples of a closed curve over one period of its parameter."""

    def __init__(self, space, samples, period):
        self.space = Space.parse(space)
        samples = geometry.as_vectors(self.space, samples)
        if samples.ndim != 2 or len(samples) < MIN_SAMPLES:
            raise ValueError(f"A closed curve needs at least {MIN_SAMPLES} samples")
        if period <= 0:
            raise ValueError(f"Parameter period must be positive, got {period}")
        self.samples = np.array(geometry.settle(self.space, samples), copy=True)
        self.samples.setflags(write=False)
        self.period = float(period)
        self._velocity = None

    @property
    def n(self):
        return len(self.samples)

    @property
    def parameters(self):
        return np.arange(self.n) * self.period / self.n

    @property
    def velocity(self):
        """d/ds of the samples, projected onto the tangent spaces."""
        if self._velocity is None:
            raw = fourier_derivative(self.samples, self.period)
            self._velocity = geometry.to_tangent(self.space, self.samples, raw)
            self._velocity.setflags(write=False)
        return self._velocity

    def nodes(self, n=None):
        """
        Quadrature nodes of the trapezoid rule with n points: (points,
        velocities, weight). Uses the stored samples when n matches, the
        band-limited interpolant otherwise.
        """
        if n is None or n == self.n:
            return self.samples, self.velocity, self.period / self.n
        points = geometry.settle(self.space, fourier_resample(self.samples, n))
        raw = fourier_derivative(points, self.period)
        return points, geometry.to_tangent(self.space, points, raw), self.period / n

    def point_at(self, s):
        values = fourier_evaluate(self.samples, self.period, s)
        if self.space is Space.SPHERE3 or self.space is Space.HYPERBOLIC3:
            values = geometry.project_to_space(self.space, values)
        return values if np.ndim(s) else values[0]


class ClosedCurve(Loop):
    """A closed curve sampled uniformly in arclength; the period is its length."""

    def __init__(self, space, samples, length=None, self_intersecting=None):
        space = Space.parse(space)
        samples = geometry.as_vectors(space, samples)
        if length is None:
            length = _polygon_length(space, samples, refine=True)
        super().__init__(space, samples, length)
        if self_intersecting is None:
            self_intersecting = min_self_distance(self.samples) < SELF_INTERSECTION_TOL
            if self_intersecting:
                logger.warning("Curve on %s with %d samples is self-intersecting", self.space.value, self.n)
        self.self_intersecting = bool(self_intersecting)

    @property
    def length(self):
        return self.period

    @property
    def tangents(self):
        return self.velocity

    @classmethod
    def from_samples(cls, space, points, n=None):
        return from_samples(space, points, n=n)

    def derivative(self, s):
        """Unit tangent T(s) at arbitrary arclength parameters."""
        raw = fourier_evaluate(self.samples, self.period, s, order=1)
        points = self.point_at(np.atleast_1d(s))
        tangent = geometry.to_tangent(self.space, points, raw)
        return tangent if np.ndim(s) else tangent[0]

    def resampled(self, n):
        """Band-limited resampling at n uniform arclength parameters."""
        if n == self.n:
            return self
        points = geometry.settle(self.space, fourier_resample(self.samples, n))
        return ClosedCurve(self.space, points, self.length, self_intersecting=self.self_intersecting)

    def reversed(self):
        """The same curve traversed backwards, x̃(s) = x(−s)."""
        samples = np.roll(self.samples[::-1], 1, axis=0)
        return ClosedCurve(self.space, samples, self.length, self_intersecting=self.self_intersecting)


def _polygon_length(space, samples, refine=False):
    if refine:
        fine = fourier_resample(samples, OVERSAMPLE * len(samples))
        samples = geometry.project_to_space(space, fine) if space.is_curved else fine
    nxt = np.roll(samples, -1, axis=0)
    return float(math.fsum(np.atleast_1d(geometry.distance(space, samples, nxt))))


def from_samples(space, points, n=None):
    """
    Build a ClosedCurve from samples of a closed loop in any parametrization.

    The samples are interpolated trigonometrically, projected back onto the
    model surface, and resampled at N ≥ len(points) parameters uniform in
    arclength (N even). Arclength is the spectral antiderivative of the speed
    on an oversampled grid; the inverse map is refined by Newton steps.
    """
    space = Space.parse(space)
    points = geometry.as_vectors(space, points)
    if points.ndim != 2:
        raise ValueError("Curve samples must be a list of vectors")
    if len(points) > 1 and geometry.distance(space, geometry.project_to_space(space, points[0]),
                                             geometry.project_to_space(space, points[-1])) < 1e-12:
        points = points[:-1]
    if len(points) < MIN_SAMPLES:
        raise ValueError(f"A closed curve needs at least {MIN_SAMPLES} distinct samples, got {len(points)}")
    points = geometry.project_to_space(space, points)
    gaps = np.atleast_1d(geometry.distance(space, points, np.roll(points, -1, axis=0)))
    if np.any(gaps < 1e-12):
        raise ValueError("Curve samples must be distinct consecutive points")

    m = len(points)
    count = max(m, n or 0)
    count += count % 2
    two_pi = 2.0 * math.pi

    fine_n = OVERSAMPLE * max(m, count)
    fine = fourier_resample(points, fine_n)
    fine = geometry.project_to_space(space, fine) if space.is_curved else fine
    fine_velocity = geometry.to_tangent(space, fine, fourier_derivative(fine, two_pi))
    speed = np.asarray(geometry.riemannian_norm(space, fine_velocity))
    if np.any(speed < 1e-14):
        raise ValueError("Curve samples describe a curve with a stationary point")

    arc, mean_speed = fourier_antiderivative(speed, two_pi)
    length = two_pi * mean_speed
    periodic = arc - mean_speed * (np.arange(fine_n) * two_pi / fine_n)

    targets = np.arange(count) * length / count
    table_tau = np.append(np.arange(fine_n) * two_pi / fine_n, two_pi)
    table_arc = np.append(arc, length)
    # Newton on a periodic spline of the oversampled arclength table
    periodic_spline = interpolate.CubicSpline(table_tau, np.append(periodic, periodic[0]), bc_type='periodic')
    tau = np.interp(targets, table_arc, table_tau)
    for _ in range(NEWTON_STEPS):
        current = mean_speed * tau + periodic_spline(tau)
        rate = mean_speed + periodic_spline(tau, 1)
        tau = tau - (current - targets) / rate

    samples = fourier_evaluate(points, two_pi, tau)
    if space.is_curved:
        samples = geometry.project_to_space(space, samples)
    curve = ClosedCurve(space, samples, length)

    spacing = np.atleast_1d(geometry.distance(space, curve.samples, np.roll(curve.samples, -1, axis=0)))
    spread = float(np.max(np.abs(spacing / (length / count) - 1.0)))
    if spread > SPACING_TOL:
        logger.warning("Resampled spacing deviates %.2f%% from uniform; add input samples", 100 * spread)
    logger.info("Resampled %d %s samples to %d (length %.12g)", m, space.value, count, length)
    return curve


def derivative(curve, s):
    return curve.derivative(s)


# ---------------------------------------------------------------------------
# Normal fields
# ---------------------------------------------------------------------------

class NormalField:
    """Unit normal vectors along a ClosedCurve, one per sample."""

    def __init__(self, curve, vectors):
        self.curve = curve
        space = curve.space
        vectors = geometry.as_vectors(space, vectors)
        if vectors.shape != curve.samples.shape:
            raise ValueError(
                f"Normal field needs one vector per sample ({curve.samples.shape}), got {vectors.shape}"
            )
        # Gram-Schmidt against the point (ambient constraint) and the unit tangent
        x = curve.samples
        tangents = curve.tangents
        t_norm = np.asarray(geometry.riemannian_norm(space, tangents))[:, None]
        unit_t = tangents / t_norm
        v = geometry.to_tangent(space, x, vectors)
        v = v - np.asarray(geometry.riemannian_inner(space, v, unit_t))[:, None] * unit_t
        norm = np.asarray(geometry.riemannian_norm(space, v))
        if np.any(norm < 1e-12):
            raise InvalidTangentError("Normal field is parallel to the curve tangent somewhere")
        self.vectors = v / norm[:, None]
        self.vectors.setflags(write=False)

    @property
    def space(self):
        return self.curve.space

    def covariant_derivative(self, s=None):
        """
        v′_P: ambient derivative of v projected onto the tangent space at x.
        At the samples when s is None, else at the given arclengths.
        """
        curve = self.curve
        if s is None:
            raw = fourier_derivative(self.vectors, curve.length)
            return geometry.to_tangent(self.space, curve.samples, raw)
        raw = fourier_evaluate(self.vectors, curve.length, s, order=1)
        result = geometry.to_tangent(self.space, curve.point_at(np.atleast_1d(s)), raw)
        return result if np.ndim(s) else result[0]

    def left_invariant_derivative(self, s=None):
        """v′_L = x · d/ds (x⁻¹ v), the derivative in the left-invariant trivialization of TS³."""
        if self.space is not Space.SPHERE3:
            raise UnsupportedFormatError(
                f"unsupported format: the left-invariant derivative needs s3, not {self.space.value}"
            )
        curve = self.curve
        pulled = geometry.quaternion_multiply(geometry.quaternion_conjugate(curve.samples), self.vectors)
        if s is None:
            return geometry.quaternion_multiply(curve.samples, fourier_derivative(pulled, curve.length))
        rate = fourier_evaluate(pulled, curve.length, s, order=1)
        result = geometry.quaternion_multiply(curve.point_at(np.atleast_1d(s)), rate)
        return result if np.ndim(s) else result[0]

    def resampled(self, n):
        if n == self.curve.n:
            return self
        return NormalField(self.curve.resampled(n), fourier_resample(self.vectors, n))


def covariant_derivative(field, s=None):
    return field.covariant_derivative(s)


def left_invariant_derivative(field, s=None):
    return field.left_invariant_derivative(s)


# ---------------------------------------------------------------------------
# Ribbons
# ---------------------------------------------------------------------------

def _pushoff_points(space, x, v, width):
    if space is Space.EUCLIDEAN:
        return x + width * v
    if space is Space.SPHERE3:
        return geometry.settle(space, math.cos(width) * x + math.sin(width) * v)
    return geometry.settle(space, math.cosh(width) * x + math.sinh(width) * v)


def _min_cross_distance(space, a, b):
    best = math.inf
    step = _block_rows(len(b))
    for lo in range(0, len(a), step):
        alpha = geometry.distance(space, a[lo:lo + step, None, :], b[None, :, :])
        best = min(best, float(np.min(alpha)))
    return best


class Ribbon:
    """A base curve, a unit normal field along it, and a width ε > 0."""

    def __init__(self, base, normal, width):
        if normal.curve is not base:
            raise ValueError("Normal field must be defined along the ribbon's base curve")
        if not width > 0:
            raise ValueError(f"Ribbon width must be positive, got {width}")
        self.base = base
        self.normal = normal
        self.width = float(width)
        self.edge_samples = _pushoff_points(base.space, base.samples, normal.vectors, self.width)
        gap = _min_cross_distance(base.space, base.samples, self.edge_samples)
        if gap < SELF_INTERSECTION_TOL:
            raise EmbeddingError(f"Ribbon of width {self.width} is not embedded (edge meets base, gap {gap:.3g})")
        self.min_gap = gap

    @property
    def space(self):
        return self.base.space

    def with_width(self, width):
        return Ribbon(self.base, self.normal, width)

    def edge_loop(self):
        """The edge K_ε parametrized by the base curve's arclength."""
        return Loop(self.space, self.edge_samples, self.base.length)

    def pushoff(self):
        return from_samples(self.space, self.edge_samples)

    def edge_normal(self):
        """Velocity of the ε-geodesics where they reach the edge (the transported normal)."""
        x, v, eps = self.base.samples, self.normal.vectors, self.width
        if self.space is Space.EUCLIDEAN:
            return v.copy()
        if self.space is Space.SPHERE3:
            return -math.sin(eps) * x + math.cos(eps) * v
        return math.sinh(eps) * x + math.cosh(eps) * v

    def retract(self):
        """Push the edge back by −ε along edge_normal; recovers the base samples."""
        return _pushoff_points(self.space, self.edge_samples, -self.edge_normal(), self.width)


def pushoff(ribbon):
    return ribbon.pushoff()
