"""
Discrete vector fields on compact domains: Biot-Savart evaluation, helicity,
energy, and the geometric bound N(R) with its curl-eigenvalue corollary.
"""
import logging
import math
import time
from dataclasses import dataclass, field as dataclass_field

import numpy as np
from scipy import optimize

from ..exceptions import (
    DimensionMismatchError,
    KernelDomainError,
    SingularEvaluationError,
    UnsupportedFormatError,
)
from . import geometry
from .geometry import Space
from .kernels import FOUR_PI_SQ, KernelFamily, phi_prime_over_radial
from .quadrature import QuadratureConfig, run_blocks, stable_total

logger = logging.getLogger(__name__)

COINCIDENCE_TOL = 1e-8
SPHERE_VOLUME = 2.0 * math.pi ** 2


@dataclass(eq=False)
class FieldSample:
    """
    Quadrature representation of a vector field on Ω: points, tangent
    vectors at them, and positive volume weights.
    """
    space: Space
    points: np.ndarray
    vectors: np.ndarray
    weights: np.ndarray
    divergence_free: bool = False
    spacing: float = None
    meta: dict = dataclass_field(default_factory=dict)

    def __post_init__(self):
        self.space = Space.parse(self.space)
        points = geometry.as_vectors(self.space, self.points)
        vectors = geometry.as_vectors(self.space, self.vectors)
        weights = np.asarray(self.weights, dtype=float)
        if points.ndim != 2 or vectors.shape != points.shape or weights.shape != points.shape[:1]:
            raise DimensionMismatchError(
                f"Field needs matching points {points.shape}, vectors {vectors.shape} and weights {weights.shape}"
            )
        if np.any(weights <= 0):
            raise ValueError("Field weights must be positive")
        self.points = geometry.settle(self.space, points)
        self.vectors = geometry.to_tangent(self.space, self.points, vectors)
        self.weights = weights

    def __len__(self):
        return len(self.points)

    @property
    def volume(self):
        return math.fsum(self.weights.tolist())

    @property
    def cut_radius(self):
        """Exclusion radius for coincident pairs: half the sampling spacing."""
        if self.spacing:
            return 0.5 * self.spacing
        return 0.5 * float(np.mean(self.weights)) ** (1.0 / 3.0)

    def with_vectors(self, vectors, divergence_free=None):
        return FieldSample(
            self.space, self.points, vectors, self.weights,
            self.divergence_free if divergence_free is None else divergence_free,
            self.spacing, dict(self.meta),
        )

    def scaled(self, factor):
        return self.with_vectors(factor * self.vectors)


@dataclass(frozen=True)
class BallDomain:
    """Geodesic ball of radius R about `center` (the origin by default)."""
    space: Space
    radius: float
    center: np.ndarray = None

    def __post_init__(self):
        space = Space.parse(self.space)
        _check_radius(space, self.radius)
        center = geometry.origin(space) if self.center is None else geometry.settle(
            space, geometry.as_vectors(space, self.center))
        object.__setattr__(self, 'space', space)
        object.__setattr__(self, 'center', center)

    @property
    def volume(self):
        return ball_volume(self.space, self.radius)


# ---------------------------------------------------------------------------
# Samplers
# ---------------------------------------------------------------------------

def _radial_density(space, r):
    if space is Space.SPHERE3:
        return np.sin(r) ** 2
    if space is Space.HYPERBOLIC3:
        return np.sinh(r) ** 2
    return r ** 2


def ball_grid(domain, n_r=16, n_theta=16, n_phi=32):
    """
    Midpoint product grid in geodesic polar coordinates about the origin.

    Returns (points, weights, local, spacing): points on the model, their
    weights sin²r·sinθ dr dθ dφ (sinh² on H³, r² on R³), the local coordinates
    ξ = r·ω ∈ R³, and the radial spacing.
    """
    space, radius = domain.space, domain.radius
    dr = radius / n_r
    dtheta = math.pi / n_theta
    dphi = 2.0 * math.pi / n_phi
    r = (np.arange(n_r) + 0.5) * dr
    theta = (np.arange(n_theta) + 0.5) * dtheta
    phi_ = np.arange(n_phi) * dphi
    rr, tt, pp = (a.ravel() for a in np.meshgrid(r, theta, phi_, indexing='ij'))
    omega = np.stack([np.sin(tt) * np.cos(pp), np.sin(tt) * np.sin(pp), np.cos(tt)], axis=-1)
    local = rr[:, None] * omega
    weights = _radial_density(space, rr) * np.sin(tt) * dr * dtheta * dphi

    if space is Space.EUCLIDEAN:
        points = local
    else:
        radial = (np.cos(rr) if space is Space.SPHERE3 else np.cosh(rr))[:, None]
        scale = (np.sin(rr) if space is Space.SPHERE3 else np.sinh(rr))[:, None]
        points = np.concatenate([radial, scale * omega], axis=-1)
    return points, weights, local, dr


def field_from_local(domain, local_vectors_fn, n_r=16, n_theta=16, n_phi=32, divergence_free=False):
    """
    Sample a field on a ball from a function of the local coordinates ξ that
    returns 3-vectors in the tangent space at the origin. Vectors are carried
    to each point by parallel transport from the origin, then the whole sample
    is moved to the ball's center.
    """
    space = domain.space
    points, weights, local, spacing = ball_grid(domain, n_r, n_theta, n_phi)
    w = np.asarray(local_vectors_fn(local), dtype=float)
    if space is Space.EUCLIDEAN:
        vectors = w
    else:
        at_origin = np.concatenate([np.zeros((len(w), 1)), w], axis=-1)
        vectors = geometry.parallel_transport(space, points, geometry.origin(space), at_origin)
    points, vectors = geometry.move_from_origin(space, domain.center, points, vectors)
    return FieldSample(space, points, vectors, weights, divergence_free, spacing,
                       {'radius': domain.radius, 'grid': (n_r, n_theta, n_phi)})


def curl_bump_potential(radius, a, b):
    """
    Local field w = ∇×A for the compactly supported potential
    A(ξ) = (1 − |ξ|²/R²)³·(a + Bξ) on |ξ| < R, zero outside.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    curl_b = np.array([b[2, 1] - b[1, 2], b[0, 2] - b[2, 0], b[1, 0] - b[0, 1]])

    def fn(xi):
        rho2 = np.sum(xi * xi, axis=-1) / radius ** 2
        inside = rho2 < 1.0
        bump = np.where(inside, (1.0 - rho2) ** 3, 0.0)[:, None]
        grad_bump = np.where(inside, -6.0 * (1.0 - rho2) ** 2 / radius ** 2, 0.0)[:, None] * xi
        linear = a + xi @ b.T
        return np.cross(grad_bump, linear) + bump * curl_b

    return fn


def random_ball_field(space, radius, seed=0, n_r=16, n_theta=12, n_phi=24, center=None):
    """A smooth field supported in a ball, built as the curl of a random bump potential."""
    rng = np.random.default_rng(seed)
    domain = BallDomain(Space.parse(space), radius, center)
    fn = curl_bump_potential(radius, rng.normal(size=3), rng.normal(size=(3, 3)) / radius)
    sample = field_from_local(domain, fn, n_r, n_theta, n_phi,
                              divergence_free=domain.space is Space.EUCLIDEAN)
    sample.meta['seed'] = seed
    return sample


def hopf_field_sample(n_eta=24, n_xi1=96, n_xi2=144, handedness='right'):
    """
    Unit Hopf field on all of S³ on a product grid in Hopf coordinates
    x = (cos η cos ξ₁, cos η sin ξ₁, sin η cos ξ₂, sin η sin ξ₂),
    dvol = sin η cos η dη dξ₁ dξ₂. The right-invariant field is i·x, the
    left-invariant one x·i; both are divergence-free.
    """
    if handedness not in ('left', 'right'):
        raise ValueError(f"handedness must be 'left' or 'right', got {handedness!r}")
    d_eta = 0.5 * math.pi / n_eta
    d1 = 2.0 * math.pi / n_xi1
    d2 = 2.0 * math.pi / n_xi2
    eta = (np.arange(n_eta) + 0.5) * d_eta
    xi1 = np.arange(n_xi1) * d1
    xi2 = np.arange(n_xi2) * d2
    ee, aa, bb = (g.ravel() for g in np.meshgrid(eta, xi1, xi2, indexing='ij'))
    points = np.stack([
        np.cos(ee) * np.cos(aa), np.cos(ee) * np.sin(aa),
        np.sin(ee) * np.cos(bb), np.sin(ee) * np.sin(bb),
    ], axis=-1)
    weights = np.sin(ee) * np.cos(ee) * d_eta * d1 * d2
    unit_i = np.array([0.0, 1.0, 0.0, 0.0])
    if handedness == 'right':
        vectors = geometry.quaternion_multiply(unit_i, points)
    else:
        vectors = geometry.quaternion_multiply(points, unit_i)
    spacing = max(d_eta, d1, d2)
    return FieldSample(Space.SPHERE3, points, vectors, weights, True, spacing,
                       {'handedness': handedness, 'grid': (n_eta, n_xi1, n_xi2)})


def reflect_field(sample):
    """Mirror image under the orientation-reversing isometry x₃ ↦ −x₃."""
    return FieldSample(
        sample.space,
        geometry.reflect(sample.space, sample.points),
        geometry.reflect(sample.space, sample.vectors),
        sample.weights, sample.divergence_free, sample.spacing, dict(sample.meta),
    )


# ---------------------------------------------------------------------------
# Biot-Savart
# ---------------------------------------------------------------------------

def _bs_cross(space, y, v, x):
    # P_{yx}v × ∇_yα = −crossvec/r(α); on R³ crossvec = v × (x − y)
    if space is Space.EUCLIDEAN:
        return np.cross(v, x - y)
    return geometry.cross(space, y, v, x)


def _bs_block(sample, family, y, cut):
    space = sample.space
    x = sample.points[None, :, :]
    v = sample.vectors[None, :, :]
    y = y[:, None, :]
    alpha = np.asarray(geometry.distance(space, x, y))
    keep = alpha >= cut if cut else alpha > 0
    coef = np.where(keep, phi_prime_over_radial(family, np.where(keep, alpha, 1.0)), 0.0)
    terms = (coef * sample.weights[None, :])[..., None] * _bs_cross(space, y, v, x)
    return terms.sum(axis=1), alpha


def biot_savart_at(sample, y, exclude_within=None, cfg=None):
    """
    BS(v)(y) = Σ w_x · P_{yx}v(x) × ∇_yφ₀(x, y) in parallel-transport format.

    Without exclude_within, evaluating within COINCIDENCE_TOL of a sample point
    is an error; with it, samples closer than that radius are skipped.
    """
    space = sample.space
    family = KernelFamily.for_space(space, 'parallel')
    y = geometry.as_vectors(space, y)
    single = y.ndim == 1
    ys = geometry.settle(space, np.atleast_2d(y))
    cfg = cfg or QuadratureConfig.from_settings()

    def block(lo, hi):
        values, alpha = _bs_block(sample, family, ys[lo:hi], exclude_within)
        return values, float(np.min(alpha))

    results = run_blocks(block, len(ys), len(sample), cfg)
    if exclude_within is None and min(r[1] for r in results) < COINCIDENCE_TOL:
        raise SingularEvaluationError("Biot-Savart evaluated on a sample point")
    values = np.concatenate([r[0] for r in results], axis=0)
    return values[0] if single else values


def biot_savart_field(sample, cut=None, cfg=None):
    """BS(v) at every sample point, skipping pairs closer than `cut` (default: the sample's cut radius)."""
    cut = sample.cut_radius if cut is None else cut
    return biot_savart_at(sample, sample.points, exclude_within=cut, cfg=cfg)


def inner_product(sample, a, b):
    """⟨a, b⟩ = Σ w·(a·b) for two vector fields on the same sample set."""
    dots = np.asarray(geometry.riemannian_inner(sample.space, a, b))
    return math.fsum((sample.weights * dots).tolist())


def energy(sample):
    return inner_product(sample, sample.vectors, sample.vectors)


def l2_norm(sample):
    return math.sqrt(energy(sample))


# ---------------------------------------------------------------------------
# Helicity
# ---------------------------------------------------------------------------

def _helicity_rows(sample, family, rows, cut):
    space = sample.space
    y = sample.points[rows][:, None, :]
    vy = sample.vectors[rows][:, None, :]
    x = sample.points[None, :, :]
    vx = sample.vectors[None, :, :]
    alpha = np.asarray(geometry.distance(space, x, y))
    keep = alpha >= cut
    coef = np.where(keep, phi_prime_over_radial(family, np.where(keep, alpha, 1.0)), 0.0)
    if family.is_left:
        moved = geometry.quaternion_multiply(geometry.quaternion_multiply(y, geometry.quaternion_conjugate(x)), vx)
        values = -coef * geometry.bracket(space, y, moved, vy, x)
        values = values - np.where(keep, np.sum(moved * vy, axis=-1), 0.0) / FOUR_PI_SQ
    else:
        values = -coef * geometry.bracket(space, y, vx, vy, x)
    return (values * sample.weights[None, :]).sum(axis=1) * sample.weights[rows]


def helicity(sample, format='parallel', cut=None, outer_points=None, seed=None, cfg=None):
    """
    H(v) = Σ_y Σ_x w_x w_y K(x, y) with the format's helicity kernel, skipping
    pairs closer than `cut` (default: the sample's cut radius).

    With outer_points = k the outer sum runs over k samples drawn without
    replacement (fixed by `seed`) and is rescaled by the ratio of the total
    weight to the weight of the drawn rows.
    """
    space = sample.space
    family = KernelFamily.for_space(space, format)
    if family.is_left and not sample.divergence_free:
        raise UnsupportedFormatError(
            "unsupported format: left-translation helicity needs a field flagged divergence-free"
        )
    cfg = cfg or QuadratureConfig.from_settings()
    cut = sample.cut_radius if cut is None else cut
    n = len(sample)
    if outer_points and outer_points < n:
        rng = np.random.default_rng(seed)
        rows = np.sort(rng.choice(n, size=outer_points, replace=False))
        scale = sample.volume / math.fsum(sample.weights[rows].tolist())
    else:
        rows = np.arange(n)
        scale = 1.0

    started = time.perf_counter()
    results = run_blocks(lambda lo, hi: _helicity_rows(sample, family, rows[lo:hi], cut), len(rows), n, cfg)
    value = stable_total(results) * scale
    logger.info("Helicity %s on %d samples (%d outer, cut %.3g): %.12g (%.2fs)",
                family, n, len(rows), cut, value, time.perf_counter() - started)
    return value


def helicity_via_biot_savart(sample, cut=None, cfg=None):
    """Σ_y w_y·BS(v)(y)·v(y) with the same exclusion rule as helicity."""
    return inner_product(sample, biot_savart_field(sample, cut, cfg), sample.vectors)


# ---------------------------------------------------------------------------
# Geometric bounds
# ---------------------------------------------------------------------------

def _check_radius(space, radius):
    if not radius > 0:
        raise KernelDomainError(f"Radius must be positive, got {radius}")
    if space is Space.SPHERE3 and radius > math.pi:
        raise KernelDomainError(f"S³ balls have radius at most π, got {radius}")


def bound_N(space, radius):
    """
    N(R) with |BS(v)| ≤ N(R)|v| on domains of volume-equivalent radius R:
    R on R³, (2(1 − cos R) + (π − R) sin R)/π on S³, sinh R on H³.
    """
    space = Space.parse(space)
    _check_radius(space, radius)
    if space is Space.SPHERE3:
        if radius == math.pi:
            return 4.0 / math.pi
        return (2.0 * (1.0 - math.cos(radius)) + (math.pi - radius) * math.sin(radius)) / math.pi
    if space is Space.HYPERBOLIC3:
        return math.sinh(radius)
    return float(radius)


def ball_volume(space, radius):
    space = Space.parse(space)
    _check_radius(space, radius)
    if space is Space.SPHERE3:
        return math.pi * (2.0 * radius - math.sin(2.0 * radius))
    if space is Space.HYPERBOLIC3:
        return math.pi * (math.sinh(2.0 * radius) - 2.0 * radius)
    return 4.0 / 3.0 * math.pi * radius ** 3


def equivalent_ball_radius(space, volume):
    """Radius of the ball with the given volume, by bisection to 1e-12."""
    space = Space.parse(space)
    if not volume > 0:
        raise KernelDomainError(f"Volume must be positive, got {volume}")
    if space is Space.SPHERE3:
        if volume > SPHERE_VOLUME:
            raise KernelDomainError(f"Volume {volume} exceeds the volume of S³ (2π²)")
        if volume == SPHERE_VOLUME:
            return math.pi
        upper = math.pi
    else:
        upper = 1.0
        while ball_volume(space, upper) < volume:
            upper *= 2.0

    def gap(r):
        return (ball_volume(space, r) if r > 0 else 0.0) - volume

    return optimize.bisect(gap, 0.0, upper, xtol=1e-12, maxiter=500)


def curl_eigenvalue_lower_bound(space, radius):
    """Lower bound 1/N(R) on |λ| for curl eigenfields on domains of equivalent radius R."""
    return 1.0 / bound_N(space, radius)


def support_radius(sample):
    """R(Ω): the ball radius a sampler recorded, else the volume-equivalent radius of the weights."""
    if sample.meta.get('radius'):
        return float(sample.meta['radius'])
    volume = sample.volume
    if sample.space is Space.SPHERE3:
        volume = min(volume, SPHERE_VOLUME)
    return equivalent_ball_radius(sample.space, volume)
