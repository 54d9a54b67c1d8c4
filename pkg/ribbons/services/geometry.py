"""
Ambient-model linear algebra for R³, the unit 3-sphere S³ ⊂ R⁴ and hyperbolic
space H³ ⊂ R^{1,3} (hyperboloid model).

All functions broadcast over leading axes: a batch of points is an array of
shape (..., 3) or (..., 4). Point and Tangent wrap a single validated vector and
can be passed anywhere an array is accepted.
"""
import enum
import logging
from dataclasses import dataclass

import numpy as np

from ..exceptions import (
    DimensionMismatchError,
    InvalidPointError,
    InvalidTangentError,
    SingularGradientError,
    UndefinedTransportError,
    UnsupportedFormatError,
)

logger = logging.getLogger(__name__)

SURFACE_TOL = 1e-12
CLAMP_TOL = 1e-9
UNIT_TOL = 1e-9
ANTIPODAL_TOL = 1e-12

# Minkowski signature (+, -, -, -)
MINKOWSKI = np.array([1.0, -1.0, -1.0, -1.0])


class Space(str, enum.Enum):
    EUCLIDEAN = 'r3'
    SPHERE3 = 's3'
    HYPERBOLIC3 = 'h3'

    @property
    def dim(self):
        """Ambient dimension of a point."""
        return 3 if self is Space.EUCLIDEAN else 4

    @property
    def is_curved(self):
        return self is not Space.EUCLIDEAN

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"Unknown space '{value}'. Expected one of: r3, s3, h3") from None


def as_vectors(space, a):
    """Return `a` as a float array whose last axis matches the space dimension."""
    arr = np.asarray(a, dtype=float)
    if arr.ndim == 0 or arr.shape[-1] != space.dim:
        raise DimensionMismatchError(
            f"{space.value} expects {space.dim}-vectors, got shape {arr.shape}"
        )
    return arr


def _scalar(value):
    value = np.asarray(value)
    return float(value) if value.ndim == 0 else value


def origin(space):
    """Base point: 0 in R³, e₀ on S³ and H³."""
    o = np.zeros(space.dim)
    if space.is_curved:
        o[0] = 1.0
    return o


# ---------------------------------------------------------------------------
# Inner products and norms
# ---------------------------------------------------------------------------

def ambient_inner(space, a, b):
    """
    Ambient bilinear form: Euclidean dot product on R³ and R⁴, Minkowski
    product x₀y₀ − x₁y₁ − x₂y₂ − x₃y₃ on H³.
    """
    a = as_vectors(space, a)
    b = as_vectors(space, b)
    if space is Space.HYPERBOLIC3:
        return _scalar(np.sum(MINKOWSKI * a * b, axis=-1))
    return _scalar(np.sum(a * b, axis=-1))


def riemannian_inner(space, u, v):
    """Inner product of tangent vectors; on H³ this is −⟨u,v⟩."""
    value = ambient_inner(space, u, v)
    return -value if space is Space.HYPERBOLIC3 else value


def riemannian_norm(space, v):
    return _scalar(np.sqrt(np.maximum(riemannian_inner(space, v, v), 0.0)))


def project_to_space(space, x):
    """
    Map an ambient vector onto the model: normalize on S³, lift the spatial
    part onto the upper sheet on H³.
    """
    x = as_vectors(space, x)
    if space is Space.SPHERE3:
        norm = np.linalg.norm(x, axis=-1, keepdims=True)
        if np.any(norm < 1e-300):
            raise InvalidPointError("The zero vector has no projection onto S³")
        return x / norm
    if space is Space.HYPERBOLIC3:
        if np.any(x[..., 0] <= 0):
            raise InvalidPointError("H³ points must have x₀ > 0 (upper sheet)")
        spatial = x[..., 1:]
        x0 = np.sqrt(1.0 + np.sum(spatial * spatial, axis=-1, keepdims=True))
        return np.concatenate([x0, spatial], axis=-1)
    return x.copy()


def settle(space, x):
    """Renormalize onto the model surface only where the constraint drifted beyond SURFACE_TOL."""
    x = as_vectors(space, x)
    if not space.is_curved:
        return x
    if space is Space.HYPERBOLIC3 and np.any(x[..., 0] <= 0):
        raise InvalidPointError("H³ points must have x₀ > 0 (upper sheet)")
    drift = np.abs(ambient_inner(space, x, x) - 1.0)
    if np.all(drift <= SURFACE_TOL):
        return x
    return np.where(np.asarray(drift)[..., None] > SURFACE_TOL, project_to_space(space, x), x)


def to_tangent(space, x, v):
    """Project v onto the tangent space at x."""
    x = as_vectors(space, x)
    v = as_vectors(space, v)
    if not space.is_curved:
        return v.copy()
    coef = np.asarray(ambient_inner(space, x, v))[..., None]
    return v - coef * x


@dataclass(frozen=True, eq=False)
class Point:
    """A single validated point of a space."""
    space: Space
    coords: np.ndarray

    def __post_init__(self):
        space = Space.parse(self.space)
        coords = as_vectors(space, self.coords)
        if coords.ndim != 1:
            raise DimensionMismatchError("Point expects a single vector")
        if space.is_curved:
            drift = abs(ambient_inner(space, coords, coords) - 1.0)
            if drift > 1e-6:
                logger.warning("Point %s is %.3g off the %s model; projecting", coords, drift, space.value)
            coords = settle(space, coords)
        object.__setattr__(self, 'space', space)
        object.__setattr__(self, 'coords', coords)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coords, dtype=dtype)


@dataclass(frozen=True, eq=False)
class Tangent:
    """A tangent vector, projected onto the tangent space at `at` on construction."""
    at: Point
    vec: np.ndarray

    def __post_init__(self):
        vec = to_tangent(self.at.space, self.at.coords, self.vec)
        object.__setattr__(self, 'vec', vec)

    @property
    def space(self):
        return self.at.space

    @property
    def norm(self):
        return riemannian_norm(self.space, self.vec)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.vec, dtype=dtype)


# ---------------------------------------------------------------------------
# Distance, geodesics, transport
# ---------------------------------------------------------------------------

def distance(space, x, y):
    """
    Geodesic distance α(x, y).

    S³ uses 2·atan2(|x−y|, |x+y|) and H³ uses 2·asinh(|x−y|_M / 2), which are
    accurate at both ends of the range, after checking that ⟨x,y⟩ lies within
    CLAMP_TOL of the invertibility domain of arccos / arccosh.
    """
    x = as_vectors(space, x)
    y = as_vectors(space, y)
    if space is Space.EUCLIDEAN:
        return _scalar(np.linalg.norm(y - x, axis=-1))

    c = np.asarray(ambient_inner(space, x, y))
    d = y - x
    if space is Space.SPHERE3:
        if np.any(np.abs(c) > 1.0 + CLAMP_TOL):
            raise InvalidPointError(f"⟨x,y⟩ = {np.max(np.abs(c)):.12g} is outside [-1, 1]")
        s = x + y
        return _scalar(2.0 * np.arctan2(np.linalg.norm(d, axis=-1), np.linalg.norm(s, axis=-1)))

    if np.any(c < 1.0 - CLAMP_TOL):
        raise InvalidPointError(f"⟨x,y⟩ = {np.min(c):.12g} is below 1 on H³")
    chord = np.sqrt(np.maximum(-np.asarray(ambient_inner(space, d, d)), 0.0))
    return _scalar(2.0 * np.arcsinh(0.5 * chord))


def geodesic_point(space, x, v, t):
    """Point at arclength t along the geodesic leaving x with unit velocity v."""
    x = as_vectors(space, x)
    v = as_vectors(space, v)
    norm = np.asarray(riemannian_norm(space, v))
    if np.any(np.abs(norm - 1.0) > UNIT_TOL):
        raise InvalidTangentError(f"Geodesic direction must be a unit vector (|v| = {norm})")
    t = np.asarray(t, dtype=float)[..., None] if np.ndim(t) else float(t)
    if space is Space.EUCLIDEAN:
        return x + t * v
    if space is Space.SPHERE3:
        return settle(space, np.cos(t) * x + np.sin(t) * v)
    return settle(space, np.cosh(t) * x + np.sinh(t) * v)


def parallel_transport(space, x, y, v):
    """
    Transport v ∈ T_yM to T_xM along the connecting geodesic:
    P_{xy}(v) = v − ⟨x,v⟩/(1+⟨x,y⟩)·(x+y).
    """
    x = as_vectors(space, x)
    y = as_vectors(space, y)
    v = as_vectors(space, v)
    if space is Space.EUCLIDEAN:
        return v.copy()
    denom = 1.0 + np.asarray(ambient_inner(space, x, y))
    if space is Space.SPHERE3 and np.any(denom < ANTIPODAL_TOL):
        raise UndefinedTransportError("Parallel transport between antipodal points of S³ is undefined")
    coef = np.asarray(ambient_inner(space, x, v)) / denom
    return v - coef[..., None] * (x + y)


# ---------------------------------------------------------------------------
# Quaternions (S³ as the unit quaternions, ij = k)
# ---------------------------------------------------------------------------

def quaternion_multiply(p, q):
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    a1, b1, c1, d1 = np.moveaxis(p, -1, 0)
    a2, b2, c2, d2 = np.moveaxis(q, -1, 0)
    return np.stack([
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ], axis=-1)


def quaternion_conjugate(q):
    return np.asarray(q, dtype=float) * np.array([1.0, -1.0, -1.0, -1.0])


def left_translate(space, gx, gy, v):
    """Differential of left translation by gy·gx⁻¹, carrying v ∈ T_{gx}S³ to T_{gy}S³."""
    space = Space.parse(space)
    if space is not Space.SPHERE3:
        raise UnsupportedFormatError(f"Left translation is only defined on S³, not {space.value}")
    gx = as_vectors(space, gx)
    gy = as_vectors(space, gy)
    v = as_vectors(space, v)
    return quaternion_multiply(quaternion_multiply(gy, quaternion_conjugate(gx)), v)


# ---------------------------------------------------------------------------
# Cross and triple products
# ---------------------------------------------------------------------------

def _det3(a, b, c):
    return np.sum(a * np.cross(b, c), axis=-1)


def _cross4(x, u, v):
    # c_l = det[x, u, v, e_l], by cofactor expansion along the last row
    columns = [[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]]
    parts = []
    for l, keep in enumerate(columns):
        sign = 1.0 if l % 2 else -1.0
        parts.append(sign * _det3(x[..., keep], u[..., keep], v[..., keep]))
    return np.stack(parts, axis=-1)


def det4(x, u, v, w):
    """Determinant of the 4×4 matrix with rows x, u, v, w."""
    x, u, v, w = (np.asarray(a, dtype=float) for a in (x, u, v, w))
    return _scalar(np.sum(_cross4(x, u, v) * w, axis=-1))


def cross(space, x, u, v):
    """
    Cross product of two tangent vectors at x.

    S³: the vector c with c·w = det[x, u, v, w]. H³: the same with the sign of
    the time component flipped so that the Riemannian product −⟨c, w⟩ equals
    det[x, u, v, w]. R³: the ordinary cross product.
    """
    u = as_vectors(space, u)
    v = as_vectors(space, v)
    if space is Space.EUCLIDEAN:
        return np.cross(u, v)
    x = as_vectors(space, x)
    c = _cross4(x, u, v)
    if space is Space.HYPERBOLIC3:
        c = c * np.array([-1.0, 1.0, 1.0, 1.0])
    return c


def triple(space, x, u, v, w):
    """The triple product u×v·w, i.e. ‖x,u,v,w‖ on S³ and H³."""
    u = as_vectors(space, u)
    v = as_vectors(space, v)
    w = as_vectors(space, w)
    if space is Space.EUCLIDEAN:
        return _scalar(_det3(u, v, w))
    return det4(as_vectors(space, x), u, v, w)


def bracket(space, y, a, b, x):
    """
    The scalar a×b·(x−y) written as a single determinant: det[a, b, x−y] on
    R³ and det[y, a, b, x−y] = det[y, a, b, x] on S³ and H³.
    """
    if space is Space.EUCLIDEAN:
        return _det3(a, b, x - y)
    return np.sum(_cross4(y, a, b) * x, axis=-1)


# ---------------------------------------------------------------------------
# Distance gradients
# ---------------------------------------------------------------------------

def grad_alpha(space, x, y, wrt='y'):
    """
    Unit gradient of α(x, y) at the `wrt` endpoint, pointing away from the
    other point: (cos α y − x)/sin α on S³, (cosh α y − x)/sinh α on H³,
    (y − x)/|y − x| on R³ (shown for wrt='y').
    """
    if wrt not in ('x', 'y'):
        raise ValueError(f"wrt must be 'x' or 'y', got {wrt!r}")
    x = as_vectors(space, x)
    y = as_vectors(space, y)
    if wrt == 'x':
        x, y = y, x
    alpha = np.asarray(distance(space, x, y))
    if np.any(alpha < 1e-12):
        raise SingularGradientError("∇α is undefined at α = 0")
    if space is Space.SPHERE3 and np.any(np.pi - alpha < 1e-12):
        raise SingularGradientError("∇α is undefined at the antipode of S³")

    d = y - x
    if space.is_curved:
        # tangential part of y − x at y; ⟨y, y − x⟩ = ⟨d, d⟩/2 on both models
        half = 0.5 * np.asarray(ambient_inner(space, d, d))
        d = d - half[..., None] * y
    return d / np.asarray(riemannian_norm(space, d))[..., None]


# ---------------------------------------------------------------------------
# Isometries
# ---------------------------------------------------------------------------

def reflect(space, a):
    """Orientation-reversing isometry fixing the origin: negate the last coordinate."""
    a = as_vectors(space, a)
    out = a.copy()
    out[..., -1] = -out[..., -1]
    return out


def move_from_origin(space, center, points, vectors=None):
    """
    Apply the isometry taking origin(space) to `center` to points and their
    tangent vectors: translation on R³, left multiplication by the center
    quaternion on S³, the Lorentz boost along the center direction on H³.
    """
    center = as_vectors(space, center)
    points = as_vectors(space, points)
    if space is Space.EUCLIDEAN:
        moved_vectors = None if vectors is None else as_vectors(space, vectors).copy()
        return points + center, moved_vectors

    if space is Space.SPHERE3:
        def apply(a):
            return quaternion_multiply(center, a)
    else:
        x0 = center[0]
        xs = center[1:]
        boost = np.empty((4, 4))
        boost[0, 0] = x0
        boost[0, 1:] = xs
        boost[1:, 0] = xs
        boost[1:, 1:] = np.eye(3) + np.outer(xs, xs) / (1.0 + x0)

        def apply(a):
            return a @ boost.T

    moved_points = settle(space, apply(points))
    moved_vectors = None if vectors is None else apply(as_vectors(space, vectors))
    return moved_points, moved_vectors
