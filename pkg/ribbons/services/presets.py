"""
Built-in curves, ribbons and fields, sampled from closed-form
parametrizations so the standard examples need no input files.
"""
import inspect
import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .curves import ClosedCurve, NormalField, Ribbon, from_samples
from .fields import hopf_field_sample, random_ball_field
from .geometry import Space

logger = logging.getLogger(__name__)

PAIR = 'pair'
CURVE = 'curve'
RIBBON = 'ribbon'
FIELD = 'field'

DEFAULT_SAMPLES = 256
SPLIT_PAIR_RADIUS = 0.3


@dataclass(frozen=True)
class Preset:
    name: str
    kind: str
    space: Space
    description: str
    builder: Callable

    def accepts(self, param):
        return param in inspect.signature(self.builder).parameters

    def build(self, n=None, **params):
        params = {key: value for key, value in params.items() if value is not None}
        logger.debug("Building preset %s with n=%s %s", self.name, n, params)
        return self.builder(n or DEFAULT_SAMPLES, **params)


PRESETS = {}


def register(name, kind, space, description):
    def decorator(builder):
        PRESETS[name] = Preset(name, kind, Space(space), description, builder)
        return builder
    return decorator


def get_preset(name):
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(f"Unknown preset {name!r}; choose from {', '.join(sorted(PRESETS))}") from None


def build_preset(name, n=None, **params):
    return get_preset(name).build(n, **params)


def _parameter(n, length=2.0 * math.pi):
    return np.arange(n) * length / n


def _circle(s):
    return np.cos(s), np.sin(s)


# ---------------------------------------------------------------------------
# S³
# ---------------------------------------------------------------------------

def great_circle(n):
    s = _parameter(n)
    c, si = _circle(s)
    zero = np.zeros_like(s)
    return ClosedCurve(Space.SPHERE3, np.stack([c, si, zero, zero], axis=-1), 2.0 * math.pi)


def hopf_normal(curve):
    """v(s) = (0, 0, cos s, sin s) along the great circle, a Hopf fiber direction."""
    c, si = _circle(curve.parameters)
    zero = np.zeros_like(c)
    return NormalField(curve, np.stack([zero, zero, c, si], axis=-1))


@register('great-circle', CURVE, 's3', "Great circle (cos s, sin s, 0, 0) on S³")
def _great_circle(n):
    return great_circle(n)


def _hopf_partner(n):
    s = _parameter(n)
    c, si = _circle(s)
    zero = np.zeros_like(s)
    return ClosedCurve(Space.SPHERE3, np.stack([zero, zero, c, si], axis=-1), 2.0 * math.pi)


@register('hopf-pair', PAIR, 's3', "Two Hopf fibers (cos s, sin s, 0, 0) and (0, 0, cos t, sin t); Lk = 1")
def _hopf_pair(n):
    return great_circle(n), _hopf_partner(n)


@register('hopf-pair-reversed', PAIR, 's3', "Hopf pair with the second fiber reversed; Lk = -1")
def _hopf_pair_reversed(n):
    return great_circle(n), _hopf_partner(n).reversed()


@register('split-pair', PAIR, 's3', "Two small circles about e0 and e3, unlinked; Lk = 0")
def _split_pair(n, radius=SPLIT_PAIR_RADIUS):
    length = 2.0 * math.pi * math.sin(radius)
    s = _parameter(n)
    c, si = _circle(s)
    ring = math.sin(radius)
    first = np.stack([np.full_like(s, math.cos(radius)), ring * c, ring * si, np.zeros_like(s)], axis=-1)
    second = np.stack([np.zeros_like(s), ring * c, ring * si, np.full_like(s, math.cos(radius))], axis=-1)
    return ClosedCurve(Space.SPHERE3, first, length), ClosedCurve(Space.SPHERE3, second, length)


@register('hopf-ribbon', RIBBON, 's3', "Great circle with the Hopf normal field; width π/2 by default")
def _hopf_ribbon(n, eps=0.5 * math.pi):
    base = great_circle(n)
    return Ribbon(base, hopf_normal(base), eps)


@register('hopf-field', FIELD, 's3', "Unit Hopf field x·i (left) or i·x (right) on all of S³")
def _hopf_field(n, handedness='right', n_eta=24):
    # n sets the ξ₂ resolution; ξ₁ uses two thirds of it
    n_xi2 = max(24, (9 * n // 16) // 2 * 2)
    n_xi1 = max(16, (2 * n_xi2) // 3)
    return hopf_field_sample(n_eta, n_xi1, n_xi2, handedness)


# ---------------------------------------------------------------------------
# H³
# ---------------------------------------------------------------------------

def h3_circle(n):
    """x(s) = (√2, cos s, sin s, 0): unit speed, so s is arclength and L = 2π."""
    s = _parameter(n)
    c, si = _circle(s)
    samples = np.stack([np.full_like(s, math.sqrt(2.0)), c, si, np.zeros_like(s)], axis=-1)
    return ClosedCurve(Space.HYPERBOLIC3, samples, 2.0 * math.pi)


def h3_circle_normal(curve):
    """v(s) = (cos s/√2, cos²s, cos s sin s, sin s)/√(1 − cos²s/2)."""
    c, si = _circle(curve.parameters)
    scale = 1.0 / np.sqrt(1.0 - 0.5 * c ** 2)
    vectors = np.stack([c / math.sqrt(2.0), c ** 2, c * si, si], axis=-1) * scale[:, None]
    return NormalField(curve, vectors)


@register('h3-circle-ribbon', RIBBON, 'h3', "Circle (√2, cos s, sin s, 0) on H³ with a twisting normal; Lk = Tw = -1")
def _h3_circle_ribbon(n, eps=0.2):
    base = h3_circle(n)
    return Ribbon(base, h3_circle_normal(base), eps)


@register('h3-pair', PAIR, 'h3', "The H³ circle and its push-off at width 0.2; Lk = -1")
def _h3_pair(n, eps=0.2):
    ribbon = _h3_circle_ribbon(n, eps)
    return ribbon.base, ribbon.pushoff()


# ---------------------------------------------------------------------------
# R³
# ---------------------------------------------------------------------------

def r3_circle(n, center=(0.0, 0.0, 0.0)):
    s = _parameter(n)
    c, si = _circle(s)
    samples = np.stack([c, si, np.zeros_like(s)], axis=-1) + np.asarray(center, dtype=float)
    return ClosedCurve(Space.EUCLIDEAN, samples, 2.0 * math.pi)


@register('r3-circle', CURVE, 'r3', "Unit circle in the xy-plane")
def _r3_circle(n):
    return r3_circle(n)


@register('r3-hopf-link', PAIR, 'r3', "Unit circle and (1 + cos t, 0, sin t): a Hopf link in R³")
def _r3_hopf_link(n):
    s = _parameter(n)
    c, si = _circle(s)
    second = np.stack([1.0 + c, np.zeros_like(s), si], axis=-1)
    return r3_circle(n), ClosedCurve(Space.EUCLIDEAN, second, 2.0 * math.pi)


@register('r3-twisted-ribbon', RIBBON, 'r3', "Unit circle with a normal turning `turns` times about it; Tw = -turns")
def _r3_twisted_ribbon(n, eps=0.1, turns=1):
    base = r3_circle(n)
    s = base.parameters
    c, si = _circle(s)
    angle = turns * s
    outward = np.stack([c, si, np.zeros_like(s)], axis=-1)
    up = np.array([0.0, 0.0, 1.0])
    vectors = np.cos(angle)[:, None] * outward + np.sin(angle)[:, None] * up
    return Ribbon(base, NormalField(base, vectors), eps)


@register('random-ball-field', FIELD, 'r3', "Curl of a random bump potential on a ball (any space)")
def _random_ball_field(n, space='r3', radius=1.0, seed=0):
    # n sets the azimuthal resolution of the polar grid
    n_phi = max(8, n // 16 * 2)
    return random_ball_field(space, radius, seed=seed, n_r=max(8, n_phi // 2),
                             n_theta=max(6, n_phi // 2), n_phi=n_phi)


def sampled_curve(space, fn, n, m=None):
    """Arclength curve from a closed parametrization fn(t), t ∈ [0, 2π), sampled at m points."""
    t = _parameter(m or n)
    return from_samples(space, fn(t), n=n)
