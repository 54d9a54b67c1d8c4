"""
Shared driver for the double sums of linkage and fields.

Rows of the outer index are grouped into blocks whose size depends only on
the configuration, never on the worker count. Each block returns its per-row
sums; the totals are combined with math.fsum, so results do not depend on
how many threads ran the blocks.
"""
import enum
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from django.conf import settings

logger = logging.getLogger(__name__)

# Elements per (rows × inner) block
BLOCK_BUDGET = 1 << 20

MIN_NODES = 32


class DiagonalPolicy(str, enum.Enum):
    SKIP_DIAGONAL_NODES = 'skip-diagonal'


@dataclass(frozen=True)
class QuadratureConfig:
    """Node counts and numerical policy for the double integrals."""
    n_outer: int = 256
    n_inner: int = 256
    diagonal_policy: DiagonalPolicy = DiagonalPolicy.SKIP_DIAGONAL_NODES
    epsilon_check: float = 0.5
    tolerance: float = None
    workers: int = 1
    chunk_rows: int = 16

    def __post_init__(self):
        for name in ('n_outer', 'n_inner'):
            value = getattr(self, name)
            if value < MIN_NODES or value % 2:
                raise ValueError(f"{name} must be an even count ≥ {MIN_NODES}, got {value}")
        if not 0 < self.epsilon_check < 1:
            raise ValueError(f"epsilon_check must lie in (0, 1), got {self.epsilon_check}")
        if self.workers < 1 or self.chunk_rows < 1:
            raise ValueError("workers and chunk_rows must be positive")
        object.__setattr__(self, 'diagonal_policy', DiagonalPolicy(self.diagonal_policy))

    @classmethod
    def from_settings(cls, n=None, **overrides):
        """Defaults from Django settings; `n` sets both node counts."""
        n = n or getattr(settings, 'RIBBON_DEFAULT_N', 256)
        values = {
            'n_outer': n,
            'n_inner': n,
            'workers': getattr(settings, 'RIBBON_WORKERS', 1),
            'chunk_rows': getattr(settings, 'RIBBON_CHUNK_ROWS', 16),
        }
        values.update(overrides)
        return cls(**values)

    @property
    def wants_extrapolation(self):
        return self.tolerance is not None and self.tolerance < 1e-4


def block_rows(n_inner, chunk_rows):
    return max(1, min(chunk_rows, BLOCK_BUDGET // max(n_inner, 1)))


def run_blocks(block_fn, n_rows, n_inner, cfg):
    """
    Call block_fn(start, stop) on consecutive row blocks and return the
    results in row order. Blocks run on cfg.workers threads; numpy releases
    the GIL inside the array kernels.
    """
    step = block_rows(n_inner, cfg.chunk_rows)
    bounds = [(lo, min(n_rows, lo + step)) for lo in range(0, n_rows, step)]
    if cfg.workers == 1 or len(bounds) == 1:
        return [block_fn(lo, hi) for lo, hi in bounds]
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        return list(pool.map(lambda b: block_fn(*b), bounds))


def stable_total(row_sums):
    """Correctly rounded sum of per-row partial sums."""
    return math.fsum(np.concatenate([np.atleast_1d(r) for r in row_sums]).tolist())


def richardson(values, counts):
    """
    Extrapolate skip-diagonal sums to n → ∞.

    With uniform reweighting the skipped diagonal shifts the sum by exactly
    c/(n − 1); a kink of the integrand across the diagonal adds O(1/n²). The
    model W(n) = I + a/(n − 1) + b/n² is fitted through the given levels
    (two levels fit the first correction only) and I is returned.
    """
    counts = np.asarray(counts, dtype=float)
    values = np.asarray(values, dtype=float)
    columns = [np.ones_like(counts), 1.0 / (counts - 1.0), 1.0 / counts ** 2][:len(counts)]
    solution = np.linalg.solve(np.stack(columns, axis=1), values)
    return float(solution[0])
