"""Export service for computed reports (JSON) and the N(R) comparison table (CSV)."""
import csv
import json
import logging
import math
from pathlib import Path

import numpy as np

from .fields import bound_N
from .geometry import Space

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ['R', 'r3', 's3', 'h3']


def format_float(value):
    """Full-precision decimal form of a float (17 significant digits)."""
    return format(float(value), '.17g')


def bound_sweep(steps=200, r_max=math.pi):
    """
    N(R) for all three spaces on R = r_max/steps, 2·r_max/steps, …, r_max.

    Returns:
        List of rows [R, N_r3(R), N_s3(R), N_h3(R)]
    """
    if steps < 1:
        raise ValueError(f"steps must be positive, got {steps}")
    if not 0 < r_max <= math.pi:
        raise ValueError(f"Sweep radius must lie in (0, π], got {r_max}")
    radii = np.linspace(r_max / steps, r_max, steps)
    rows = []
    for radius in radii.tolist():
        rows.append([radius] + [bound_N(space, radius) for space in
                                (Space.EUCLIDEAN, Space.SPHERE3, Space.HYPERBOLIC3)])
    return rows


def write_sweep_csv(rows, output):
    """
    Write sweep rows as CSV.

    Args:
        rows: rows from bound_sweep
        output: a path, or a text stream such as a command's stdout
    """
    if isinstance(output, (str, Path)):
        with open(output, 'w', newline='') as handle:
            write_sweep_csv(rows, handle)
        logger.info("Wrote N(R) sweep with %d rows -> %s", len(rows), output)
        return output
    writer = csv.writer(output, lineterminator='\n')
    writer.writerow(SWEEP_COLUMNS)
    for row in rows:
        writer.writerow([format_float(value) for value in row])
    return output


def write_json_report(data, path):
    """Write a serializer's output as a JSON report."""
    path = Path(path)
    path.write_text(json.dumps(data, indent=2))
    logger.info("Wrote report -> %s", path)
    return path
