import numpy as np


def highest_density_interval(distribution, grid_values, mass: float = 0.9):
    """
    Narrowest contiguous run of grid points holding at least ``mass``.

    Ties go to the run with the lowest left endpoint. Returns (low, high) as
    grid values.
    """
    p = np.asarray(distribution, dtype=float)
    r = np.asarray(grid_values, dtype=float)
    if p.shape != r.shape:
        raise ValueError(f"distribution has {p.size} points, grid has {r.size}")
    if not 0 < mass < 1:
        raise ValueError(f"mass must be in (0, 1), got {mass}")

    cumulative = np.concatenate(([0.0], np.cumsum(p)))
    # For every left edge i, the first k with cumulative[k] - cumulative[i] >= mass;
    # the window is then points i..k-1.
    targets = cumulative[:-1] + mass
    ends = np.searchsorted(cumulative, targets, side="left")
    valid = ends <= p.size
    if not valid.any():
        return float(r[0]), float(r[-1])

    lefts = np.flatnonzero(valid)
    widths = ends[valid] - lefts
    best = int(np.argmin(widths))
    low = lefts[best]
    high = ends[valid][best] - 1
    return float(r[low]), float(r[high])
