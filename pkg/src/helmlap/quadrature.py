"""Composite Gauss-Legendre quadrature on panels aligned to breakpoints."""

import functools

import numpy as np


@functools.lru_cache(maxsize=32)
def gauss_rule(order):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def panel_grid(breakpoints, panels_per_segment, order=16):
    """Nodes and weights for composite GL between consecutive breakpoints.

    breakpoints: increasing 1-D array; panels_per_segment: int or sequence
    giving the subdivision count of each segment.
    """
    breakpoints = np.asarray(breakpoints, dtype=float)
    nseg = len(breakpoints) - 1
    if np.isscalar(panels_per_segment):
        panels_per_segment = [int(panels_per_segment)] * nseg
    x, w = gauss_rule(order)
    nodes, weights = [], []
    for i in range(nseg):
        a, b = breakpoints[i], breakpoints[i + 1]
        if b <= a:
            continue
        edges = np.linspace(a, b, panels_per_segment[i] + 1)
        mid = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * (edges[1:] - edges[:-1])
        nodes.append((mid[:, None] + half[:, None] * x[None, :]).ravel())
        weights.append((half[:, None] * w[None, :]).ravel())
    if not nodes:
        return np.empty(0), np.empty(0)
    return np.concatenate(nodes), np.concatenate(weights)


def refine_breakpoints(breakpoints, scale, min_panels=4, panel_density=8.0):
    """Panels per segment so oscillations at wavenumber ``scale`` resolve."""
    breakpoints = np.asarray(breakpoints, dtype=float)
    lengths = np.diff(breakpoints)
    per = np.maximum(min_panels, np.ceil(lengths * scale * panel_density / (2 * np.pi)).astype(int))
    return list(per)


def merge_breakpoints(lo, hi, *point_lists):
    """Sorted unique breakpoints of [lo, hi] including interior points given."""
    pts = [lo, hi]
    for lst in point_lists:
        pts.extend(p for p in lst if lo < p < hi)
    return np.unique(np.asarray(pts, dtype=float))
