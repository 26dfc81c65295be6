"""Sobolev norms of modal fields by composite Gauss quadrature.

With an orthonormal harmonic basis the squared norms of u = sum v_m Y_m are
modal sums

    ||u||_{L2}^2 = sum_m deg_m Int |v_m|^2 r^{d-1} dr,
    ||u||_{H1}^2 = sum_m deg_m Int (|v_m'|^2 + lambda_m/r^2 |v_m|^2 + |v_m|^2) r^{d-1} dr,

so quadrature panels only have to respect the radial breakpoints of each
field (interfaces, source-cell edges) where derivatives kink.
"""

from dataclasses import dataclass

import numpy as np

from .modes import spectrum
from .quadrature import merge_breakpoints, panel_grid
from .stack import LayerStack


@dataclass(frozen=True)
class NormReport:
    l2: float
    h1: float
    per_region: tuple  # (layer_index, l2_sq, h1_sq) over D_i intersected with the region


@dataclass(frozen=True)
class FieldDifference:
    """Pointwise difference of two evaluable fields sharing a mode."""

    a: object
    b: object

    @property
    def mode(self):
        return self.a.mode

    @property
    def breakpoints(self):
        return tuple(sorted(set(self.a.breakpoints) | set(self.b.breakpoints)))

    def evaluate(self, r):
        va, vpa = self.a.evaluate(r)
        vb, vpb = self.b.evaluate(r)
        return va - vb, vpa - vpb


def norm_h1(fields, stack: LayerStack, region=None, panels_per_segment=8,
            order=16) -> NormReport:
    """H1 and L2 norms of a list of modal fields over a radial region.

    Each field provides .mode, .breakpoints and .evaluate(r) -> (v, v').
    Panels are aligned to layer interfaces and field breakpoints; the
    summation order over modes and panels is fixed for reproducibility.
    """
    lo, hi = region if region is not None else (0.0, stack.r_trunc)
    d = stack.d
    region_sums = {}
    l2_total = 0.0
    h1_total = 0.0
    for f in fields:
        sp = spectrum(f.mode)
        deg = sp.degeneracy
        lam = sp.lambda_m
        bps = merge_breakpoints(lo, hi, stack.radii, f.breakpoints)
        nodes, weights = panel_grid(bps, panels_per_segment, order=order)
        if nodes.size == 0:
            continue
        v, vp = f.evaluate(nodes)
        rw = nodes ** (d - 1) * weights
        dens_l2 = np.abs(v) ** 2 * rw
        dens_h1 = dens_l2 + (np.abs(vp) ** 2 + lam * np.abs(v) ** 2 / nodes ** 2) * rw
        l2_total += deg * float(np.sum(dens_l2))
        h1_total += deg * float(np.sum(dens_h1))
        edges = np.array([*stack.radii, stack.r_trunc])
        layer_idx = np.minimum(np.searchsorted(edges, nodes, side="left") + 1,
                               stack.n_layers)
        for i in range(1, stack.n_layers + 1):
            mask = layer_idx == i
            if not np.any(mask):
                continue
            acc = region_sums.setdefault(i, [0.0, 0.0])
            acc[0] += deg * float(np.sum(dens_l2[mask]))
            acc[1] += deg * float(np.sum(dens_h1[mask]))
    per_region = tuple((i, acc[0], acc[1]) for i, acc in sorted(region_sums.items()))
    return NormReport(l2=np.sqrt(l2_total), h1=np.sqrt(h1_total), per_region=per_region)
