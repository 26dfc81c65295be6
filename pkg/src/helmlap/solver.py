"""Exact per-mode radial transmission solves via Bessel matching.

Within each homogeneous layer the per-mode radial equation

    v'' + (d-1)/r v' + (kappa^2 - lambda_m/r^2) v = eps_sigma * g(r)

has the fundamental pair r^{-nu} J_zeta(kappa r), r^{-nu} Y_zeta(kappa r)
with zeta = m + nu, whose Wronskian is exactly 2/(pi r^{d-1}).  A solve
stitches per-layer coefficient pairs together through value and
(1/eps_sigma)-scaled flux continuity at every interface, regularity at the
origin, and the modal Robin closure at the truncation radius.  Sources are
piecewise-constant radial profiles handled by variation of parameters with
the closed-form Wronskian, so the only approximation anywhere is quadrature
of smooth Bessel integrands.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .dtn import dtn_coefficient
from .errors import DomainError, SingularSystemError
from .modes import ModeIndex, spectrum
from .quadrature import gauss_rule
from .specfun import bessel_j, bessel_j_prime, bessel_y, bessel_y_prime
from .stack import LayerStack, effective_layer, dtn_spectral_argument

_VOP_GL_ORDER = 24


# -- sources ------------------------------------------------------------------

@dataclass(frozen=True)
class ModalProfile:
    """Piecewise-constant radial profile for one harmonic degree.

    cells are (r_lo, r_hi, value) with value applying on [r_lo, r_hi).
    The same profile is understood to excite each of the degeneracy-many
    harmonics of this degree (for d = 2 that is the +q and -q Fourier
    modes), which is what makes modal Parseval sums exact.
    """

    m: int
    cells: tuple


@dataclass(frozen=True)
class RadialSource:
    profiles: tuple

    def profile_for(self, m):
        for p in self.profiles:
            if p.m == m:
                return p
        return None

    @property
    def support_radius(self):
        return max((hi for p in self.profiles for (_, hi, _) in p.cells), default=0.0)


def parse_source(entries) -> RadialSource:
    """Build a RadialSource from the document schema.

    Schema: [{"m": int, "cells": [{"r_lo": x, "r_hi": x, "re": x, "im": x}]}]
    """
    profiles = []
    for entry in entries or []:
        m = int(entry["m"])
        cells = []
        for c in entry["cells"]:
            lo, hi = float(c["r_lo"]), float(c["r_hi"])
            if not 0.0 <= lo < hi:
                raise DomainError(f"bad source cell extent [{lo}, {hi}]")
            cells.append((lo, hi, complex(float(c.get("re", 0.0)), float(c.get("im", 0.0)))))
        cells.sort(key=lambda c: c[0])
        for (a0, b0, _), (a1, b1, _) in zip(cells, cells[1:]):
            if a1 < b0:
                raise DomainError("source cells of one mode must not overlap")
        profiles.append(ModalProfile(m=m, cells=tuple(cells)))
    return RadialSource(profiles=tuple(profiles))


def source_entries(source: RadialSource):
    """Inverse of parse_source."""
    return [
        {"m": p.m, "cells": [{"r_lo": lo, "r_hi": hi, "re": v.real, "im": v.imag}
                             for (lo, hi, v) in p.cells]}
        for p in source.profiles
    ]


def source_l2_norm(source: RadialSource, d) -> float:
    """L2 norm of the full volumetric source over R^d (orthonormal harmonics)."""
    from .modes import harmonic_space_dimension
    total = 0.0
    for p in source.profiles:
        deg = harmonic_space_dimension(d, p.m)
        for lo, hi, v in p.cells:
            total += deg * abs(v) ** 2 * (hi ** d - lo ** d) / d
    return math.sqrt(total)


# -- fundamental pair ---------------------------------------------------------

class FundamentalPair:
    """Evaluators for the radial fundamental pair of one (layer, mode).

    The wavenumber sign is flipped onto Re kappa >= 0 when necessary: the
    pair spans the same solution space for kappa and -kappa, and keeping
    the argument in |arg z| <= pi/2 is where the evaluators are sharpest.
    """

    def __init__(self, layer, mode: ModeIndex):
        spec = spectrum(mode)
        self.d = mode.d
        self.m = mode.m
        self.nu = spec.nu
        self.zeta = spec.zeta
        kappa = layer.kappa
        if kappa.real < 0:
            kappa = -kappa
        self.kappa = kappa

    def first(self, r):
        """(value, d/dr) of r^{-nu} J_zeta(kappa r); regular at the origin."""
        return self._eval(bessel_j, bessel_j_prime, r)

    def second(self, r):
        """(value, d/dr) of r^{-nu} Y_zeta(kappa r); singular at the origin."""
        return self._eval(bessel_y, bessel_y_prime, r)

    def _eval(self, fn, fnp, r):
        r = np.asarray(r, dtype=float)
        scalar = r.ndim == 0
        r = np.atleast_1d(r)
        val = np.empty(r.shape, dtype=complex)
        der = np.empty(r.shape, dtype=complex)
        pos = r > 0.0
        if np.any(pos):
            rp = r[pos]
            z = self.kappa * rp
            f = fn(self.zeta, z)
            fp = fnp(self.zeta, z)
            rpow = rp ** (-self.nu)
            val[pos] = rpow * f
            der[pos] = rpow * (self.kappa * fp - self.nu * f / rp)
        if np.any(~pos):
            v0, d0 = self._first_at_zero() if fn is bessel_j else (np.nan + 0j, np.nan + 0j)
            val[~pos] = v0
            der[~pos] = d0
        if scalar:
            return complex(val[0]), complex(der[0])
        return val, der

    def _first_at_zero(self):
        # leading term of r^{-nu} J_zeta(kappa r) ~ (kappa/2)^zeta r^m / Gamma(zeta+1)
        lead = (self.kappa / 2.0) ** self.zeta / math.gamma(self.zeta + 1.0)
        if self.m == 0:
            return lead, 0.0 + 0.0j
        if self.m == 1:
            return 0.0 + 0.0j, lead
        return 0.0 + 0.0j, 0.0 + 0.0j

    def wronskian(self, r):
        """first*second' - first'*second = 2/(pi r^{d-1}), exactly."""
        r = np.asarray(r, dtype=float)
        return 2.0 / (np.pi * r ** (self.d - 1))


def fundamental_pair(layer, mode: ModeIndex) -> FundamentalPair:
    return FundamentalPair(layer, mode)


# -- particular solution by variation of parameters ---------------------------

class _LayerParticular:
    """Source response within one layer, zero where the layer has no cells.

    For each cell [a, b] with normal-form right-hand side h = eps_sigma * c,
    the solution is p1(r) C1(r) + p2(r) C2(r) with

        C1(r) = Int_r^b p2 t^{d-1} h pi/2 dt,   C2(r) = Int_a^r p1 t^{d-1} h pi/2 dt,

    which is proportional to the regular member below the cell and to the
    second member above it, so it stays regular at the origin for every
    harmonic degree.
    """

    def __init__(self, pair: FundamentalPair, cells, eps_sigma):
        self.pair = pair
        self.d = pair.d
        self.cells = []
        x, w = gauss_rule(_VOP_GL_ORDER)
        for (a, b, value) in cells:
            coef = eps_sigma * value * (np.pi / 2.0)
            c1_full = self._integral(self.pair.second, a, b, coef)
            c2_full = self._integral(self.pair.first, a, b, coef)
            self.cells.append((a, b, coef, c1_full, c2_full))
        self._gl = (x, w)

    def _integral(self, member, lo, hi, coef, lo_vec=None, hi_vec=None):
        """coef * Int p(t) t^{d-1} dt over [lo, hi] (vectorised variant below)."""
        x, w = gauss_rule(_VOP_GL_ORDER)
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        t = mid + half * x
        pv, _ = member(t)
        return coef * half * np.sum(w * pv * t ** (self.d - 1))

    def _partial(self, member, lo, hi, coef):
        """Vectorised integrals over [lo_i, hi_i] pairs (arrays)."""
        x, w = self._gl
        lo = np.atleast_1d(lo)
        hi = np.atleast_1d(hi)
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        t = mid[:, None] + half[:, None] * x[None, :]
        pv, _ = member(t.ravel())
        pv = pv.reshape(t.shape)
        return coef * half * np.sum(w[None, :] * pv * t ** (self.d - 1), axis=1)

    def evaluate(self, r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        P = np.zeros(r.shape, dtype=complex)
        Pp = np.zeros(r.shape, dtype=complex)
        if not self.cells:
            return P, Pp
        p1, p1p = self.pair.first(r)
        # the second member's coefficient C2 vanishes at the origin where the
        # member itself is singular; force the 0 * inf product to zero
        p2 = np.zeros(r.shape, dtype=complex)
        p2p = np.zeros(r.shape, dtype=complex)
        pos = r > 0.0
        if np.any(pos):
            p2[pos], p2p[pos] = self.pair.second(r[pos])
        for (a, b, coef, c1_full, c2_full) in self.cells:
            C1 = np.zeros(r.shape, dtype=complex)
            C2 = np.zeros(r.shape, dtype=complex)
            below = r <= a
            above = r >= b
            inside = ~(below | above)
            C1[below] = c1_full
            C2[above] = c2_full
            if np.any(inside):
                ri = r[inside]
                C1[inside] = self._partial(self.pair.second, ri, np.full_like(ri, b), coef)
                C2[inside] = self._partial(self.pair.first, np.full_like(ri, a), ri, coef)
            P += p1 * C1 + p2 * C2
            Pp += p1p * C1 + p2p * C2
        return P, Pp


# -- mode solution ------------------------------------------------------------

@dataclass
class ModeSolution:
    """Layer-wise closed-form representation of one modal solve."""

    mode: ModeIndex
    sigma: float
    stack: LayerStack
    coefficients: tuple          # per layer (a_i, b_i) against the raw pair
    diagnostics: dict            # smallest_singular_value, condition, matrix_norm
    _pairs: tuple = field(repr=False, default=())
    _particulars: tuple = field(repr=False, default=())

    @property
    def breakpoints(self):
        pts = [0.0, *self.stack.radii, self.stack.r_trunc]
        for part in self._particulars:
            for (a, b, *_rest) in part.cells:
                pts.extend((a, b))
        return tuple(sorted(set(p for p in pts if 0.0 <= p <= self.stack.r_trunc)))

    def evaluate(self, r):
        """(value, radial derivative) arrays on radii r in [0, r_trunc]."""
        r = np.asarray(r, dtype=float)
        scalar = r.ndim == 0
        r = np.atleast_1d(r)
        v = np.empty(r.shape, dtype=complex)
        vp = np.empty(r.shape, dtype=complex)
        edges = np.array([*self.stack.radii, self.stack.r_trunc])
        layer_idx = np.searchsorted(edges, r, side="left") + 1
        layer_idx = np.minimum(layer_idx, self.stack.n_layers)
        for i in range(1, self.stack.n_layers + 1):
            mask = layer_idx == i
            if not np.any(mask):
                continue
            vi, vpi = self.evaluate_in_layer(i, r[mask])
            v[mask] = vi
            vp[mask] = vpi
        if scalar:
            return complex(v[0]), complex(vp[0])
        return v, vp

    def evaluate_in_layer(self, i, r):
        """Evaluate layer i's expression at radii r (one-sided at interfaces)."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        a, b = self.coefficients[i - 1]
        pair = self._pairs[i - 1]
        u1, u1p = pair.first(r)
        if i == 1:
            v = a * u1
            vp = a * u1p
            if b != 0.0:
                u2, u2p = pair.second(r)
                v = v + b * u2
                vp = vp + b * u2p
        else:
            u2, u2p = pair.second(r)
            v = a * u1 + b * u2
            vp = a * u1p + b * u2p
        P, Pp = self._particulars[i - 1].evaluate(r)
        return v + P, vp + Pp

    def max_abs(self, samples=512):
        r = np.linspace(0.0, self.stack.r_trunc, samples)
        v, _ = self.evaluate(r)
        return float(np.max(np.abs(v)))


def _normalisation(pair: FundamentalPair, member, r_ref):
    val, _ = member(r_ref)
    mag = abs(val)
    return mag if np.isfinite(mag) and mag > 1e-290 else 1.0


def transfer_solve(stack: LayerStack, sigma, mode: ModeIndex, source: RadialSource,
                   tol_singular=1e-12) -> ModeSolution:
    """Solve one mode exactly by matching layer expressions.

    Unknowns are the 2n coefficients of per-layer normalised fundamental
    pairs; equations are regularity at the origin, value and conormal-flux
    continuity at each interface, and the modal Robin closure at the
    truncation radius.  Raises SingularSystemError when the matched system
    is numerically singular (resonant frequency / exceptional set).
    """
    if mode.d != stack.d:
        raise DomainError("mode dimension does not match the stack")
    n = stack.n_layers
    layers = [effective_layer(stack, sigma, i) for i in range(1, n + 1)]
    pairs = [FundamentalPair(lay, mode) for lay in layers]

    profile = source.profile_for(mode.m)
    cells_all = list(profile.cells) if profile is not None else []
    if any(hi > stack.r_trunc for (_, hi, _) in cells_all):
        raise DomainError("source support must lie inside the truncation radius")

    particulars = []
    for i, lay in enumerate(layers, start=1):
        lo, hi = stack.layer_bounds(i)
        clipped = []
        for (a, b, value) in cells_all:
            aa, bb = max(a, lo), min(b, hi)
            if bb > aa + 1e-15 * max(1.0, bb):
                clipped.append((aa, bb, value))
        particulars.append(_LayerParticular(pairs[i - 1], clipped, lay.eps_sigma))

    # reference radius for column normalisation: outer edge for the core,
    # inner edge for every other layer
    norms = []
    for i, pair in enumerate(pairs, start=1):
        lo, hi = stack.layer_bounds(i)
        r_ref = hi if i == 1 else lo
        n1 = _normalisation(pair, pair.first, r_ref)
        n2 = 1.0 if i == 1 else _normalisation(pair, pair.second, r_ref)
        norms.append((n1, n2))

    N = 2 * n
    A = np.zeros((N, N), dtype=complex)
    rhs = np.zeros(N, dtype=complex)

    def col(i, which):
        return 2 * (i - 1) + which

    # regularity at the origin: second-member coefficient of the core is zero
    A[0, col(1, 1)] = 1.0

    row = 1
    for i in range(1, n):
        Ri = stack.radii[i - 1]
        u1L, u1Lp = pairs[i - 1].first(Ri)
        u2L, u2Lp = pairs[i - 1].second(Ri)
        u1R, u1Rp = pairs[i].first(Ri)
        u2R, u2Rp = pairs[i].second(Ri)
        (n1L, n2L), (n1R, n2R) = norms[i - 1], norms[i]
        PL, PLp = particulars[i - 1].evaluate(Ri)
        PR, PRp = particulars[i].evaluate(Ri)
        # value continuity
        A[row, col(i, 0)] = u1L / n1L
        A[row, col(i, 1)] = u2L / n2L
        A[row, col(i + 1, 0)] = -u1R / n1R
        A[row, col(i + 1, 1)] = -u2R / n2R
        rhs[row] = PR[0] - PL[0]
        row += 1
        # conormal flux continuity: (1/eps_sigma) v' matches
        ceL = 1.0 / layers[i - 1].eps_sigma
        ceR = 1.0 / layers[i].eps_sigma
        A[row, col(i, 0)] = ceL * u1Lp / n1L
        A[row, col(i, 1)] = ceL * u2Lp / n2L
        A[row, col(i + 1, 0)] = -ceR * u1Rp / n1R
        A[row, col(i + 1, 1)] = -ceR * u2Rp / n2R
        rhs[row] = ceR * PRp[0] - ceL * PLp[0]
        row += 1

    # Robin closure at the truncation radius
    R = stack.r_trunc
    robin = dtn_coefficient(mode, dtn_spectral_argument(stack, sigma), R).robin
    u1, u1p = pairs[n - 1].first(R)
    u2, u2p = pairs[n - 1].second(R)
    Pn, Pnp = particulars[n - 1].evaluate(R)
    (n1, n2) = norms[n - 1]
    A[row, col(n, 0)] = (u1p - robin * u1) / n1
    A[row, col(n, 1)] = (u2p - robin * u2) / n2
    rhs[row] = -(Pnp[0] - robin * Pn[0])

    # row equilibration keeps the singular-value diagnostic meaningful
    scale = np.max(np.abs(A), axis=1)
    scale[scale == 0.0] = 1.0
    A_eq = A / scale[:, None]
    rhs_eq = rhs / scale

    svals = np.linalg.svd(A_eq, compute_uv=False)
    smin, smax = float(svals[-1]), float(svals[0])
    if smin < tol_singular * smax:
        raise SingularSystemError(
            f"near-singular modal system (s_min/s_max = {smin / smax:.3e}); "
            "the frequency may lie in the exceptional set",
            smallest_singular_value=smin, matrix_norm=smax)
    coeff = np.linalg.solve(A_eq, rhs_eq)
    coeff[col(1, 1)] = 0.0  # structurally zero; the solve may leave roundoff

    raw = []
    for i in range(1, n + 1):
        n1, n2 = norms[i - 1]
        raw.append((complex(coeff[col(i, 0)] / n1), complex(coeff[col(i, 1)] / n2)))

    return ModeSolution(
        mode=mode, sigma=float(sigma), stack=stack,
        coefficients=tuple(raw),
        diagnostics={"smallest_singular_value": smin,
                     "condition": smax / smin,
                     "matrix_norm": smax},
        _pairs=tuple(pairs), _particulars=tuple(particulars))


# -- field evaluation and residuals --------------------------------------------

def evaluate_field(solutions, r_grid):
    """Sample each modal solution on r_grid; returns [(ModeIndex, values)]."""
    out = []
    for sol in solutions:
        v, _ = sol.evaluate(np.asarray(r_grid, dtype=float))
        out.append((sol.mode, v))
    return out


def solution_residuals(sol: ModeSolution) -> dict:
    """Transmission and Robin defects of a solved mode, relative to max |v|."""
    stack = sol.stack
    scale = max(sol.max_abs(), 1e-300)
    value_jumps, flux_jumps = [], []
    for i in range(1, stack.n_layers):
        Ri = stack.radii[i - 1]
        vL, vLp = sol.evaluate_in_layer(i, Ri)
        vR, vRp = sol.evaluate_in_layer(i + 1, Ri)
        eL = effective_layer(stack, sol.sigma, i).eps_sigma
        eR = effective_layer(stack, sol.sigma, i + 1).eps_sigma
        value_jumps.append(abs(vL[0] - vR[0]) / scale)
        flux_jumps.append(abs(vLp[0] / eL - vRp[0] / eR) / scale)
    R = stack.r_trunc
    robin = dtn_coefficient(sol.mode, dtn_spectral_argument(stack, sol.sigma), R).robin
    v, vp = sol.evaluate_in_layer(stack.n_layers, R)
    robin_resid = abs(vp[0] - robin * v[0]) / scale
    return {"value_jumps": value_jumps, "flux_jumps": flux_jumps,
            "robin_residual": robin_resid, "scale": scale}
