"""Independent finite-element oracle for the per-mode radial problem.

Discretises the self-adjoint form

    (r^{d-1} eps_s^{-1} v')' + r^{d-1} ((omega^2 mu + i sigma) - eps_s^{-1} lambda_m / r^2) v
        = r^{d-1} g

with piecewise-linear elements on a grid whose nodes include every
interface and source-cell edge, so flux continuity is natural and the
scheme is second-order.  The same modal Robin closure as the analytic
solver terminates the domain; regularity at the origin is the essential
condition v(0) = 0 for m >= 1 and natural for m = 0.  This path shares no
machinery with the transfer solver beyond the Robin coefficient itself.
"""

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csc_matrix
from scipy.sparse.linalg import splu

from .dtn import dtn_coefficient
from .errors import DomainError, SingularSystemError
from .modes import ModeIndex, spectrum
from .quadrature import gauss_rule
from .solver import RadialSource
from .stack import LayerStack, effective_layer, dtn_spectral_argument


@dataclass
class FdSolution:
    """Sampled solution with piecewise-linear evaluation."""

    mode: ModeIndex
    sigma: float
    stack: LayerStack
    r: np.ndarray
    values: np.ndarray
    diagnostics: dict

    @property
    def breakpoints(self):
        return tuple(self.r)

    def evaluate(self, r):
        r = np.asarray(r, dtype=float)
        scalar = r.ndim == 0
        r = np.atleast_1d(r)
        v = np.interp(r, self.r, self.values.real) + 1j * np.interp(r, self.r, self.values.imag)
        slopes = np.diff(self.values) / np.diff(self.r)
        idx = np.clip(np.searchsorted(self.r, r, side="right") - 1, 0, len(slopes) - 1)
        vp = slopes[idx]
        if scalar:
            return complex(v[0]), complex(vp[0])
        return v, vp


def _grid(stack: LayerStack, cells, grid_size):
    pts = [0.0, *stack.radii, stack.r_trunc]
    for (a, b, _) in cells:
        pts.extend((a, b))
    bps = np.unique(np.asarray([p for p in pts if 0.0 <= p <= stack.r_trunc]))
    lengths = np.diff(bps)
    counts = np.maximum(2, np.round(grid_size * lengths / lengths.sum()).astype(int))
    nodes = [np.array([0.0])]
    for (a, b), c in zip(zip(bps[:-1], bps[1:]), counts):
        nodes.append(np.linspace(a, b, c + 1)[1:])
    return np.concatenate(nodes), bps


def fd_solve_mode(stack: LayerStack, sigma, mode: ModeIndex, source: RadialSource,
                  grid_size=1024, robin_rhs=0.0, volume_rhs=None,
                  tol_singular=1e-12) -> FdSolution:
    """Second-order solve of one mode on ``grid_size`` elements.

    ``robin_rhs`` adds inhomogeneous data h to the closure
    d/dr v(R) = robin*v(R) + h, and ``volume_rhs`` (a callable of r)
    overrides the modal source; both exist so manufactured-solution tests
    can drive the discretisation without going through the cell schema.
    """
    if grid_size < 64:
        raise DomainError("grid_size must be at least 64")
    if mode.d != stack.d:
        raise DomainError("mode dimension does not match the stack")
    d = stack.d
    lam = spectrum(mode).lambda_m
    profile = source.profile_for(mode.m)
    cells = list(profile.cells) if profile is not None else []
    r, _ = _grid(stack, cells, grid_size)
    nnode = len(r)

    def g_of(t):
        if volume_rhs is not None:
            return np.asarray(volume_rhs(t), dtype=complex)
        out = np.zeros(t.shape, dtype=complex)
        for (a, b, value) in cells:
            out[(t >= a) & (t < b)] += value
        return out

    gx, gw = gauss_rule(4)
    mid = 0.5 * (r[:-1] + r[1:])
    half = 0.5 * (r[1:] - r[:-1])
    t = mid[:, None] + half[:, None] * gx[None, :]          # (ne, 4)
    wq = half[:, None] * gw[None, :]
    edges = np.array([*stack.radii, stack.r_trunc])
    lay_idx = np.minimum(np.searchsorted(edges, mid, side="left") + 1, stack.n_layers)
    eps_inv = np.empty(len(mid), dtype=complex)
    qcoef = np.empty(len(mid), dtype=complex)
    for i in range(1, stack.n_layers + 1):
        lay = effective_layer(stack, sigma, i)
        mask = lay_idx == i
        eps_inv[mask] = 1.0 / lay.eps_sigma
        qcoef[mask] = stack.omega ** 2 * lay.mu + 1j * sigma

    h = (r[1:] - r[:-1])[:, None]
    rpow = t ** (d - 1)
    # P1 shapes on each element: phi0 falls, phi1 rises
    phi0 = (r[1:][:, None] - t) / h
    phi1 = (t - r[:-1][:, None]) / h
    dphi0 = -1.0 / h
    dphi1 = 1.0 / h
    mass_like = (eps_inv[:, None] * lam / t ** 2 - qcoef[:, None]) * rpow * wq
    stiff = eps_inv[:, None] * rpow * wq

    k00 = np.sum(stiff * dphi0 * dphi0 + mass_like * phi0 * phi0, axis=1)
    k01 = np.sum(stiff * dphi0 * dphi1 + mass_like * phi0 * phi1, axis=1)
    k11 = np.sum(stiff * dphi1 * dphi1 + mass_like * phi1 * phi1, axis=1)
    gq = g_of(t.ravel()).reshape(t.shape)
    f0 = -np.sum(gq * phi0 * rpow * wq, axis=1)
    f1 = -np.sum(gq * phi1 * rpow * wq, axis=1)

    diag = np.zeros(nnode, dtype=complex)
    off = np.zeros(nnode - 1, dtype=complex)
    rhs = np.zeros(nnode, dtype=complex)
    np.add.at(diag, np.arange(nnode - 1), k00)
    np.add.at(diag, np.arange(1, nnode), k11)
    off[:] = k01
    np.add.at(rhs, np.arange(nnode - 1), f0)
    np.add.at(rhs, np.arange(1, nnode), f1)

    # Robin closure
    R = stack.r_trunc
    robin = dtn_coefficient(mode, dtn_spectral_argument(stack, sigma), R).robin
    eps_inv_n = 1.0 / effective_layer(stack, sigma, stack.n_layers).eps_sigma
    diag[-1] -= eps_inv_n * robin * R ** (d - 1)
    rhs[-1] += eps_inv_n * R ** (d - 1) * complex(robin_rhs)

    start = 1 if mode.m >= 1 else 0    # essential v(0) = 0 for m >= 1
    nd = nnode - start
    rows = np.concatenate([np.arange(nd), np.arange(nd - 1), np.arange(1, nd)])
    cols = np.concatenate([np.arange(nd), np.arange(1, nd), np.arange(nd - 1)])
    vals = np.concatenate([diag[start:], off[start:], off[start:]])
    A = csc_matrix((vals, (rows, cols)), shape=(nd, nd))

    lu = splu(A)
    # smallest singular value by inverse iteration on A^H A
    x = np.ones(nd, dtype=complex)
    x /= np.linalg.norm(x)
    smin = np.inf
    for _ in range(5):
        y = lu.solve(x)
        y = lu.solve(y, trans="H")
        ny = np.linalg.norm(y)
        smin = 1.0 / np.sqrt(ny)
        x = y / ny
    anorm = float(np.max(np.abs(vals)))
    if smin < tol_singular * anorm:
        raise SingularSystemError(
            f"near-singular FD system (s_min = {smin:.3e}, scale = {anorm:.3e})",
            smallest_singular_value=float(smin), matrix_norm=anorm)

    sol = lu.solve(rhs[start:])
    values = np.concatenate([np.zeros(start, dtype=complex), sol])
    return FdSolution(mode=mode, sigma=float(sigma), stack=stack, r=r, values=values,
                      diagnostics={"smallest_singular_value": float(smin),
                                   "matrix_norm": anorm, "grid_points": nnode})
