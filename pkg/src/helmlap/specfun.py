"""Bessel-family special functions for complex argument and real order >= 0.

This module is the computational substrate for the radial solver and the
Dirichlet-to-Neumann closure.  Values come from the Amos routines wrapped by
scipy.special (power series, continued fractions and uniform asymptotics are
selected internally there); on top of that this module provides

* scaled variants that factor out the dominant exponential so that products
  and ratios stay representable far beyond the overflow range,
* first derivatives evaluated through the standard three-term recurrences
  (never finite differences), see DLMF 10.6.1 / 10.29.2,
* the ratio K_{zeta+1}(z)/K_zeta(z) as a primitive, evaluated by a
  continued fraction plus a stable forward recurrence in the order,
* Nicholson's squared Hankel modulus M^2 = J^2 + Y^2 and its derivative.

All operations are pure functions; arguments must satisfy z != 0 and
order >= 0 (principal branch, |arg z| < pi).
"""

import numpy as np
from scipy import special as sp

from .errors import DomainError

# Regime threshold for the K-ratio: below this modulus the continued
# fraction converges too slowly and the quotient of scaled Amos values is
# used instead.  Tuned so both branches overlap with >= 12 matching digits.
_KRATIO_CF_MIN_ABS = 2.0
_KRATIO_CF_MAX_ITER = 600


def _check_order(order):
    order = float(order)
    if not np.isfinite(order) or order < 0.0:
        raise DomainError(f"order must be finite and >= 0, got {order!r}")
    return order


def _check_z(z):
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise DomainError("argument z = 0 is outside the domain")
    if np.any(~np.isfinite(z)):
        raise DomainError("argument z must be finite")
    return z


def _ret(values, scalar_input):
    values = np.asarray(values)
    return complex(values[()]) if scalar_input and values.ndim == 0 else values


def _wrap(fn, order, z):
    order = _check_order(order)
    zs = np.isscalar(z) or np.ndim(z) == 0
    z = _check_z(z)
    return _ret(fn(order, z), zs)


# -- plain values -----------------------------------------------------------

def bessel_j(order, z):
    """Bessel function of the first kind J_order(z)."""
    return _wrap(sp.jv, order, z)


def bessel_y(order, z):
    """Bessel function of the second kind Y_order(z)."""
    return _wrap(sp.yv, order, z)


def hankel1(order, z):
    """Hankel function of the first kind H^(1)_order(z)."""
    return _wrap(sp.hankel1, order, z)


def mod_i(order, z):
    """Modified Bessel function of the first kind I_order(z)."""
    return _wrap(sp.iv, order, z)


def mod_k(order, z):
    """Modified Bessel function of the second kind K_order(z)."""
    return _wrap(sp.kv, order, z)


# -- scaled values ----------------------------------------------------------
# Scale factors (value_scaled = factor * value):
#   bessel_j_scaled, bessel_y_scaled : exp(-|Im z|)
#   hankel1_scaled                   : exp(-i z)
#   mod_i_scaled                     : exp(-|Re z|)
#   mod_k_scaled                     : exp(+z)

def bessel_j_scaled(order, z):
    """exp(-|Im z|) * J_order(z); representable for large |Im z|."""
    return _wrap(sp.jve, order, z)


def bessel_y_scaled(order, z):
    """exp(-|Im z|) * Y_order(z)."""
    return _wrap(sp.yve, order, z)


def hankel1_scaled(order, z):
    """exp(-i z) * H^(1)_order(z); removes the outgoing exponential."""
    return _wrap(sp.hankel1e, order, z)


def mod_i_scaled(order, z):
    """exp(-|Re z|) * I_order(z)."""
    return _wrap(sp.ive, order, z)


def mod_k_scaled(order, z):
    """exp(z) * K_order(z); representable where K underflows."""
    return _wrap(sp.kve, order, z)


# -- derivatives by recurrence ---------------------------------------------
# J'_v = (J_{v-1} - J_{v+1})/2 and likewise for Y, H1;
# I'_v = (I_{v-1} + I_{v+1})/2;  K'_v = -(K_{v-1} + K_{v+1})/2.
# These hold for every real order; negative first argument is fine for Amos.

def _prime(fn, sign, order, z):
    order = _check_order(order)
    zs = np.isscalar(z) or np.ndim(z) == 0
    z = _check_z(z)
    return _ret(0.5 * (fn(order - 1.0, z) + sign * fn(order + 1.0, z)), zs)


def bessel_j_prime(order, z):
    """d/dz J_order(z)."""
    return _prime(sp.jv, -1.0, order, z)


def bessel_y_prime(order, z):
    """d/dz Y_order(z)."""
    return _prime(sp.yv, -1.0, order, z)


def hankel1_prime(order, z):
    """d/dz H^(1)_order(z)."""
    return _prime(sp.hankel1, -1.0, order, z)


def mod_i_prime(order, z):
    """d/dz I_order(z)."""
    return _prime(sp.iv, +1.0, order, z)


def mod_k_prime(order, z):
    """d/dz K_order(z)."""
    order = _check_order(order)
    zs = np.isscalar(z) or np.ndim(z) == 0
    z = _check_z(z)
    return _ret(-0.5 * (sp.kv(abs(order - 1.0), z) + sp.kv(order + 1.0, z)), zs)


def mod_k_prime_scaled(order, z):
    """exp(z) * d/dz K_order(z), from the scaled recurrence."""
    order = _check_order(order)
    zs = np.isscalar(z) or np.ndim(z) == 0
    z = _check_z(z)
    return _ret(-0.5 * (sp.kve(abs(order - 1.0), z) + sp.kve(order + 1.0, z)), zs)


def mod_i_prime_scaled(order, z):
    """exp(-|Re z|) * d/dz I_order(z)."""
    return _prime(sp.ive, +1.0, order, z)


def hankel1_prime_scaled(order, z):
    """exp(-i z) * d/dz H^(1)_order(z)."""
    return _prime(sp.hankel1e, -1.0, order, z)


# -- K ratio primitive ------------------------------------------------------

def _kratio_cf_base(nu, z):
    """K_{nu+1}(z)/K_nu(z) for base order 0 <= nu < 1 by continued fraction.

    Uses the classical representation
        K_{nu+1}/K_nu = (nu + 1/2 + z + h)/z,
        h = (nu^2-1/4) / (2(z+1) + (nu^2-9/4) / (2(z+2) + ...)),
    evaluated by the modified Lentz algorithm, vectorised over z.  The
    fraction converges for Re z >= 0 away from the origin; the caller
    restricts it to |z| >= _KRATIO_CF_MIN_ABS.
    """
    z = np.asarray(z, dtype=complex)
    tiny = 1e-300
    a1 = nu * nu - 0.25
    b1 = 2.0 * (z + 1.0)
    f = np.where(np.abs(b1) > tiny, b1, tiny)  # h = a1/f at the end of level 1
    C = f.copy()
    D = np.zeros_like(z)
    converged = np.zeros(z.shape, dtype=bool)
    j = 1
    while j < _KRATIO_CF_MAX_ITER and not np.all(converged):
        j += 1
        aj = nu * nu - (j - 0.5) ** 2
        bj = 2.0 * (z + j)
        D = bj + aj * D
        D = np.where(np.abs(D) > tiny, D, tiny)
        C = bj + aj / C
        C = np.where(np.abs(C) > tiny, C, tiny)
        D = 1.0 / D
        delta = C * D
        f = f * delta
        converged |= np.abs(delta - 1.0) < 1e-16
    h = a1 / f
    return (nu + 0.5 + z + h) / z


def kv_ratio(order, z):
    """Ratio K_{order+1}(z)/K_order(z), stable where K itself underflows.

    For |z| >= _KRATIO_CF_MIN_ABS the ratio at the fractional base order is
    obtained from a continued fraction and then climbed to the requested
    order with the forward recurrence r_v = 2v/z + 1/r_{v-1}, which is
    stable because K grows with the order.  For smaller |z| the quotient of
    exponentially scaled Amos values is used (the scale factors cancel
    exactly).
    """
    order = _check_order(order)
    zs = np.isscalar(z) or np.ndim(z) == 0
    z = _check_z(z)
    out = np.empty(z.shape, dtype=complex)

    use_cf = np.abs(z) >= _KRATIO_CF_MIN_ABS
    if np.any(use_cf):
        zc = z[use_cf]
        base = order - int(order)
        r = _kratio_cf_base(base, zc)
        nu = base
        while nu < order - 0.5:
            nu += 1.0
            r = 2.0 * nu / zc + 1.0 / r
        out[use_cf] = r
    if np.any(~use_cf):
        zq = z[~use_cf]
        out[~use_cf] = sp.kve(order + 1.0, zq) / sp.kve(order, zq)
    return _ret(out, zs)


# -- Nicholson modulus ------------------------------------------------------

def nicholson_m2(order, k):
    """Squared Hankel modulus M^2(k) = J_order(k)^2 + Y_order(k)^2, k > 0."""
    order = _check_order(order)
    ks = np.isscalar(k) or np.ndim(k) == 0
    k = np.asarray(k, dtype=float)
    if np.any(k <= 0):
        raise DomainError("nicholson_m2 requires k > 0")
    j = sp.jv(order, k)
    y = sp.yv(order, k)
    out = j * j + y * y
    return float(out[()]) if ks and out.ndim == 0 else out


def nicholson_m2_prime(order, k):
    """d/dk of the squared Hankel modulus, 2(J J' + Y Y')."""
    order = _check_order(order)
    ks = np.isscalar(k) or np.ndim(k) == 0
    k = np.asarray(k, dtype=float)
    if np.any(k <= 0):
        raise DomainError("nicholson_m2_prime requires k > 0")
    j = sp.jv(order, k)
    y = sp.yv(order, k)
    jp = 0.5 * (sp.jv(order - 1.0, k) - sp.jv(order + 1.0, k))
    yp = 0.5 * (sp.yv(order - 1.0, k) - sp.yv(order + 1.0, k))
    out = 2.0 * (j * jp + y * yp)
    return float(out[()]) if ks and out.ndim == 0 else out
