"""Modal Dirichlet-to-Neumann coefficients on a truncation sphere.

The exterior radiating solution for a complex spectral parameter s with
Re s >= 0 decays like r^{-nu} K_zeta(s r); its logarithmic derivative at the
truncation radius gives the per-mode Robin coefficient that closes the
truncated problem exactly:

    z(d, m; x) = m - x * K_{zeta+1}(x) / K_zeta(x),   zeta = m + (d-2)/2,

evaluated at x = s*R, and the boundary condition reads
d/dr v(R) = (z / R) v(R).  The coefficient is always computed through the
ratio primitive, never by dividing independently computed K values, so it
stays accurate where K underflows.

The real part satisfies -Re z >= (d-2)/2 on the closed right half-plane,
which makes the closed sesquilinear form dissipative; ``coercivity_check``
verifies this property (and the sharper imaginary-axis band) on a grid and
reports violations instead of raising, since any violation indicates a
special-function accuracy bug rather than bad input.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .modes import ModeIndex, spectrum
from .specfun import kv_ratio


@dataclass(frozen=True)
class DtnCoefficient:
    """Modal coefficient z and the Robin coefficient z/R for one mode."""

    z: complex
    robin: complex
    mode: ModeIndex
    s: complex
    R: float


def dtn_z(d, m, x):
    """The coefficient z at argument x = s*R; vectorised over x."""
    nu = (d - 2) / 2.0
    zeta = m + nu
    return m - np.asarray(x, dtype=complex) * kv_ratio(zeta, x)


def dtn_coefficient(mode: ModeIndex, s, R) -> DtnCoefficient:
    """Robin closure data for one mode at spectral parameter s, radius R."""
    s = complex(s)
    if s == 0:
        raise DomainError("s = 0 is outside the closure's domain")
    if s.real < 0:
        raise DomainError(f"need Re s >= 0, got s = {s}")
    if R <= 0:
        raise DomainError(f"truncation radius must be positive, got {R}")
    z = complex(dtn_z(mode.d, mode.m, s * R))
    return DtnCoefficient(z=z, robin=z / R, mode=mode, s=s, R=R)


@dataclass(frozen=True)
class CoercivityRecord:
    """One grid evaluation with its margin against the half-plane bound."""

    d: int
    m: int
    s: complex
    R: float
    z: complex
    margin: float          # -Re z - (d-2)/2
    band_violation: float  # imaginary-axis band overshoot (0 off-axis / in band)


@dataclass(frozen=True)
class CoercivityReport:
    records: tuple
    violations: tuple

    @property
    def passed(self):
        return len(self.violations) == 0

    @property
    def worst_margin(self):
        return min(r.margin for r in self.records)


def coercivity_check(d, m_max, s_grid, R=1.0, tol=1e-9) -> CoercivityReport:
    """Verify -Re z >= (d-2)/2 for m <= m_max over a grid of s values.

    On purely imaginary grid points the sharper band is also checked:
    nu + 1/2 <= -Re z <= nu + zeta for zeta >= 1/2, and -Re z in [0, 1/2]
    for the planar monopole zeta = 0.  Violations beyond ``tol`` (relative
    to the bound scale) are collected, not raised.
    """
    nu = (d - 2) / 2.0
    s_grid = np.asarray(s_grid, dtype=complex)
    if np.any(s_grid.real < 0) or np.any(s_grid == 0):
        raise DomainError("grid must satisfy Re s >= 0, s != 0")
    records = []
    violations = []
    for m in range(m_max + 1):
        zeta = m + nu
        zvals = dtn_z(d, m, s_grid * R)
        for s, z in zip(np.ravel(s_grid), np.ravel(zvals)):
            neg_re = -z.real
            margin = neg_re - nu
            band = 0.0
            if s.real == 0.0:
                if zeta >= 0.5:
                    lo, hi = nu + 0.5, nu + zeta
                else:
                    lo, hi = 0.0, 0.5
                scale = max(1.0, abs(lo), abs(hi))
                band = max(lo - neg_re, neg_re - hi, 0.0) / scale
            rec = CoercivityRecord(d=d, m=m, s=complex(s), R=R, z=complex(z),
                                   margin=margin, band_violation=band)
            records.append(rec)
            if margin < -tol or band > tol:
                violations.append(rec)
    return CoercivityReport(records=tuple(records), violations=tuple(violations))


def half_plane_grid(mod_range=(1e-2, 1e3), n_mod=40, n_arg=40):
    """Log-modulus x linear-argument grid covering the right half-plane."""
    mods = np.geomspace(mod_range[0], mod_range[1], n_mod)
    args = np.linspace(-np.pi / 2, np.pi / 2, n_arg)
    s = mods[:, None] * np.exp(1j * args[None, :])
    # snap the boundary rays onto the exact imaginary axis
    s.real[np.abs(s.real) < 1e-300] = 0.0
    edge = np.isclose(np.abs(args), np.pi / 2)
    s[:, edge] = 1j * np.sign(args[edge])[None, :] * mods[:, None]
    return s.ravel()
