"""Spherical-harmonic mode bookkeeping.

The angular dependence never materialises anywhere in this package: sources
and solutions are stored mode-by-mode against an orthonormal basis of
spherical harmonics on the unit sphere, so only eigenvalues, Bessel orders
and degeneracy counts are needed.  In two dimensions the signed Fourier
index q is folded onto m = |q| with degeneracy 2 for m >= 1, because the
radial problem depends on |q| only.
"""

import math
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class ModeIndex:
    """Dimension d >= 2 and harmonic degree m >= 0."""

    d: int
    m: int

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise DomainError(f"dimension must be an integer >= 2, got {self.d!r}")
        if int(self.m) != self.m or self.m < 0:
            raise DomainError(f"degree must be an integer >= 0, got {self.m!r}")


@dataclass(frozen=True)
class ModeSpectrum:
    """Derived spectral data for one mode.

    lambda_m   eigenvalue m(m+d-2) of the Laplace-Beltrami operator
    nu         (d-2)/2
    zeta       Bessel order m + nu
    degeneracy dimension of the degree-m harmonic space on S^{d-1}
    """

    lambda_m: float
    nu: float
    zeta: float
    degeneracy: int


def harmonic_space_dimension(d, m):
    """Number of linearly independent degree-m spherical harmonics on S^{d-1}."""
    if m == 0:
        return 1
    if d == 2:
        return 2
    # (2m + d - 2) / m * C(m + d - 3, m - 1), integer-valued
    return (2 * m + d - 2) * math.comb(m + d - 3, m - 1) // m


def spectrum(mode: ModeIndex) -> ModeSpectrum:
    """Eigenvalue, Bessel order and degeneracy for one mode."""
    d, m = mode.d, mode.m
    nu = (d - 2) / 2.0
    return ModeSpectrum(
        lambda_m=float(m * (m + d - 2)),
        nu=nu,
        zeta=m + nu,
        degeneracy=harmonic_space_dimension(d, m),
    )


@dataclass(frozen=True)
class TruncationPlan:
    """Modes retained for a modal sum, with the reported cutoff and tail."""

    modes: tuple
    m_max: int
    tail_estimate: float

    def __iter__(self):
        return iter(self.modes)

    def __len__(self):
        return len(self.modes)


def truncation_plan(d, source, tolerance) -> TruncationPlan:
    """Select the modes worth solving for a modally specified source.

    Sources carry finitely many modes, so the plan keeps every mode whose
    share of the squared source norm exceeds ``tolerance`` relative to the
    total; the dropped share is reported as the tail estimate.  Halving the
    tolerance can only grow the plan.
    """
    if tolerance <= 0:
        raise DomainError("tolerance must be positive")
    weights = {}
    for profile in source.profiles:
        w = 0.0
        for lo, hi, value in profile.cells:
            w += abs(value) ** 2 * (hi ** d - lo ** d) / d
        deg = harmonic_space_dimension(d, profile.m)
        weights[profile.m] = weights.get(profile.m, 0.0) + deg * w
    total = sum(weights.values())
    if total == 0.0:
        return TruncationPlan(modes=(), m_max=-1, tail_estimate=0.0)
    kept = sorted(m for m, w in weights.items() if w / total > tolerance)
    tail = sum(w for m, w in weights.items() if m not in kept) / total
    m_max = kept[-1] if kept else -1
    return TruncationPlan(
        modes=tuple(ModeIndex(d, m) for m in kept),
        m_max=m_max,
        tail_estimate=tail,
    )
