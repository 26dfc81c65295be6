"""Layer-stack configuration, validation and per-layer complex wavenumbers.

A stack is an odd number n >= 3 of concentric regions: ball, annuli, and an
unbounded exterior that the computation truncates at ``r_trunc``.  Material
constants alternate in sign (positive in odd regions, negative in even
ones), and a small dissipation ``sigma`` perturbs the even-region
permittivity by i*sigma/omega while adding a volumetric i*sigma term in
every region.
"""

import cmath
import json
from dataclasses import dataclass

from .errors import StackValidationError, DomainError


@dataclass(frozen=True)
class LayerStack:
    """Immutable scene description.

    radii are the n-1 interface radii, strictly increasing; layer i
    (1-based) occupies (radii[i-2], radii[i-1]) with the conventions
    layer 1 = ball of radius radii[0] and layer n truncated at r_trunc.
    ``r_src`` is the radius of the ball containing the source support.

    Construction does not enforce the sign pattern: ``validate`` does, and
    ``parse_stack`` always calls it.  Building unvalidated stacks directly
    is how test oracles realise degenerate scenes (e.g. a homogeneous
    medium written as three equal layers).
    """

    d: int
    radii: tuple
    eps: tuple
    mu: tuple
    omega: float
    r_trunc: float
    r_src: float = 0.0

    @property
    def n_layers(self):
        return len(self.eps)

    def layer_bounds(self, i):
        """Radial extent (lo, hi) of 1-based layer i; layer n is truncated."""
        lo = 0.0 if i == 1 else self.radii[i - 2]
        hi = self.r_trunc if i == self.n_layers else self.radii[i - 1]
        return lo, hi

    def layer_of(self, r):
        """1-based index of the layer containing radius r (ties go outward)."""
        for i, ri in enumerate(self.radii):
            if r < ri:
                return i + 1
        return self.n_layers

    def validate(self):
        n = self.n_layers
        if n < 3 or n % 2 == 0:
            raise StackValidationError(f"need an odd number >= 3 of layers, got {n}")
        if len(self.mu) != n or len(self.radii) != n - 1:
            raise StackValidationError("radii/eps/mu lengths are inconsistent")
        if any(r <= 0 for r in self.radii) or any(
            self.radii[i] >= self.radii[i + 1] for i in range(n - 2)
        ):
            raise StackValidationError("interface radii must be positive and strictly increasing")
        for i in range(n):
            want_positive = (i % 2 == 0)  # 1-based odd layer
            for name, val in (("eps", self.eps[i]), ("mu", self.mu[i])):
                if want_positive and val <= 0:
                    raise StackValidationError(
                        f"{name}[{i + 1}] must be positive in odd layers, got {val}")
                if not want_positive and val >= 0:
                    raise StackValidationError(
                        f"{name}[{i + 1}] must be negative in even layers, got {val}")
        for i in range(n - 1):
            if self.eps[i + 1] != 0 and self.eps[i] / self.eps[i + 1] == -1.0:
                raise StackValidationError(f"contrast ratio -1 at interface {i + 1}")
        if self.omega <= 0:
            raise StackValidationError(f"omega must be positive, got {self.omega}")
        if self.r_src < 0:
            raise StackValidationError("source radius must be nonnegative")
        if self.r_trunc <= max(self.radii[-1], self.r_src):
            raise StackValidationError(
                "truncation radius must exceed both the outermost interface "
                f"and the source radius, got {self.r_trunc}")
        return self


@dataclass(frozen=True)
class EffectiveLayer:
    """Complex material data of one layer at dissipation sigma.

    eps_sigma is the (possibly complex) permittivity; kappa is the complex
    wavenumber with kappa^2 = eps_sigma * (omega^2 mu + i sigma), taken on
    the branch with Im kappa >= 0.
    """

    index: int
    eps_sigma: complex
    mu: float
    kappa: complex

    @property
    def kappa_sq(self):
        return self.kappa * self.kappa


def effective_layer(stack: LayerStack, sigma, layer_index) -> EffectiveLayer:
    """Material data of 1-based ``layer_index`` at dissipation ``sigma``."""
    if sigma < 0:
        raise DomainError("sigma must be nonnegative")
    n = stack.n_layers
    if not 1 <= layer_index <= n:
        raise DomainError(f"layer index {layer_index} outside 1..{n}")
    eps = stack.eps[layer_index - 1]
    mu = stack.mu[layer_index - 1]
    if layer_index % 2 == 0:
        eps_sigma = complex(eps, sigma / stack.omega)
    else:
        eps_sigma = complex(eps)
    kappa_sq = eps_sigma * complex(stack.omega**2 * mu, sigma)
    kappa = cmath.sqrt(kappa_sq)
    if kappa.imag < 0:
        kappa = -kappa
    return EffectiveLayer(index=layer_index, eps_sigma=eps_sigma, mu=mu, kappa=kappa)


def exterior_wavenumber(stack: LayerStack, sigma) -> complex:
    """kappa of the outermost layer; drives the radiating closure."""
    return effective_layer(stack, sigma, stack.n_layers).kappa


def dtn_spectral_argument(stack: LayerStack, sigma) -> complex:
    """The complex parameter s = -i*kappa_exterior fed to the DtN closure."""
    return -1j * exterior_wavenumber(stack, sigma)


# -- configuration documents --------------------------------------------------

def parse_stack(document) -> LayerStack:
    """Build and validate a LayerStack from a configuration mapping.

    Expected fields: dimension, radii (array), eps, mu (arrays of equal odd
    length), omega, truncation_radius, and optionally source (whose cell
    extents determine the source support radius).
    """
    if not isinstance(document, dict):
        raise StackValidationError("configuration document must be a mapping")
    required = ["dimension", "radii", "eps", "mu", "omega", "truncation_radius"]
    missing = [f for f in required if f not in document]
    if missing:
        raise StackValidationError(f"missing configuration fields: {', '.join(missing)}")
    try:
        d = int(document["dimension"])
        radii = tuple(float(r) for r in document["radii"])
        eps = tuple(float(e) for e in document["eps"])
        mu = tuple(float(m) for m in document["mu"])
        omega = float(document["omega"])
        r_trunc = float(document["truncation_radius"])
    except (TypeError, ValueError) as exc:
        raise StackValidationError(f"malformed numeric field: {exc}") from exc
    if d < 2:
        raise StackValidationError(f"dimension must be >= 2, got {d}")
    r_src = 0.0
    for entry in document.get("source", []) or []:
        for cell in entry.get("cells", []):
            r_src = max(r_src, float(cell["r_hi"]))
    stack = LayerStack(d=d, radii=radii, eps=eps, mu=mu, omega=omega,
                       r_trunc=r_trunc, r_src=r_src)
    stack.validate()
    return stack


def stack_to_document(stack: LayerStack, source_entries=None) -> dict:
    """Inverse of parse_stack; numeric fields round-trip bit-exactly."""
    doc = {
        "dimension": stack.d,
        "radii": list(stack.radii),
        "eps": list(stack.eps),
        "mu": list(stack.mu),
        "omega": stack.omega,
        "truncation_radius": stack.r_trunc,
    }
    if source_entries is not None:
        doc["source"] = source_entries
    return doc


def load_stack(path):
    """Read a JSON stack document from disk."""
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
