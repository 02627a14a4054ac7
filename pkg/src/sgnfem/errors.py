"""Exception types raised by the solver.

Everything derives from SgnError so callers can catch solver failures
with a single except clause. Numerical failures (a physically invalid
state discovered mid-run) derive from NumericalFailure and carry the
simulation time at which they occurred when known.
"""


class SgnError(Exception):
    """Base class for all errors raised by this package."""


class BadInput(SgnError):
    """Generic invalid argument (nonpositive value, wrong length, ...)."""


class NonPositiveLength(BadInput):
    """Interval [a, b] with b <= a."""


class TooFewElements(BadInput):
    """Mesh with fewer than 2 elements."""


class UnsupportedOrder(BadInput):
    """Quadrature node count outside the supported range."""


class OutOfDomain(BadInput):
    """Evaluation point outside [a, b]."""


class BadIndex(BadInput):
    """Degree-of-freedom index outside the space."""


class UnsupportedFamily(BadInput):
    """Operation not defined for this basis family."""


class DerivUnsupported(BadInput):
    """Requested derivative order not available for this family."""


class NonMonotoneBreakpoints(BadInput):
    """Bathymetry breakpoints whose x values do not strictly increase."""


class RadiusTooLarge(BadInput):
    """Kink smoothing radius at least half the shortest segment."""


class UnknownPreset(BadInput):
    """Unrecognized bathymetry preset name."""


class UnknownScenario(BadInput):
    """Unrecognized scenario name."""


class ZeroNormalizer(BadInput):
    """Relative error norm requested against a (near-)zero exact field."""


class DegenerateFit(BadInput):
    """Power-law fit on degenerate data (too few or collinear-degenerate points)."""


class NoCrest(SgnError):
    """Crest tracking on a field with no interior maximum."""


class MeshMismatch(BadInput):
    """Two runs compared on incompatible meshes."""


class NumericalFailure(SgnError):
    """A run reached a physically or numerically invalid state."""

    def __init__(self, message: str, t: float | None = None):
        if t is not None:
            message = f"{message} (at t = {t:.6g})"
        super().__init__(message)
        self.t = t


class NotPositiveDefinite(NumericalFailure):
    """Cholesky factorization hit a nonpositive pivot.

    For the velocity system matrix this signals an invalid physical
    state: depth collapse or a violently negative bottom-coupling
    bracket term.
    """


class DepthCollapse(NumericalFailure):
    """Total water depth fell below the configured floor."""
