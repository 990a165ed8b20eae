"""Exception hierarchy shared by every layer of the package."""


class PointedFanError(Exception):
    """Base class for all package errors."""


class MalformedGraph(PointedFanError, ValueError):
    """Loops, parallel edges, or edges with undeclared endpoints."""


class NotDecomposable(PointedFanError):
    """No Henneberg sequence reaches the required base graph."""


class InvalidStep(PointedFanError, ValueError):
    """A Henneberg step does not apply to the given graph."""


class DegenerateConfiguration(PointedFanError):
    """Flat angle, antipodal endpoints, or a point touching an arc."""


class CrossingEdges(PointedFanError):
    """Two arcs of a tiling share an interior point."""


class NonSphericalComplex(PointedFanError):
    """Face data does not describe a cell decomposition of the sphere."""


class NonNiceTiling(PointedFanError):
    """Some tile is neither a pseudo-triangle nor a pseudo-di-gon."""


class FeasibleRegionExhausted(PointedFanError):
    """Sampling budget spent without finding a valid placement."""


class NotLamanPlusOne(PointedFanError):
    """The embedder only accepts Laman-plus-one graphs."""


class NonPlanarGraph(PointedFanError):
    """The graph has no crossing-free drawing on the sphere."""


class EmbeddingFailed(PointedFanError):
    """Geometric replay failed; ``step`` is the failing step index."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class NotASelfStress(PointedFanError):
    """Edge weights violate vertex equilibrium."""


class LiftInconsistent(PointedFanError):
    """Tile linears do not close up around a dual cycle."""


class NotNiceFan(PointedFanError):
    """Horn counting requires a nice pseudo-tiling as fan."""


class DegenerateJump(PointedFanError):
    """Support function is flat across an edge."""
