"""Exception hierarchy for the toolkit.

Every error that callers are expected to catch derives from QgError, so the
CLI can map exception classes to distinct exit codes.
"""

from __future__ import annotations


class QgError(Exception):
    """Base class for all toolkit errors."""


class GraphError(QgError):
    """Invalid graph construction or graph operation."""


class DuplicatePointError(GraphError):
    """Two coincident subdivision/cut points on one edge."""


class PointRangeError(GraphError):
    """Point coordinate outside [0, length] on its edge."""


class UnsupportedDegreeError(GraphError):
    """Operation requested at a vertex whose degree it does not support."""


class ConditionError(QgError):
    """Invalid vertex-condition assignment."""


class DomainViolationError(QgError):
    """Function outside the form domain (e.g. discontinuous where continuity is required)."""


class SolverError(QgError):
    """Numerical solver failure."""


class IncompleteSliceError(SolverError):
    """Eigenvalue search could not certify exhaustiveness of a window.

    Carries the eigenpairs found so far in ``found``.
    """

    def __init__(self, message: str, found=None):
        super().__init__(message)
        self.found = found if found is not None else []


class StaleEigenvalueError(SolverError):
    """Kernel extraction at a wave number that is no longer an eigenvalue."""


class DegenerateEdgeError(QgError):
    """Eigenfunction vanishes identically on an edge."""


class ResonanceError(QgError):
    """Robin-map spectral parameter hits the hard-condition spectrum."""


class PreconditionError(QgError):
    """Documented operation precondition violated by the inputs."""


class ParseError(QgError):
    """Malformed graph description document."""


class InconsistencyError(QgError):
    """Two independent computations of the same quantity disagree."""
