"""Exception types raised across the package.

Input problems derive from :class:`InputError`; broken internal invariants
derive from :class:`InvariantViolation`.  The CLI maps the two families to
different exit codes.
"""

from __future__ import annotations


class PlanarVitError(Exception):
    """Base class for every error raised by planarvit."""


class InputError(PlanarVitError):
    """The caller supplied an invalid instance."""


class AsymmetricAdjacency(InputError):
    pass


class DisconnectedGraph(InputError):
    pass


class BadTerminals(InputError):
    pass


class DuplicateEdge(InputError):
    pass


class EmbeddingInconsistent(InputError):
    """The rotation system does not describe a planar embedding."""


class ParseError(InputError):
    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class CannotSatisfy(InputError):
    """A generator could not meet the requested parameters."""


class OracleCapExceeded(InputError):
    pass


class OnlySharedFace(PlanarVitError):
    """s and t see exactly one face, and it is the same one (max flow is 1)."""


class InvariantViolation(PlanarVitError):
    """An internal consistency check failed; the result cannot be trusted."""


class WedgeInconsistent(InvariantViolation):
    pass


class PairUnreachable(InvariantViolation):
    pass


class NoTightPath(InvariantViolation):
    pass


class FamilyInvariantViolation(InvariantViolation):
    def __init__(self, message: str, report=None) -> None:
        self.report = report
        super().__init__(message)


class LabelInconsistency(InvariantViolation):
    pass


class SplitInconsistency(InvariantViolation):
    pass


class SliceInvariantViolation(InvariantViolation):
    pass


class VertexNotInForest(InvariantViolation):
    pass


class ContractedEdgeQueried(InvariantViolation):
    pass


class NotDegenerate(InvariantViolation):
    """The MF=1 route was requested for an instance where it does not apply."""
