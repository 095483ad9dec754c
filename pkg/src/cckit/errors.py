"""Error types raised across the package.

Every error carries a ``details`` dict with machine readable witnesses so
the CLI can dump a violation report without parsing messages.
"""


class CcError(Exception):
    def __init__(self, message="", **details):
        super().__init__(message or self.__class__.__name__)
        self.details = details
        self.violations = [self]

    @property
    def name(self):
        return self.__class__.__name__

    def to_dict(self):
        out = {"error": self.name, "message": str(self)}
        for k, v in self.details.items():
            out[k] = _plain(v)
        return out


def _plain(v):
    if isinstance(v, (set, frozenset)):
        try:
            return sorted(_plain(x) for x in v)
        except TypeError:
            return [_plain(x) for x in v]
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    return v


# axiom and input violations
class MissingVertexRank0(CcError): pass
class DuplicateCell(CcError): pass
class RankNotMonotone(CcError): pass
class IntersectionNotCell(CcError): pass
class RankGap(CcError): pass
class DiamondViolation(CcError): pass

# structural preconditions
class KOutOfRange(CcError): pass
class UnknownVertex(CcError): pass
class NotPure(CcError): pass
class CellNotFound(CcError): pass
class NotClosed(CcError): pass
class NotNonSingular(CcError): pass
class EmptySet(CcError): pass
class NotGraphBased(CcError): pass
class NotFull(CcError): pass

# subdivision / reconstruction
class NotABdivGraph(CcError): pass
class EdgeNotMapped(CcError): pass
class BadPath(CcError): pass
class IllegalMove(CcError): pass
class PreconditionFailed(CcError): pass
class FieldInconsistent(CcError): pass
class BadSeed(CcError): pass
class NonSingularCollection(CcError): pass
class PredicateFailed(CcError): pass

# shellings and cobordisms
class NoShellingCertificate(CcError): pass
class ValidationFailed(CcError): pass
class NotInB(CcError): pass

# causal layer
class CompositionFailed(CcError): pass
class NotOrthogonal(CcError): pass
class NotASliceSequence(CcError): pass
class NotASlice(CcError): pass
class CompatibilityFailed(CcError): pass
class NotConnecting(CcError): pass
class OverlapMismatch(CcError): pass
class StatesMismatch(CcError): pass
class NotAReduction(CcError): pass
class NotACollapse(CcError): pass

# toolkit
class ParseError(CcError): pass
class ValidationError(CcError): pass
class BadParams(CcError): pass
