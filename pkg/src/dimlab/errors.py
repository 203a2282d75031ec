"""Exception types shared across dimlab."""


class DimlabError(Exception):
    """Base class for all dimlab errors."""


class DimensionMismatch(DimlabError, ValueError):
    pass


class NotSublattice(DimlabError):
    pass


class IllFormedMap(DimlabError):
    pass


class NotAComplex(DimlabError):
    pass


class RankMismatch(DimlabError, ValueError):
    pass


class NotSubgroup(DimlabError):
    pass


class SectionNotAbelian(DimlabError):
    pass


class UnsupportedWindow(DimlabError):
    pass


class UnresolvedAtom(DimlabError, KeyError):
    pass


class DegreeOverflow(DimlabError):
    pass


class ResourceBound(DimlabError):
    pass


class PreconditionViolated(DimlabError):
    pass


class NotAGroup(DimlabError):
    pass


class ParseError(DimlabError, ValueError):
    pass
