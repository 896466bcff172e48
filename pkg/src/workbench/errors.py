"""Exception hierarchy shared by all workbench modules."""


class WorkbenchError(Exception):
    """Base class for every error raised by the workbench."""


class ParseError(WorkbenchError, ValueError):
    """Malformed .rot text or planar_code bytes."""


class InvariantError(WorkbenchError, ValueError):
    """A rotation system that is not a simple connected plane graph."""


class LimitError(WorkbenchError):
    """A request exceeds the desk-scale guard of an exhaustive routine."""


class NotACycle(WorkbenchError, ValueError):
    pass


class NotA6Cycle(NotACycle):
    pass


class NoOuterCycle(WorkbenchError):
    pass


class BadOuterLength(WorkbenchError, ValueError):
    pass


class PartialColoring(WorkbenchError, ValueError):
    pass


class InvalidPrecoloring(WorkbenchError, ValueError):
    pass


class Uncolored(WorkbenchError, ValueError):
    pass


class TooManyColoredNeighbors(WorkbenchError, ValueError):
    pass


class PreconditionError(WorkbenchError, ValueError):
    pass


class IndexMismatch(WorkbenchError, ValueError):
    """A StructureIndex was built for a different graph."""


class AuditMismatch(WorkbenchError):
    """The outer-cycle balance disagrees with the ledger: a rule bug."""
