"""Exception types shared across the package."""


class CayleyHamError(Exception):
    """Base class for all package errors."""


class UnsupportedOrderError(CayleyHamError):
    """The group order is not of the shape the constructor supports."""


class NotGeneratingError(CayleyHamError):
    """The given set does not generate the group."""


class NotConnectedError(CayleyHamError):
    """The Cayley graph handed to the search is disconnected."""


class PreconditionError(CayleyHamError):
    """A stated hypothesis of an operation failed its runtime check."""


class StructureError(CayleyHamError):
    """Generator normalization found a shape the theory rules out."""


class SizeGuardError(CayleyHamError):
    """An input exceeds a hard size guard."""


class OracleTimeoutError(CayleyHamError):
    """Backtracking search exhausted its time budget (not a nonexistence proof)."""


class TheoremViolationError(CayleyHamError):
    """A step the underlying theorem guarantees cannot fail did fail.

    This always signals an implementation bug, never a property of the input.
    """


class RoleSwapLoopError(CayleyHamError):
    """The generator role swap failed to reach an earlier subcase."""
