"""Exception hierarchy shared by all twistlab modules."""


class TwistlabError(Exception):
    """Base class for all twistlab errors."""


class DimensionMismatch(TwistlabError):
    pass


class NotHermitian(TwistlabError):
    pass


class BackendMismatch(TwistlabError):
    """Operands live over different (or incompatible) group backends."""


class NotFinite(TwistlabError):
    """An exact finite-group computation was requested on an infinite backend."""


class Unsupported(TwistlabError):
    """The backend does not support the requested operation."""


class MemoryBudgetExceeded(TwistlabError):
    """A ball / support grew past the configured basis-element cap."""

    def __init__(self, needed, cap):
        super().__init__(f"needed {needed} basis elements, cap is {cap}")
        self.needed = needed
        self.cap = cap


class InvalidGroupTable(TwistlabError):
    pass


class InvalidFactorSet(TwistlabError):
    """Factor set fails the nonabelian cocycle condition; carries a witness triple."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InvalidAction(TwistlabError):
    """Action value is not an automorphism (or is incompatible with the factor set)."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotUnitModulus(TwistlabError):
    pass


class NotASubgroup(TwistlabError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotPermuting(TwistlabError):
    """An automorphism failed to permute the minimal central projections."""


class DegenerateAfterRetries(TwistlabError):
    """Random central elements kept producing merged spectral clusters."""
