"""Exception hierarchy for etfkit."""


class EtfError(ValueError):
    """Base class for all errors raised by etfkit."""


class NonUnimodular(EtfError):
    """An off-diagonal entry that should have modulus one does not."""


class NonHermitian(EtfError):
    """A matrix that should be self-adjoint is not."""


class DegenerateInput(EtfError):
    pass


class NotTight(EtfError):
    pass


class FullDimension(EtfError):
    """The Naimark complement of an n-vector frame in n dimensions is empty."""


class NotEquiangular(EtfError):
    pass


class OrthogonalSet(EtfError):
    """Signature matrices are undefined when all inner products vanish."""


class ZeroFirstRowEntry(EtfError):
    pass


class NotEtf(EtfError):
    pass


class ZeroTripleProduct(EtfError):
    pass


class IndexOutOfRange(EtfError):
    pass


class InvalidShape(EtfError):
    pass


class SearchBudgetExceeded(EtfError):
    pass


class TooLarge(EtfError):
    pass


class NotNormalized(EtfError):
    pass


class RootOrderNotFound(EtfError):
    pass


class SizeBudget(EtfError):
    pass
