"""Exception hierarchy shared by all sortnet apps."""


class SortnetError(Exception):
    """Base class for every domain error raised by the toolkit."""


class NetworkError(SortnetError):
    """Channel bounds, width mismatches and twisted comparators."""


class LayerConflictError(NetworkError):
    """A channel is used by more than one comparator of the same layer."""


class ExhaustiveLimitError(SortnetError):
    """The channel count exceeds the configured exhaustive evaluation limit."""


class EncodingError(SortnetError):
    pass


class SolverError(SortnetError):
    """Malformed CNF input or a failing solver process."""


class SolverIntegrityError(SolverError):
    """A reported model does not satisfy the instance."""


class CatalogError(SortnetError):
    pass
