"""Exception hierarchy shared by every lagsel module."""


class LagselError(Exception):
    """Base class for all errors raised by lagsel."""


class PreconditionError(LagselError, ValueError):
    """An operation was called with inputs outside its contract."""


class InvalidConstraintIndex(PreconditionError):
    pass


class UnknownElementError(PreconditionError, KeyError):
    pass


class SizeCapExceeded(LagselError):
    """The universe is too large for an exhaustive solver."""

    def __init__(self, size, cap, what="exact solver"):
        self.size = size
        self.cap = cap
        super().__init__(
            f"{what}: universe of {size} elements exceeds the size cap of {cap}; "
            "use a heuristic oracle or raise LAGSEL_SIZE_CAP"
        )


class OracleContractError(LagselError):
    """An oracle violated a declared contract (lambda_max, ratio, determinism)."""


class SchemaError(LagselError):
    """An instance or report file does not match the expected schema."""

    def __init__(self, message, path="", line=None):
        self.path = path
        self.line = line
        where = path or "<root>"
        if line is not None:
            where = f"line {line}: {where}"
        super().__init__(f"{where}: {message}")
