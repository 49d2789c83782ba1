class SublinError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 1


class ConfigurationError(SublinError):
    """Malformed input: bad polynomial, bad scene, unsupported resolution."""

    exit_code = 2


class DomainError(SublinError):
    """An operation was asked about an empty or degenerate set."""

    exit_code = 2


class PreconditionError(SublinError):
    """A documented precondition of an operation does not hold."""

    exit_code = 2


class InconclusiveError(SublinError):
    """The grid cannot decide the question asked (e.g. a region outside a catalog)."""

    exit_code = 2


class CertificateError(SublinError):
    """A constructive step produced output that fails its own certificate."""

    def __init__(self, message, *, step=None, witness=None):
        super().__init__(message)
        self.step = step
        self.witness = witness
