"""Exception taxonomy shared across the package."""


class KeyvolError(Exception):
    """Base class for all package errors."""


class InvalidInput(KeyvolError):
    """Input data violates a precondition (non-finite values, zero rows, ...)."""


class InvalidRank(KeyvolError):
    """Requested SVD rank is out of range."""


class RankDeficient(KeyvolError):
    """Matrix has lower numerical rank than the operation requires."""


class InvalidPivot(KeyvolError):
    """Attempt to append a row index that is already selected."""


class InvalidCount(KeyvolError):
    """Requested sample count is out of range."""


class InvalidChunking(KeyvolError):
    """Fewer rows than chunks."""


class FormatError(KeyvolError):
    """Malformed file: bad magic, bad header, truncated payload, ragged CSV."""
