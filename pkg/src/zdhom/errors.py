"""Exception types shared across the package."""


class ZDHomError(Exception):
    """Base class for all errors raised by zdhom."""


class InvalidParameter(ZDHomError, ValueError):
    """A constructor or operation received an out-of-range or malformed argument."""


class TooLarge(ZDHomError):
    """A ring order cap or a face-count budget would be exceeded.

    ``limit`` is the cap that was hit; ``what`` names the resource.
    """

    def __init__(self, what, limit, message=None):
        self.what = what
        self.limit = limit
        super().__init__(message or f"{what} exceeds limit {limit}")


class SpecSyntaxError(ZDHomError, ValueError):
    """Ring-spec text could not be parsed. ``offset`` is a byte offset into the input."""

    def __init__(self, message, offset):
        self.offset = offset
        super().__init__(f"{message} (at offset {offset})")
