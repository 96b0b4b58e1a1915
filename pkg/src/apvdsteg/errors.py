"""Exception hierarchy shared by every module."""


class StegoError(Exception):
    """Base class for all errors raised by apvdsteg."""


class InvalidHeader(StegoError):
    """Header magic, version or checksum did not match.

    Usually means the wrong key, mode or range table, or an image that
    carries no payload at all.
    """


class Truncated(StegoError):
    """Fewer bits are available than the header (or the read) requires."""


class MalformedPayload(StegoError):
    """Declared payload length disagrees with the inner image header."""


class CapacityExceeded(StegoError):
    def __init__(self, needed, available):
        self.needed = needed
        self.available = available
        super().__init__(f"payload needs {needed} bits but cover holds {available}")


class UnusablePair(StegoError):
    """Pixel pair would fall off the [0, 255] boundary when widened."""


class SecretOutOfRange(StegoError):
    pass


class BoundaryOverflow(StegoError):
    pass


class DimensionMismatch(StegoError):
    pass


class UnsupportedFormat(StegoError):
    pass


class MalformedFile(StegoError):
    pass


class UnsupportedDepth(StegoError):
    pass


class ChannelMismatch(StegoError):
    pass
