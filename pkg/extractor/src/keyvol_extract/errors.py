class ExtractError(Exception):
    """Base class for extractor errors."""


class DecodeError(ExtractError):
    """Video could not be opened or decoded."""


class EncoderError(ExtractError):
    """Embedding model failed to load or run."""


class Unsupported(ExtractError):
    """Requested capability (e.g. text embedding) not offered by the encoder."""
