"""Video frame sampling and embedding extraction front end for keyvol."""

from .errors import DecodeError, EncoderError, ExtractError, Unsupported
from .extract import ExtractorConfig, embed_query, extract

__all__ = [
    "ExtractorConfig", "extract", "embed_query",
    "ExtractError", "DecodeError", "EncoderError", "Unsupported",
]
