class CodecError(Exception):
    """Base class for bitstream and payload errors."""


class TruncatedStreamError(CodecError):
    """The data ended before a complete structure could be read."""


class MalformedTableError(CodecError):
    """A Huffman code-length table is inconsistent."""


class StreamFormatError(CodecError):
    """Bad magic, version, or structural field in a stream or payload."""
