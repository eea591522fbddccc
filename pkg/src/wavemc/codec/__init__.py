"""Quantization, entropy coding and the frame-pair codec."""

from .errors import CodecError, MalformedTableError, StreamFormatError, TruncatedStreamError
from .huffman import entropy_decode, entropy_encode
from .mvcode import decode_mv, encode_mv
from .pipeline import (
    CodecConfig,
    EncodedStream,
    GopPayloads,
    decode_gop,
    decode_sequence,
    encode_gop,
    encode_sequence,
)
from .quant import QuantizedPlane, dequantize, quantize

__all__ = [
    "CodecConfig", "CodecError", "EncodedStream", "GopPayloads", "MalformedTableError",
    "QuantizedPlane", "StreamFormatError", "TruncatedStreamError", "decode_gop",
    "decode_mv", "decode_sequence", "dequantize", "encode_gop", "encode_mv",
    "encode_sequence", "entropy_decode", "entropy_encode", "quantize",
]
