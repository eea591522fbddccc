"""Frame-pair encoder/decoder and the WMC1 stream container.

Each GOP is a reference frame ``I_2t`` coded intra on a Haar pyramid and a
target frame ``I_2t+1`` predicted from the reference by in-band motion
compensation on level-1 subbands. The prediction error's
approximation plane is decomposed further before coding.

Container layout (little endian)::

    "WMC1" u8 version u16 width u16 height u32 frame_count
    u8 block_size u8 precision_h u8 search_range f32 threshold u8 extra_levels
    per GOP: u8 gop_type (0 pair, 1 intra), then three u32-prefixed payloads
             (reference, motion vectors, residual)
"""

import logging
import struct
from dataclasses import dataclass, field, replace

import numpy as np

from .. import motion
from ..wavelet import DimensionError, Pyramid, SubbandSet, analyze, haar_forward, haar_inverse, pad_to_multiple, synthesize
from .errors import CodecError, StreamFormatError, TruncatedStreamError
from .huffman import entropy_decode, entropy_encode
from .mvcode import decode_mv, encode_mv
from .quant import dequantize, quantize

log = logging.getLogger(__name__)

MAGIC = b"WMC1"
VERSION = 1
HEADER = struct.Struct("<4sBHHIBBBfB")
GOP_PAIR = 0
GOP_INTRA = 1
REFERENCE_LEVELS = 3
# residual planes get one more fractional bit than the reference so the
# pixel-domain error stays within 1/4 and integer input survives T=0
RESIDUAL_EXTRA_BITS = 1

METHODS = ("inband", "band2band")


@dataclass
class CodecConfig:
    block_size: int = 8
    h: int = 2
    search_range: int = motion.DEFAULT_SEARCH_RANGE
    threshold: float = 0.0
    extra_levels: int = 2
    method: str = "inband"

    def __post_init__(self):
        if self.threshold < 0:
            raise ValueError("threshold must be non-negative")
        if self.extra_levels < 0:
            raise ValueError("extra_levels must be non-negative")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        if not 1 <= self.block_size <= 255 or not 1 <= self.search_range <= 255:
            raise ValueError("block_size and search_range must fit in one byte")
        motion.SearchParams(self.search_range, self.h, self.block_size)
        # the stream stores the threshold as f32; use exactly that value
        self.threshold = float(np.float32(self.threshold))

    @property
    def search(self):
        return motion.SearchParams(self.search_range, self.h, self.block_size)

    @property
    def alignment(self):
        return 1 << max(REFERENCE_LEVELS, 1 + self.extra_levels)


@dataclass
class GopPayloads:
    kind: int
    reference: bytes
    mv: bytes = b""
    residual: bytes = b""

    @property
    def bits(self):
        return 8 * (len(self.reference) + len(self.mv) + len(self.residual))


@dataclass
class EncodedGop:
    payloads: GopPayloads
    reconstruction: tuple
    field: object = None


@dataclass
class EncodedStream:
    width: int
    height: int
    frame_count: int
    config: CodecConfig
    gops: list
    reconstruction: list = field(default=None, repr=False)

    def to_bytes(self):
        cfg = self.config
        out = [HEADER.pack(MAGIC, VERSION, self.width, self.height, self.frame_count,
                           cfg.block_size, cfg.h, cfg.search_range, cfg.threshold,
                           cfg.extra_levels)]
        for g in self.gops:
            out.append(struct.pack("<B", g.kind))
            for p in (g.reference, g.mv, g.residual):
                out.append(struct.pack("<I", len(p)))
                out.append(p)
        return b"".join(out)

    @classmethod
    def from_bytes(cls, data):
        data = bytes(data)
        if len(data) < HEADER.size:
            raise TruncatedStreamError("stream shorter than its header")
        magic, version, w, h, n, bs, prec, rng, thr, extra = HEADER.unpack_from(data)
        if magic != MAGIC:
            raise StreamFormatError(f"bad magic {magic!r}")
        if version != VERSION:
            raise StreamFormatError(f"unsupported version {version}")
        try:
            cfg = CodecConfig(bs, prec, rng, thr, extra)
        except ValueError as e:
            raise StreamFormatError(f"invalid header configuration: {e}") from e
        off = HEADER.size
        gops = []
        expected = (n + 1) // 2
        for gi in range(expected):
            if off + 1 > len(data):
                raise TruncatedStreamError(f"stream ends before GOP {gi}")
            kind = data[off]
            off += 1
            if kind not in (GOP_PAIR, GOP_INTRA):
                raise StreamFormatError(f"GOP {gi}: unknown type {kind}")
            payloads = []
            for _ in range(3):
                if off + 4 > len(data):
                    raise TruncatedStreamError(f"GOP {gi}: truncated length prefix")
                (ln,) = struct.unpack_from("<I", data, off)
                off += 4
                if off + ln > len(data):
                    raise TruncatedStreamError(
                        f"GOP {gi}: payload of {ln} bytes exceeds the remaining {len(data) - off}"
                    )
                payloads.append(data[off:off + ln])
                off += ln
            gops.append(GopPayloads(kind, *payloads))
        if off != len(data):
            raise StreamFormatError(f"{len(data) - off} trailing bytes after last GOP")
        return cls(w, h, n, cfg, gops)


def _check_frame(frame):
    frame = np.asarray(frame, dtype=np.float64)
    if frame.ndim != 2 or frame.size == 0:
        raise DimensionError("frames must be non-empty 2-D arrays")
    return frame


def _pyramid_planes(pyr, first_level=1):
    """Planes with their scale exponents, finest first, approximation last."""
    out = []
    for i, d in enumerate(pyr.details):
        out.extend((p, first_level + i) for p in d)
    out.append((pyr.approx, first_level + pyr.levels - 1))
    return out


def _quantize_all(planes, threshold):
    return [quantize(p, threshold, k) for p, k in planes]


def _rebuild_pyramid(planes, levels):
    if len(planes) != 3 * levels + 1:
        raise StreamFormatError(f"expected {3 * levels + 1} planes, got {len(planes)}")
    arrs = [dequantize(q) for q in planes]
    details = [tuple(arrs[3 * i:3 * i + 3]) for i in range(levels)]
    return Pyramid(details, arrs[-1])


def _level1_bands(pyr):
    """Level-1 SubbandSet of a pyramid, synthesizing the deeper levels."""
    deeper = Pyramid(pyr.details[1:], pyr.approx)
    return SubbandSet(haar_inverse(deeper, crop=False), *pyr.details[0])


def _decode_reference(payload):
    pyr = _rebuild_pyramid(entropy_decode(payload), REFERENCE_LEVELS)
    return pyr


def _encode_residual(err, cfg):
    planes = [(err.a, 1), (err.b, 1), (err.c, 1)]
    if cfg.extra_levels:
        planes += _pyramid_planes(haar_forward(err.A, cfg.extra_levels, pad=False), 2)
    else:
        planes.append((err.A, 1))
    planes = [(p, k + RESIDUAL_EXTRA_BITS) for p, k in planes]
    return _quantize_all(planes, cfg.threshold)


def _decode_residual(qplanes, cfg):
    if len(qplanes) != 3 + 3 * cfg.extra_levels + 1:
        raise StreamFormatError(f"residual payload has {len(qplanes)} planes")
    arrs = [dequantize(q) for q in qplanes]
    a, b, c = arrs[:3]
    if cfg.extra_levels:
        rest = arrs[3:]
        pyr = Pyramid([tuple(rest[3 * i:3 * i + 3]) for i in range(cfg.extra_levels)], rest[-1])
        A = haar_inverse(pyr, crop=False)
    else:
        A = arrs[3]
    return SubbandSet(A, a, b, c)


def _encode_intra(frame, cfg):
    qplanes = _quantize_all(_pyramid_planes(haar_forward(frame, REFERENCE_LEVELS, pad=False)), cfg.threshold)
    payload = entropy_encode(qplanes)
    rec = _rebuild_pyramid(qplanes, REFERENCE_LEVELS)
    return payload, rec


def estimate_motion(ref_bands, target_bands, cfg):
    return motion.full_search(ref_bands, target_bands, cfg.search,
                              integer_samples=cfg.method == "band2band")


def encode_gop(ref, target, cfg, field=None):
    """Encode one reference/target pair (``target=None`` codes ``ref`` intra).

    Open loop: motion search and the error frame both use the original
    reference, then both are quantized. The returned reconstruction is what
    a decoder produces from the payloads. A precomputed ``field`` skips the
    search.
    """
    ref = _check_frame(ref)
    shape = ref.shape
    ref_p = pad_to_multiple(ref, cfg.alignment)
    ref_payload, ref_pyr = _encode_intra(ref_p, cfg)
    ref_rec = haar_inverse(ref_pyr, crop=False)
    if target is None:
        return EncodedGop(GopPayloads(GOP_INTRA, ref_payload), (ref_rec[:shape[0], :shape[1]],))

    target = _check_frame(target)
    if target.shape != shape:
        raise DimensionError(f"reference {shape} and target {target.shape} differ")
    tgt_bands = analyze(pad_to_multiple(target, cfg.alignment))
    ref_bands = analyze(ref_p)
    if field is None:
        field = estimate_motion(ref_bands, tgt_bands, cfg)
    qres = _encode_residual(motion.residual(tgt_bands, motion.compensate(ref_bands, field)), cfg)
    pred = motion.compensate(_level1_bands(ref_pyr), field)
    rec_bands = motion.add_back(pred, _decode_residual(qres, cfg))
    tgt_rec = synthesize(rec_bands)
    payloads = GopPayloads(GOP_PAIR, ref_payload, encode_mv(field), entropy_encode(qres))
    crop = (slice(0, shape[0]), slice(0, shape[1]))
    return EncodedGop(payloads, (ref_rec[crop], tgt_rec[crop]), field)


def decode_gop(payloads, cfg, shape):
    """Reconstruct the frames of one GOP; ``shape`` is the unpadded frame size."""
    try:
        return _decode_gop(payloads, cfg, shape)
    except CodecError:
        raise
    except (ValueError, IndexError) as e:
        raise StreamFormatError(f"corrupt GOP payload: {e}") from e


def _decode_gop(payloads, cfg, shape):
    crop = (slice(0, shape[0]), slice(0, shape[1]))
    ref_pyr = _decode_reference(payloads.reference)
    ref_rec = haar_inverse(ref_pyr, crop=False)
    padded = tuple(-(-d // cfg.alignment) * cfg.alignment for d in shape)
    if ref_rec.shape != padded:
        raise StreamFormatError(f"reference payload is {ref_rec.shape}, stream declares {padded}")
    if payloads.kind == GOP_INTRA:
        return (ref_rec[crop],)
    band_shape = (padded[0] // 2, padded[1] // 2)
    field = decode_mv(payloads.mv, band_shape, cfg.block_size, cfg.h)
    pred = motion.compensate(_level1_bands(ref_pyr), field)
    err = _decode_residual(entropy_decode(payloads.residual), cfg)
    if err.shape != pred.shape:
        raise StreamFormatError("residual planes do not match the subband size")
    tgt_rec = synthesize(motion.add_back(pred, err))
    return ref_rec[crop], tgt_rec[crop]


def encode_sequence(frames, cfg, fields=None):
    """Encode frames as (2t, 2t+1) pairs; an odd trailing frame is coded intra.

    ``fields`` may map GOP index to a precomputed MotionField; searched
    fields are written back into it.
    """
    frames = [_check_frame(f) for f in frames]
    if not frames:
        raise ValueError("cannot encode an empty sequence")
    shape = frames[0].shape
    if any(f.shape != shape for f in frames):
        raise DimensionError("all frames must share one size")
    if shape[0] > 0xFFFF or shape[1] > 0xFFFF:
        raise DimensionError("frame dimensions exceed 16 bits")
    gops = []
    recon = []
    for gi, t in enumerate(range(0, len(frames), 2)):
        target = frames[t + 1] if t + 1 < len(frames) else None
        pre = fields.get(gi) if fields is not None else None
        enc = encode_gop(frames[t], target, cfg, field=pre)
        if fields is not None and enc.field is not None:
            fields[gi] = enc.field
        gops.append(enc.payloads)
        recon.extend(enc.reconstruction)
        log.debug("GOP %d: %d bits", gi, enc.payloads.bits)
    return EncodedStream(shape[1], shape[0], len(frames), replace(cfg), gops, recon)


def decode_sequence(stream):
    if isinstance(stream, (bytes, bytearray, memoryview)):
        stream = EncodedStream.from_bytes(stream)
    shape = (stream.height, stream.width)
    frames = []
    for gi, g in enumerate(stream.gops):
        try:
            frames.extend(decode_gop(g, stream.config, shape))
        except CodecError as e:
            raise type(e)(f"GOP {gi}: {e}") from e
    if len(frames) != stream.frame_count:
        raise StreamFormatError(f"decoded {len(frames)} frames, header declares {stream.frame_count}")
    return frames
