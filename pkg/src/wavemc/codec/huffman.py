"""Canonical Huffman coding of quantized planes.

Planes are flattened in order and turned into tokens. A nonzero value ``v``
with magnitude class ``k = bit_length(|v|)`` is symbol ``2(k-1) + (v < 0)``
followed by the ``k - 1`` low bits of ``|v|``. A run of ``L`` zeros with
class ``r = bit_length(L)`` is symbol ``32 + r - 1`` followed by the
``r - 1`` low bits of ``L``.

Payload layout::

    u16 plane count, then per plane: u16 rows, u16 cols, u8 scale_log2
    u32 token count
    u8  table size N, then N x (6-bit symbol, 5-bit code length)
    token bits, MSB first, zero padded to a byte
"""

import heapq
import struct

import numpy as np

from .bits import BitReader, BitWriter
from .errors import MalformedTableError, StreamFormatError, TruncatedStreamError
from .quant import QuantizedPlane

RUN_BASE = 32
N_SYMBOLS = 64
MAX_CODE_LENGTH = 24


def tokenize(flat):
    """Return ``(symbols, extra_values, extra_lengths)`` for a flat int array."""
    flat = np.asarray(flat, dtype=np.int64)
    nz = np.flatnonzero(flat)
    prev = np.concatenate(([-1], nz))
    runs = np.diff(np.concatenate((prev, [flat.size])))[:-1] - 1
    tail = flat.size - 1 - (nz[-1] if nz.size else -1)

    vals = flat[nz]
    mag = np.abs(vals)
    vclass = _bit_length(mag)
    vsym = 2 * (vclass - 1) + (vals < 0)
    vextra = mag - (1 << np.maximum(vclass - 1, 0))
    vlen = vclass - 1

    rclass = _bit_length(runs)
    rsym = RUN_BASE + rclass - 1
    rextra = runs - (1 << np.maximum(rclass - 1, 0))
    rlen = np.maximum(rclass - 1, 0)

    # interleave: optional run token, then value token, for each nonzero
    n = nz.size
    sym = np.empty(2 * n, dtype=np.int64)
    ext = np.empty(2 * n, dtype=np.int64)
    eln = np.empty(2 * n, dtype=np.int64)
    sym[0::2], ext[0::2], eln[0::2] = rsym, rextra, rlen
    sym[1::2], ext[1::2], eln[1::2] = vsym, vextra, vlen
    keep = np.ones(2 * n, dtype=bool)
    keep[0::2] = runs > 0
    sym, ext, eln = sym[keep], ext[keep], eln[keep]
    if tail > 0:
        c = int(tail).bit_length()
        sym = np.append(sym, RUN_BASE + c - 1)
        ext = np.append(ext, tail - (1 << (c - 1)))
        eln = np.append(eln, c - 1)
    return sym, ext, eln


def _bit_length(a):
    # frexp exponent equals bit_length for integers below 2**53
    return np.frexp(np.asarray(a, dtype=np.float64))[1].astype(np.int64)


def code_lengths(counts):
    """Huffman code lengths for ``{symbol: count}``; deterministic, length-limited."""
    counts = {s: c for s, c in counts.items() if c > 0}
    if not counts:
        return {}
    if len(counts) == 1:
        return {next(iter(counts)): 1}
    while True:
        lengths = _huffman_lengths(counts)
        if max(lengths.values()) <= MAX_CODE_LENGTH:
            return lengths
        counts = {s: max(1, c >> 1) for s, c in counts.items()}


def _huffman_lengths(counts):
    heap = [(c, s, (s,)) for s, c in sorted(counts.items())]
    heapq.heapify(heap)
    lengths = dict.fromkeys(counts, 0)
    while len(heap) > 1:
        c1, k1, g1 = heapq.heappop(heap)
        c2, k2, g2 = heapq.heappop(heap)
        for s in g1 + g2:
            lengths[s] += 1
        heapq.heappush(heap, (c1 + c2, min(k1, k2), g1 + g2))
    return lengths


def canonical_codes(lengths):
    """``{symbol: (code, length)}`` assigned in (length, symbol) order."""
    codes = {}
    code = 0
    prev_len = 0
    for sym, ln in sorted(lengths.items(), key=lambda kv: (kv[1], kv[0])):
        code <<= ln - prev_len
        codes[sym] = (code, ln)
        code += 1
        prev_len = ln
    return codes


def _check_table(lengths):
    if any(not 1 <= ln <= 31 for ln in lengths.values()):
        raise MalformedTableError("code length out of range")
    kraft = sum(2.0 ** -ln for ln in lengths.values())
    if kraft > 1.0:
        raise MalformedTableError(f"code lengths over-subscribe the code space (Kraft sum {kraft})")


class _Decoder:
    def __init__(self, lengths):
        _check_table(lengths)
        self.max_len = max(lengths.values())
        by_len = {}
        for sym, ln in sorted(lengths.items(), key=lambda kv: (kv[1], kv[0])):
            by_len.setdefault(ln, []).append(sym)
        self.first = {}
        self.symbols = by_len
        code = 0
        for ln in range(1, self.max_len + 1):
            self.first[ln] = code
            code = (code + len(by_len.get(ln, ()))) << 1

    def read(self, reader):
        code = 0
        for ln in range(1, self.max_len + 1):
            code = (code << 1) | reader.read_bit()
            syms = self.symbols.get(ln)
            if syms is not None:
                idx = code - self.first[ln]
                if 0 <= idx < len(syms):
                    return syms[idx]
        raise MalformedTableError(f"no codeword matches at bit offset {reader.pos}")


def entropy_encode(planes):
    """Serialize a list of QuantizedPlane into one Huffman-coded payload."""
    head = [struct.pack("<H", len(planes))]
    for p in planes:
        rows, cols = p.shape
        head.append(struct.pack("<HHB", rows, cols, p.scale_log2))
    flat = np.concatenate([p.values.ravel() for p in planes]) if planes else np.zeros(0, np.int64)
    sym, ext, eln = tokenize(flat)
    head.append(struct.pack("<I", sym.size))

    counts = dict(zip(*np.unique(sym, return_counts=True)))
    lengths = code_lengths({int(s): int(c) for s, c in counts.items()})
    codes = canonical_codes(lengths)

    w = BitWriter()
    w.write(len(lengths), 8)
    for s in sorted(lengths):
        w.write(s, 6)
        w.write(lengths[s], 5)
    table = np.zeros((N_SYMBOLS, 2), dtype=np.int64)
    for s, (code, ln) in codes.items():
        table[s] = (code, ln)
    word = (table[sym, 0] << eln) | ext
    wlen = table[sym, 1] + eln
    w.write_bits("".join(map(_fmt, word.tolist(), wlen.tolist())))
    return b"".join(head) + w.getvalue()


def _fmt(v, n):
    return format(v, f"0{n}b")


def entropy_decode(data):
    """Inverse of :func:`entropy_encode`."""
    data = bytes(data)
    off = 0
    try:
        (n_planes,) = struct.unpack_from("<H", data, off)
        off += 2
        shapes = []
        for _ in range(n_planes):
            rows, cols, scale = struct.unpack_from("<HHB", data, off)
            off += 5
            shapes.append(((rows, cols), scale))
        (n_tokens,) = struct.unpack_from("<I", data, off)
        off += 4
    except struct.error as e:
        raise TruncatedStreamError(f"payload header truncated at byte {off}") from e

    r = BitReader(data[off:])
    n_table = r.read(8)
    if n_table > N_SYMBOLS:
        raise MalformedTableError(f"table declares {n_table} symbols")
    lengths = {}
    for _ in range(n_table):
        s = r.read(6)
        ln = r.read(5)
        if s in lengths:
            raise MalformedTableError(f"symbol {s} listed twice")
        lengths[s] = ln
    total = sum(rows * cols for (rows, cols), _ in shapes)
    flat = np.zeros(total, dtype=np.int64)
    if n_tokens:
        if not lengths:
            raise MalformedTableError("tokens present but code table is empty")
        dec = _Decoder(lengths)
        pos = 0
        for _ in range(n_tokens):
            s = dec.read(r)
            if s >= RUN_BASE:
                c = s - RUN_BASE + 1
                pos += (1 << (c - 1)) | r.read(c - 1)
            else:
                c = s // 2 + 1
                mag = (1 << (c - 1)) | r.read(c - 1)
                if pos >= total:
                    raise StreamFormatError("decoded values overflow the declared planes")
                flat[pos] = -mag if s & 1 else mag
                pos += 1
        if pos > total:
            raise StreamFormatError("decoded zero runs overflow the declared planes")
    out = []
    i = 0
    for (rows, cols), scale in shapes:
        n = rows * cols
        out.append(QuantizedPlane(flat[i:i + n].reshape(rows, cols).astype(np.int32), scale))
        i += n
    return out
