"""Motion vectors: raster-order differential prediction plus exp-Golomb."""

import numpy as np

from ..motion import MotionField, grid_shape
from .bits import BitReader, BitWriter, index_to_signed, signed_to_index


def mv_symbols(field):
    """Mapped non-negative symbols, ``(dx, dy)`` interleaved in raster order."""
    flat = field.vectors.reshape(-1, 2)
    prev = np.vstack(([0, 0], flat[:-1])) if len(flat) else flat
    return [signed_to_index(int(v)) for v in (flat - prev).ravel()]


def encode_mv(field):
    w = BitWriter()
    for u in mv_symbols(field):
        w.write_ue(u)
    return w.getvalue()


def decode_mv(data, band_shape, block_size, h):
    rows, cols = grid_shape(band_shape, block_size)
    r = BitReader(data)
    diffs = [index_to_signed(r.read_ue()) for _ in range(rows * cols * 2)]
    vectors = np.cumsum(np.array(diffs, dtype=np.int64).reshape(-1, 2), axis=0)
    return MotionField(block_size, h, tuple(band_shape), vectors.reshape(rows, cols, 2))
