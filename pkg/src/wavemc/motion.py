"""Block matching directly on level-1 Haar subbands.

Motion vectors are integers in units of ``2**-h`` pixels and say how far
the reference content moves to predict the target: the prediction for a
target block is the same block of the reference translated by the vector.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from .inband_shift import DyadicShift, ShiftSpec, decompose_shift, subpixel_shift, apply_inband_shift
from .wavelet import SubbandSet, DimensionError

log = logging.getLogger(__name__)

DEFAULT_SEARCH_RANGE = 15


@dataclass(frozen=True)
class MotionVector:
    dx: int
    dy: int
    h: int = 2

    @property
    def pixels(self):
        k = 1 << self.h
        return (self.dx / k, self.dy / k)

    def spec(self):
        dx, sub_x = decompose_shift(DyadicShift(self.dx, self.h).reduced())
        dy, sub_y = decompose_shift(DyadicShift(self.dy, self.h).reduced())
        return ShiftSpec(dx, dy, sub_x, sub_y)


@dataclass
class SearchParams:
    search_range: int = DEFAULT_SEARCH_RANGE
    h: int = 2
    block_size: int = 8

    def __post_init__(self):
        if self.search_range < 1:
            raise ValueError("search_range must be at least 1")
        if not 0 <= self.h <= 3:
            raise ValueError("precision h must be in 0..3")
        if self.block_size < 1:
            raise ValueError("block_size must be positive")


@dataclass
class MotionField:
    """One vector per block; ``vectors[r, c] = (dx, dy)`` in ``2**-h`` pel."""

    block_size: int
    h: int
    band_shape: tuple
    vectors: np.ndarray
    costs: np.ndarray = field(default=None, repr=False)
    candidates_evaluated: int = 0

    @classmethod
    def zeros(cls, band_shape, block_size, h):
        rows, cols = grid_shape(band_shape, block_size)
        return cls(block_size, h, tuple(band_shape), np.zeros((rows, cols, 2), dtype=np.int64))

    @property
    def grid(self):
        return self.vectors.shape[:2]

    def __getitem__(self, rc):
        dx, dy = self.vectors[rc]
        return MotionVector(int(dx), int(dy), self.h)

    def blocks(self):
        """Yield ``((row, col), region)`` for every block in raster order."""
        rows, cols = self.grid
        for r in range(rows):
            for c in range(cols):
                yield (r, c), block_region(self.band_shape, self.block_size, r, c)

    def __eq__(self, other):
        if not isinstance(other, MotionField):
            return NotImplemented
        return (
            self.block_size == other.block_size
            and self.h == other.h
            and tuple(self.band_shape) == tuple(other.band_shape)
            and np.array_equal(self.vectors, other.vectors)
        )


def grid_shape(band_shape, block_size):
    m, n = band_shape
    return (-(-m // block_size), -(-n // block_size))


def block_region(band_shape, block_size, r, c):
    """Slices of block ``(r, c)``; edge blocks shrink to fit."""
    m, n = band_shape
    y0, x0 = r * block_size, c * block_size
    if y0 >= m or x0 >= n or r < 0 or c < 0:
        raise IndexError(f"block ({r}, {c}) outside {m}x{n} subbands")
    return (slice(y0, min(y0 + block_size, m)), slice(x0, min(x0 + block_size, n)))


def _check_same(ref_bands, target_bands):
    if ref_bands.shape != target_bands.shape:
        raise DimensionError(
            f"reference {ref_bands.shape} and target {target_bands.shape} subbands differ"
        )


def block_cost(ref_bands, target_bands, region, candidate):
    """Sum of squared differences over all four subbands inside ``region``."""
    _check_same(ref_bands, target_bands)
    m, n = target_bands.shape
    rs, cs = region
    if rs.start < 0 or cs.start < 0 or rs.stop > m or cs.stop > n:
        raise IndexError("block outside subband bounds")
    shifted = apply_inband_shift(ref_bands, candidate.spec())
    total = 0.0
    for p, q in zip(target_bands.planes(), shifted.planes()):
        d = p[region] - q[region]
        total += float(np.sum(d * d))
    return total


def candidate_grid(search_range, h, integer_samples=False):
    """Candidates ``(dx, dy)`` in ``2**-h`` pel, in scan priority order.

    Order is by ``|dx| + |dy|`` and then raster (``dy`` major), so a strict
    ``<`` update keeps the tie-break rule.
    """
    unit = 1 << h
    lim = search_range * unit
    step = 2 * unit if integer_samples else 1
    ks = np.arange(-(lim // step) * step, lim + 1, step)
    dy, dx = np.meshgrid(ks, ks, indexing="ij")
    dx = dx.ravel()
    dy = dy.ravel()
    order = np.lexsort((dx, dy, np.abs(dx) + np.abs(dy)))
    return list(zip(dx[order].tolist(), dy[order].tolist()))


def _block_sums(err, block_size):
    m, n = err.shape
    ry = np.arange(0, m, block_size)
    rx = np.arange(0, n, block_size)
    return np.add.reduceat(np.add.reduceat(err, ry, axis=0), rx, axis=1)


def full_search(ref_bands, target_bands, params, integer_samples=False):
    """Exhaustive block matching over the ``2**-h`` grid within ``+-search_range``.

    Each distinct subpixel residual is applied to the whole reference once;
    every candidate is then a circular roll of one of those cached sets.
    """
    _check_same(ref_bands, target_bands)
    h = params.h
    bs = params.block_size
    cands = candidate_grid(params.search_range, h, integer_samples)

    groups = {}
    for rank, (cx, cy) in enumerate(cands):
        spec = MotionVector(cx, cy, h).spec()
        key = (spec.sub_x, spec.sub_y)
        groups.setdefault(key, []).append((rank, spec.dx, spec.dy))

    m, n = target_bands.shape
    rows, cols = grid_shape((m, n), bs)
    best_cost = np.full((rows, cols), np.inf)
    best_rank = np.full((rows, cols), len(cands), dtype=np.int64)
    targets = target_bands.planes()

    for (sub_x, sub_y), members in groups.items():
        base = subpixel_shift(ref_bands, sub_x, sub_y).planes()
        for rank, dx, dy in members:
            err = np.zeros((m, n))
            for t, p in zip(targets, base):
                d = t - np.roll(p, (dy, dx), axis=(0, 1))
                err += d * d
            cost = _block_sums(err, bs)
            better = (cost < best_cost) | ((cost == best_cost) & (rank < best_rank))
            best_cost[better] = cost[better]
            best_rank[better] = rank

    vectors = np.array(cands, dtype=np.int64)[best_rank]
    log.debug("full search: %d candidates, %dx%d blocks", len(cands), rows, cols)
    return MotionField(bs, h, (m, n), vectors, costs=best_cost, candidates_evaluated=len(cands))


def compensate(ref_bands, field):
    """Assemble the motion-compensated prediction block by block."""
    if tuple(ref_bands.shape) != tuple(field.band_shape):
        raise DimensionError(
            f"field expects {field.band_shape} subbands, got {ref_bands.shape}"
        )
    out = [np.empty_like(p) for p in ref_bands.planes()]
    cache = {}
    for rc, region in field.blocks():
        mv = field[rc]
        key = (mv.dx, mv.dy)
        if key not in cache:
            cache[key] = apply_inband_shift(ref_bands, mv.spec()).planes()
        for dst, src in zip(out, cache[key]):
            dst[region] = src[region]
    return SubbandSet(*out)


def residual(target_bands, predicted):
    _check_same(predicted, target_bands)
    return target_bands - predicted


def add_back(predicted, error):
    _check_same(predicted, error)
    return predicted + error
