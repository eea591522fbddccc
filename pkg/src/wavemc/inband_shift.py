"""Exact translation of Haar subbands by dyadic displacements.

A displacement of ``t`` pixels along one axis is split into a circular move
of whole subband samples (two pixels each) and a residual ``r`` with
``-1 < r <= 1``. The residual is applied with three two-tap operators on
each (lowpass, highpass) pair of planes along that axis::

    L' = F L - K1 H
    H' = K1 L + K2 H

With ``beta = |r| / 2`` the operators have main-diagonal / neighbour taps::

    F  : 1 - beta,      beta
    K1 : -sign(r) beta, sign(r) beta
    K2 : 1 - 3 beta,    -beta

The neighbour tap reads sample ``i - 1`` for ``r > 0`` and ``i + 1`` for
``r < 0``. Positive displacements move content toward larger column (x) or
row (y) indices. The result equals the Haar analysis of the frame shifted
with zero-detail upsampling, i.e. exact for periodic frames and any
``s / 2**h`` displacement.
"""

import math
from dataclasses import dataclass

import numpy as np

from .wavelet import SubbandSet, DimensionError, haar_forward, upsample_zero_detail

X = "x"
Y = "y"

_PLANE_AXIS = {X: 1, Y: 0}


@dataclass(frozen=True)
class DyadicShift:
    """A displacement of ``s / 2**h`` pixels along one axis."""

    s: int
    h: int = 0

    @property
    def value(self):
        return self.s / (1 << self.h)

    @property
    def canonical(self):
        return self.s % 2 == 1 or self.h == 0

    def reduced(self):
        s, h = self.s, self.h
        if s == 0:
            return DyadicShift(0, 0)
        while h > 0 and s % 2 == 0:
            s //= 2
            h -= 1
        return DyadicShift(s, h)


@dataclass(frozen=True)
class ShiftSpec:
    """Circular sample moves plus a residual subpixel shift per axis."""

    dx: int = 0
    dy: int = 0
    sub_x: DyadicShift = DyadicShift(0)
    sub_y: DyadicShift = DyadicShift(0)

    @property
    def pixels(self):
        """Total displacement ``(x, y)`` in pixels."""
        return (2 * self.dx + self.sub_x.value, 2 * self.dy + self.sub_y.value)


@dataclass(frozen=True)
class BandOperator:
    """Bidiagonal Toeplitz operator realized as a two-tap filter.

    ``out[i] = diag * in[i] + offdiag * in[i + neighbor]`` with periodic
    indexing along ``axis``. ``neighbor = -1`` makes the column-acting
    matrix lower bidiagonal, ``+1`` upper bidiagonal.
    """

    kind: str
    diag: float
    offdiag: float
    neighbor: int
    axis: str
    size: int

    @property
    def lower(self):
        return self.neighbor == -1

    def matrix(self, periodic=True):
        """Dense ``size x size`` matrix ``M`` with ``out = M @ v``."""
        n = self.size
        m = np.zeros((n, n))
        idx = np.arange(n)
        m[idx, idx] = self.diag
        cols = idx + self.neighbor
        keep = (cols >= 0) & (cols < n)
        if periodic:
            cols %= n
            keep[:] = True
        m[idx[keep], cols[keep]] += self.offdiag
        return m

    def apply(self, plane):
        axis = _PLANE_AXIS[self.axis]
        if self.offdiag == 0.0:
            if self.diag == 1.0:
                return plane
            return self.diag * plane
        # np.roll by +1 puts in[i - 1] at position i
        return self.diag * plane + self.offdiag * np.roll(plane, -self.neighbor, axis=axis)


def dyadic_approx(shift, h_max):
    """Round ``shift`` pixels to the nearest multiple of ``2**-h_max``.

    Ties round away from zero; the result is in canonical form.
    """
    if not math.isfinite(shift):
        raise ValueError(f"shift must be finite, got {shift}")
    if h_max < 0:
        raise ValueError("h_max must be non-negative")
    scaled = abs(shift) * (1 << h_max)
    s = int(math.floor(scaled + 0.5))
    if shift < 0:
        s = -s
    return DyadicShift(s, h_max).reduced()


def decompose_shift(shift):
    """Split a canonical DyadicShift into (circular samples, residual DyadicShift).

    ``2 * circular + residual.value == shift.value`` and the residual lies
    in ``(-1, 1]``.
    """
    if not shift.canonical:
        raise ValueError(f"non-canonical shift {shift.s}/2^{shift.h}")
    s, h = shift.s, shift.h
    if h == 0:
        if s % 2 == 0:
            return s // 2, DyadicShift(0)
        return s // 2, DyadicShift(1)
    lo = s >> h  # floor(s / 2**h)
    hi = lo + 1
    if hi % 2 == 0:
        return hi // 2, DyadicShift(s - (hi << h), h)
    return lo // 2, DyadicShift(s - (lo << h), h)


def make_spec(x, y, h_max=2):
    """ShiftSpec for a displacement of ``(x, y)`` pixels on a ``2**-h_max`` grid."""
    dx, sub_x = decompose_shift(dyadic_approx(x, h_max))
    dy, sub_y = decompose_shift(dyadic_approx(y, h_max))
    return ShiftSpec(dx, dy, sub_x, sub_y)


def build_band_ops(s, h, axis, size):
    """The ``(F, K1, K2)`` operators for a residual shift of ``s / 2**h`` pixels."""
    if h < 0:
        raise ValueError("h must be non-negative")
    if abs(s) > (1 << h):
        raise ValueError(f"residual shift {s}/2^{h} exceeds one pixel")
    if axis not in _PLANE_AXIS:
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    den = float(1 << (h + 1))
    mag = abs(s)
    neighbor = -1 if s >= 0 else 1
    F = BandOperator("F", (den - mag) / den, mag / den, neighbor, axis, size)
    K1 = BandOperator("K1", -s / den, s / den, neighbor, axis, size)
    K2 = BandOperator("K2", (den - 3 * mag) / den, -mag / den, neighbor, axis, size)
    return F, K1, K2


def _shift_pair(low, high, ops):
    F, K1, K2 = ops
    return F.apply(low) - K1.apply(high), K1.apply(low) + K2.apply(high)


def subpixel_shift(bands, sub_x, sub_y):
    """Apply only the residual (|shift| <= 1 pixel) part of a displacement."""
    A, a, b, c = bands.planes()
    m, n = bands.shape
    if sub_x.s != 0:
        ops = build_band_ops(sub_x.s, sub_x.h, X, n)
        A, a = _shift_pair(A, a, ops)
        b, c = _shift_pair(b, c, ops)
    if sub_y.s != 0:
        ops = build_band_ops(sub_y.s, sub_y.h, Y, m)
        A, b = _shift_pair(A, b, ops)
        a, c = _shift_pair(a, c, ops)
    return SubbandSet(A, a, b, c)


def circular_shift(bands, dx, dy):
    if dx == 0 and dy == 0:
        return bands
    return bands.map(lambda p: np.roll(p, (dy, dx), axis=(0, 1)))


def apply_inband_shift(bands, spec):
    """Translate ``bands`` by ``spec`` without leaving the wavelet domain."""
    if any(p.size == 0 for p in bands.planes()):
        raise DimensionError("subband planes are empty")
    moved = circular_shift(bands, spec.dx, spec.dy)
    return subpixel_shift(moved, spec.sub_x, spec.sub_y)


def shift_bands(bands, x, y, h_max=2):
    """Shortcut: translate by ``(x, y)`` pixels rounded to a ``2**-h_max`` grid."""
    return apply_inband_shift(bands, make_spec(x, y, h_max))


def oracle_shift_bands(frame, x, y, h_max=3):
    """Reference route: upsample with zero details, shift, re-analyze.

    Returns the level-1 subbands of ``frame`` translated by ``(x, y)``
    pixels under periodic extension. Kept independent of the in-band
    operators so it can check them.
    """
    sx = dyadic_approx(x, h_max)
    sy = dyadic_approx(y, h_max)
    h = max(sx.h, sy.h)
    up = upsample_zero_detail(frame, h)
    kx = sx.s << (h - sx.h)
    ky = sy.s << (h - sy.h)
    up = np.roll(up, (ky, kx), axis=(0, 1))
    pyr = haar_forward(up, h + 1, pad=False)
    return pyr.level_bands(h + 1)
