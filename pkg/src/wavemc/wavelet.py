"""Orthonormal 2-D Haar analysis and synthesis.

Every level maps a 2x2 pixel block ``p00 p01 / p10 p11`` to four coefficients::

    A = (p00 + p01 + p10 + p11) / 2     approximation
    a = (p00 - p01 + p10 - p11) / 2     horizontal detail (differences along x)
    b = (p00 + p01 - p10 - p11) / 2     vertical detail (differences along y)
    c = (p00 - p01 - p10 + p11) / 2     diagonal detail

Frames are plain 2-D float arrays indexed ``[row, column]``.
"""

from dataclasses import dataclass, field

import numpy as np


class DimensionError(ValueError):
    """Plane dimensions are incompatible with the requested operation."""


@dataclass
class SubbandSet:
    """The four coefficient planes of one analysis level."""

    A: np.ndarray
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        shapes = {p.shape for p in self.planes()}
        if len(shapes) != 1:
            raise DimensionError(f"subband planes disagree in shape: {sorted(shapes)}")
        if self.A.ndim != 2:
            raise DimensionError("subband planes must be 2-D")

    @property
    def shape(self):
        return self.A.shape

    def planes(self):
        return (self.A, self.a, self.b, self.c)

    def copy(self):
        return SubbandSet(*(p.copy() for p in self.planes()))

    def map(self, fn):
        """Apply ``fn`` to every plane and return a new set."""
        return SubbandSet(*(fn(p) for p in self.planes()))

    def __add__(self, other):
        return SubbandSet(*(p + q for p, q in zip(self.planes(), other.planes())))

    def __sub__(self, other):
        return SubbandSet(*(p - q for p, q in zip(self.planes(), other.planes())))

    def __mul__(self, k):
        return SubbandSet(*(p * k for p in self.planes()))

    __rmul__ = __mul__

    def energy(self):
        return float(sum(np.sum(p * p) for p in self.planes()))


@dataclass
class Pyramid:
    """Multi-level Haar decomposition.

    ``details[0]`` holds the ``(a, b, c)`` planes of the full-resolution
    analysis; each following entry is half the size of the previous one.
    ``approx`` is the coarsest approximation plane. ``shape`` is the frame
    size before any padding, used to crop on synthesis.
    """

    details: list
    approx: np.ndarray
    shape: tuple = field(default=None)

    @property
    def levels(self):
        return len(self.details)

    def level_bands(self, level):
        """SubbandSet of ``level`` (1-based) when it is the coarsest one."""
        if level != self.levels:
            raise ValueError("only the coarsest level carries its own approximation")
        return SubbandSet(self.approx, *self.details[level - 1])

    def planes(self):
        """All coefficient planes, finest level first, approximation last."""
        out = []
        for d in self.details:
            out.extend(d)
        out.append(self.approx)
        return out


def analyze(x):
    """One level of 2-D Haar analysis. ``x`` must have even dimensions."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] % 2 or x.shape[1] % 2:
        raise DimensionError(f"analysis needs even dimensions, got {x.shape}")
    p00 = x[0::2, 0::2]
    p01 = x[0::2, 1::2]
    p10 = x[1::2, 0::2]
    p11 = x[1::2, 1::2]
    s0 = p00 + p01
    d0 = p00 - p01
    s1 = p10 + p11
    d1 = p10 - p11
    return SubbandSet(
        A=(s0 + s1) * 0.5,
        a=(d0 + d1) * 0.5,
        b=(s0 - s1) * 0.5,
        c=(d0 - d1) * 0.5,
    )


def synthesize(bands):
    """Inverse of :func:`analyze`."""
    A, a, b, c = bands.planes()
    m, n = A.shape
    out = np.empty((2 * m, 2 * n), dtype=np.float64)
    s0 = A + b
    s1 = A - b
    d0 = a + c
    d1 = a - c
    out[0::2, 0::2] = (s0 + d0) * 0.5
    out[0::2, 1::2] = (s0 - d0) * 0.5
    out[1::2, 0::2] = (s1 + d1) * 0.5
    out[1::2, 1::2] = (s1 - d1) * 0.5
    return out


def pad_to_multiple(frame, multiple):
    """Replicate-pad the right and bottom edges up to a multiple of ``multiple``."""
    h, w = frame.shape
    ph = -h % multiple
    pw = -w % multiple
    if ph == 0 and pw == 0:
        return frame
    return np.pad(frame, ((0, ph), (0, pw)), mode="edge")


def haar_forward(frame, levels=1, pad=True):
    """Decompose ``frame`` into a ``levels``-deep Haar pyramid.

    With ``pad`` disabled, dimensions must be divisible by ``2**levels``.
    """
    if levels < 1:
        raise ValueError("levels must be positive")
    frame = np.asarray(frame, dtype=np.float64)
    if frame.ndim != 2:
        raise DimensionError("frame must be 2-D")
    shape = frame.shape
    step = 1 << levels
    if shape[0] % step or shape[1] % step:
        if not pad:
            raise DimensionError(
                f"frame {shape[1]}x{shape[0]} not divisible by 2^{levels}"
            )
        frame = pad_to_multiple(frame, step)
    details = []
    approx = frame
    for _ in range(levels):
        bands = analyze(approx)
        details.append((bands.a, bands.b, bands.c))
        approx = bands.A
    return Pyramid(details=details, approx=approx, shape=shape)


def haar_inverse(pyramid, crop=True):
    """Synthesize a frame from a pyramid, cropping any padding."""
    approx = np.asarray(pyramid.approx, dtype=np.float64)
    for a, b, c in reversed(pyramid.details):
        approx = synthesize(SubbandSet(approx, a, b, c))
    if crop and pyramid.shape is not None:
        h, w = pyramid.shape
        if h > approx.shape[0] or w > approx.shape[1]:
            raise DimensionError("pyramid is smaller than its recorded frame shape")
        approx = approx[:h, :w]
    return approx


def upsample_zero_detail(frame, h):
    """Upsample by ``2**h`` by synthesizing ``h`` extra levels of zero details.

    Each source sample ``v`` becomes a ``2**h x 2**h`` block of ``v / 2**h``.
    """
    if h < 0:
        raise ValueError("h must be non-negative")
    frame = np.asarray(frame, dtype=np.float64)
    if h == 0:
        return frame.copy()
    k = 1 << h
    return np.kron(frame, np.full((k, k), 1.0 / k))
