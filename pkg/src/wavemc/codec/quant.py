"""Global hard thresholding followed by rounding to an integer grid."""

import logging
from dataclasses import dataclass

import numpy as np

log = logging.getLogger(__name__)

INT16_MIN = -32768
INT16_MAX = 32767


@dataclass
class QuantizedPlane:
    """Integer symbols of one coefficient plane.

    Coefficients are represented as ``values / 2**scale_log2``.
    """

    values: np.ndarray
    scale_log2: int = 0
    saturated: int = 0

    @property
    def shape(self):
        return self.values.shape

    def __eq__(self, other):
        if not isinstance(other, QuantizedPlane):
            return NotImplemented
        return self.scale_log2 == other.scale_log2 and np.array_equal(self.values, other.values)


def quantize(plane, threshold, scale_log2=0):
    """Zero every coefficient with ``|x| <= threshold`` and round the rest.

    Survivors are rounded to the nearest multiple of ``2**-scale_log2``.
    Values beyond the 16-bit range are clamped and counted.
    """
    if threshold < 0:
        raise ValueError("threshold must be non-negative")
    plane = np.asarray(plane, dtype=np.float64)
    q = np.rint(np.ldexp(plane, scale_log2))
    q[np.abs(plane) <= threshold] = 0.0
    over = (q < INT16_MIN) | (q > INT16_MAX)
    saturated = int(np.count_nonzero(over))
    if saturated:
        log.warning("quantizer clamped %d coefficients to 16 bits", saturated)
        q = np.clip(q, INT16_MIN, INT16_MAX)
    return QuantizedPlane(q.astype(np.int32), scale_log2, saturated)


def dequantize(qp):
    return np.ldexp(qp.values.astype(np.float64), -qp.scale_log2)
