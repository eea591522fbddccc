"""Motion-compensated temporal filtering directly on critically sampled Haar subbands."""

from .inband_shift import (
    BandOperator,
    DyadicShift,
    ShiftSpec,
    apply_inband_shift,
    build_band_ops,
    decompose_shift,
    dyadic_approx,
    make_spec,
    oracle_shift_bands,
)
from .motion import MotionField, MotionVector, SearchParams, block_cost, compensate, full_search
from .wavelet import Pyramid, SubbandSet, haar_forward, haar_inverse, upsample_zero_detail

__version__ = "0.1.0"
