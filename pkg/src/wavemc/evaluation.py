"""PSNR and bit accounting, the band-to-band baseline, and rate-distortion sweeps."""

import csv
import io
import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import motion
from .codec import CodecConfig, decode_sequence, encode_sequence
from .wavelet import DimensionError

log = logging.getLogger(__name__)

BASELINES = ("band2band", "none")


def psnr(a, b, peak=255.0):
    """PSNR in dB; identical inputs give ``math.inf``."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionError(f"cannot compare {a.shape} with {b.shape}")
    mse = float(np.mean((a - b) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(peak * peak / mse)


def band_to_band_search(ref_bands, target_bands, params):
    """Block matching restricted to whole subband-sample displacements.

    The conventional in-band baseline: blocks move by circular sample
    offsets only, so no cross-band operators are involved.
    """
    return motion.full_search(ref_bands, target_bands, params, integer_samples=True)


@dataclass
class RateDistortionPoint:
    method: str
    threshold: float
    bits: int
    pixels: int
    error_bits: int
    error_pixels: int
    psnr_db: list = field(default_factory=list)
    target_index: list = field(default_factory=list, repr=False)

    @property
    def bpp(self):
        return self.bits / self.pixels

    @property
    def bpp_error(self):
        return self.error_bits / self.error_pixels if self.error_pixels else math.nan

    @property
    def psnr_mean(self):
        return _mean_db(self.psnr_db)

    @property
    def psnr_target_mean(self):
        return _mean_db([self.psnr_db[i] for i in self.target_index])


def _mean_db(values):
    if not values:
        return math.nan
    return float(np.mean(values))


def measure(frames, cfg, fields=None, method=None):
    """Encode and decode ``frames`` once and account bits and PSNR."""
    stream = encode_sequence(frames, cfg, fields)
    decoded = decode_sequence(stream.to_bytes())
    h, w = frames[0].shape
    targets = [t + 1 for t in range(0, len(frames) - 1, 2)]
    error_bits = sum(8 * (len(g.mv) + len(g.residual)) for g in stream.gops)
    return RateDistortionPoint(
        method=method or cfg.method,
        threshold=cfg.threshold,
        bits=sum(g.bits for g in stream.gops),
        pixels=w * h * len(frames),
        error_bits=error_bits,
        error_pixels=w * h * len(targets),
        psnr_db=[psnr(d, f) for d, f in zip(decoded, frames)],
        target_index=targets,
    )


def rd_sweep(frames, cfg, thresholds, baseline="none"):
    """Rate-distortion points for every threshold, sorted by threshold.

    Motion fields are estimated once per method and reused, since the
    search runs on the original frames.
    """
    thresholds = sorted(float(t) for t in thresholds)
    if not thresholds:
        raise ValueError("at least one threshold is required")
    if baseline not in BASELINES:
        raise ValueError(f"baseline must be one of {BASELINES}")
    if len(frames) < 2:
        raise ValueError("a rate-distortion sweep needs at least two frames")
    methods = ["inband"] + (["band2band"] if baseline == "band2band" else [])
    points = []
    for m in methods:
        fields = {}
        for t in thresholds:
            c = replace(cfg, threshold=t, method=m)
            p = measure(frames, c, fields)
            log.info("%s T=%g: %.4f bpp, %.2f dB", m, t, p.bpp, p.psnr_mean)
            points.append(p)
    return points


def matched_rate_gain(proposed, baseline, rate="bpp_error", quality="psnr_target_mean"):
    """Quality gain of each proposed point over the baseline at the same rate.

    The baseline curve is linearly interpolated in rate; points outside its
    sampled rate range are not comparable and yield NaN.
    """
    br = np.array([getattr(p, rate) for p in baseline])
    bq = np.array([getattr(p, quality) for p in baseline])
    order = np.argsort(br, kind="stable")
    br, bq = br[order], bq[order]
    gains = []
    for p in proposed:
        r = getattr(p, rate)
        if not br[0] <= r <= br[-1]:
            gains.append(math.nan)
        else:
            gains.append(getattr(p, quality) - float(np.interp(r, br, bq)))
    return gains


def _fmt(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    if isinstance(x, float):
        return f"{x:.6f}"
    return str(x)


def points_to_csv(points):
    """CSV text: ``threshold,bits,bpp,psnr_mean,psnr_f0..,bpp_error,psnr_target_mean,method``."""
    n = max((len(p.psnr_db) for p in points), default=0)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["threshold", "bits", "bpp", "psnr_mean"]
               + [f"psnr_f{i}" for i in range(n)]
               + ["bpp_error", "psnr_target_mean", "method"])
    for p in points:
        w.writerow([_fmt(p.threshold), p.bits, _fmt(p.bpp), _fmt(p.psnr_mean)]
                   + [_fmt(v) for v in p.psnr_db]
                   + [_fmt(p.bpp_error), _fmt(p.psnr_target_mean), p.method])
    return buf.getvalue()
