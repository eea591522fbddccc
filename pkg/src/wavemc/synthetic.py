"""Synthetic test material with exactly known motion."""

import numpy as np

from .inband_shift import oracle_shift_bands
from .wavelet import synthesize


def smooth_texture(shape, sigma=2.0, seed=0, lo=16.0, hi=240.0):
    """Periodic low-pass noise scaled into ``[lo, hi]``."""
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(shape)
    fy = np.fft.fftfreq(shape[0])[:, None]
    fx = np.fft.fftfreq(shape[1])[None, :]
    gain = np.exp(-2.0 * (np.pi * sigma) ** 2 * (fx * fx + fy * fy))
    tex = np.real(np.fft.ifft2(np.fft.fft2(noise) * gain))
    tex -= tex.min()
    tex *= (hi - lo) / max(tex.max(), 1e-12)
    return tex + lo


def translate(frame, x, y, h_max=3):
    """Periodic translation by ``(x, y)`` pixels through zero-detail upsampling."""
    return synthesize(oracle_shift_bands(frame, x, y, h_max))


def translating_clip(base, n_frames, velocity, h_max=3, integer=False):
    """``n_frames`` frames, each the previous one moved by ``velocity`` pixels.

    With ``integer`` the frames are rounded to 8-bit pixel values after
    generation, as a capture device would deliver them.
    """
    vx, vy = velocity
    frames = [np.asarray(base, dtype=np.float64)]
    for _ in range(n_frames - 1):
        frames.append(translate(frames[-1], vx, vy, h_max))
    if integer:
        frames = [np.clip(np.rint(f), 0, 255) for f in frames]
    return frames
