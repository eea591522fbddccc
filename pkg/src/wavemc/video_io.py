"""Luminance-only readers and writers for Y4M, raw planar YUV 4:2:0 and PGM."""

import glob
import logging
import os
import re
from dataclasses import dataclass

import numpy as np

log = logging.getLogger(__name__)

FORMATS = ("y4m", "yuv420", "pgm")
RESIDUAL_OFFSET = 128


class VideoFormatError(ValueError):
    """Malformed or inconsistent video/image data."""


@dataclass
class SequenceSource:
    path: str
    format: str
    width: int = None
    height: int = None
    frame_count: int = None


def _chroma_size(width, height, tag):
    cw, ch = -(-width // 2), -(-height // 2)
    if tag.startswith("420"):
        return 2 * cw * ch
    if tag.startswith("422"):
        return 2 * cw * height
    if tag.startswith("444"):
        return 2 * width * height
    if tag.startswith("mono"):
        return 0
    raise VideoFormatError(f"unsupported Y4M colorspace C{tag}")


def parse_y4m_header(line):
    """Parse a ``YUV4MPEG2 ...`` header line into a dict of its tags."""
    if isinstance(line, bytes):
        line = line.decode("ascii", errors="replace")
    parts = line.strip().split(" ")
    if not parts or parts[0] != "YUV4MPEG2":
        raise VideoFormatError("missing YUV4MPEG2 signature at byte 0")
    tags = {"C": "420"}
    for p in parts[1:]:
        if p:
            tags[p[0]] = p[1:]
    try:
        tags["W"] = int(tags["W"])
        tags["H"] = int(tags["H"])
    except (KeyError, ValueError) as e:
        raise VideoFormatError("Y4M header lacks a valid W/H") from e
    return tags


def read_y4m(path, max_frames=None):
    with open(path, "rb") as f:
        data = f.read()
    nl = data.find(b"\n")
    if nl < 0:
        raise VideoFormatError(f"{path}: header not terminated (byte 0)")
    tags = parse_y4m_header(data[:nl])
    w, h = tags["W"], tags["H"]
    ysize = w * h
    fsize = ysize + _chroma_size(w, h, tags["C"])
    frames = []
    off = nl + 1
    while off < len(data) and (max_frames is None or len(frames) < max_frames):
        end = data.find(b"\n", off)
        if end < 0 or not data.startswith(b"FRAME", off):
            raise VideoFormatError(
                f"{path}: expected FRAME marker for frame {len(frames)} at byte {off}"
            )
        off = end + 1
        if off + fsize > len(data):
            raise VideoFormatError(
                f"{path}: frame {len(frames)} truncated at byte {off} "
                f"({len(data) - off} of {fsize} bytes)"
            )
        y = np.frombuffer(data, dtype=np.uint8, count=ysize, offset=off)
        frames.append(y.reshape(h, w).astype(np.float64))
        off += fsize
    return frames


def read_yuv420(path, width, height, max_frames=None):
    if not width or not height:
        raise VideoFormatError("raw YUV 4:2:0 input needs explicit dimensions")
    fsize = width * height + _chroma_size(width, height, "420")
    size = os.path.getsize(path)
    n, rest = divmod(size, fsize)
    if rest:
        raise VideoFormatError(
            f"{path}: frame {n} truncated ({rest} of {fsize} bytes at byte {n * fsize})"
        )
    if max_frames is not None:
        n = min(n, max_frames)
    frames = []
    with open(path, "rb") as f:
        for _ in range(n):
            buf = f.read(fsize)
            y = np.frombuffer(buf, dtype=np.uint8, count=width * height)
            frames.append(y.reshape(height, width).astype(np.float64))
    return frames


_PNM_TOKEN = re.compile(rb"(?:\s*(?:#[^\n]*\n)?)*\s*(\S+)")


def read_pgm(path):
    with open(path, "rb") as f:
        data = f.read()
    fields = []
    off = 0
    for _ in range(4):
        m = _PNM_TOKEN.match(data, off)
        if m is None:
            raise VideoFormatError(f"{path}: PGM header truncated at byte {off}")
        fields.append(m.group(1))
        off = m.end()
    if fields[0] != b"P5":
        raise VideoFormatError(f"{path}: not a binary PGM (P5) file")
    try:
        w, h, maxval = (int(x) for x in fields[1:])
    except ValueError as e:
        raise VideoFormatError(f"{path}: bad PGM header near byte {off}") from e
    if not 0 < maxval < 256:
        raise VideoFormatError(f"{path}: only 8-bit PGM is supported (maxval {maxval})")
    off += 1  # single whitespace after maxval
    if off + w * h > len(data):
        raise VideoFormatError(f"{path}: pixel data truncated at byte {len(data)}")
    y = np.frombuffer(data, dtype=np.uint8, count=w * h, offset=off)
    return y.reshape(h, w).astype(np.float64)


def _pgm_paths(path):
    if os.path.isdir(path):
        return sorted(glob.glob(os.path.join(path, "*.pgm")))
    if any(ch in path for ch in "*?["):
        return sorted(glob.glob(path))
    return [path]


def detect_source(path, fmt=None, width=None, height=None):
    """Build a SequenceSource, inferring the format from the path if needed."""
    if fmt is None:
        ext = os.path.splitext(path)[1].lower()
        if ext == ".y4m":
            fmt = "y4m"
        elif ext == ".yuv":
            fmt = "yuv420"
        elif ext == ".pgm" or os.path.isdir(path) or "*" in path:
            fmt = "pgm"
        else:
            raise VideoFormatError(f"cannot infer the format of {path}")
    if fmt not in FORMATS:
        raise VideoFormatError(f"unknown format {fmt}")
    return SequenceSource(path, fmt, width, height)


def load_frames(src, max_frames=None):
    """Luminance frames of ``src`` as float arrays with values in [0, 255]."""
    if isinstance(src, str):
        src = detect_source(src)
    if src.format == "y4m":
        frames = read_y4m(src.path, max_frames)
    elif src.format == "yuv420":
        frames = read_yuv420(src.path, src.width, src.height, max_frames)
    else:
        paths = _pgm_paths(src.path)
        if not paths:
            raise VideoFormatError(f"no PGM files match {src.path}")
        frames = [read_pgm(p) for p in paths[:max_frames]]
        if len({f.shape for f in frames}) > 1:
            raise VideoFormatError("PGM frames differ in size")
    if frames:
        src.height, src.width = frames[0].shape
        for i, f in enumerate(frames):
            if f.shape != (src.height, src.width):
                raise VideoFormatError(f"frame {i} has size {f.shape}, expected {(src.height, src.width)}")
    src.frame_count = len(frames)
    return frames


def to_uint8(frame, residual=False):
    """Round and clamp to 8 bits; returns ``(pixels, clamp_count)``.

    Residuals are offset by +128 first so zero error renders mid-grey.
    """
    x = np.rint(np.asarray(frame, dtype=np.float64))
    if residual:
        x = x + RESIDUAL_OFFSET
    clamped = int(np.count_nonzero((x < 0) | (x > 255)))
    if clamped:
        log.info("clamped %d samples to [0, 255]", clamped)
    return np.clip(x, 0, 255).astype(np.uint8), clamped


def save_frame(frame, path, format="pgm", residual=False):
    """Write ``frame`` as binary PGM; returns the number of clamped samples."""
    if format != "pgm":
        raise VideoFormatError(f"save_frame writes PGM only, not {format}")
    pix, clamped = to_uint8(frame, residual)
    h, w = pix.shape
    with open(path, "wb") as f:
        f.write(b"P5\n%d %d\n255\n" % (w, h))
        f.write(pix.tobytes())
    return clamped


def _yuv420_bytes(pix):
    h, w = pix.shape
    return pix.tobytes() + bytes([128]) * _chroma_size(w, h, "420")


def write_y4m(frames, path, fps=(30, 1)):
    """Write luminance frames as 4:2:0 Y4M with neutral chroma."""
    frames = list(frames)
    if not frames:
        raise VideoFormatError("no frames to write")
    h, w = np.shape(frames[0])
    clamped = 0
    with open(path, "wb") as f:
        f.write(b"YUV4MPEG2 W%d H%d F%d:%d Ip A1:1 C420jpeg\n" % (w, h, fps[0], fps[1]))
        for fr in frames:
            pix, n = to_uint8(fr)
            clamped += n
            f.write(b"FRAME\n")
            f.write(_yuv420_bytes(pix))
    return clamped


def write_yuv420(frames, path):
    clamped = 0
    with open(path, "wb") as f:
        for fr in frames:
            pix, n = to_uint8(fr)
            clamped += n
            f.write(_yuv420_bytes(pix))
    return clamped
