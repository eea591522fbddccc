"""Command-line interface.

Exit status: 0 on success, 1 on usage errors, 2 on data errors.
"""

import argparse
import logging
import os
import sys

import numpy as np

from . import evaluation, video_io
from .codec import CodecConfig, CodecError, EncodedStream, decode_sequence, encode_sequence
from .inband_shift import make_spec, apply_inband_shift, oracle_shift_bands
from .wavelet import DimensionError, analyze, pad_to_multiple, synthesize

log = logging.getLogger("wavemc")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _size(text):
    try:
        w, h = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected WxH, got {text!r}")
    return w, h


def _thresholds(text):
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad threshold list {text!r}")
    if any(v < 0 for v in values):
        raise argparse.ArgumentTypeError("thresholds must be non-negative")
    return values


def _add_source(p):
    p.add_argument("--in", dest="src", required=True, help="Y4M, raw .yuv, PGM file, directory or glob")
    p.add_argument("--format", choices=video_io.FORMATS, help="override format detection")
    p.add_argument("--size", type=_size, help="WxH, required for raw YUV 4:2:0")
    p.add_argument("--frames", type=int, help="read at most this many frames")


def _add_codec(p):
    p.add_argument("--block", type=int, choices=(8, 16), default=8, help="block size in subband samples")
    p.add_argument("--precision", type=int, choices=range(4), default=2, metavar="0..3",
                   help="motion precision: 1/2^h pixel (default 2, quarter-pel)")
    p.add_argument("--range", dest="search_range", type=int, default=15, help="search range in pixels")
    p.add_argument("--extra-levels", type=int, default=2, help="extra residual decomposition levels")


def build_parser():
    parser = _Parser(prog="wavemc", description="In-band MCTF video coding on Haar subbands")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("encode", help="encode a sequence into a WMC1 stream")
    _add_source(p)
    _add_codec(p)
    p.add_argument("--threshold", type=float, default=0.0, help="global quantizer threshold")
    p.add_argument("--method", choices=("inband", "band2band"), default="inband")
    p.add_argument("--out", required=True)

    p = sub.add_parser("decode", help="decode a WMC1 stream")
    p.add_argument("--in", dest="src", required=True)
    p.add_argument("--out", required=True, help="directory for PGM frames, or a .y4m file")

    p = sub.add_parser("shift", help="shift an image in the wavelet domain and compare with the oracle")
    p.add_argument("--in", dest="src", required=True, help="PGM image")
    p.add_argument("--dx", type=float, required=True)
    p.add_argument("--dy", type=float, required=True)
    p.add_argument("--precision", type=int, default=3, help="round shifts to 1/2^h pixel")
    p.add_argument("--out", required=True, help="output PGM")

    p = sub.add_parser("rd-sweep", help="rate-distortion sweep over thresholds")
    _add_source(p)
    _add_codec(p)
    p.add_argument("--thresholds", type=_thresholds, required=True, help="comma separated, e.g. 0,1,2,4")
    p.add_argument("--baseline", choices=evaluation.BASELINES, default="none")
    p.add_argument("--csv", required=True, help="output CSV path, '-' for stdout")
    p.add_argument("--figure", help="also render PSNR-vs-bpp curves to this image file")

    p = sub.add_parser("psnr", help="PSNR between two frames or sequences")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    return parser


def _load(args):
    w, h = args.size if args.size else (None, None)
    src = video_io.detect_source(args.src, args.format, w, h)
    frames = video_io.load_frames(src, args.frames)
    if not frames:
        raise video_io.VideoFormatError(f"{args.src}: no frames")
    return frames


def _config(args, threshold=0.0, method="inband"):
    try:
        return CodecConfig(args.block, args.precision, args.search_range, threshold,
                           args.extra_levels, method)
    except ValueError as e:
        raise UsageError(str(e))


def cmd_encode(args):
    frames = _load(args)
    cfg = _config(args, args.threshold, args.method)
    stream = encode_sequence(frames, cfg)
    data = stream.to_bytes()
    with open(args.out, "wb") as f:
        f.write(data)
    h, w = frames[0].shape
    print(f"{len(frames)} frames {w}x{h}: {len(data)} bytes, "
          f"{8 * len(data) / (w * h * len(frames)):.4f} bpp")


def cmd_decode(args):
    with open(args.src, "rb") as f:
        stream = EncodedStream.from_bytes(f.read())
    frames = decode_sequence(stream)
    if args.out.lower().endswith(".y4m"):
        video_io.write_y4m(frames, args.out)
    else:
        os.makedirs(args.out, exist_ok=True)
        for i, fr in enumerate(frames):
            video_io.save_frame(fr, os.path.join(args.out, f"frame_{i:04d}.pgm"))
    print(f"decoded {len(frames)} frames {stream.width}x{stream.height}")


def cmd_shift(args):
    frame = video_io.read_pgm(args.src)
    padded = pad_to_multiple(frame, 2)
    spec = make_spec(args.dx, args.dy, args.precision)
    shifted = apply_inband_shift(analyze(padded), spec)
    oracle = oracle_shift_bands(padded, args.dx, args.dy, args.precision)
    dev = max(float(np.max(np.abs(p - q))) for p, q in zip(shifted.planes(), oracle.planes()))
    out = synthesize(shifted)[:frame.shape[0], :frame.shape[1]]
    video_io.save_frame(out, args.out)
    x, y = spec.pixels
    print(f"shift ({x:g}, {y:g}) px: circular ({spec.dx}, {spec.dy}) samples, "
          f"residual ({spec.sub_x.value:g}, {spec.sub_y.value:g}); max |in-band - oracle| = {dev:.3e}")


def cmd_rd_sweep(args):
    if not args.thresholds:
        raise UsageError("--thresholds needs at least one value")
    frames = _load(args)
    if len(frames) < 2:
        raise UsageError("rd-sweep needs at least two frames")
    points = evaluation.rd_sweep(frames, _config(args), args.thresholds, args.baseline)
    text = evaluation.points_to_csv(points)
    if args.csv == "-":
        sys.stdout.write(text)
    else:
        with open(args.csv, "w", newline="") as f:
            f.write(text)
    if args.figure:
        from . import plotting

        plotting.save(plotting.rd_figure(points), args.figure)


def cmd_psnr(args):
    a = video_io.load_frames(args.a)
    b = video_io.load_frames(args.b)
    if len(a) != len(b):
        raise DimensionError(f"{len(a)} frames vs {len(b)} frames")
    values = [evaluation.psnr(x, y) for x, y in zip(a, b)]
    for i, v in enumerate(values):
        print(f"frame {i}: {v:.4f} dB")
    if len(values) > 1:
        print(f"mean: {float(np.mean(values)):.4f} dB")


COMMANDS = {
    "encode": cmd_encode,
    "decode": cmd_decode,
    "shift": cmd_shift,
    "rd-sweep": cmd_rd_sweep,
    "psnr": cmd_psnr,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        COMMANDS[args.command](args)
    except UsageError as e:
        print(f"wavemc {args.command}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (CodecError, video_io.VideoFormatError, DimensionError, OSError, ValueError) as e:
        print(f"wavemc {args.command}: {e}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
