import csv
import subprocess
import sys

import numpy as np
import pytest

from wavemc.cli import EXIT_DATA, EXIT_OK, EXIT_USAGE, main
from wavemc.synthetic import translating_clip
from wavemc.video_io import load_frames, read_pgm, save_frame, write_y4m


@pytest.fixture
def clip(tmp_path, texture):
    path = tmp_path / "clip.y4m"
    write_y4m(translating_clip(texture, 4, (0.5, -0.25), integer=True), path)
    return path


def test_encode_decode_psnr(tmp_path, clip, capsys):
    stream = tmp_path / "c.wmc"
    assert main(["encode", "--in", str(clip), "--out", str(stream), "--range", "2",
                 "--threshold", "0"]) == EXIT_OK
    assert stream.read_bytes()[:4] == b"WMC1"
    out = tmp_path / "dec"
    assert main(["decode", "--in", str(stream), "--out", str(out)]) == EXIT_OK
    decoded = load_frames(str(out))
    original = load_frames(str(clip))
    for a, b in zip(decoded, original):
        np.testing.assert_array_equal(a, b)
    capsys.readouterr()
    assert main(["psnr", "--a", str(clip), "--b", str(out)]) == EXIT_OK
    assert "inf dB" in capsys.readouterr().out


def test_decode_to_y4m(tmp_path, clip):
    stream = tmp_path / "c.wmc"
    main(["encode", "--in", str(clip), "--out", str(stream), "--range", "2", "--block", "16"])
    out = tmp_path / "d.y4m"
    assert main(["decode", "--in", str(stream), "--out", str(out)]) == EXIT_OK
    assert len(load_frames(str(out))) == 4


def test_shift_command(tmp_path, texture, capsys):
    src = tmp_path / "in.pgm"
    save_frame(texture, src)
    dst = tmp_path / "out.pgm"
    assert main(["shift", "--in", str(src), "--dx", "1.25", "--dy", "-0.75", "--out", str(dst)]) == EXIT_OK
    text = capsys.readouterr().out
    dev = float(text.rsplit("=", 1)[1])
    assert dev <= 1e-8
    assert read_pgm(dst).shape == texture.shape


def test_rd_sweep_csv_and_figure(tmp_path, clip):
    out = tmp_path / "rd.csv"
    fig = tmp_path / "rd.png"
    assert main(["rd-sweep", "--in", str(clip), "--thresholds", "0,2,8", "--range", "2",
                 "--baseline", "band2band", "--csv", str(out), "--figure", str(fig)]) == EXIT_OK
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 6
    assert {r["method"] for r in rows} == {"inband", "band2band"}
    assert fig.read_bytes()[:4] == b"\x89PNG"


def test_usage_errors(tmp_path, clip):
    assert main(["rd-sweep", "--in", str(clip), "--thresholds", ",", "--csv", "-"]) == EXIT_USAGE
    with pytest.raises(SystemExit) as e:
        main(["encode", "--in", str(clip)])
    assert e.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as e:
        main(["encode", "--in", str(clip), "--out", "x", "--block", "12"])
    assert e.value.code == EXIT_USAGE


def test_data_errors(tmp_path, clip):
    junk = tmp_path / "junk.wmc"
    junk.write_bytes(b"not a stream at all")
    assert main(["decode", "--in", str(junk), "--out", str(tmp_path / "o")]) == EXIT_DATA
    assert main(["encode", "--in", str(tmp_path / "missing.y4m"), "--out", "x"]) == EXIT_DATA
    assert main(["psnr", "--a", str(clip), "--b", str(tmp_path / "nothing.pgm")]) == EXIT_DATA


def test_module_entry_point(clip):
    r = subprocess.run([sys.executable, "-m", "wavemc", "psnr", "--a", str(clip), "--b", str(clip)],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "mean: inf dB" in r.stdout
