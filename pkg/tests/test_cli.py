import csv
import io
import subprocess
import sys

import numpy as np
import pytest

from mrminsum import expand_qc, parse_alist, serialize_alist
from mrminsum.bench import CSV_HEADER, make_frames
from mrminsum.channel import ChannelConfig
from mrminsum.cli import main
from mrminsum.decoder_mr import STAGES
from mrminsum.parity import random_qc_spec, serialize_qc


@pytest.fixture
def files(tmp_path):
    spec = random_qc_spec(2, 16, 16, 2, seed=5)
    qc = tmp_path / "spec.qc"
    qc.write_bytes(serialize_qc(spec))
    h = expand_qc(spec)
    alist = tmp_path / "h.alist"
    alist.write_bytes(serialize_alist(h))
    r = make_frames(h, ChannelConfig(2.5, h.rate, seed=4), 1)[0]
    llr = tmp_path / "frame.txt"
    llr.write_text("".join(f"{v!r}\n" for v in r.tolist()))
    return dict(qc=qc, alist=alist, llr=llr, h=h, dir=tmp_path)


def run(capfdbinary, *argv):
    code = main([str(a) for a in argv])
    out, err = capfdbinary.readouterr()
    return code, out.decode(), err.decode()


def test_sweep_example_flags(files, capfdbinary):
    code, out, _ = run(capfdbinary, "sweep", "--matrix", files["alist"], "--snr", "3.0,3.2,3.4",
                       "--frames", 56, "--max-iters", 50, "--check-every", 6, "--seed", 7)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == list(CSV_HEADER)
    assert len(rows) == 4 and all(len(r) == 8 for r in rows)
    assert [float(r[0]) for r in rows[1:]] == [3.0, 3.2, 3.4]
    assert all(float(r[1]) == 56 for r in rows[1:])


def test_sweep_reproducible_except_timing(files, capfdbinary):
    argv = ("sweep", "--qc", files["qc"], "--snr", "2.5", "--frames", 20, "--seed", 3)
    a = list(csv.reader(io.StringIO(run(capfdbinary, *argv)[1])))
    b = list(csv.reader(io.StringIO(run(capfdbinary, *argv)[1])))
    assert [r[:6] for r in a] == [r[:6] for r in b]


def test_sweep_timings_table(files, capfdbinary):
    code, out, _ = run(capfdbinary, "sweep", "--qc", files["qc"], "--snr", "2.0", "--frames", 4, "--timings")
    assert code == 0
    table = out.split("\n\n", 1)[1].strip().split("\n")
    assert table[0] == "stage nanoseconds"
    assert {line.split()[0] for line in table[1:]} == set(STAGES)


def test_convert_idempotent(files, capfdbinary):
    h1, h2 = files["dir"] / "h1.alist", files["dir"] / "h2.alist"
    assert run(capfdbinary, "convert", "--in", files["qc"], "--out", h1)[0] == 0
    assert run(capfdbinary, "convert", "--in", h1, "--out", h2)[0] == 0
    assert h1.read_bytes() == h2.read_bytes()
    assert parse_alist(h1.read_bytes()) == files["h"]


def test_decode_backends_identical(files, capfdbinary):
    outs = [
        run(capfdbinary, "decode", "--matrix", files["alist"], "--llr", files["llr"], "--decoder", d)
        for d in ("mapreduce", "reference")
    ]
    assert outs[0][0] == outs[1][0] == 0
    assert outs[0][1] == outs[1][1]
    lines = outs[0][1].splitlines()
    assert lines[0] in ("is_codeword true", "is_codeword false")
    assert lines[1].startswith("iterations ")
    assert len(lines[2]) == len("hard ") + files["h"].n


def test_decode_timings_and_verbose(files, capfdbinary, caplog):
    caplog.set_level("INFO")
    code, out, _ = run(capfdbinary, "decode", "--qc", files["qc"], "--llr", files["llr"], "--timings", "--verbose")
    assert code == 0
    assert "stage nanoseconds" in out and "soft " in out
    assert "parity matrix" in caplog.text


def test_decode_to_file(files, capfdbinary):
    dest = files["dir"] / "out.txt"
    code, out, _ = run(capfdbinary, "decode", "--matrix", files["alist"], "--llr", files["llr"], "--out", dest)
    assert code == 0 and out == ""
    assert dest.read_text().startswith("is_codeword ")


def test_gen_qc(files, capfdbinary):
    code, out, _ = run(capfdbinary, "gen-qc", "--row-blocks", 2, "--col-blocks", 4, "--block-size", 8, "--seed", 1)
    assert code == 0
    assert out.splitlines()[0].split() == ["2", "4", "8"]
    again = run(capfdbinary, "gen-qc", "--row-blocks", 2, "--col-blocks", 4, "--block-size", 8, "--seed", 1)[1]
    assert again == out


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["decode", "--llr", "x"],
        ["decode", "--matrix", "a", "--qc", "b", "--llr", "x"],
        ["sweep", "--matrix", "a", "--bogus"],
        ["sweep", "--matrix", "a", "--frames", "0"],
        ["sweep", "--matrix", "a", "--snr", "abc"],
        ["scaling", "--matrix", "a", "--workers", "0,2"],
    ],
)
def test_usage_errors(argv, capfdbinary):
    assert main(argv) == 1


def test_timings_with_reference_is_usage_error(files, capfdbinary):
    code, _, err = run(capfdbinary, "decode", "--matrix", files["alist"], "--llr", files["llr"],
                       "--decoder", "reference", "--timings")
    assert code == 1 and err


def test_data_errors(files, capfdbinary):
    bad = files["dir"] / "bad.alist"
    bad.write_text("3 2\n")
    short = files["dir"] / "short.txt"
    short.write_text("0.1\n0.2\n")
    nan = files["dir"] / "nan.txt"
    nan.write_text("nan\n" * files["h"].n)
    assert run(capfdbinary, "decode", "--matrix", bad, "--llr", files["llr"])[0] == 2
    assert run(capfdbinary, "decode", "--matrix", files["alist"], "--llr", short)[0] == 2
    assert run(capfdbinary, "decode", "--matrix", files["alist"], "--llr", nan)[0] == 2
    assert run(capfdbinary, "decode", "--matrix", files["dir"] / "missing", "--llr", files["llr"])[0] == 2


def test_scaling(files, capfdbinary):
    code, out, _ = run(capfdbinary, "scaling", "--qc", files["qc"], "--snr", "2.5", "--frames", 16, "--workers", "1,2")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert [r[0] for r in rows[1:]] == ["1", "2"]
    assert rows[1][-1] == rows[2][-1]


def test_module_entry_point(files):
    proc = subprocess.run(
        [sys.executable, "-m", "mrminsum.cli", "convert", "--in", str(files["qc"])],
        capture_output=True, check=True,
    )
    assert proc.stdout == serialize_alist(files["h"])
    assert np.all(parse_alist(proc.stdout).entries == files["h"].entries)
