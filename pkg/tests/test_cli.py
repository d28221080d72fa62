import subprocess
import sys

import numpy as np
import pytest

from grain_ple.cli import main
from grain_ple.frame import EncryptedFrame, Frame

from conftest import GOLDEN

ZK = "0" * 32
ZN = "0" * 24
Z0 = "fda55457e37ecb64657948a95b221f25"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("backend", ["reference", "optimized"])
def test_keystream_golden(capsys, backend):
    code, out, _ = run(capsys, "keystream", "--key", ZK, "--nonce", ZN, "--bits", "128",
                       "--backend", backend)
    assert code == 0 and out == Z0 + "\n"


def test_keystream_empty(capsys):
    assert run(capsys, "keystream", "--key", ZK, "--nonce", ZN, "--bits", "0") == (0, "", "")


@pytest.mark.parametrize("argv", [
    ["keystream", "--key", "0" * 31, "--nonce", ZN],
    ["keystream", "--key", "g" * 32, "--nonce", ZN],
    ["keystream", "--key", ZK, "--nonce", "0" * 26],
    ["simulate", "--p", "1.5"],
    ["simulate", "--codec", "ldpc"],
    ["simulate", "--trials", "0"],
])
def test_usage_errors_exit_2(argv):
    proc = subprocess.run([sys.executable, "-m", "grain_ple.cli", *argv], capture_output=True)
    assert proc.returncode == 2
    assert proc.stderr


def test_vectors_match_golden(capsys):
    code, out, _ = run(capsys, "vectors")
    assert code == 0
    assert out == (GOLDEN / "zero_key_nonce.txt").read_text()


def test_simulate_noiseless_and_transparency(capsys):
    base = ["simulate", "--codec", "repetition3", "--trials", "4", "--seed", "9", "--bits", "600"]
    _, csv0, _ = run(capsys, *base, "--p", "0", "--ple", "on")
    rows = [line.split(",") for line in csv0.splitlines()[1:]]
    assert len(rows) == 4 and all(r[6] == "0" for r in rows)

    _, on, _ = run(capsys, *base, "--p", "0.05", "--ple", "on")
    _, off, _ = run(capsys, *base, "--p", "0.05", "--ple", "off")
    col = lambda text, i: [line.split(",")[i] for line in text.splitlines()[1:]]
    assert col(on, 6) == col(off, 6)  # post_fer
    assert col(on, 5) == col(off, 5)  # raw_ber


def test_simulate_golden_csv(capsys):
    code, out, _ = run(capsys, "simulate", "--codec", "hamming74", "--p", "0.001,0.01,0.05",
                       "--trials", "3", "--seed", "2024", "--bits", "2048",
                       "--disclosed-prefix", "56")
    assert code == 0
    assert out == (GOLDEN / "sweep_hamming74.csv").read_text()


def test_encrypt_decrypt_roundtrip(tmp_path, capsys):
    bits = np.random.default_rng(1).integers(0, 2, 70, dtype=np.uint8)
    src = tmp_path / "f.ple"
    src.write_bytes(Frame(bits, 7, 14).to_file_bytes())
    key, nonce = "11" * 16, "22" * 12
    assert run(capsys, "encrypt", "--key", key, "--nonce", nonce, "--in", str(src),
               "--out", str(tmp_path / "c.ple"))[0] == 0
    enc = EncryptedFrame.from_file_bytes((tmp_path / "c.ple").read_bytes())
    assert np.array_equal(enc.bits[:14], bits[:14])
    assert not np.array_equal(enc.bits, bits)
    assert run(capsys, "decrypt", "--key", key, "--nonce", nonce, "--in", str(tmp_path / "c.ple"),
               "--out", str(tmp_path / "p.ple"), "--backend", "reference")[0] == 0
    assert Frame.from_file_bytes((tmp_path / "p.ple").read_bytes()) == Frame(bits, 7, 14)


def test_encrypt_with_store_and_replay(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("GRAIN_PLE_STORE_DIR", str(tmp_path / "tx"))
    raw = tmp_path / "raw.bin"
    raw.write_bytes(b"hello physical layer")
    key = "33" * 16
    nonces = []
    for i in range(2):
        code, _, err = run(capsys, "encrypt", "--key", key, "--in", str(raw),
                           "--out", str(tmp_path / f"c{i}.ple"))
        assert code == 0
        nonces.append(err.strip())
    assert nonces == [f"nonce={'00' * 12} counter=0", f"nonce={'00' * 11}01 counter=1"]

    monkeypatch.setenv("GRAIN_PLE_STORE_DIR", str(tmp_path / "rx"))
    args = ["decrypt", "--key", key, "--in", str(tmp_path / "c1.ple"), "--out", str(tmp_path / "p.ple")]
    assert run(capsys, *args, "--counter", "1")[0] == 0
    assert Frame.from_file_bytes((tmp_path / "p.ple").read_bytes()).bits.tolist() == \
        np.unpackbits(np.frombuffer(b"hello physical layer", np.uint8)).tolist()
    code, _, err = run(capsys, *args, "--counter", "1")
    assert code == 1 and "duplicate" in err


def test_encrypt_without_nonce_or_store(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("GRAIN_PLE_STORE_DIR", raising=False)
    raw = tmp_path / "raw.bin"
    raw.write_bytes(b"x")
    code, _, err = run(capsys, "encrypt", "--key", ZK, "--in", str(raw), "--out", str(tmp_path / "o"))
    assert code == 1 and "GRAIN_PLE_STORE_DIR" in err


def test_bad_frame_file_is_runtime_error(tmp_path, capsys):
    bad = tmp_path / "bad.ple"
    bad.write_bytes(b"PLE1garbage")
    code, _, err = run(capsys, "decrypt", "--key", ZK, "--nonce", ZN, "--in", str(bad))
    assert code == 1 and err


def test_bench_smoke(capsys):
    code, out, _ = run(capsys, "bench", "--bits", "2000")
    assert code == 0
    rates = [float(line.split()[1]) for line in out.splitlines()]
    assert len(rates) == 2 and all(r > 0 for r in rates)
