"""``grain-ple`` command line.

Exit status: 0 on success, 2 on usage errors, 1 on runtime errors.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import bits as _bits
from .channel import DEFAULT_KEY_HEX, SimConfig, sweep, to_csv
from .codec import CODECS
from .core import BACKENDS, golden_records, keystream
from .frame import EncryptedFrame, Frame, FrameFormatError, MAGIC, decrypt_frame, encrypt_frame
from .keys import KeyMaterial, Nonce
from .session import SessionStore, accept_frame, issue_nonce

STORE_ENV = "GRAIN_PLE_STORE_DIR"


class CliError(Exception):
    """Runtime failure reported with exit status 1."""


def _key(text: str) -> KeyMaterial:
    if len(text) != 32:
        raise argparse.ArgumentTypeError("key must be exactly 32 hex digits")
    try:
        return KeyMaterial.from_hex(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _nonce(text: str) -> Nonce:
    if len(text) != 24:
        raise argparse.ArgumentTypeError("nonce must be exactly 24 hex digits")
    try:
        return Nonce.from_hex(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _p_list(text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad probability list {text!r}") from None
    if not values or any(not 0.0 <= v <= 1.0 for v in values):
        raise argparse.ArgumentTypeError("probabilities must lie in [0, 1]")
    return values


def _write(out: str | None, data: bytes) -> None:
    if out is None or out == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        Path(out).write_bytes(data)


def _read(path: str | None) -> bytes:
    if path is None or path == "-":
        return sys.stdin.buffer.read()
    return Path(path).read_bytes()


def _store() -> SessionStore:
    directory = os.environ.get(STORE_ENV)
    if not directory:
        raise CliError(f"no nonce given and {STORE_ENV} is not set")
    return SessionStore(directory)


def cmd_keystream(args) -> None:
    ks = keystream(args.key, args.nonce, args.bits, args.backend)
    _write(args.out, (ks.hex() + "\n").encode() if args.bits else b"")


def cmd_encrypt(args) -> None:
    data = _read(args.input)
    if data[:4] == MAGIC:
        frame = Frame.from_file_bytes(data)
        if args.disclosed_prefix is not None:
            frame = Frame(frame.bits, frame.codeword_len, args.disclosed_prefix)
    else:
        frame = Frame(_bits.from_bytes(data), args.codeword_len, args.disclosed_prefix or 0)
    nonce = args.nonce
    if nonce is None:
        store = _store()
        nonce, _ = issue_nonce(store.open(args.key.key_id), store)
        print(f"nonce={nonce.hex()} counter={nonce.counter}", file=sys.stderr)
    ks = keystream(args.key, nonce, len(frame) - frame.disclosed_prefix, args.backend)
    _write(args.out, encrypt_frame(frame, ks).to_file_bytes())


def cmd_decrypt(args) -> None:
    received = EncryptedFrame.from_file_bytes(_read(args.input))
    nonce = args.nonce
    if args.counter is not None:
        store = _store()
        decision, _ = accept_frame(store.open(args.key.key_id), args.counter, store)
        if not decision.accepted:
            raise CliError(f"frame counter {args.counter} rejected ({decision.reason})")
        nonce = decision.nonce
    ks = keystream(args.key, nonce, received.encrypted_len, args.backend)
    _write(args.out, decrypt_frame(received, ks).to_file_bytes())


def cmd_simulate(args) -> None:
    config = SimConfig(
        codec=args.codec, data_bits=args.bits, ple=args.ple == "on",
        disclosed_prefix=args.disclosed_prefix, seed=args.seed, key=args.key,
    )
    try:
        reports = sweep(args.p, args.trials, config)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    _write(args.out, to_csv(reports).encode())


def cmd_vectors(args) -> None:
    text = golden_records(args.key, args.nonce, args.bits, backend=args.backend)
    _write(args.out, text.encode())


def cmd_bench(args) -> None:
    names = sorted(BACKENDS) if args.backend is None else [args.backend]
    key, nonce = args.key, args.nonce
    outputs = {name: keystream(key, nonce, min(args.bits, 4096), name).bits for name in names}
    first = outputs[names[0]]
    if any(not np.array_equal(first, z) for z in outputs.values()):
        raise CliError("backends disagree; refusing to benchmark")
    for name in names:
        start = time.perf_counter()
        keystream(key, nonce, args.bits, name)
        elapsed = time.perf_counter() - start
        print(f"{name}: {args.bits / elapsed:.0f} bits/s ({args.bits} bits in {elapsed:.3f} s)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="grain-ple", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def cipher_flags(p, need_nonce=True, bits_default=None):
        p.add_argument("--key", type=_key, required=True)
        if need_nonce:
            p.add_argument("--nonce", type=_nonce, required=True)
        if bits_default is not None:
            p.add_argument("--bits", type=_nonneg, default=bits_default)
        p.add_argument("--backend", choices=sorted(BACKENDS), default="optimized")
        p.add_argument("--out")

    p = sub.add_parser("keystream", help="print keystream bits as hex")
    cipher_flags(p, bits_default=128)
    p.set_defaults(func=cmd_keystream)

    p = sub.add_parser("encrypt", help="encrypt a PLE1 frame file (or raw bytes)")
    cipher_flags(p, need_nonce=False)
    p.add_argument("--nonce", type=_nonce, help=f"default: next counter from ${STORE_ENV}")
    p.add_argument("--in", dest="input")
    p.add_argument("--codeword-len", type=_positive, default=8, help="n for raw (non-PLE1) input")
    p.add_argument("--disclosed-prefix", type=_nonneg)
    p.set_defaults(func=cmd_encrypt)

    p = sub.add_parser("decrypt", help="decrypt a PLE1 frame file")
    cipher_flags(p, need_nonce=False)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--nonce", type=_nonce)
    group.add_argument("--counter", type=_nonneg, help=f"frame counter; replay-checked in ${STORE_ENV}")
    p.add_argument("--in", dest="input")
    p.set_defaults(func=cmd_decrypt)

    p = sub.add_parser("simulate", help="Monte-Carlo pipeline sweep, CSV on stdout")
    p.add_argument("--key", type=_key, default=KeyMaterial.from_hex(DEFAULT_KEY_HEX))
    p.add_argument("--codec", choices=sorted(CODECS), default="hamming74")
    p.add_argument("--p", type=_p_list, default=[0.01], help="comma-separated crossover probabilities")
    p.add_argument("--trials", type=_positive, default=1)
    p.add_argument("--seed", type=_nonneg, default=0)
    p.add_argument("--ple", choices=("on", "off"), default="on")
    p.add_argument("--disclosed-prefix", type=_nonneg, default=0)
    p.add_argument("--bits", type=_positive, default=4096, help="data bits per trial")
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("vectors", help="emit golden register snapshots and keystream")
    p.add_argument("--key", type=_key, default=KeyMaterial.zero())
    p.add_argument("--nonce", type=_nonce, default=Nonce.zero())
    p.add_argument("--bits", type=_nonneg, default=128)
    p.add_argument("--backend", choices=sorted(BACKENDS), default="reference")
    p.add_argument("--out")
    p.set_defaults(func=cmd_vectors)

    p = sub.add_parser("bench", help="keystream throughput of each backend")
    p.add_argument("--key", type=_key, default=KeyMaterial.zero())
    p.add_argument("--nonce", type=_nonce, default=Nonce.zero())
    p.add_argument("--bits", type=_positive, default=100_000)
    p.add_argument("--backend", choices=sorted(BACKENDS))
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (CliError, FrameFormatError, OSError, ValueError, RuntimeError) as exc:
        print(f"grain-ple: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
