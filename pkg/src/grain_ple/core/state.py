"""Cipher state shared by both backends, plus golden-record formatting."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .. import bits as _bits
from ..keys import KeyMaterial, Nonce

REGISTER_BITS = 128
INIT_ROUNDS = 512
# Feedback schedule: y feeds both registers before KEY_REINTRO_START, key bits
# are added until KEY_REINTRO_END, and the key copy is erased from there on.
KEY_REINTRO_START = 320
KEY_REINTRO_END = 384

# Tap lists, kept as data so the conformance tests can walk them.
F_TAPS = (0, 7, 38, 70, 81, 96)
G_LINEAR = (0, 26, 56, 91, 96)
G_PRODUCTS = (
    (3, 67), (11, 13), (17, 18), (27, 59), (40, 48), (61, 65), (68, 84),
    (22, 24, 25), (70, 78, 82), (88, 92, 93, 95),
)
# h monomials as (nfsr taps, lfsr taps)
H_PRODUCTS = (
    ((12,), (8,)), ((), (13, 20)), ((95,), (42,)), ((), (60, 79)), ((12, 95), (94,)),
)
Y_LFSR = (93,)
Y_NFSR = (2, 15, 36, 45, 64, 73, 89)


class InitializationIncomplete(RuntimeError):
    """Raised when keystream is requested before round 512."""


@dataclass
class CipherState:
    """LFSR + NFSR contents and the round counter ``t``.

    ``lfsr[i]`` is s_i and ``nfsr[i]`` is b_i.  ``key_copy`` is only needed
    for the key re-introduction rounds and is dropped once ``round``
    reaches 384.
    """

    lfsr: np.ndarray
    nfsr: np.ndarray
    round: int = 0
    key_copy: np.ndarray | None = None
    key_id: str | None = field(default=None, compare=False)
    nonce: Nonce | None = field(default=None, compare=False)

    def __post_init__(self):
        self.lfsr = _bits.as_bits(self.lfsr, REGISTER_BITS).copy()
        self.nfsr = _bits.as_bits(self.nfsr, REGISTER_BITS).copy()
        if self.key_copy is not None:
            self.key_copy = _bits.as_bits(self.key_copy, REGISTER_BITS).copy()
        if self.round < 0:
            raise ValueError("round must be non-negative")

    def copy(self) -> "CipherState":
        return CipherState(
            self.lfsr, self.nfsr, self.round,
            None if self.key_copy is None else self.key_copy,
            self.key_id, self.nonce,
        )

    def registers_equal(self, other: "CipherState") -> bool:
        return (
            self.round == other.round
            and np.array_equal(self.lfsr, other.lfsr)
            and np.array_equal(self.nfsr, other.nfsr)
        )

    def record(self) -> str:
        return state_record(self.round, self.lfsr, self.nfsr)


def load_initial_state(key: KeyMaterial, nonce: Nonce) -> CipherState:
    """Key into the NFSR; nonce, 31 ones and a single zero into the LFSR."""
    lfsr = np.concatenate([nonce.bits, np.ones(31, np.uint8), np.zeros(1, np.uint8)])
    return CipherState(
        lfsr=lfsr, nfsr=key.bits, round=0, key_copy=key.bits,
        key_id=key.key_id, nonce=nonce,
    )


def erase_key_if_done(state: CipherState) -> None:
    if state.round >= KEY_REINTRO_END and state.key_copy is not None:
        state.key_copy[:] = 0
        state.key_copy = None


def require_key(state: CipherState, t: int) -> np.ndarray:
    if state.key_copy is None:
        raise ValueError(f"round {t} needs the key copy, but the state carries none")
    return state.key_copy


def state_record(round_: int, lfsr, nfsr) -> str:
    return f"round={round_} lfsr={_bits.to_hex(lfsr)} nfsr={_bits.to_hex(nfsr)}"


def keystream_record(bits) -> str:
    bits = _bits.as_bits(bits)
    return f"z[0..{bits.size})={_bits.to_hex(bits)}"


_STATE_RE = re.compile(r"^round=(\d+) lfsr=([0-9a-f]{32}) nfsr=([0-9a-f]{32})$")
_STREAM_RE = re.compile(r"^z\[0\.\.(\d+)\)=([0-9a-f]*)$")


def parse_record(line: str):
    """Parse one golden line into ``("state", round, lfsr, nfsr)`` or ``("keystream", bits)``."""
    line = line.strip()
    m = _STATE_RE.match(line)
    if m:
        return ("state", int(m[1]), _bits.from_hex(m[2], 128), _bits.from_hex(m[3], 128))
    m = _STREAM_RE.match(line)
    if m:
        n = int(m[1])
        if len(m[2]) != 2 * ((n + 7) // 8):
            raise ValueError(f"keystream record length mismatch: {line!r}")
        return ("keystream", _bits.from_bytes(bytes.fromhex(m[2]), n))
    raise ValueError(f"unrecognised golden record: {line!r}")
