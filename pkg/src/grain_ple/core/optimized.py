"""Word-parallel backend.

Registers are packed into Python integers with register slot ``i`` at
integer bit ``i``.  Shifting a packed register right by ``j`` lines up tap
``j`` for the next ``w`` rounds at once: bit ``k`` of ``lfsr >> j`` is
s_j at round ``t + k`` as long as ``j + k <= 127``.  The highest tap is 96,
so up to 32 rounds can be evaluated per step.  Steps never straddle the
320/384/512 schedule boundaries, and a request for a partial word simply
runs a narrower step, so the observable stream is bit-identical to the
reference backend.
"""

from __future__ import annotations

import numpy as np

from .. import bits as _bits
from ..keys import Keystream, KeyMaterial, Nonce
from .state import (
    INIT_ROUNDS, KEY_REINTRO_END, KEY_REINTRO_START, CipherState,
    InitializationIncomplete, erase_key_if_done, load_initial_state,
)

name = "optimized"

WORD = 32
MASK128 = (1 << 128) - 1
_BOUNDARIES = (KEY_REINTRO_START, KEY_REINTRO_END, INIT_ROUNDS)


def f_word(L: int, w: int) -> int:
    return (L ^ (L >> 7) ^ (L >> 38) ^ (L >> 70) ^ (L >> 81) ^ (L >> 96)) & ((1 << w) - 1)


def g_word(N: int, w: int) -> int:
    v = N ^ (N >> 26) ^ (N >> 56) ^ (N >> 91) ^ (N >> 96)
    v ^= (N >> 3) & (N >> 67)
    v ^= (N >> 11) & (N >> 13)
    v ^= (N >> 17) & (N >> 18)
    v ^= (N >> 27) & (N >> 59)
    v ^= (N >> 40) & (N >> 48)
    v ^= (N >> 61) & (N >> 65)
    v ^= (N >> 68) & (N >> 84)
    v ^= (N >> 22) & (N >> 24) & (N >> 25)
    v ^= (N >> 70) & (N >> 78) & (N >> 82)
    v ^= (N >> 88) & (N >> 92) & (N >> 93) & (N >> 95)
    return v & ((1 << w) - 1)


def h_word(L: int, N: int, w: int) -> int:
    b12 = N >> 12
    b95 = N >> 95
    v = (b12 & (L >> 8)) ^ ((L >> 13) & (L >> 20)) ^ (b95 & (L >> 42))
    v ^= ((L >> 60) & (L >> 79)) ^ (b12 & b95 & (L >> 94))
    return v & ((1 << w) - 1)


def y_word(L: int, N: int, w: int) -> int:
    v = h_word(L, N, w) ^ (L >> 93)
    v ^= (N >> 2) ^ (N >> 15) ^ (N >> 36) ^ (N >> 45) ^ (N >> 64) ^ (N >> 73) ^ (N >> 89)
    return v & ((1 << w) - 1)


def _step(L: int, N: int, t: int, K: int, w: int):
    """Advance ``w`` rounds from round ``t``.  Returns ``(L, N, y_word)``."""
    m = (1 << w) - 1
    y = y_word(L, N, w)
    f = f_word(L, w)
    nb = g_word(N, w) ^ (L & m)
    ns = f
    if t < KEY_REINTRO_END:
        nb ^= y
        ns ^= y
        if t >= KEY_REINTRO_START:
            nb ^= (K >> (t - 320)) & m
            ns ^= (K >> (t - 256)) & m
    shift = 128 - w
    return (L >> w) | (ns << shift), (N >> w) | (nb << shift), y


def _width(t: int, remaining: int) -> int:
    w = min(WORD, remaining)
    for edge in _BOUNDARIES:
        if t < edge:
            return min(w, edge - t)
    return w


class PackedRegisters:
    """Packed working copy of a :class:`CipherState`."""

    __slots__ = ("L", "N", "t", "K")

    def __init__(self, state: CipherState):
        self.L = _bits.pack_lsb(state.lfsr)
        self.N = _bits.pack_lsb(state.nfsr)
        self.t = state.round
        self.K = None if state.key_copy is None else _bits.pack_lsb(state.key_copy)

    def run(self, rounds: int, collect: bool = False):
        words = []
        L, N, t, K = self.L, self.N, self.t, self.K
        end = t + rounds
        while t < end:
            w = _width(t, end - t)
            if KEY_REINTRO_START <= t < KEY_REINTRO_END and K is None:
                raise ValueError(f"round {t} needs the key copy, but the state carries none")
            L, N, y = _step(L, N, t, K, w)
            t += w
            if collect:
                words.append((y, w))
        self.L, self.N, self.t = L, N, t
        if t >= KEY_REINTRO_END:
            self.K = None
        return words

    def store(self, state: CipherState) -> CipherState:
        state.lfsr = _bits.unpack_lsb(self.L, 128)
        state.nfsr = _bits.unpack_lsb(self.N, 128)
        state.round = self.t
        erase_key_if_done(state)
        return state


def _words_to_bits(words, length: int) -> np.ndarray:
    if not words:
        return np.zeros(0, dtype=np.uint8)
    full = [y for y, w in words[:-1]]
    last, last_w = words[-1]
    parts = []
    if full:
        raw = np.asarray(full, dtype="<u4").view(np.uint8)
        parts.append(np.unpackbits(raw, bitorder="little"))
    parts.append(_bits.unpack_lsb(last, last_w))
    out = np.concatenate(parts)
    assert out.size == length
    return out


def pre_output(state: CipherState) -> int:
    """y_t of the current registers.  Pure; usable at any round for diagnostics."""
    return y_word(_bits.pack_lsb(state.lfsr), _bits.pack_lsb(state.nfsr), 1)


def advance(state: CipherState, rounds: int) -> CipherState:
    if rounds:
        regs = PackedRegisters(state)
        regs.run(rounds)
        regs.store(state)
    return state


def clock(state: CipherState) -> CipherState:
    return advance(state, 1)


def initialize(key: KeyMaterial, nonce: Nonce) -> CipherState:
    return advance(load_initial_state(key, nonce), INIT_ROUNDS)


def generate_keystream(state: CipherState, length: int) -> Keystream:
    if state.round < INIT_ROUNDS:
        raise InitializationIncomplete(f"state is at round {state.round}, keystream starts at 512")
    if length < 0:
        raise ValueError("length must be non-negative")
    offset = state.round - INIT_ROUNDS
    if length == 0:
        return Keystream(np.zeros(0, dtype=np.uint8), state.key_id, state.nonce, offset)
    regs = PackedRegisters(state)
    # After initialization only the final word can be narrower than WORD.
    words = regs.run(length, collect=True)
    regs.store(state)
    return Keystream(_words_to_bits(words, length), state.key_id, state.nonce, offset)
