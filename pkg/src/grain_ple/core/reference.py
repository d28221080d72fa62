"""Bit-accurate reference backend.

Each register is an array indexed exactly like the equations (``s[i]`` is
s_i), and one call to :func:`clock` is one time slot.  The tap functions
operate elementwise, so they accept either a single register of shape
``(128,)`` or a batch of registers stacked as ``(128, N)``; see
:func:`batch_run`.
"""

from __future__ import annotations

import numpy as np

from ..keys import Keystream, KeyMaterial, Nonce
from .state import (
    INIT_ROUNDS, KEY_REINTRO_END, KEY_REINTRO_START, CipherState,
    InitializationIncomplete, erase_key_if_done, load_initial_state, require_key,
)

name = "reference"


def f_bit(s):
    return s[0] ^ s[7] ^ s[38] ^ s[70] ^ s[81] ^ s[96]


def g_bit(b):
    return (
        b[0] ^ b[26] ^ b[56] ^ b[91] ^ b[96]
        ^ (b[3] & b[67]) ^ (b[11] & b[13]) ^ (b[17] & b[18]) ^ (b[27] & b[59])
        ^ (b[40] & b[48]) ^ (b[61] & b[65]) ^ (b[68] & b[84])
        ^ (b[22] & b[24] & b[25]) ^ (b[70] & b[78] & b[82])
        ^ (b[88] & b[92] & b[93] & b[95])
    )


def h_bit(s, b):
    return (
        (b[12] & s[8]) ^ (s[13] & s[20]) ^ (b[95] & s[42])
        ^ (s[60] & s[79]) ^ (b[12] & b[95] & s[94])
    )


def y_bit(s, b):
    return h_bit(s, b) ^ s[93] ^ b[2] ^ b[15] ^ b[36] ^ b[45] ^ b[64] ^ b[73] ^ b[89]


def feedback(s, b, t: int, key):
    """New rear bits ``(b_127^{t+1}, s_127^{t+1})`` and ``y_t`` for round ``t``.

    Everything is computed from the pre-shift registers.
    """
    f = f_bit(s)
    g = g_bit(b)
    y = y_bit(s, b)
    if t < KEY_REINTRO_START:
        return g ^ s[0] ^ y, f ^ y, y
    if t < KEY_REINTRO_END:
        return g ^ s[0] ^ y ^ key[t - 320], f ^ y ^ key[t - 256], y
    return g ^ s[0], f, y


def pre_output(state: CipherState) -> int:
    """y_t of the current registers.  Pure; usable at any round for diagnostics."""
    return int(y_bit(state.lfsr, state.nfsr))


def clock(state: CipherState) -> CipherState:
    t = state.round
    key = require_key(state, t) if KEY_REINTRO_START <= t < KEY_REINTRO_END else None
    new_b, new_s, _ = feedback(state.lfsr, state.nfsr, t, key)
    state.nfsr = np.append(state.nfsr[1:], np.uint8(new_b))
    state.lfsr = np.append(state.lfsr[1:], np.uint8(new_s))
    state.round = t + 1
    erase_key_if_done(state)
    return state


def advance(state: CipherState, rounds: int) -> CipherState:
    for _ in range(rounds):
        clock(state)
    return state


def initialize(key: KeyMaterial, nonce: Nonce) -> CipherState:
    return advance(load_initial_state(key, nonce), INIT_ROUNDS)


def generate_keystream(state: CipherState, length: int) -> Keystream:
    if state.round < INIT_ROUNDS:
        raise InitializationIncomplete(f"state is at round {state.round}, keystream starts at 512")
    if length < 0:
        raise ValueError("length must be non-negative")
    offset = state.round - INIT_ROUNDS
    out = np.empty(length, dtype=np.uint8)
    for i in range(length):
        out[i] = pre_output(state)
        clock(state)
    return Keystream(out, state.key_id, state.nonce, offset)


def diagnostic_preoutputs(key: KeyMaterial, nonce: Nonce, rounds: int = INIT_ROUNDS) -> np.ndarray:
    """y_0 .. y_{rounds-1}, including the values consumed by initialization.

    For golden-file diagnostics only; never use these bits as keystream.
    """
    state = load_initial_state(key, nonce)
    out = np.empty(rounds, dtype=np.uint8)
    for i in range(rounds):
        out[i] = pre_output(state)
        clock(state)
    return out


def batch_run(keys: np.ndarray, nonces: np.ndarray, nbits: int, snapshot_rounds=()):
    """Run ``N`` independent instances side by side.

    ``keys`` is ``(N, 128)`` and ``nonces`` is ``(N, 96)``.  Returns the
    ``(N, nbits)`` keystream and ``{round: (lfsr, nfsr)}`` snapshots, each
    ``(N, 128)``.  The registers live in one tall array per register where
    rows ``t .. t+127`` hold the state at round ``t``, so a left shift is
    just moving the window down a row.
    """
    keys = np.asarray(keys, dtype=np.uint8)
    nonces = np.asarray(nonces, dtype=np.uint8)
    n = keys.shape[0]
    total = INIT_ROUNDS + nbits
    s_tape = np.empty((128 + total, n), dtype=np.uint8)
    b_tape = np.empty((128 + total, n), dtype=np.uint8)
    s_tape[:96] = nonces.T
    s_tape[96:127] = 1
    s_tape[127] = 0
    b_tape[:128] = keys.T
    key_t = keys.T
    z = np.empty((nbits, n), dtype=np.uint8)
    wanted = set(snapshot_rounds)
    snaps = {}
    for t in range(total):
        if t in wanted:
            snaps[t] = (s_tape[t:t + 128].T.copy(), b_tape[t:t + 128].T.copy())
        s = s_tape[t:t + 128]
        b = b_tape[t:t + 128]
        new_b, new_s, y = feedback(s, b, t, key_t)
        b_tape[t + 128] = new_b
        s_tape[t + 128] = new_s
        if t >= INIT_ROUNDS:
            z[t - INIT_ROUNDS] = y
    if total in wanted:
        snaps[total] = (s_tape[total:].T.copy(), b_tape[total:].T.copy())
    return z.T.copy(), snaps
