"""Generating Grain-128PLE keystream with either backend."""

import numpy as np

from grain_ple import KeyMaterial, Nonce, keystream
from grain_ple.core import golden_records, load_initial_state, optimized, reference

key = KeyMaterial.from_hex("000102030405060708090a0b0c0d0e0f")
nonce = Nonce.from_counter(1)  # nonces are 96-bit counters, most significant bit first

# 128 keystream bits, packed MSB-first into hex
z = keystream(key, nonce, 128)
print("z[0..128) =", z.hex())

# the two backends are interchangeable
z_ref = keystream(key, nonce, 128, backend="reference")
print("reference == optimized:", np.array_equal(z.bits, z_ref.bits))

# stepping the state machine by hand: load, 512 init rounds, then keystream
state = load_initial_state(key, nonce)
print("round", state.round, "lfsr tail", state.lfsr[90:].tolist())
reference.advance(state, 512)
print(state.record())
print("first 16 bits:", reference.generate_keystream(state, 16).bits.tolist())

# keystream is only available after initialization
early = load_initial_state(key, nonce)
optimized.advance(early, 100)
try:
    optimized.generate_keystream(early, 8)
except RuntimeError as exc:
    print("refused:", exc)

# golden records for the all-zero key and nonce
print(golden_records(KeyMaterial.zero(), Nonce.zero()), end="")
