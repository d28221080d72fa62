"""XOR decryption passes channel errors through untouched.

Encrypt a channel-coded frame, flip some bits on the way, decrypt: the
result is the original codewords with exactly the same bits flipped, so the
channel decoder still works.
"""

import numpy as np

from grain_ple import HAMMING74, KeyMaterial, Nonce, decode, encode, keystream, segment
from grain_ple.frame import decrypt_frame, encrypt_frame

rng = np.random.default_rng(7)
key = KeyMaterial.from_hex("2b7e151628aed2a6abf7158809cf4f3c")
nonce = Nonce.from_counter(0)

message = rng.integers(0, 2, 16, dtype=np.uint8)
codewords = encode(message, HAMMING74)          # 4 codewords of 7 bits
frame = segment(codewords, HAMMING74.n)
print("codewords  ", frame.codewords.tolist())

sent = encrypt_frame(frame, keystream(key, nonce, len(frame)))
print("ciphertext ", sent.bits.reshape(-1, 7).tolist())

# one bit error in each of two codewords
e = np.zeros(len(frame), np.uint8)
e[[3, 19]] = 1
received = sent.with_bits(sent.bits ^ e)

plain = decrypt_frame(received, keystream(key, nonce, len(frame)))
print("decrypted == codewords ^ e:", np.array_equal(plain.bits, codewords ^ e))

result = decode(plain.bits, HAMMING74)
print("decoded message matches:", np.array_equal(result.data, message),
      "corrected codewords:", result.corrected)
