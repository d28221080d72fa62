"""Grain-128PLE stream cipher and a physical-layer encryption testbed.

Encryption sits between the channel encoder and the modulator: channel
coded bits are XORed with keystream, sent over a binary symmetric channel,
XORed again at the receiver and only then decoded.
"""

from .codec import HAMMING74, REPETITION3, CodecSpec, decode, encode
from .core import (
    CipherState, Grain128PLE, InitializationIncomplete, get_backend, keystream,
    load_initial_state,
)
from .frame import EncryptedFrame, Frame, decrypt_frame, encrypt_frame, segment
from .keys import InsufficientKeystream, Keystream, KeyMaterial, Nonce

__version__ = "0.1.0"

__all__ = [
    "CipherState", "CodecSpec", "EncryptedFrame", "Frame", "Grain128PLE", "HAMMING74",
    "InitializationIncomplete", "InsufficientKeystream", "KeyMaterial", "Keystream",
    "Nonce", "REPETITION3", "decode", "decrypt_frame", "encode", "encrypt_frame",
    "get_backend", "keystream", "load_initial_state", "segment",
]
