"""Frame-level physical-layer encryption.

A frame is ``L`` channel codewords of ``n`` bits.  Encryption XORs the
keystream onto every bit after the disclosed prefix; the prefix travels in
the clear and consumes no keystream, so keystream bit ``j`` always lands on
the ``j``-th encrypted position whatever the prefix length.

File format (``PLE1``)::

    b"PLE1" | n (u32 big-endian) | disclosed_prefix (u32 big-endian) | payload

The payload is the frame bits packed MSB-first followed by a single ``1``
bit and zero fill to the byte boundary, so the bit length is recoverable
without a length field.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from . import bits as _bits
from .keys import InsufficientKeystream, Keystream

MAGIC = b"PLE1"
_HEADER = struct.Struct(">4sII")


class FrameFormatError(ValueError):
    pass


def _check_prefix(prefix: int, length: int) -> None:
    if not 0 <= prefix <= length:
        raise ValueError(f"disclosed_prefix {prefix} outside [0, {length}]")


@dataclass(eq=False)
class Frame:
    bits: np.ndarray
    codeword_len: int
    disclosed_prefix: int = 0

    def __post_init__(self):
        self.bits = _bits.as_bits(self.bits)
        if self.codeword_len <= 0:
            raise ValueError("codeword_len must be positive")
        if self.bits.size == 0 or self.bits.size % self.codeword_len:
            raise ValueError(
                f"frame of {self.bits.size} bits is not a positive multiple of n={self.codeword_len}"
            )
        _check_prefix(self.disclosed_prefix, self.bits.size)

    @property
    def codeword_count(self) -> int:
        return self.bits.size // self.codeword_len

    @property
    def codewords(self) -> np.ndarray:
        """View of the bits as an ``(L, n)`` array."""
        return self.bits.reshape(self.codeword_count, self.codeword_len)

    def __len__(self):
        return int(self.bits.size)

    def __eq__(self, other):
        return (
            isinstance(other, Frame)
            and self.codeword_len == other.codeword_len
            and self.disclosed_prefix == other.disclosed_prefix
            and np.array_equal(self.bits, other.bits)
        )

    def to_file_bytes(self) -> bytes:
        return _dump(self.bits, self.codeword_len, self.disclosed_prefix)

    @classmethod
    def from_file_bytes(cls, data: bytes) -> "Frame":
        return cls(*_load(data))


@dataclass(eq=False)
class EncryptedFrame:
    bits: np.ndarray
    disclosed_prefix: int = 0
    codeword_len: int = 1

    def __post_init__(self):
        self.bits = _bits.as_bits(self.bits)
        _check_prefix(self.disclosed_prefix, self.bits.size)

    def __len__(self):
        return int(self.bits.size)

    def __eq__(self, other):
        return (
            isinstance(other, EncryptedFrame)
            and self.disclosed_prefix == other.disclosed_prefix
            and np.array_equal(self.bits, other.bits)
        )

    @property
    def encrypted_len(self) -> int:
        return len(self) - self.disclosed_prefix

    def with_bits(self, bits) -> "EncryptedFrame":
        """Same framing, different payload (e.g. what came off the channel)."""
        bits = _bits.as_bits(bits, len(self))
        return EncryptedFrame(bits, self.disclosed_prefix, self.codeword_len)

    def to_file_bytes(self) -> bytes:
        return _dump(self.bits, self.codeword_len, self.disclosed_prefix)

    @classmethod
    def from_file_bytes(cls, data: bytes) -> "EncryptedFrame":
        bits, n, prefix = _load(data)
        return cls(bits, prefix, n)


def segment(bits, codeword_len: int, disclosed_prefix: int = 0) -> Frame:
    """Split a channel-coded bit sequence into ``L = len(bits) / n`` codewords."""
    return Frame(_bits.as_bits(bits).copy(), codeword_len, disclosed_prefix)


def _keystream_bits(keystream, n: int) -> np.ndarray:
    if isinstance(keystream, Keystream):
        return keystream.take(n)
    ks = _bits.as_bits(keystream)
    if ks.size < n:
        raise InsufficientKeystream(f"need {n} keystream bits, got {ks.size}")
    return ks[:n]


def _xor_suffix(bits: np.ndarray, prefix: int, keystream) -> np.ndarray:
    out = bits.copy()
    out[prefix:] ^= _keystream_bits(keystream, bits.size - prefix)
    return out


def encrypt_frame(frame: Frame, keystream) -> EncryptedFrame:
    """c_i = p_i XOR z_{i - prefix} past the disclosed prefix.

    ``keystream`` is either a :class:`Keystream` (consumed in place) or a
    plain bit array whose leading bits are used.
    """
    out = _xor_suffix(frame.bits, frame.disclosed_prefix, keystream)
    return EncryptedFrame(out, frame.disclosed_prefix, frame.codeword_len)


def decrypt_frame(received: EncryptedFrame, keystream) -> Frame:
    """Inverse of :func:`encrypt_frame`; channel errors pass through unchanged."""
    out = _xor_suffix(received.bits, received.disclosed_prefix, keystream)
    return Frame(out, received.codeword_len, received.disclosed_prefix)


def _dump(bits: np.ndarray, n: int, prefix: int) -> bytes:
    padded = np.concatenate([bits, np.ones(1, np.uint8)])
    return _HEADER.pack(MAGIC, n, prefix) + _bits.to_bytes(padded)


def _load(data: bytes):
    if len(data) < _HEADER.size + 1:
        raise FrameFormatError("frame file too short")
    magic, n, prefix = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FrameFormatError(f"bad magic {magic!r}")
    payload = _bits.from_bytes(data[_HEADER.size:])
    ones = np.flatnonzero(payload)
    if ones.size == 0 or payload.size - ones[-1] > 8:
        raise FrameFormatError("missing end-of-payload marker")
    return payload[:ones[-1]].copy(), n, prefix
