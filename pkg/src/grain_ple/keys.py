"""Key, nonce and keystream value types."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from . import bits as _bits

KEY_BITS = 128
NONCE_BITS = 96


def _frozen(array: np.ndarray) -> np.ndarray:
    array = array.copy()
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class KeyMaterial:
    """128-bit secret key; ``bits[0]`` is loaded into NFSR slot 0."""

    bits: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "bits", _frozen(_bits.as_bits(self.bits, KEY_BITS)))

    @classmethod
    def from_bytes(cls, data: bytes) -> "KeyMaterial":
        if len(data) != KEY_BITS // 8:
            raise ValueError(f"key must be 16 bytes, got {len(data)}")
        return cls(_bits.from_bytes(data))

    @classmethod
    def from_hex(cls, text: str) -> "KeyMaterial":
        return cls(_bits.from_hex(text, KEY_BITS))

    @classmethod
    def zero(cls) -> "KeyMaterial":
        return cls(np.zeros(KEY_BITS, dtype=np.uint8))

    def to_bytes(self) -> bytes:
        return _bits.to_bytes(self.bits)

    def hex(self) -> str:
        return self.to_bytes().hex()

    @property
    def key_id(self) -> str:
        """Public identifier: truncated SHA-256 of the key bytes."""
        return hashlib.sha256(b"grain-ple key id" + self.to_bytes()).hexdigest()[:16]

    def __eq__(self, other):
        return isinstance(other, KeyMaterial) and np.array_equal(self.bits, other.bits)

    def __hash__(self):
        return hash(self.to_bytes())

    def __repr__(self):
        return f"KeyMaterial(key_id={self.key_id!r})"


@dataclass(frozen=True, eq=False)
class Nonce:
    """96-bit public nonce (IV)."""

    bits: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "bits", _frozen(_bits.as_bits(self.bits, NONCE_BITS)))

    @classmethod
    def from_bytes(cls, data: bytes) -> "Nonce":
        if len(data) != NONCE_BITS // 8:
            raise ValueError(f"nonce must be 12 bytes, got {len(data)}")
        return cls(_bits.from_bytes(data))

    @classmethod
    def from_hex(cls, text: str) -> "Nonce":
        return cls(_bits.from_hex(text, NONCE_BITS))

    @classmethod
    def from_counter(cls, counter: int) -> "Nonce":
        """Big-endian counter encoding: ``IV_0`` is the most significant bit."""
        return cls(_bits.from_int(counter, NONCE_BITS))

    @classmethod
    def zero(cls) -> "Nonce":
        return cls(np.zeros(NONCE_BITS, dtype=np.uint8))

    def to_bytes(self) -> bytes:
        return _bits.to_bytes(self.bits)

    def hex(self) -> str:
        return self.to_bytes().hex()

    @property
    def counter(self) -> int:
        return _bits.to_int(self.bits)

    def __eq__(self, other):
        return isinstance(other, Nonce) and np.array_equal(self.bits, other.bits)

    def __hash__(self):
        return hash(self.to_bytes())

    def __repr__(self):
        return f"Nonce({self.hex()!r})"


@dataclass
class Keystream:
    """A run of keystream bits plus the (key id, nonce) that produced it.

    ``offset`` is the index of ``bits[0]`` within the full stream, so that
    consumers can check two segments line up.
    """

    bits: np.ndarray
    key_id: str | None = None
    nonce: Nonce | None = None
    offset: int = 0
    consumed: int = field(default=0, compare=False)

    def __len__(self):
        return int(self.bits.size)

    @property
    def remaining(self) -> int:
        return len(self) - self.consumed

    def take(self, n: int) -> np.ndarray:
        """Consume the next ``n`` unused bits."""
        if n < 0:
            raise ValueError("cannot take a negative number of bits")
        if n > self.remaining:
            raise InsufficientKeystream(f"need {n} keystream bits, {self.remaining} left")
        out = self.bits[self.consumed:self.consumed + n]
        self.consumed += n
        return out

    def hex(self) -> str:
        return _bits.to_hex(self.bits)


class InsufficientKeystream(ValueError):
    pass
