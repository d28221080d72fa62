"""Bit-vector helpers.

Bits are carried as 1-D ``uint8`` arrays of zeros and ones.  Every
conversion to and from bytes uses one convention: bit ``i`` is bit
``7 - (i % 8)`` of byte ``i // 8`` (most significant bit first).
"""

from __future__ import annotations

import numpy as np

BitArray = np.ndarray


def as_bits(value, length: int | None = None) -> BitArray:
    """Coerce a sequence of 0/1 values to a ``uint8`` bit array."""
    bits = np.asarray(value, dtype=np.uint8).reshape(-1)
    if bits.size and bits.max() > 1:
        raise ValueError("bit arrays may only contain 0 and 1")
    if length is not None and bits.size != length:
        raise ValueError(f"expected {length} bits, got {bits.size}")
    return bits


def from_bytes(data: bytes, nbits: int | None = None) -> BitArray:
    bits = np.unpackbits(np.frombuffer(bytes(data), dtype=np.uint8))
    if nbits is None:
        return bits
    if nbits > bits.size:
        raise ValueError(f"{len(data)} bytes cannot supply {nbits} bits")
    return bits[:nbits].copy()


def to_bytes(bits) -> bytes:
    """Pack bits MSB-first; a trailing partial byte is zero-padded."""
    return np.packbits(as_bits(bits)).tobytes()


def from_hex(text: str, nbits: int | None = None) -> BitArray:
    text = text.strip().lower()
    if text.startswith("0x"):
        text = text[2:]
    try:
        data = bytes.fromhex(text)
    except ValueError as exc:
        raise ValueError(f"invalid hex string {text!r}") from exc
    if nbits is not None and len(data) * 8 != nbits:
        raise ValueError(f"expected {nbits // 4} hex digits, got {len(text)}")
    return from_bytes(data, nbits)


def to_hex(bits) -> str:
    return to_bytes(bits).hex()


def from_int(value: int, nbits: int) -> BitArray:
    """Big-endian: bit 0 of the result is the most significant bit."""
    if not 0 <= value < (1 << nbits):
        raise ValueError(f"{value} does not fit in {nbits} bits")
    return from_bytes(value.to_bytes((nbits + 7) // 8, "big"))[-nbits:].copy()


def to_int(bits) -> int:
    bits = as_bits(bits)
    value = 0
    for byte in np.packbits(bits).tobytes():
        value = (value << 8) | byte
    return value >> ((-bits.size) % 8)


def pack_lsb(bits) -> int:
    """Pack so that array index ``i`` lands on integer bit ``i``."""
    return int.from_bytes(np.packbits(as_bits(bits), bitorder="little").tobytes(), "little")


def unpack_lsb(value: int, nbits: int) -> BitArray:
    raw = np.frombuffer(value.to_bytes((nbits + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:nbits].copy()


def hamming_weight(bits) -> int:
    return int(np.count_nonzero(bits))
