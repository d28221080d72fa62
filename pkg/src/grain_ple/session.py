"""Counter nonces and frame-counter replay tracking.

Sender side: the nonce is a 96-bit up-counter per key, written to durable
storage *before* the nonce is handed out, so a crash can skip counters but
never repeat one.

Receiver side: the frame counter carried with each frame is the nonce.  A
1024-entry sliding window below the highest counter seen remembers which
counters were already accepted; anything older is refused.

Store file ``<key_id>.session`` (36 bytes, all integers big-endian)::

    offset  size  field
    0       8     tag: bit 63 = sender exhausted, bit 62 = highest_seen present,
                  bits 61..0 = low 62 bits of SHA-256(key_id)[:8]
    8       12    next_counter (2**96 - 1 when exhausted)
    20      12    highest_seen (0 when absent)
    32      4     CRC-32 of bytes 0..31

The window bitmap is not stored.  After a restore every counter at or below
``highest_seen`` is treated as already seen.
"""

from __future__ import annotations

import dataclasses
import hashlib
import os
import struct
import zlib
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

from .keys import Nonce

COUNTER_LIMIT = 1 << 96
REPLAY_WINDOW = 1024
RECORD_SIZE = 32
FILE_SIZE = RECORD_SIZE + 4

_EXHAUSTED = 1 << 63
_HAS_HIGHEST = 1 << 62
_TAG_MASK = (1 << 62) - 1
_WINDOW_MASK = (1 << REPLAY_WINDOW) - 1


class CounterExhausted(RuntimeError):
    """All 2**96 nonces for this key have been issued; retire the key."""


class CorruptSessionStore(RuntimeError):
    pass


@dataclass(frozen=True)
class SessionRecord:
    key_id: str
    next_counter: int = 0
    highest_seen: int | None = None
    # bit d set: counter highest_seen - d has been accepted
    seen_window: int = 0

    def __post_init__(self):
        if not 0 <= self.next_counter <= COUNTER_LIMIT:
            raise ValueError("next_counter out of range")
        if self.highest_seen is not None and not 0 <= self.highest_seen < COUNTER_LIMIT:
            raise ValueError("highest_seen out of range")

    @property
    def exhausted(self) -> bool:
        return self.next_counter >= COUNTER_LIMIT


class FrameDecision(NamedTuple):
    accepted: bool
    nonce: Nonce | None
    reason: str  # "accepted", "duplicate", "stale" or "invalid"


def _key_tag(key_id: str) -> int:
    digest = hashlib.sha256(key_id.encode()).digest()
    return int.from_bytes(digest[:8], "big") & _TAG_MASK


def encode_record(record: SessionRecord) -> bytes:
    tag = _key_tag(record.key_id)
    if record.exhausted:
        tag |= _EXHAUSTED
    if record.highest_seen is not None:
        tag |= _HAS_HIGHEST
    body = (
        struct.pack(">Q", tag)
        + min(record.next_counter, COUNTER_LIMIT - 1).to_bytes(12, "big")
        + (record.highest_seen or 0).to_bytes(12, "big")
    )
    return body + struct.pack(">I", zlib.crc32(body))


def decode_record(data: bytes, key_id: str) -> SessionRecord:
    if len(data) != FILE_SIZE:
        raise CorruptSessionStore(f"session record is {len(data)} bytes, expected {FILE_SIZE}")
    body, (crc,) = data[:RECORD_SIZE], struct.unpack(">I", data[RECORD_SIZE:])
    if zlib.crc32(body) != crc:
        raise CorruptSessionStore("session record checksum mismatch")
    (tag,) = struct.unpack(">Q", body[:8])
    if tag & _TAG_MASK != _key_tag(key_id):
        raise CorruptSessionStore(f"session record belongs to a different key than {key_id!r}")
    next_counter = int.from_bytes(body[8:20], "big")
    if tag & _EXHAUSTED:
        next_counter = COUNTER_LIMIT
    highest = int.from_bytes(body[20:32], "big") if tag & _HAS_HIGHEST else None
    window = _WINDOW_MASK if highest is not None else 0
    return SessionRecord(key_id, next_counter, highest, window)


class SessionStore:
    """One small file per key id inside ``directory``."""

    def __init__(self, directory):
        self.directory = Path(directory)

    def path(self, key_id: str) -> Path:
        if not key_id or any(c in key_id for c in "/\\\0") or key_id in (".", ".."):
            raise ValueError(f"unusable key id {key_id!r}")
        return self.directory / f"{key_id}.session"

    def load(self, key_id: str) -> SessionRecord | None:
        path = self.path(key_id)
        try:
            data = path.read_bytes()
        except FileNotFoundError:
            return None
        return decode_record(data, key_id)

    def open(self, key_id: str) -> SessionRecord:
        """Existing record, or a fresh one if the key has never been used."""
        return self.load(key_id) or SessionRecord(key_id)

    def save(self, record: SessionRecord) -> None:
        """Atomic, durable replace of the record file."""
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self.path(record.key_id)
        tmp = path.with_suffix(".tmp")
        with open(tmp, "wb") as fh:
            fh.write(encode_record(record))
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
        try:
            dir_fd = os.open(self.directory, os.O_RDONLY)
        except OSError:
            return
        try:
            os.fsync(dir_fd)
        finally:
            os.close(dir_fd)


def issue_nonce(record: SessionRecord, store: SessionStore | None = None):
    """Return ``(nonce, updated_record)``.

    With a store, the updated record is persisted before this returns; if
    the write fails no nonce is released.
    """
    if record.exhausted:
        raise CounterExhausted(f"key {record.key_id} has used all 2**96 nonces")
    counter = record.next_counter
    updated = dataclasses.replace(record, next_counter=counter + 1)
    if store is not None:
        store.save(updated)
    return Nonce.from_counter(counter), updated


def accept_frame(record: SessionRecord, frame_counter: int, store: SessionStore | None = None):
    """Decide whether a frame may be decrypted.  Returns ``(decision, updated_record)``.

    Accepted frames are decrypted with ``Nonce.from_counter(frame_counter)``.
    """
    if not 0 <= frame_counter < COUNTER_LIMIT:
        return FrameDecision(False, None, "invalid"), record
    highest, window = record.highest_seen, record.seen_window
    if highest is None:
        highest, window = frame_counter, 1
    elif frame_counter > highest:
        window = ((window << (frame_counter - highest)) | 1) & _WINDOW_MASK
        highest = frame_counter
    else:
        age = highest - frame_counter
        if age >= REPLAY_WINDOW:
            return FrameDecision(False, None, "stale"), record
        if window >> age & 1:
            return FrameDecision(False, None, "duplicate"), record
        window |= 1 << age
    updated = dataclasses.replace(record, highest_seen=highest, seen_window=window)
    if store is not None:
        store.save(updated)
    return FrameDecision(True, Nonce.from_counter(frame_counter), "accepted"), updated
