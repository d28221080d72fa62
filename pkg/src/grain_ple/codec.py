"""Channel codes for the encoder/decoder stages of the pipeline.

Both codes are systematic (data bits first in each codeword) and decode to
the nearest codeword.  Both are perfect codes, so a receiver cannot tell an
over-weight error pattern from a correctable one; ``failed_codewords`` is
only available when the caller supplies the transmitted codewords.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import bits as _bits


@dataclass(frozen=True)
class CodecSpec:
    name: str
    n: int
    k: int
    correctable: int = 1

    @property
    def rate(self) -> float:
        return self.k / self.n


REPETITION3 = CodecSpec("repetition3", n=3, k=1)
HAMMING74 = CodecSpec("hamming74", n=7, k=4)
CODECS = {c.name: c for c in (REPETITION3, HAMMING74)}

# Systematic Hamming(7,4): codeword = d1 d2 d3 d4 p1 p2 p3 with
# p1 = d1^d2^d4, p2 = d1^d3^d4, p3 = d2^d3^d4.
_P = np.array([
    [1, 1, 0],
    [1, 0, 1],
    [0, 1, 1],
    [1, 1, 1],
], dtype=np.uint8)
GENERATOR = np.hstack([np.eye(4, dtype=np.uint8), _P])
PARITY_CHECK = np.hstack([_P.T, np.eye(3, dtype=np.uint8)])
# syndrome (as s1*4 + s2*2 + s3) -> flipped position, -1 for none
_SYNDROME_POS = np.full(8, -1, dtype=np.int64)
for _pos in range(7):
    _s = PARITY_CHECK[:, _pos]
    _SYNDROME_POS[_s[0] * 4 + _s[1] * 2 + _s[2]] = _pos


class DecodeResult(NamedTuple):
    data: np.ndarray
    corrected: int
    failed_codewords: int


def get_codec(spec) -> CodecSpec:
    if isinstance(spec, CodecSpec):
        return spec
    try:
        return CODECS[spec]
    except KeyError:
        raise ValueError(f"unknown codec {spec!r}; choose from {sorted(CODECS)}") from None


def encode(data, spec) -> np.ndarray:
    spec = get_codec(spec)
    data = _bits.as_bits(data)
    if data.size % spec.k:
        raise ValueError(f"{data.size} data bits is not a multiple of k={spec.k}")
    if spec is REPETITION3 or spec.name == "repetition3":
        return np.repeat(data, 3)
    blocks = data.reshape(-1, 4)
    return ((blocks @ GENERATOR) & 1).astype(np.uint8).reshape(-1)


def decode(received, spec, sent=None) -> DecodeResult:
    """Nearest-codeword decoding.

    ``corrected`` counts codewords the decoder altered.  If ``sent`` (the
    transmitted codeword bits) is given, ``failed_codewords`` counts
    codewords whose true error weight exceeded ``spec.correctable``;
    otherwise it is 0.
    """
    spec = get_codec(spec)
    received = _bits.as_bits(received)
    if received.size % spec.n:
        raise ValueError(f"{received.size} received bits is not a multiple of n={spec.n}")
    words = received.reshape(-1, spec.n)
    if spec.name == "repetition3":
        weight = words.sum(axis=1)
        data = (weight >= 2).astype(np.uint8)
        corrected = int(np.count_nonzero((weight == 1) | (weight == 2)))
    else:
        syn = (words @ PARITY_CHECK.T) & 1
        pos = _SYNDROME_POS[syn[:, 0] * 4 + syn[:, 1] * 2 + syn[:, 2]]
        fixed = words.copy()
        rows = np.flatnonzero(pos >= 0)
        fixed[rows, pos[rows]] ^= 1
        data = fixed[:, :4].reshape(-1).copy()
        corrected = int(rows.size)
    failed = 0
    if sent is not None:
        sent = _bits.as_bits(sent, received.size).reshape(-1, spec.n)
        err_weight = (words ^ sent).sum(axis=1)
        failed = int(np.count_nonzero(err_weight > spec.correctable))
    return DecodeResult(data.reshape(-1), corrected, failed)
