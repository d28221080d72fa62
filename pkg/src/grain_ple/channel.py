"""Monte-Carlo simulation of the encode -> encrypt -> BSC -> decrypt -> decode chain.

Randomness: every channel draw uses numpy's PCG64 generator seeded with a
64-bit integer.  Sweep trial ``i`` uses ``splitmix64(base_seed + i)`` as its
channel seed and ``splitmix64(channel_seed ^ DATA_STREAM)`` for its random
payload.  Error vectors are drawn as ``uniform < p``, so for a fixed seed a
larger ``p`` only ever adds flips.

Modulation is the identity: the encrypted codeword bits go straight into
the binary symmetric channel.  Eve sees exactly what Bob sees and decodes
it without decrypting.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from . import bits as _bits
from .codec import CodecSpec, decode, encode, get_codec
from .core import keystream as _keystream
from .frame import EncryptedFrame, decrypt_frame, encrypt_frame, segment
from .keys import KeyMaterial, Nonce

MASK64 = (1 << 64) - 1
DATA_STREAM = 0x5EED_DA7A_5EED_DA7A

CSV_COLUMNS = (
    "trial", "p", "ple", "codec", "disclosed_prefix", "raw_ber",
    "post_fer", "eve_ber", "errors_injected", "seed",
)


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def trial_seed(base_seed: int, trial: int) -> int:
    return splitmix64((base_seed + trial) & MASK64)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed & MASK64))


@dataclass(frozen=True)
class BscChannel:
    crossover_p: float
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.crossover_p <= 1.0:
            raise ValueError(f"crossover probability {self.crossover_p} outside [0, 1]")

    def error_vector(self, length: int) -> np.ndarray:
        return (make_rng(self.seed).random(length) < self.crossover_p).astype(np.uint8)


def transmit(bits, channel: BscChannel):
    """Return ``(received, error_vector)`` with ``received = bits ^ error_vector``."""
    bits = _bits.as_bits(bits)
    e = channel.error_vector(bits.size)
    return bits ^ e, e


@dataclass
class ChannelReport:
    trial: int
    p: float
    ple: bool
    codec: str
    disclosed_prefix: int
    raw_ber: float
    post_fer: float
    eve_ber: float
    errors_injected: int
    seed: int
    # not part of the CSV
    bob_output: np.ndarray = field(repr=False, default=None)
    error_vector: np.ndarray = field(repr=False, default=None)
    bob_ber: float = 0.0
    eve_prefix_ber: float = math.nan
    eve_suffix_ber: float = math.nan
    failed_codewords: int = 0

    def row(self) -> list[str]:
        return [
            str(self.trial), _fmt(self.p), "on" if self.ple else "off", self.codec,
            str(self.disclosed_prefix), _fmt(self.raw_ber), _fmt(self.post_fer),
            _fmt(self.eve_ber), str(self.errors_injected), str(self.seed),
        ]


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def _ber(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.count_nonzero(a != b)) / a.size if a.size else math.nan


def run_pipeline(data, key: KeyMaterial, nonce: Nonce, spec, channel: BscChannel,
                 ple_enabled: bool = True, disclosed_prefix: int = 0,
                 trial: int = 0) -> ChannelReport:
    spec: CodecSpec = get_codec(spec)
    data = _bits.as_bits(data)
    codewords = encode(data, spec)
    frame = segment(codewords, spec.n, disclosed_prefix)

    if ple_enabled:
        ks = _keystream(key, nonce, len(frame) - disclosed_prefix)
        sent = encrypt_frame(frame, ks).bits
    else:
        sent = frame.bits
    received, e = transmit(sent, channel)

    if ple_enabled:
        ks = _keystream(key, nonce, len(frame) - disclosed_prefix)
        bob_in = decrypt_frame(EncryptedFrame(received, disclosed_prefix, spec.n), ks).bits
    else:
        bob_in = received
    bob = decode(bob_in, spec, sent=codewords)
    eve = decode(received, spec).data

    block_errors = (bob.data != data).reshape(-1, spec.k).any(axis=1)
    prefix_data = (disclosed_prefix // spec.n) * spec.k
    return ChannelReport(
        trial=trial,
        p=channel.crossover_p,
        ple=ple_enabled,
        codec=spec.name,
        disclosed_prefix=disclosed_prefix,
        raw_ber=float(e.sum()) / e.size,
        post_fer=float(block_errors.mean()),
        eve_ber=_ber(eve, data),
        errors_injected=int(e.sum()),
        seed=channel.seed,
        bob_output=bob.data,
        error_vector=e,
        bob_ber=_ber(bob.data, data),
        eve_prefix_ber=_ber(eve[:prefix_data], data[:prefix_data]),
        eve_suffix_ber=_ber(eve[prefix_data:], data[prefix_data:]),
        failed_codewords=bob.failed_codewords,
    )


DEFAULT_KEY_HEX = "000102030405060708090a0b0c0d0e0f"


@dataclass
class SimConfig:
    """Everything a sweep needs besides the list of ``p`` values."""

    codec: str = "hamming74"
    data_bits: int = 4096
    ple: bool = True
    disclosed_prefix: int = 0
    seed: int = 0
    key: KeyMaterial = field(default_factory=lambda: KeyMaterial.from_hex(DEFAULT_KEY_HEX))


def trial_data(seed: int, nbits: int) -> np.ndarray:
    return make_rng(splitmix64(seed ^ DATA_STREAM)).integers(0, 2, nbits, dtype=np.uint8)


def run_trial(config: SimConfig, p: float, trial: int, nonce_counter: int) -> ChannelReport:
    seed = trial_seed(config.seed, trial)
    data = trial_data(seed, config.data_bits)
    return run_pipeline(
        data, config.key, Nonce.from_counter(nonce_counter), config.codec,
        BscChannel(p, seed), config.ple, config.disclosed_prefix, trial,
    )


def sweep(p_values, trials: int, config: SimConfig | None = None) -> list[ChannelReport]:
    """``trials`` runs per ``p``; the nonce counter advances once per run."""
    config = config or SimConfig()
    p_values = list(p_values)
    if not p_values:
        raise ValueError("p_values is empty")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    reports = []
    run = 0
    for p in p_values:
        for i in range(trials):
            reports.append(run_trial(config, p, i, run))
            run += 1
    return reports


def to_csv(reports) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in reports:
        writer.writerow(r.row())
    return buf.getvalue()
