"""Grain-128PLE keystream generator.

Two interchangeable backends expose the same functions
(``load_initial_state``, ``pre_output``, ``clock``, ``advance``,
``initialize``, ``generate_keystream``) over :class:`CipherState`:

* ``reference`` -- one time slot per call, registers as bit arrays;
* ``optimized`` -- up to 32 time slots per step on packed integers.
"""

from __future__ import annotations

from types import ModuleType

from ..keys import Keystream, KeyMaterial, Nonce
from . import optimized, reference
from .state import (
    INIT_ROUNDS, CipherState, InitializationIncomplete, keystream_record,
    load_initial_state, parse_record, state_record,
)

BACKENDS: dict[str, ModuleType] = {"reference": reference, "optimized": optimized}


def get_backend(name: str) -> ModuleType:
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown backend {name!r}; choose from {sorted(BACKENDS)}") from None


class Grain128PLE:
    """Convenience stream object: initialize once, then pull keystream.

    >>> g = Grain128PLE(KeyMaterial.zero(), Nonce.zero())
    >>> g.keystream(8).hex()
    'fd'
    """

    def __init__(self, key: KeyMaterial, nonce: Nonce, backend: str = "optimized"):
        self.backend = get_backend(backend)
        self.state = self.backend.initialize(key, nonce)

    def keystream(self, nbits: int) -> Keystream:
        return self.backend.generate_keystream(self.state, nbits)


def keystream(key: KeyMaterial, nonce: Nonce, nbits: int, backend: str = "optimized") -> Keystream:
    return Grain128PLE(key, nonce, backend).keystream(nbits)


def golden_records(key: KeyMaterial, nonce: Nonce, nbits: int = 128,
                   rounds=(320, 384, 512), backend: str = "reference") -> str:
    """Register snapshots at ``rounds`` followed by the first ``nbits`` keystream bits."""
    impl = get_backend(backend)
    state = load_initial_state(key, nonce)
    lines = []
    for r in sorted(rounds):
        if r > INIT_ROUNDS:
            raise ValueError("snapshots are only taken during initialization")
        impl.advance(state, r - state.round)
        lines.append(state.record())
    impl.advance(state, INIT_ROUNDS - state.round)
    lines.append(keystream_record(impl.generate_keystream(state, nbits).bits))
    return "\n".join(lines) + "\n"


__all__ = [
    "BACKENDS", "CipherState", "Grain128PLE", "InitializationIncomplete", "Keystream",
    "KeyMaterial", "Nonce", "get_backend", "golden_records", "keystream",
    "keystream_record", "load_initial_state", "optimized", "parse_record",
    "reference", "state_record",
]
