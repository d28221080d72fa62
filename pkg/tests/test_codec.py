import itertools

import numpy as np
import pytest

from grain_ple.codec import HAMMING74, REPETITION3, decode, encode, get_codec


def nibbles():
    return [np.array(bits, np.uint8) for bits in itertools.product((0, 1), repeat=4)]


def test_repetition_encode():
    assert encode([1, 0], "repetition3").tolist() == [1, 1, 1, 0, 0, 0]


def test_hamming_zero():
    assert encode(np.zeros(4), HAMMING74).tolist() == [0] * 7


def test_hamming_parity_equations():
    for d in nibbles():
        c = encode(d, HAMMING74)
        d1, d2, d3, d4 = d
        assert c[:4].tolist() == d.tolist()
        assert c[4:].tolist() == [d1 ^ d2 ^ d4, d1 ^ d3 ^ d4, d2 ^ d3 ^ d4]


def test_hamming_min_distance():
    words = [encode(d, HAMMING74) for d in nibbles()]
    dists = [int((a != b).sum()) for a, b in itertools.combinations(words, 2)]
    assert len(dists) == 120
    assert min(dists) == 3


def test_hamming_linearity():
    for a, b in itertools.product(nibbles(), repeat=2):
        assert np.array_equal(encode(a ^ b, HAMMING74), encode(a, HAMMING74) ^ encode(b, HAMMING74))


def test_repetition_majority():
    res = decode([1, 1, 0], REPETITION3)
    assert res.data.tolist() == [1]
    assert res.corrected == 1


@pytest.mark.parametrize("spec", [REPETITION3, HAMMING74])
def test_every_single_flip_corrected(spec):
    cases = 0
    datas = nibbles() if spec is HAMMING74 else [np.array([0], np.uint8), np.array([1], np.uint8)]
    for d in datas:
        c = encode(d, spec)
        for pos in range(spec.n):
            r = c.copy()
            r[pos] ^= 1
            res = decode(r, spec, sent=c)
            assert res.data.tolist() == d.tolist()
            assert (res.corrected, res.failed_codewords) == (1, 0)
            cases += 1
    assert cases == (112 if spec is HAMMING74 else 6)


@pytest.mark.parametrize("spec", [REPETITION3, HAMMING74])
def test_noiseless_roundtrip(spec, rng):
    d = rng.integers(0, 2, 4000, dtype=np.uint8)
    res = decode(encode(d, spec), spec)
    assert np.array_equal(res.data, d)
    assert res.corrected == 0


def test_double_error_flagged_only_with_truth():
    c = encode([1, 0, 1, 1], HAMMING74)
    r = c.copy()
    r[[0, 1]] ^= 1
    assert decode(r, HAMMING74).failed_codewords == 0
    res = decode(r, HAMMING74, sent=c)
    assert res.failed_codewords == 1
    assert res.data.tolist() != [1, 0, 1, 1]


def test_length_errors():
    with pytest.raises(ValueError):
        encode([1, 0, 1], HAMMING74)
    with pytest.raises(ValueError):
        decode([1, 0], REPETITION3)
    with pytest.raises(ValueError):
        get_codec("ldpc")
