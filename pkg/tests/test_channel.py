import numpy as np
import pytest

from grain_ple.channel import (
    BscChannel, SimConfig, run_pipeline, run_trial, splitmix64, sweep, to_csv,
    transmit, trial_data, trial_seed,
)
from grain_ple.codec import HAMMING74, REPETITION3
from grain_ple.keys import KeyMaterial, Nonce

from conftest import GOLDEN

KEY = KeyMaterial.from_hex("2b7e151628aed2a6abf7158809cf4f3c")
NONCE = Nonce.from_counter(42)


def test_noiseless_channel(rng):
    x = rng.integers(0, 2, 500, dtype=np.uint8)
    y, e = transmit(x, BscChannel(0.0, 1))
    assert np.array_equal(x, y) and not e.any()


def test_certain_flip(rng):
    x = rng.integers(0, 2, 500, dtype=np.uint8)
    y, e = transmit(x, BscChannel(1.0, 1))
    assert np.array_equal(y, 1 - x) and e.all()


def test_bsc_concentration_pinned():
    e = BscChannel(0.1, 12345).error_vector(10**6)
    assert abs(e.mean() - 0.1) <= 0.003
    assert int(e.sum()) == 100037


def test_bsc_reproducible_and_coupled():
    a = BscChannel(0.05, 99).error_vector(10_000)
    assert np.array_equal(a, BscChannel(0.05, 99).error_vector(10_000))
    bigger = BscChannel(0.2, 99).error_vector(10_000)
    assert np.all(bigger >= a)


def test_bsc_rejects_bad_p():
    with pytest.raises(ValueError):
        BscChannel(1.5)


def test_splitmix_reference_value():
    # first output of SplitMix64 seeded with 0 (Vigna's reference generator)
    assert splitmix64(0) == 0xE220A8397B1DCDAF
    assert trial_seed(10, 3) == splitmix64(13)


def test_noiseless_pipeline_recovers_data(rng):
    data = rng.integers(0, 2, 400, dtype=np.uint8)
    for spec in (REPETITION3, HAMMING74):
        r = run_pipeline(data, KEY, NONCE, spec, BscChannel(0.0, 5), ple_enabled=True)
        assert r.post_fer == 0 and r.raw_ber == 0
        assert np.array_equal(r.bob_output, data)


@pytest.mark.parametrize("spec", [REPETITION3, HAMMING74])
@pytest.mark.parametrize("p", [0.0, 0.02, 0.1, 0.3])
@pytest.mark.parametrize("prefix", [0, 21, 210])
def test_ple_transparency(rng, spec, p, prefix):
    data = rng.integers(0, 2, 120, dtype=np.uint8)
    ch = BscChannel(p, 777)
    on = run_pipeline(data, KEY, NONCE, spec, ch, True, prefix)
    off = run_pipeline(data, KEY, NONCE, spec, ch, False, prefix)
    assert np.array_equal(on.error_vector, off.error_vector)
    assert on.raw_ber == off.raw_ber
    assert np.array_equal(on.bob_output, off.bob_output)
    assert on.post_fer == off.post_fer


def test_eve_is_whitened_bob_is_fine():
    data = trial_data(1, 10**5)
    r = run_pipeline(data, KEY, NONCE, HAMMING74, BscChannel(0.01, 3), True)
    assert 0.49 <= r.eve_ber <= 0.51
    assert r.post_fer < 1e-2
    assert abs(r.raw_ber - 0.01) < 1e-3


def test_without_ple_eve_equals_bob():
    data = trial_data(2, 4000)
    r = run_pipeline(data, KEY, NONCE, HAMMING74, BscChannel(0.01, 3), False)
    assert r.eve_ber == r.bob_ber


def test_disclosed_prefix_leaks():
    data = trial_data(3, 40_000)
    r = run_pipeline(data, KEY, NONCE, HAMMING74, BscChannel(0.01, 4), True,
                     disclosed_prefix=7 * 2000)
    assert r.eve_prefix_ber <= 0.05
    assert 0.45 <= r.eve_suffix_ber <= 0.55


def test_report_invariants():
    r = run_trial(SimConfig(codec="repetition3", data_bits=999), 0.2, 0, 0)
    for rate in (r.raw_ber, r.post_fer, r.eve_ber):
        assert 0 <= rate <= 1
    assert r.raw_ber == r.errors_injected / (3 * 999)


def test_singleton_sweep_equals_run_pipeline():
    cfg = SimConfig(codec="hamming74", data_bits=256, seed=77)
    (rep,) = sweep([0.02], 1, cfg)
    seed = trial_seed(77, 0)
    direct = run_pipeline(trial_data(seed, 256), cfg.key, Nonce.from_counter(0), "hamming74",
                          BscChannel(0.02, seed), True, 0, 0)
    assert rep.row() == direct.row()
    assert np.array_equal(rep.bob_output, direct.bob_output)


def test_sweep_deterministic_csv():
    cfg = SimConfig(codec="repetition3", data_bits=300, seed=5)
    a = to_csv(sweep([0.01, 0.1], 3, cfg))
    b = to_csv(sweep([0.01, 0.1], 3, cfg))
    assert a == b
    assert a.splitlines()[0] == "trial,p,ple,codec,disclosed_prefix,raw_ber,post_fer,eve_ber,errors_injected,seed"
    assert len(a.splitlines()) == 7


def test_sweep_monotone_fer():
    cfg = SimConfig(codec="repetition3", data_bits=20_000, seed=11)
    reps = sweep([0.001, 0.01, 0.05], 1, cfg)
    fers = [r.post_fer for r in reps]
    assert fers == sorted(fers)


def test_sweep_rejects():
    with pytest.raises(ValueError):
        sweep([], 1)
    with pytest.raises(ValueError):
        sweep([0.1], 0)


def test_sweep_golden_csv():
    cfg = SimConfig(codec="hamming74", data_bits=2048, seed=2024, disclosed_prefix=56)
    assert to_csv(sweep([0.001, 0.01, 0.05], 3, cfg)) == (GOLDEN / "sweep_hamming74.csv").read_text()


def test_length_error_propagates():
    with pytest.raises(ValueError):
        run_pipeline(np.ones(5, np.uint8), KEY, NONCE, HAMMING74, BscChannel(0.1), True)
