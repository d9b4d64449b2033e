import numpy as np
import pytest

from mcspred.exceptions import DomainError
from mcspred.simgen import (
    Loading, MarkovSource, MarkovSourceConfig, ScenarioConfig, default_thresholds,
    generate_markov, generate_scenario, generate_user, sinr_to_mcs, user_ids, user_rng,
)


def mean_abs_step(traces):
    return np.mean([np.abs(np.diff(tr.symbols)).mean() for tr in traces])


def test_default_thresholds():
    ladder = default_thresholds(28)
    assert len(ladder) == 27
    assert ladder[0] == -6.0
    assert ladder[-1] == 20.0
    assert default_thresholds(2) == (-6.0,)


def test_sinr_to_mcs():
    ladder = (-6.0, 0.0, 10.0)
    assert sinr_to_mcs([-20.0, -6.0, -5.9, 0.0, 5.0, 10.5, 40.0], ladder).tolist() == [
        0, 0, 1, 1, 2, 3, 3,
    ]
    sinr = np.sort(np.random.default_rng(0).uniform(-30, 40, size=500))
    mcs = sinr_to_mcs(sinr, default_thresholds(28))
    assert (np.diff(mcs) >= 0).all()
    assert mcs.min() == 0
    assert mcs.max() == 27


def test_user_ids():
    assert user_ids(3) == ['u000', 'u001', 'u002']
    assert user_ids(1001)[-1] == 'u1000'


def test_user_rng_streams():
    a = user_rng(1, 'u000').random(4)
    assert np.array_equal(a, user_rng(1, 'u000').random(4))
    assert not np.array_equal(a, user_rng(1, 'u001').random(4))
    assert not np.array_equal(a, user_rng(2, 'u000').random(4))


def test_scenario_is_reproducible():
    cfg = ScenarioConfig(users=4, seq_len=200, seed=3)
    first = generate_scenario(cfg)
    second = generate_scenario(cfg)
    assert [tr.samples for tr in first] == [tr.samples for tr in second]
    assert [tr.user_id for tr in first] == user_ids(4)
    other = generate_scenario(ScenarioConfig(users=4, seq_len=200, seed=4))
    assert [tr.symbols for tr in first] != [tr.symbols for tr in other]


def test_user_trace_is_independent_of_population():
    small = ScenarioConfig(users=3, seq_len=150, seed=9)
    large = ScenarioConfig(users=12, seq_len=150, seed=9)
    uid = user_ids(3)[2]
    alone = generate_user(small, uid)
    assert alone.symbols == generate_scenario(small)[2].symbols
    assert alone.symbols == generate_scenario(large)[2].symbols


def test_scenario_symbols_in_range():
    cfg = ScenarioConfig(users=5, seq_len=300, alphabet_size=10, seed=1)
    for tr in generate_scenario(cfg):
        assert len(tr) == 300
        assert tr.times == tuple(range(300))
        assert all(0 <= x < 10 for x in tr.symbols)


def test_slow_fading_changes_by_one_step():
    cfg = ScenarioConfig(loading=Loading.FULL, users=10, seq_len=500, rho=0.999999, seed=2)
    steps = np.concatenate([np.abs(np.diff(tr.symbols)) for tr in generate_scenario(cfg)])
    assert (steps <= 1).mean() >= 0.99


def test_subband_averaging_narrows_the_level_band():
    def levels(subbands):
        cfg = ScenarioConfig(loading=Loading.FULL, users=20, seq_len=300, subbands=subbands, seed=4)
        return np.mean([len(set(tr.symbols)) for tr in generate_scenario(cfg)])

    assert levels(32) < levels(1)


def test_partial_loading_is_more_volatile():
    full = generate_scenario(ScenarioConfig(loading=Loading.FULL, users=50, seq_len=300, seed=9))
    partial = generate_scenario(ScenarioConfig(loading=Loading.PARTIAL, users=50, seq_len=300, seed=9))
    assert mean_abs_step(partial) > mean_abs_step(full)


@pytest.mark.parametrize('kwargs', [
    {'rho': 1.0},
    {'rho': 0.0},
    {'users': 0},
    {'holding_time': 0.5},
    {'subbands': 0},
    {'thresholds': [0.0, 1.0]},
    {'alphabet_size': 3, 'thresholds': [1.0, 0.0]},
    {'geometry_db': (5.0, -5.0)},
    {'loading': 'sometimes'},
])
def test_scenario_config_rejects(kwargs):
    with pytest.raises((DomainError, ValueError)):
        ScenarioConfig(**kwargs)


def test_identity_chain_is_constant():
    cfg = MarkovSourceConfig(3, 1, np.eye(3), length=50, initial=(2,))
    assert generate_markov(cfg).symbols == (2,) * 50


def test_swap_chain_alternates():
    cfg = MarkovSourceConfig(2, 1, [[0.0, 1.0], [1.0, 0.0]], length=6, initial=(0,))
    assert generate_markov(cfg).symbols == (0, 1, 0, 1, 0, 1)


def test_iid_frequencies():
    trace = generate_markov(MarkovSourceConfig.iid_uniform(4, length=10000, seed=5))
    freqs = np.bincount(trace.symbols, minlength=4) / 10000
    assert np.abs(freqs - 0.25).max() < 0.02


def test_markov_config_validation():
    with pytest.raises(DomainError):
        MarkovSourceConfig(2, 1, [[0.5, 0.4], [0.5, 0.5]])
    with pytest.raises(DomainError):
        MarkovSourceConfig(2, 2, [[0.5, 0.5], [0.5, 0.5]])
    with pytest.raises(DomainError):
        MarkovSourceConfig(2, 1, np.eye(2), initial=(3,))


def test_markov_source_statistics():
    stay = np.full((4, 4), 0.1) + np.eye(4) * 0.6
    source = MarkovSource(MarkovSourceConfig(4, 1, stay))
    assert np.allclose(source.stationary_distribution(), 0.25)
    assert source.predictive_information(0) == pytest.approx(0.0, abs=1e-9)
    assert source.predictive_information(1) == pytest.approx(0.6432, abs=1e-3)
    assert source.predictive_information(3) == pytest.approx(source.predictive_information(1))

    iid = MarkovSource(MarkovSourceConfig.iid_uniform(4))
    assert iid.conditional_entropy(2) == pytest.approx(2.0)

    shifted = np.full((9, 3), 0.1)
    for c in range(9):
        shifted[c, (c // 3 + 1) % 3] = 0.8
    order2 = MarkovSource(MarkovSourceConfig(3, 2, shifted))
    values = [order2.predictive_information(k) for k in range(4)]
    assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))
    assert values[1] == pytest.approx(0.0, abs=1e-9)
    assert values[2] > 0.5
