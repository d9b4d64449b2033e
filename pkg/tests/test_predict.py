import numpy as np
import pytest

from mcspred.core import RateTable, default_rate_table
from mcspred.exceptions import ConfigError, DomainError
from mcspred.predict import (
    PredictorKind, UserPipeline, brm_decision, expected_costs, map_decision,
    pipeline_step, predict_brm, predict_last, predict_map, predict_median,
)
from mcspred.freq_tree import build_ppm_tree
from mcspred.simgen import ScenarioConfig, generate_user


def replay(p, seq):
    outcomes = []
    for x in seq:
        outcome, p = pipeline_step(p, x)
        outcomes.append(outcome)
    return outcomes


@pytest.fixture(scope='module')
def scenario_symbols():
    cfg = ScenarioConfig(users=1, seq_len=300, seed=5)
    return list(generate_user(cfg, 'u000').symbols)


def test_map_decision():
    assert map_decision(np.array([0.3, 0.3, 0.4])) == 2
    assert map_decision(np.eye(5)[3]) == 3
    probs = np.zeros(12)
    probs[[4, 9]] = 0.5
    assert map_decision(probs) == 4


def test_expected_costs_and_brm():
    rates = RateTable([1.0, 2.0, 3.0])
    probs = np.array([0.3, 0.3, 0.4])
    assert expected_costs(probs, rates) == pytest.approx([1.1, 0.7, 0.9])
    assert brm_decision(probs, rates) == 1
    assert brm_decision(probs, rates.cost_matrix()) == 1
    # equal expected costs go to the lower rate
    assert brm_decision(np.array([0.5, 0.5]), RateTable([1.0, 2.0])) == 0


def test_brm_on_certain_symbol():
    rates = default_rate_table(5)
    for s in range(5):
        assert brm_decision(np.eye(5)[s], rates) == s


def test_tree_predictors():
    tree = build_ppm_tree([0, 1, 0, 1, 0, 1], max_depth=3)
    rates = default_rate_table(2)
    assert predict_map(tree, (0,), 6, 2) == 1
    assert predict_brm(tree, (0,), 6, rates) == 1
    assert predict_map(tree, (), 6, 2) == 0


def test_median_and_last():
    assert predict_median([5, 1, 3]) == 3
    assert predict_median([4, 1, 3, 2]) == 2
    assert predict_median(list(range(20)), window=9) == 15
    assert predict_median([7]) == 7
    assert predict_last([2, 9, 4]) == 4
    with pytest.raises(DomainError):
        predict_median([])
    with pytest.raises(DomainError):
        predict_last([])


def test_predictor_kinds():
    assert PredictorKind('vo_brm').variable_order
    assert PredictorKind.FM_MAP.fixed_order
    assert not PredictorKind.MEDIAN.uses_tree
    assert PredictorKind.FM_BRM.risk_minimizing
    assert not PredictorKind.VO_MAP.risk_minimizing


def test_ten_symbol_walkthrough():
    p = UserPipeline(default_rate_table(4), kinds=[PredictorKind.VO_MAP])
    outcomes = replay(p, [1, 1, 2, 1, 1, 2, 1, 1, 2, 1])
    assert [o.predictions[PredictorKind.VO_MAP] for o in outcomes] == [0] + [1] * 9
    assert outcomes[0].cold
    assert not any(o.cold for o in outcomes[1:])
    assert [o.position for o in outcomes] == list(range(1, 11))


def test_cold_start(rates28):
    p = UserPipeline(rates28)
    outcome, p = pipeline_step(p, 12)
    assert outcome.cold
    assert set(outcome.predictions.values()) == {0}
    assert outcome.orders[PredictorKind.VO_BRM] == 1
    assert outcome.orders[PredictorKind.FM_MAP] == 3
    assert outcome.orders[PredictorKind.MEDIAN] == 0
    outcome, p = pipeline_step(p, 12)
    assert outcome.predictions[PredictorKind.NO_PREDICTION] == 12
    assert outcome.predictions[PredictorKind.MEDIAN] == 12


def test_order_schedule(rates28, scenario_symbols):
    p = UserPipeline(rates28)
    outcomes = []
    for x in scenario_symbols[:150]:
        outcome, p = pipeline_step(p, x)
        outcomes.append(outcome)
        if len(p.history) < 100:
            assert p.report is None
    assert all(o.orders[PredictorKind.VO_MAP] == 1 for o in outcomes[:100])
    assert p.report is not None
    # the report still describes the first 100 symbols
    assert p.report.n_samples[0] == 99
    assert 1 <= p.order <= p.order_bound <= 4
    assert p.order in p.report.orders


def test_brm_cost_never_above_map(rates28, scenario_symbols):
    p = UserPipeline(rates28, kinds=[PredictorKind.VO_MAP, PredictorKind.VO_BRM])
    for x in scenario_symbols:
        if p.history:
            costs = expected_costs(p.distribution(p.order), rates28)
            predictions = p.predict()
            assert costs[predictions[PredictorKind.VO_BRM]] <= costs[predictions[PredictorKind.VO_MAP]]
        p.ingest(x)


def test_map_maximizes_accuracy_under_true_conditional():
    rates = default_rate_table(4)
    rows = np.random.default_rng(1).dirichlet(np.ones(4), size=50)
    for row in rows:
        assert row[map_decision(row)] >= row[brm_decision(row, rates)]


def test_predictions_are_causal(rates28, scenario_symbols):
    full = replay(UserPipeline(rates28), scenario_symbols)
    prefix = replay(UserPipeline(rates28), scenario_symbols[:150])
    assert [o.predictions for o in prefix] == [o.predictions for o in full[:150]]


def test_deeper_tree_does_not_change_predictions(rates28, scenario_symbols):
    kinds = [PredictorKind.VO_BRM, PredictorKind.VO_MAP, PredictorKind.FM_BRM]
    shallow = replay(UserPipeline(rates28, kinds=kinds, depth=5), scenario_symbols)
    deep = replay(UserPipeline(rates28, kinds=kinds, depth=7), scenario_symbols)
    assert [o.predictions for o in shallow] == [o.predictions for o in deep]
    assert [o.orders for o in shallow] == [o.orders for o in deep]


def test_pipeline_validation(rates28):
    with pytest.raises(ConfigError):
        UserPipeline(rates28, depth=4)
    with pytest.raises(ConfigError):
        UserPipeline(rates28, fm_order=5)
    with pytest.raises(ConfigError):
        UserPipeline(rates28, kinds=[])
    with pytest.raises(ConfigError):
        UserPipeline(rates28, recompute_period=0)
    p = UserPipeline(rates28)
    with pytest.raises(DomainError):
        p.ingest(28)
