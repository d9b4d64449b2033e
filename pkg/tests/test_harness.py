import csv
import os

import pytest

from mcspred.config import RunConfig, set_config
from mcspred.core import Alphabet, Trace, load_traces
from mcspred.exceptions import UnknownUserError
from mcspred.harness import PREDICTIONS_HEADER, inspect_user, replay_user, run
from mcspred.order_select import Criterion
from mcspred.predict import PredictorKind
from mcspred.simgen import ScenarioConfig, generate_user


def read_rows(path):
    with open(path, newline='') as fp:
        return list(csv.DictReader(fp))


def scenario_config(tmp_path, name='out', **kwargs):
    values = {
        'predictors': 'all',
        'output_dir': tmp_path / name,
        'workers': 1,
        'seed': 11,
        'scenario': {'users': 4, 'seq_len': 150},
    }
    values.update(kwargs)
    if values['predictors'] == 'all':
        values['predictors'] = [k.value for k in PredictorKind]
    return RunConfig.from_mapping(values)


def test_no_prediction_loss_is_fraction_of_decreases(tmp_path, example_trace_path, example_symbols):
    cfg = RunConfig.from_mapping({
        'trace': example_trace_path,
        'predictors': 'no_prediction,median',
        'output_dir': tmp_path / 'out',
        'workers': 1,
    })
    result = run(cfg, progress=False)
    assert result.users == 1
    assert result.files == ['predictions.csv', 'metrics.csv', 'cdf.csv', 'criteria.csv', 'summary.csv']
    assert not (tmp_path / 'out' / 'traces.csv').exists()

    decreases = sum(1 for a, b in zip(example_symbols, example_symbols[1:]) if b < a)
    rows = {r['predictor']: r for r in read_rows(tmp_path / 'out' / 'metrics.csv')}
    assert float(rows['no_prediction']['p_loss']) == pytest.approx(decreases / 14)
    assert rows['no_prediction']['packets'] == '14'

    predictions = read_rows(tmp_path / 'out' / 'predictions.csv')
    assert tuple(predictions[0]) == PREDICTIONS_HEADER
    # the cold first position is not logged
    assert len(predictions) == 2 * 14
    assert {p['t'] for p in predictions} == {str(t) for t in range(1, 15)}
    assert {p['order_used'] for p in predictions} == {'0'}
    # too short for any order selection
    assert (tmp_path / 'out' / 'criteria.csv').read_text().strip() == (
        'user_id,i,loglik,n_params,mdl,aic,aicc'
    )


def test_scenario_run_is_deterministic(tmp_path):
    first = run(scenario_config(tmp_path, 'a'), progress=False)
    second = run(scenario_config(tmp_path, 'b'), progress=False)
    assert first.files == second.files
    assert 'traces.csv' in first.files
    for name in first.files:
        assert (tmp_path / 'a' / name).read_bytes() == (tmp_path / 'b' / name).read_bytes()
    assert [s.predictor for s in first.summaries] == [k.value for k in PredictorKind]
    assert first.source == 'partial scenario'


def test_worker_pool_matches_serial_run(tmp_path):
    serial = run(scenario_config(tmp_path, 'serial'), progress=False)
    pooled = run(scenario_config(tmp_path, 'pooled', workers=2), progress=False)
    for name in serial.files:
        assert (tmp_path / 'serial' / name).read_bytes() == (tmp_path / 'pooled' / name).read_bytes()


def test_run_writes_nothing_on_failure(tmp_path, mocker):
    mocker.patch('mcspred.harness.write_summary', side_effect=OSError('disk full'))
    cfg = scenario_config(tmp_path, 'out', predictors='vo_brm')
    with pytest.raises(OSError):
        run(cfg, progress=False)
    assert not (tmp_path / 'out').exists()
    assert not list(tmp_path.glob('.mcspred-staging-*'))


def test_run_uses_process_config(tmp_path):
    set_config(scenario_config(tmp_path, 'global', predictors='no_prediction', log_predictions=False))
    result = run(progress=False)
    assert result.output_dir == tmp_path / 'global'
    assert 'predictions.csv' not in result.files
    assert (tmp_path / 'global' / 'metrics.csv').exists()


def test_run_withdraws_moved_reports_on_failure(tmp_path, mocker):
    real_replace = os.replace
    moved = []

    def replace_once(src, dst):
        if moved:
            raise OSError('disk full')
        real_replace(src, dst)
        moved.append(dst)

    mocker.patch('mcspred.harness.os.replace', side_effect=replace_once)
    cfg = scenario_config(tmp_path, 'out', predictors='vo_brm')
    with pytest.raises(OSError):
        run(cfg, progress=False)
    assert len(moved) == 1
    assert list((tmp_path / 'out').iterdir()) == []
    assert not list(tmp_path.glob('.mcspred-staging-*'))


def test_criteria_report_after_bootstrap(tmp_path):
    cfg = scenario_config(tmp_path, predictors='vo_brm')
    run(cfg, progress=False)
    rows = read_rows(tmp_path / 'out' / 'criteria.csv')
    assert {r['user_id'] for r in rows} == {'u000', 'u001', 'u002', 'u003'}
    assert all(1 <= int(r['i']) <= 4 for r in rows)


def test_replay_user_without_logging(rates28):
    cfg = RunConfig(predictors='vo_map,fm_brm', log_predictions=False, workers=1)
    trace = Trace.from_symbols('x', [3, 4, 5, 4, 3])
    result = replay_user(trace, rates28, cfg)
    assert result.predictions == []
    assert [m.predictor for m in result.metrics] == ['vo_map', 'fm_brm']
    assert all(m.packets == 4 for m in result.metrics)
    assert result.report is None


def test_inspect_example_trace(example_trace_path, lezi_golden, rates28):
    traces = load_traces(example_trace_path, Alphabet(28))
    cfg = RunConfig()
    report = inspect_user(traces, 's1', None, cfg, rates28, tree_kind='lezi')
    assert report.tree_dump == lezi_golden
    assert report.position == 15
    assert report.n == 15
    assert len(report.ipred_items()) == 4
    assert report.tree_items()[0] == {'depth': 1, 'symbol': 22, 'count': 7}
    assert report.report is not None

    ppm = inspect_user(traces, 's1', 5, cfg, rates28)
    assert ppm.tree_kind == 'ppm'
    assert ppm.tree_items()[0] == {'depth': 1, 'symbol': 22, 'count': 5}

    empty = inspect_user(traces, 's1', 0, cfg, rates28)
    assert empty.n == 0
    assert empty.report is None
    assert empty.criterion_items() == []

    with pytest.raises(UnknownUserError):
        inspect_user(traces, 'nobody', None, cfg, rates28)


def test_inspect_agrees_with_pipeline_order(rates28):
    trace = generate_user(ScenarioConfig(users=1, seq_len=120, seed=8), 'u000')
    report = inspect_user([trace], 'u000', 100, RunConfig(), rates28)
    assert report.report is not None
    assert report.report.choose(Criterion.AICC) == report.selected_order
    # a recompute happens at 100 symbols
    assert report.scheduled_order == report.selected_order


def test_inspect_between_recomputes(rates28):
    trace = generate_user(ScenarioConfig(users=1, seq_len=160, seed=8), 'u000')
    at_100 = inspect_user([trace], 'u000', 100, RunConfig(), rates28)
    report = inspect_user([trace], 'u000', 150, RunConfig(), rates28)
    assert report.scheduled_order == at_100.selected_order
    assert report.selected_order == report.report.choose(Criterion.AICC)
    assert max(report.report.orders) == report.k_opt
    assert set(report.state_item()) == {
        'user_id', 'position', 'n', 'k_opt', 'selected_order', 'scheduled_order',
    }


def full_scale_medians(tmp_path, loading):
    cfg = RunConfig.from_mapping({
        'output_dir': tmp_path / loading,
        'workers': 4,
        'scenario': {'loading': loading, 'users': 210, 'seq_len': 1000},
    })
    result = run(cfg, progress=False)
    metrics = read_rows(tmp_path / loading / 'metrics.csv')
    assert len(metrics) == 210 * len(PredictorKind)
    assert all(r['packets'] == '999' for r in metrics)
    return {s.predictor: s.p_loss_p50 for s in result.summaries}


@pytest.mark.slow
def test_full_scale_partial_scenario(tmp_path):
    p50 = full_scale_medians(tmp_path, 'partial')
    assert p50['vo_brm'] <= p50['fm_brm'] < p50['vo_map']
    assert p50['fm_brm'] < p50['fm_map']
    for baseline in ('median', 'no_prediction'):
        assert p50['vo_brm'] < p50[baseline]
        assert p50['fm_brm'] < p50[baseline]

    orders = {}
    for row in read_rows(tmp_path / 'partial' / 'predictions.csv'):
        if row['predictor'] == 'vo_brm':
            orders[row['user_id']] = int(row['order_used'])
    assert len(orders) == 210
    assert set(orders.values()) <= {1, 2, 3, 4}


@pytest.mark.slow
def test_order_adaptation_matters_more_under_partial_loading(tmp_path):
    partial = full_scale_medians(tmp_path, 'partial')
    full = full_scale_medians(tmp_path, 'full')
    assert partial['fm_brm'] - partial['vo_brm'] > full['fm_brm'] - full['vo_brm']
