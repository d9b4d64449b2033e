"""
Batch replay of user traces through the prediction pipelines, report
writing and per-user diagnostics.
"""

from __future__ import annotations

import csv
import logging
import os
import shutil
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import (
    Dict,
    Iterable,
    List,
    Optional,
    Sequence,
    Tuple,
)

import attr
from tqdm import tqdm

from .complexity import k_opt, learning_curve
from .config import RunConfig, get_config
from .core import (
    Alphabet,
    RateTable,
    Trace,
    default_rate_table,
    load_rate_table,
    load_traces,
    write_traces,
)
from .exceptions import DomainError, UnknownUserError
from .freq_tree import build_lezi_tree, dump_tree
from .metrics import (
    PredictorSummary,
    UserMetrics,
    summarize,
    user_metrics,
    write_cdf,
    write_metrics,
    write_summary,
)
from .order_select import CriterionReport, evaluate_orders, write_criteria
from .predict import PredictorKind, UserPipeline, pipeline_step
from .simgen import generate_scenario

__all__ = (
    'PREDICTIONS_HEADER',
    'UserResult',
    'RunResult',
    'InspectReport',
    'load_inputs',
    'make_pipeline',
    'replay_user',
    'replay_all',
    'run',
    'inspect_user',
)

log = logging.getLogger('mcspred.harness')

PREDICTIONS_HEADER = ('user_id', 't', 'actual', 'predicted', 'predictor', 'order_used')

PredictionRow = Tuple[str, int, int, int, str, int]


@attr.define(slots=True)
class UserResult:
    user_id: str
    metrics: List[UserMetrics] = attr.field(factory=list)
    predictions: List[PredictionRow] = attr.field(factory=list)
    report: Optional[CriterionReport] = None


@attr.define(slots=True)
class RunResult:
    users: int
    predictors: Tuple[PredictorKind, ...]
    summaries: List[PredictorSummary]
    output_dir: Path
    files: List[str]
    elapsed: float
    source: str


def load_inputs(cfg: RunConfig) -> Tuple[List[Trace], RateTable]:
    alphabet = Alphabet(cfg.alphabet_size)
    if cfg.rate_table is not None:
        rates = load_rate_table(cfg.rate_table, alphabet)
    else:
        rates = default_rate_table(cfg.alphabet_size)
    if cfg.trace is not None:
        traces = load_traces(cfg.trace, alphabet)
    else:
        traces = generate_scenario(cfg.scenario)
    return traces, rates


def make_pipeline(cfg: RunConfig, rates: RateTable, user_id: str = '') -> UserPipeline:
    return UserPipeline(
        rates,
        kinds=cfg.predictors,
        depth=cfg.depth,
        max_order=cfg.max_order,
        fm_order=cfg.fm_order,
        epsilon=cfg.epsilon,
        criterion=cfg.criterion,
        recompute_period=cfg.recompute_period,
        bootstrap_len=cfg.bootstrap_len,
        median_window=cfg.median_window,
        param_count=cfg.param_count,
        sample_mode=cfg.sample_mode,
        user_id=user_id,
    )


def replay_user(trace: Trace, rates: RateTable, cfg: RunConfig) -> UserResult:
    """
    Feeds one trace through a fresh pipeline and scores every predictor.
    The cold first position is neither scored nor logged.
    """
    pipeline = make_pipeline(cfg, rates, trace.user_id)
    result = UserResult(trace.user_id)
    actual: List[int] = []
    predicted: Dict[PredictorKind, List[int]] = {kind: [] for kind in cfg.predictors}
    for t, x in trace.samples:
        outcome, pipeline = pipeline_step(pipeline, x)
        if outcome.cold:
            continue
        actual.append(x)
        for kind in cfg.predictors:
            guess = outcome.predictions[kind]
            predicted[kind].append(guess)
            if cfg.log_predictions:
                result.predictions.append(
                    (trace.user_id, t, x, guess, kind.value, outcome.orders[kind]),
                )
    if actual:
        for kind in cfg.predictors:
            result.metrics.append(user_metrics(
                actual, predicted[kind], rates,
                user_id=trace.user_id, predictor=kind.value,
            ))
    else:
        log.warning('user %s has no scorable positions', trace.user_id)
    result.report = pipeline.report
    return result


def _replay_job(job: Tuple[Trace, RateTable, RunConfig]) -> UserResult:
    return replay_user(*job)


def replay_all(
    traces: Sequence[Trace],
    rates: RateTable,
    cfg: RunConfig,
    *,
    progress: bool = True,
) -> List[UserResult]:
    """
    Replays every trace, on a process pool when more than one worker is
    configured.  Results come back in user id order.
    """
    ordered = sorted(traces, key=lambda tr: tr.user_id)
    jobs = [(trace, rates, cfg) for trace in ordered]
    workers = min(cfg.workers, max(1, len(jobs)))
    bar_opts = dict(total=len(jobs), unit='user', disable=None if progress else True)
    if workers == 1:
        return [_replay_job(job) for job in tqdm(jobs, **bar_opts)]
    log.info('starting a pool of %d workers for %d users', workers, len(jobs))
    with ProcessPoolExecutor(max_workers=workers) as executor:
        results = list(tqdm(
            executor.map(_replay_job, jobs, chunksize=max(1, len(jobs) // (workers * 4))),
            **bar_opts,
        ))
    log.info('worker pool finished')
    return results


def _write_predictions(path: Path, results: Iterable[UserResult]) -> None:
    with open(path, 'w', encoding='utf-8', newline='') as fp:
        writer = csv.writer(fp, lineterminator='\n')
        writer.writerow(PREDICTIONS_HEADER)
        for result in results:
            writer.writerows(result.predictions)


def _write_reports(
    staging: Path,
    cfg: RunConfig,
    traces: Sequence[Trace],
    results: Sequence[UserResult],
) -> Tuple[List[str], List[PredictorSummary]]:
    files = []
    if cfg.trace is None:
        write_traces(staging / 'traces.csv', traces)
        files.append('traces.csv')
    if cfg.log_predictions:
        _write_predictions(staging / 'predictions.csv', results)
        files.append('predictions.csv')
    by_predictor: Dict[str, List[UserMetrics]] = {kind.value: [] for kind in cfg.predictors}
    all_metrics = []
    for result in results:
        for m in result.metrics:
            by_predictor[m.predictor].append(m)
            all_metrics.append(m)
    if not all_metrics:
        raise DomainError('No user has a scorable position')
    write_metrics(staging / 'metrics.csv', all_metrics)
    write_cdf(staging / 'cdf.csv', by_predictor)
    write_criteria(
        staging / 'criteria.csv',
        ((r.user_id, r.report) for r in results if r.report is not None),
    )
    summaries = summarize(by_predictor)
    write_summary(staging / 'summary.csv', summaries)
    files.extend(['metrics.csv', 'cdf.csv', 'criteria.csv', 'summary.csv'])
    return files, summaries


def run(cfg: Optional[RunConfig] = None, *, progress: bool = True) -> RunResult:
    """
    Replays every user with every configured predictor and writes the
    reports into ``cfg.output_dir``.  Files are written to a staging
    directory first and only moved into place when all of them succeeded.
    Without ``cfg`` the process-wide configuration is used.
    """
    if cfg is None:
        cfg = get_config()
    started = time.perf_counter()
    traces, rates = load_inputs(cfg)
    if not traces:
        raise DomainError('There are no traces to replay')
    results = replay_all(traces, rates, cfg, progress=progress)
    output_dir = Path(cfg.output_dir)
    output_dir.parent.mkdir(parents=True, exist_ok=True)
    staging = Path(tempfile.mkdtemp(prefix='.mcspred-staging-', dir=output_dir.parent))
    moved: List[Path] = []
    try:
        files, summaries = _write_reports(staging, cfg, traces, results)
        output_dir.mkdir(parents=True, exist_ok=True)
        for name in files:
            os.replace(staging / name, output_dir / name)
            moved.append(output_dir / name)
            log.info('wrote %s', output_dir / name)
    except BaseException:
        for path in moved:
            path.unlink(missing_ok=True)
            log.warning('removed partially published %s', path)
        raise
    finally:
        shutil.rmtree(staging, ignore_errors=True)
    return RunResult(
        users=len(traces),
        predictors=cfg.predictors,
        summaries=summaries,
        output_dir=output_dir,
        files=files,
        elapsed=time.perf_counter() - started,
        source=str(cfg.trace) if cfg.trace is not None else f'{cfg.scenario.loading.value} scenario',
    )


@attr.define(slots=True)
class InspectReport:
    user_id: str
    position: int
    n: int
    tree_kind: str
    tree_dump: str
    ipred: Tuple[float, ...]
    curve: Tuple[float, ...]
    k_opt: int
    #: chosen from ``report`` at this position
    selected_order: int
    #: the order predictions use, fixed at the last scheduled recompute
    scheduled_order: int
    report: Optional[CriterionReport]

    def state_item(self) -> Dict[str, object]:
        return {
            'user_id': self.user_id,
            'position': self.position,
            'n': self.n,
            'k_opt': self.k_opt,
            'selected_order': self.selected_order,
            'scheduled_order': self.scheduled_order,
        }

    def tree_items(self) -> List[Dict[str, int]]:
        items = []
        for line in self.tree_dump.splitlines():
            depth, symbol, count = (int(v) for v in line.split(','))
            items.append({'depth': depth, 'symbol': symbol, 'count': count})
        return items

    def ipred_items(self) -> List[Dict[str, float]]:
        return [
            {'k': k, 'ipred': ipred, 'gain': gain}
            for k, (ipred, gain) in enumerate(zip(self.ipred, self.curve), start=1)
        ]

    def criterion_items(self) -> List[Dict[str, float]]:
        if self.report is None:
            return []
        r = self.report
        return [
            {
                'i': i, 'n_params': r.n_params[idx], 'n_samples': r.n_samples[idx],
                'loglik': r.loglik[idx], 'mdl': r.mdl[idx], 'aic': r.aic[idx], 'aicc': r.aicc[idx],
            }
            for idx, i in enumerate(r.orders)
        ]


def inspect_user(
    traces: Sequence[Trace],
    user_id: str,
    upto: Optional[int],
    cfg: RunConfig,
    rates: RateTable,
    *,
    tree_kind: str = 'ppm',
) -> InspectReport:
    """
    Replays the first ``upto`` symbols of one user and reports the tree, the
    predictive-information estimates, the criterion values and the order
    the pipeline holds at that point.
    """
    for trace in traces:
        if trace.user_id == user_id:
            break
    else:
        raise UnknownUserError(user_id)
    symbols = trace.symbols if upto is None else trace.symbols[:max(upto, 0)]
    pipeline = make_pipeline(cfg, rates, user_id)
    for x in symbols:
        pipeline.ingest(x)
    if tree_kind == 'lezi':
        tree_dump = dump_tree(build_lezi_tree(symbols))
    else:
        tree_dump = dump_tree(pipeline.tree)
    est = pipeline.estimate
    if est.n_used:
        curve = learning_curve(est)
        bound = min(k_opt(curve, cfg.epsilon), cfg.depth - 1)
    else:
        curve = tuple(0.0 for _ in range(est.max_order))
        bound = 1
    report = None
    if len(symbols) >= 2:
        report = evaluate_orders(
            symbols, pipeline.tree, bound,
            param_count=cfg.param_count, sample_mode=cfg.sample_mode,
        )
    selected = report.choose(cfg.criterion) if report is not None else 1
    return InspectReport(
        user_id=user_id,
        position=len(symbols),
        n=pipeline.n,
        tree_kind=tree_kind,
        tree_dump=tree_dump,
        ipred=est.means,
        curve=curve,
        k_opt=bound,
        selected_order=selected,
        scheduled_order=pipeline.order,
        report=report,
    )
