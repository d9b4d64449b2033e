"""
Per-user packet-loss and rate-efficiency figures, empirical CDFs across
users, and the CSV reports built from them.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import (
    Iterable,
    List,
    Mapping,
    Sequence,
    Tuple,
    Union,
)

import attr
import numpy as np

from .core import RateTable, Trace
from .exceptions import DomainError

__all__ = (
    'UserMetrics',
    'PredictorSummary',
    'METRICS_HEADER',
    'CDF_HEADER',
    'SUMMARY_HEADER',
    'DEFAULT_EFFICIENCY_TARGET',
    'packet_loss',
    'rate_efficiency',
    'user_metrics',
    'cdf',
    'summarize',
    'large_jump_count',
    'large_jump_fraction',
    'write_metrics',
    'write_cdf',
    'write_summary',
)

METRICS_HEADER = ('user_id', 'predictor', 'p_loss', 'r_eff', 'packets')
CDF_HEADER = ('predictor', 'metric', 'value', 'cum_fraction')
SUMMARY_HEADER = ('predictor', 'users', 'p_loss_p50', 'p_loss_p90', 'r_eff_ge_target')
DEFAULT_EFFICIENCY_TARGET = 0.9

PathLike = Union[str, Path]


def _fmt(value: float) -> str:
    return format(value, '.10g')


def _pair(actual: Sequence[int], predicted: Sequence[int]) -> Tuple[np.ndarray, np.ndarray]:
    if len(actual) != len(predicted):
        raise DomainError('actual and predicted differ in length', len(actual), len(predicted))
    if len(actual) == 0:
        raise DomainError('At least one packet is required')
    return np.asarray(actual), np.asarray(predicted)


def packet_loss(actual: Sequence[int], predicted: Sequence[int]) -> float:
    """The fraction of packets sent above the supported MCS."""
    a, p = _pair(actual, predicted)
    return float(np.mean(p > a))


def rate_efficiency(actual: Sequence[int], predicted: Sequence[int], rates: RateTable) -> float:
    """
    Delivered rate over the ideal rate.  A lost packet delivers nothing, an
    under-predicted one delivers the rate it was sent at.
    """
    a, p = _pair(actual, predicted)
    r = rates.as_array()
    ideal = r[a].sum()
    if ideal <= 0:
        raise DomainError('The ideal rate is zero')
    delivered = np.where(p <= a, r[p], 0.0).sum()
    return float(delivered / ideal)


@attr.define(slots=True, frozen=True)
class UserMetrics:
    user_id: str
    predictor: str
    p_loss: float
    r_eff: float
    packets: int

    def row(self) -> Tuple[str, ...]:
        return (self.user_id, self.predictor, _fmt(self.p_loss), _fmt(self.r_eff), str(self.packets))


def user_metrics(
    actual: Sequence[int],
    predicted: Sequence[int],
    rates: RateTable,
    *,
    user_id: str = '',
    predictor: str = '',
) -> UserMetrics:
    return UserMetrics(
        user_id=user_id,
        predictor=predictor,
        p_loss=packet_loss(actual, predicted),
        r_eff=rate_efficiency(actual, predicted, rates),
        packets=len(actual),
    )


def cdf(values: Iterable[float]) -> List[Tuple[float, float]]:
    """The empirical CDF as ``(value, k/n)`` steps in ascending value order."""
    ordered = np.sort(np.asarray(list(values), dtype=float))
    if ordered.size == 0:
        raise DomainError('A CDF needs at least one value')
    heights = np.arange(1, ordered.size + 1) / ordered.size
    return list(zip(ordered.tolist(), heights.tolist()))


@attr.define(slots=True, frozen=True)
class PredictorSummary:
    predictor: str
    users: int
    p_loss_p50: float
    p_loss_p90: float
    #: the fraction of users whose rate efficiency reaches the target
    r_eff_ge_target: float

    def row(self) -> Tuple[str, ...]:
        return (
            self.predictor, str(self.users),
            _fmt(self.p_loss_p50), _fmt(self.p_loss_p90), _fmt(self.r_eff_ge_target),
        )


def summarize(
    metrics_by_predictor: Mapping[str, Sequence[UserMetrics]],
    target: float = DEFAULT_EFFICIENCY_TARGET,
) -> List[PredictorSummary]:
    summaries = []
    for predictor, items in metrics_by_predictor.items():
        if not items:
            raise DomainError(f'No user metrics for {predictor}')
        losses = np.asarray([m.p_loss for m in items])
        effs = np.asarray([m.r_eff for m in items])
        p50, p90 = np.percentile(losses, [50, 90])
        summaries.append(PredictorSummary(
            predictor=predictor,
            users=len(items),
            p_loss_p50=float(p50),
            p_loss_p90=float(p90),
            r_eff_ge_target=float(np.mean(effs >= target)),
        ))
    return summaries


def large_jump_count(sequence: Sequence[int], jump: int = 3) -> int:
    """The number of adjacent differences greater than ``jump``."""
    if len(sequence) < 2:
        return 0
    return int(np.count_nonzero(np.abs(np.diff(np.asarray(sequence))) > jump))


def large_jump_fraction(traces: Sequence[Trace], jump: int = 3, min_count: int = 200) -> float:
    """The fraction of users with at least ``min_count`` jumps larger than ``jump``."""
    if not traces:
        raise DomainError('No traces given')
    hits = sum(1 for tr in traces if large_jump_count(tr.symbols, jump) >= min_count)
    return hits / len(traces)


def _write(path: PathLike, header: Sequence[str], rows: Iterable[Sequence[str]]) -> None:
    with open(path, 'w', encoding='utf-8', newline='') as fp:
        writer = csv.writer(fp, lineterminator='\n')
        writer.writerow(header)
        writer.writerows(rows)


def write_metrics(path: PathLike, metrics: Iterable[UserMetrics]) -> None:
    _write(path, METRICS_HEADER, (m.row() for m in metrics))


def write_cdf(path: PathLike, metrics_by_predictor: Mapping[str, Sequence[UserMetrics]]) -> None:
    def rows():
        for predictor, items in metrics_by_predictor.items():
            for metric in ('p_loss', 'r_eff'):
                for value, height in cdf(getattr(m, metric) for m in items):
                    yield (predictor, metric, _fmt(value), _fmt(height))

    _write(path, CDF_HEADER, rows())


def write_summary(path: PathLike, summaries: Iterable[PredictorSummary]) -> None:
    _write(path, SUMMARY_HEADER, (s.row() for s in summaries))
