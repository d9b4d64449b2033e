"""
Model-order selection by information criteria.

Each candidate order is scored on the maximum-likelihood plug-in
log-likelihood of the sequence (natural log) penalized by its number of
free parameters, counted over the effective alphabet read from the tree.
"""

from __future__ import annotations

import csv
import enum
import logging
import math
from collections import Counter
from pathlib import Path
from typing import (
    Dict,
    Iterable,
    Iterator,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import attr
import numpy as np

from .exceptions import DomainError
from .freq_tree import FrequencyTree, observed_alphabet

__all__ = (
    'Criterion',
    'ParamCount',
    'SampleMode',
    'CriterionReport',
    'CRITERIA_HEADER',
    'sequence_loglik',
    'n_params',
    'criteria',
    'evaluate_orders',
    'select_order',
    'write_criteria',
)

log = logging.getLogger('mcspred.order_select')

CRITERIA_HEADER = ('user_id', 'i', 'loglik', 'n_params', 'mdl', 'aic', 'aicc')


class Criterion(enum.Enum):
    MDL = 'mdl'
    AIC = 'aic'
    AICC = 'aicc'


class ParamCount(enum.Enum):
    """How many free parameters a candidate of Markov order ``i`` is charged."""

    #: ``n_params(m, i + 1)``: the order-i model reads contexts down to depth i+1.
    TREE_DEPTH = 'tree-depth'
    #: ``n_params(m, i)`` taken literally.
    ORDER = 'order'


class SampleMode(enum.Enum):
    """Which positions of the sequence enter the likelihood."""

    #: every position with a full order-i context (N = len - i).
    TRANSITIONS = 'transitions'
    #: the positions after the largest candidate order, shared by all orders.
    COMMON = 'common'


def sequence_loglik(sequence: Sequence[int], order: int, *, start: Optional[int] = None) -> float:
    """
    Sum of ``ln(count(context + x) / count(context))`` over the evaluated
    positions, with the counts taken from those same positions.

    :param start: The 0-based index of the first evaluated position.
        Defaults to ``order``; it may not be smaller than that.
    """
    if order < 0:
        raise DomainError('The order must be non-negative', order)
    if start is None:
        start = order
    if start < order:
        raise DomainError('The first evaluated position needs a full context', start, order)
    if len(sequence) <= start:
        raise DomainError(
            f'An order-{order} likelihood needs more than {start} symbols',
            len(sequence),
        )
    seq = tuple(sequence)
    joint: Counter = Counter()
    for j in range(start, len(seq)):
        joint[seq[j - order:j + 1]] += 1
    marginal: Counter = Counter()
    for gram, c in joint.items():
        marginal[gram[:-1]] += c
    return math.fsum(c * math.log(c / marginal[gram[:-1]]) for gram, c in joint.items())


def n_params(m: int, i: int) -> int:
    """``(m - 1) * m ** (i - 1)``."""
    if m < 1 or i < 1:
        raise DomainError('n_params needs m >= 1 and i >= 1', m, i)
    return (m - 1) * m ** (i - 1)


@attr.define(slots=True, frozen=True)
class CriterionReport:
    orders: Tuple[int, ...]
    loglik: Tuple[float, ...]
    n_params: Tuple[int, ...]
    n_samples: Tuple[int, ...]
    mdl: Tuple[float, ...]
    aic: Tuple[float, ...]
    aicc: Tuple[float, ...]
    chosen: Dict[Criterion, int] = attr.field(factory=dict)

    def values(self, criterion: Criterion) -> Tuple[float, ...]:
        return getattr(self, criterion.value)

    def choose(self, criterion: Criterion) -> int:
        return self.chosen[criterion]

    def rows(self, user_id: str) -> Iterator[Tuple[str, ...]]:
        for idx, i in enumerate(self.orders):
            yield (
                user_id,
                str(i),
                format(self.loglik[idx], '.10g'),
                str(self.n_params[idx]),
                format(self.mdl[idx], '.10g'),
                format(self.aic[idx], '.10g'),
                format(self.aicc[idx], '.10g'),
            )


def criteria(
    logliks: Sequence[float],
    params: Sequence[int],
    n_samples: Union[int, Sequence[int]],
    *,
    orders: Optional[Sequence[int]] = None,
) -> CriterionReport:
    """
    Computes MDL, AIC and AICc for every candidate and picks the minimizing
    order for each criterion, preferring the smaller order on ties.
    AICc is ``+inf`` when ``N <= n_i + 1``.
    """
    count = len(logliks)
    if count == 0 or len(params) != count:
        raise DomainError('logliks and params must be non-empty and of equal length')
    if isinstance(n_samples, int):
        samples = (n_samples,) * count
    else:
        samples = tuple(n_samples)
    if len(samples) != count or any(n <= 0 for n in samples):
        raise DomainError('Every candidate needs a positive sample count', samples)
    if orders is None:
        orders = tuple(range(1, count + 1))
    ll = np.asarray(logliks, dtype=float)
    k = np.asarray(params, dtype=float)
    big_n = np.asarray(samples, dtype=float)
    mdl = -ll + k / 2 * np.log(big_n)
    aic = -2 * ll + 2 * k
    with np.errstate(divide='ignore', invalid='ignore'):
        correction = np.where(
            big_n > k + 1,
            2 * k * (k - 1) / (big_n - k - 1),
            np.inf,
        )
    aicc = aic + correction
    for i, value in zip(orders, aicc):
        if math.isinf(value):
            log.debug('order %d rejected by AICc (too few samples)', i)
    chosen = {
        Criterion.MDL: int(orders[int(np.argmin(mdl))]),
        Criterion.AIC: int(orders[int(np.argmin(aic))]),
        Criterion.AICC: int(orders[int(np.argmin(aicc))]),
    }
    return CriterionReport(
        orders=tuple(orders),
        loglik=tuple(ll.tolist()),
        n_params=tuple(int(v) for v in params),
        n_samples=samples,
        mdl=tuple(mdl.tolist()),
        aic=tuple(aic.tolist()),
        aicc=tuple(aicc.tolist()),
        chosen=chosen,
    )


def evaluate_orders(
    sequence: Sequence[int],
    tree: FrequencyTree,
    k_opt: int,
    *,
    param_count: ParamCount = ParamCount.TREE_DEPTH,
    sample_mode: SampleMode = SampleMode.TRANSITIONS,
) -> CriterionReport:
    """
    Scores the candidate orders ``1 .. k_opt``.  The candidate range is
    shortened when the sequence is too short to evaluate the higher orders.
    """
    if k_opt < 1:
        raise DomainError('k_opt must be at least 1', k_opt)
    if len(sequence) < 2:
        raise DomainError('Order selection needs at least two symbols', len(sequence))
    m_u, _ = observed_alphabet(tree)
    top = min(k_opt, len(sequence) - 1)
    orders = tuple(range(1, top + 1))
    logliks = []
    samples = []
    for i in orders:
        start = top if sample_mode is SampleMode.COMMON else i
        logliks.append(sequence_loglik(sequence, i, start=start))
        samples.append(len(sequence) - start)
    depth_shift = 1 if param_count is ParamCount.TREE_DEPTH else 0
    params = [n_params(m_u, i + depth_shift) for i in orders]
    return criteria(logliks, params, samples, orders=orders)


def select_order(
    sequence: Sequence[int],
    tree: FrequencyTree,
    k_opt: int,
    criterion: Criterion = Criterion.AICC,
    **kwargs,
) -> int:
    if k_opt == 1:
        return 1
    return evaluate_orders(sequence, tree, k_opt, **kwargs).choose(criterion)


def write_criteria(path: Union[str, Path], reports: Iterable[Tuple[str, CriterionReport]]) -> None:
    with open(path, 'w', encoding='utf-8', newline='') as fp:
        writer = csv.writer(fp, lineterminator='\n')
        writer.writerow(CRITERIA_HEADER)
        for user_id, report in reports:
            writer.writerows(report.rows(user_id))
