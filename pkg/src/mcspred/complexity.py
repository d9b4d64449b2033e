"""
Online estimation of the predictive information carried by the last ``k``
symbols about the next one, and the order upper bound derived from it.

All quantities are in bits.
"""

from __future__ import annotations

from typing import (
    List,
    Sequence,
    Tuple,
    Union,
)

import attr
import numpy as np

from .blend import blended_distribution
from .exceptions import DomainError
from .freq_tree import FrequencyTree

__all__ = (
    'DEFAULT_MAX_ORDER',
    'DEFAULT_EPSILON',
    'PredictiveInfoEstimate',
    'entropy_bits',
    'ipred_instant',
    'ipred_update',
    'learning_curve',
    'k_opt',
    'fit_log_curve',
)

DEFAULT_MAX_ORDER = 4
DEFAULT_EPSILON = 0.05


def _zeros(est: PredictiveInfoEstimate) -> List[float]:
    return [0.0] * est.max_order


@attr.define(slots=True)
class PredictiveInfoEstimate:
    """
    Running means of the instantaneous predictive information for orders
    ``1 .. max_order``.  All orders share the same sample count.
    """

    alphabet_size: int = attr.field()
    max_order: int = attr.field(default=DEFAULT_MAX_ORDER)
    sums: List[float] = attr.field(default=attr.Factory(_zeros, takes_self=True))
    n_used: int = 0

    @max_order.validator
    def _check_order(self, attribute, value) -> None:
        if value < 1:
            raise DomainError('The maximum candidate order must be at least 1', value)

    @property
    def means(self) -> Tuple[float, ...]:
        if self.n_used == 0:
            return tuple(_zeros(self))
        return tuple(s / self.n_used for s in self.sums)

    def update(self, tree: FrequencyTree, recent: Sequence[int], n: int) -> PredictiveInfoEstimate:
        return ipred_update(self, tree, recent, n)


def entropy_bits(probs: np.ndarray) -> float:
    nz = probs[probs > 0]
    return float(-np.sum(nz * np.log2(nz)))


def ipred_instant(tree: FrequencyTree, context: Sequence[int], n: int, alphabet_size: int) -> float:
    """
    ``log2(p)`` minus the entropy of the blended next-symbol distribution
    given ``context``.
    """
    probs = blended_distribution(tree, context, n, alphabet_size)
    return float(np.log2(alphabet_size)) - entropy_bits(probs)


def ipred_update(
    est: PredictiveInfoEstimate,
    tree: FrequencyTree,
    recent: Sequence[int],
    n: int,
) -> PredictiveInfoEstimate:
    """
    Folds one instantaneous value per order into the running means.
    The order-k context is the last ``k`` symbols of ``recent``, or the whole
    of it while fewer than ``k`` symbols exist.
    """
    recent = tuple(recent)
    for k in range(1, est.max_order + 1):
        context = recent[-k:] if recent else ()
        est.sums[k - 1] += ipred_instant(tree, context, n, est.alphabet_size)
    est.n_used += 1
    return est


def learning_curve(est: PredictiveInfoEstimate) -> Tuple[float, ...]:
    """
    Finite differences of the Ipred means, with Ipred(0) taken as 0.
    """
    if est.n_used < 1:
        raise DomainError('The learning curve needs at least one estimate')
    means = est.means
    return tuple(np.diff(means, prepend=0.0).tolist())


def k_opt(
    source: Union[PredictiveInfoEstimate, Sequence[float]],
    epsilon: float = DEFAULT_EPSILON,
) -> int:
    """
    Returns the largest order whose learning-curve increment exceeds
    ``epsilon``, or 1 when there is none.  ``source`` is either an estimate
    or an already computed learning curve.
    """
    if epsilon <= 0:
        raise DomainError('epsilon must be positive', epsilon)
    curve = learning_curve(source) if isinstance(source, PredictiveInfoEstimate) else tuple(source)
    best = 1
    for k, gain in enumerate(curve, start=1):
        if gain > epsilon:
            best = k
    return best


def fit_log_curve(ipred: Sequence[float]) -> Tuple[float, float]:
    """
    Least-squares fit of ``Ipred(k) = c0 + c1 * ln(k)`` over ``k = 1 ..``.
    Diagnostic only; order decisions never use it.
    """
    if len(ipred) < 2:
        raise DomainError('A logarithmic fit needs at least two orders', len(ipred))
    k = np.arange(1, len(ipred) + 1)
    c1, c0 = np.polyfit(np.log(k), np.asarray(ipred, dtype=float), 1)
    return float(c0), float(c1)
