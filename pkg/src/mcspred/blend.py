"""
Blended next-symbol probabilities over a frequency tree.

An order-k estimate mixes the maximum-likelihood conditional of the length-k
context with the order-(k-1) estimate, weighted by the escape probability,
i.e. the share of context occurrences with no continuation stored at depth
k+1.  The recursion bottoms out at the order-0 symbol frequencies.
"""

from __future__ import annotations

from fractions import Fraction
from operator import truediv
from typing import (
    Callable,
    Sequence,
    Tuple,
    Union,
)

import attr
import numpy as np

from .exceptions import DomainError
from .freq_tree import FrequencyTree, context_count

__all__ = (
    'BlendQuery',
    'prob_order0',
    'prob_blended',
    'blended_distribution',
)

Number = Union[float, Fraction]


@attr.define(slots=True, frozen=True)
class BlendQuery:
    """
    A request for the order-``k`` blended probability, where ``k`` is the
    context length and the most recent symbol is the last one of ``context``.
    """

    tree: FrequencyTree = attr.field()
    context: Tuple[int, ...] = attr.field(converter=tuple)
    n: int = attr.field()

    @context.validator
    def _check_context(self, attribute, value) -> None:
        depth = self.tree.max_depth
        if depth is not None and len(value) + 1 > depth:
            raise DomainError(
                f'An order-{len(value)} blend reads depth {len(value) + 1}, '
                f'but the tree is only {depth} deep',
            )

    @property
    def order(self) -> int:
        return len(self.context)


def prob_order0(tree: FrequencyTree, n: int, t: int) -> float:
    if n < 1:
        raise DomainError('Order-0 probabilities need at least one observed symbol', n)
    return context_count(tree, (t,)) / n


def _blend(
    tree: FrequencyTree,
    context: Sequence[int],
    n: int,
    t: int,
    base_order: int,
    div: Callable[[int, int], Number],
) -> Number:
    k = len(context)
    if k == 0:
        return div(context_count(tree, (t,)), n)
    node = tree.find(context)
    if node is None or node.count == 0:
        # unseen context: the first term vanishes and the escape weight is 1
        return _blend(tree, context[1:], n, t, base_order, div)
    child = node.child(t)
    first = div(child.count if child is not None else 0, node.count)
    if k == base_order:
        return first
    escape = 1 - div(node.continuation_total, node.count)
    return first + escape * _blend(tree, context[1:], n, t, base_order, div)


def prob_blended(
    query: BlendQuery,
    t: int,
    *,
    base_order: int = 0,
    exact: bool = False,
) -> Number:
    """
    Returns the blended probability that the next symbol is ``t``.

    :param base_order: The order at which the recursion stops and returns the
        raw maximum-likelihood conditional.  The default 0 yields a normalized
        distribution over the alphabet.
    :param exact: Evaluate with :class:`fractions.Fraction` instead of floats.
    """
    if query.n < 1:
        raise DomainError('Blending needs at least one observed symbol', query.n)
    div = Fraction if exact else truediv
    return _blend(query.tree, query.context, query.n, t, base_order, div)  # type: ignore[arg-type]


def _count_vector(node, size: int) -> np.ndarray:
    vec = np.zeros(size)
    for symbol, child in node.children.items():
        vec[symbol] = child.count
    return vec


def blended_distribution(
    tree: FrequencyTree,
    context: Sequence[int],
    n: int,
    alphabet_size: int,
    *,
    base_order: int = 0,
) -> np.ndarray:
    """
    The whole next-symbol distribution for ``context``, built bottom-up from
    order 0 with the same arithmetic as :func:`prob_blended`.
    """
    if n < 1:
        raise DomainError('Blending needs at least one observed symbol', n)
    dist = _count_vector(tree.root, alphabet_size) / n
    k = len(context)
    for j in range(1, k + 1):
        node = tree.find(context[k - j:])
        if node is None or node.count == 0:
            continue
        first = _count_vector(node, alphabet_size) / node.count
        if j == base_order:
            dist = first
        else:
            escape = 1 - node.continuation_total / node.count
            dist = first + escape * dist
    return dist
