"""
Decision rules over blended next-symbol distributions and the per-user
online prediction pipeline.
"""

from __future__ import annotations

import enum
import logging
from typing import (
    Dict,
    List,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import attr
import numpy as np

from .blend import blended_distribution
from .complexity import (
    DEFAULT_EPSILON,
    DEFAULT_MAX_ORDER,
    PredictiveInfoEstimate,
    ipred_update,
    k_opt,
)
from .core import RateTable
from .exceptions import ConfigError, DomainError
from .freq_tree import DEFAULT_PPM_DEPTH, FrequencyTree
from .order_select import (
    Criterion,
    CriterionReport,
    ParamCount,
    SampleMode,
    evaluate_orders,
)

__all__ = (
    'PredictorKind',
    'StepOutcome',
    'UserPipeline',
    'DEFAULT_FM_ORDER',
    'DEFAULT_MEDIAN_WINDOW',
    'DEFAULT_RECOMPUTE_PERIOD',
    'DEFAULT_BOOTSTRAP_LEN',
    'map_decision',
    'expected_costs',
    'brm_decision',
    'predict_map',
    'predict_brm',
    'predict_median',
    'predict_last',
    'pipeline_step',
)

log = logging.getLogger('mcspred.predict')

DEFAULT_FM_ORDER = 3
DEFAULT_MEDIAN_WINDOW = 9
DEFAULT_RECOMPUTE_PERIOD = 100
DEFAULT_BOOTSTRAP_LEN = 100

COLD_PREDICTION = 0


class PredictorKind(enum.Enum):
    VO_MAP = 'vo_map'
    VO_BRM = 'vo_brm'
    FM_MAP = 'fm_map'
    FM_BRM = 'fm_brm'
    MEDIAN = 'median'
    NO_PREDICTION = 'no_prediction'

    @property
    def variable_order(self) -> bool:
        return self in (PredictorKind.VO_MAP, PredictorKind.VO_BRM)

    @property
    def fixed_order(self) -> bool:
        return self in (PredictorKind.FM_MAP, PredictorKind.FM_BRM)

    @property
    def uses_tree(self) -> bool:
        return self.variable_order or self.fixed_order

    @property
    def risk_minimizing(self) -> bool:
        return self in (PredictorKind.VO_BRM, PredictorKind.FM_BRM)


def map_decision(probs: np.ndarray) -> int:
    """The most probable symbol; the lower symbol wins a tie."""
    return int(np.argmax(probs))


def expected_costs(probs: np.ndarray, rates: Union[RateTable, np.ndarray]) -> np.ndarray:
    """
    ``C_j = sum_i P(i) * C[i, j]`` for every transmit choice ``j``.
    ``rates`` is a rate table or an already built cost matrix.
    """
    costs = rates.cost_matrix() if isinstance(rates, RateTable) else rates
    return np.asarray(probs, dtype=float) @ costs


def brm_decision(probs: np.ndarray, rates: Union[RateTable, np.ndarray]) -> int:
    """The symbol with the least expected rate loss; the lower symbol wins a tie."""
    return int(np.argmin(expected_costs(probs, rates)))


def predict_map(tree: FrequencyTree, context: Sequence[int], n: int, alphabet_size: int) -> int:
    return map_decision(blended_distribution(tree, context, n, alphabet_size))


def predict_brm(tree: FrequencyTree, context: Sequence[int], n: int, rates: RateTable) -> int:
    return brm_decision(blended_distribution(tree, context, n, len(rates)), rates)


def predict_median(history: Sequence[int], window: int = DEFAULT_MEDIAN_WINDOW) -> int:
    """
    The median of the last ``window`` values; for an even count the lower
    of the two middle values.
    """
    if not history:
        raise DomainError('The median predictor needs at least one past value')
    if window < 1:
        raise DomainError('The median window must be positive', window)
    recent = sorted(history[-window:])
    return int(recent[(len(recent) - 1) // 2])


def predict_last(history: Sequence[int]) -> int:
    if not history:
        raise DomainError('The no-prediction baseline needs at least one past value')
    return int(history[-1])


def _check_kinds(kinds) -> Tuple[PredictorKind, ...]:
    kinds = tuple(PredictorKind(k) for k in kinds)
    if not kinds:
        raise ConfigError('At least one predictor is required')
    return kinds


@attr.define(slots=True, frozen=True)
class StepOutcome:
    #: 1-based position of the predicted symbol within the trace.
    position: int
    actual: int
    predictions: Dict[PredictorKind, int]
    #: the model order each predictor used; 0 for the non-tree baselines.
    orders: Dict[PredictorKind, int]
    #: True for the first position, which has no history to predict from.
    cold: bool


@attr.define(slots=True, eq=False)
class UserPipeline:
    """
    Online prediction state of one user.

    Every predictor kind shares the PPM tree, the predictive-information
    estimate and the selected order; only the decision rule and the order
    each kind reads differ.
    """

    rates: RateTable = attr.field()
    kinds: Tuple[PredictorKind, ...] = attr.field(
        default=tuple(PredictorKind), converter=_check_kinds,
    )
    depth: int = DEFAULT_PPM_DEPTH
    max_order: int = DEFAULT_MAX_ORDER
    fm_order: int = DEFAULT_FM_ORDER
    epsilon: float = DEFAULT_EPSILON
    criterion: Criterion = Criterion.AICC
    recompute_period: int = DEFAULT_RECOMPUTE_PERIOD
    bootstrap_len: int = DEFAULT_BOOTSTRAP_LEN
    median_window: int = DEFAULT_MEDIAN_WINDOW
    param_count: ParamCount = ParamCount.TREE_DEPTH
    sample_mode: SampleMode = SampleMode.TRANSITIONS
    user_id: str = ''

    tree: FrequencyTree = attr.field(init=False)
    estimate: PredictiveInfoEstimate = attr.field(init=False)
    history: List[int] = attr.field(init=False, factory=list)
    #: the selected order used by the variable-order predictors.
    order: int = attr.field(init=False, default=1)
    order_bound: int = attr.field(init=False, default=1)
    report: Optional[CriterionReport] = attr.field(init=False, default=None)
    _costs: np.ndarray = attr.field(init=False)

    def __attrs_post_init__(self) -> None:
        if self.depth < self.max_order + 1:
            raise ConfigError(
                f'A tree of depth {self.depth} cannot blend order {self.max_order}',
            )
        if not 1 <= self.fm_order <= self.depth - 1:
            raise ConfigError(
                f'The fixed order must lie in 1..{self.depth - 1}', self.fm_order,
            )
        if self.recompute_period < 1 or self.bootstrap_len < 0:
            raise ConfigError('Invalid recompute schedule', self.recompute_period, self.bootstrap_len)
        self.tree = FrequencyTree(self.depth)
        self.estimate = PredictiveInfoEstimate(len(self.rates), self.max_order)
        self._costs = self.rates.cost_matrix()

    @property
    def alphabet_size(self) -> int:
        return len(self.rates)

    @property
    def n(self) -> int:
        return self.tree.n

    def distribution(self, order: int) -> np.ndarray:
        """The blended next-symbol distribution reading the last ``order`` symbols."""
        context = self.history[-order:] if order > 0 else []
        return blended_distribution(self.tree, context, self.n, self.alphabet_size)

    def order_for(self, kind: PredictorKind) -> int:
        if kind.variable_order:
            return self.order
        if kind.fixed_order:
            return self.fm_order
        return 0

    def predict(self) -> Dict[PredictorKind, int]:
        """Predicts the next symbol with every configured kind from the current state."""
        dists: Dict[int, np.ndarray] = {}
        result: Dict[PredictorKind, int] = {}
        for kind in self.kinds:
            if kind is PredictorKind.MEDIAN:
                result[kind] = predict_median(self.history, self.median_window)
            elif kind is PredictorKind.NO_PREDICTION:
                result[kind] = predict_last(self.history)
            else:
                order = self.order_for(kind)
                if order not in dists:
                    dists[order] = self.distribution(order)
                if kind.risk_minimizing:
                    result[kind] = brm_decision(dists[order], self._costs)
                else:
                    result[kind] = map_decision(dists[order])
        return result

    def ingest(self, x: int) -> None:
        if not 0 <= x < self.alphabet_size:
            raise DomainError(
                f'Symbol {x} is outside the alphabet of size {self.alphabet_size}',
            )
        self.tree.ingest(x)
        self.history.append(x)
        ipred_update(self.estimate, self.tree, self.history[-self.max_order:], self.n)
        length = len(self.history)
        if length >= self.bootstrap_len and length % self.recompute_period == 0:
            self.recompute()

    def recompute(self) -> int:
        """Re-derives the order bound and the selected order from the state so far."""
        self.order_bound = min(k_opt(self.estimate, self.epsilon), self.depth - 1)
        if len(self.history) < 2:
            self.report = None
            self.order = 1
        else:
            self.report = evaluate_orders(
                self.history, self.tree, self.order_bound,
                param_count=self.param_count,
                sample_mode=self.sample_mode,
            )
            self.order = self.report.choose(self.criterion)
        log.debug(
            'user %s: n=%d k_opt=%d selected order=%d',
            self.user_id, len(self.history), self.order_bound, self.order,
        )
        return self.order


def pipeline_step(p: UserPipeline, x_new: int) -> Tuple[StepOutcome, UserPipeline]:
    """
    Predicts the symbol at the next position from the symbols before it,
    then ingests ``x_new``.
    """
    position = len(p.history) + 1
    cold = not p.history
    if cold:
        predictions = {kind: COLD_PREDICTION for kind in p.kinds}
    else:
        predictions = p.predict()
    orders = {kind: p.order_for(kind) for kind in p.kinds}
    p.ingest(x_new)
    return StepOutcome(position, x_new, predictions, orders, cold), p
