"""
Synthetic MCS feedback sequences.

Scenario traces come from a per-user wideband SINR process: on every subband
the desired link and each interferer fade as first-order autoregressive
complex Gaussian processes, link powers are averaged over the subbands, and
under partial loading each interferer is switched on and off with geometric
holding times.  The SINR is quantized to an MCS index by a threshold ladder.

Exact Markov sources with known statistics are generated for calibration.
"""

from __future__ import annotations

import enum
import zlib
from typing import (
    List,
    Optional,
    Sequence,
    Tuple,
)

import attr
import numpy as np
from scipy.signal import lfilter

from .core import DEFAULT_ALPHABET_SIZE, Trace
from .exceptions import DomainError

__all__ = (
    'Loading',
    'ScenarioConfig',
    'MarkovSourceConfig',
    'MarkovSource',
    'default_thresholds',
    'sinr_to_mcs',
    'user_ids',
    'user_rng',
    'generate_scenario',
    'generate_user',
    'generate_markov',
)

ROW_SUM_TOLERANCE = 1e-9


class Loading(enum.Enum):
    FULL = 'full'
    PARTIAL = 'partial'


def default_thresholds(p: int = DEFAULT_ALPHABET_SIZE) -> Tuple[float, ...]:
    """``p - 1`` SINR thresholds uniformly spaced in dB from -6 to 20."""
    if p < 2:
        raise DomainError('The alphabet must have at least two symbols', p)
    return tuple(np.linspace(-6.0, 20.0, p - 1).tolist())


def _to_float_tuple(value) -> Optional[Tuple[float, ...]]:
    if value is None:
        return None
    return tuple(float(v) for v in value)


@attr.define(slots=True, frozen=True)
class ScenarioConfig:
    loading: Loading = attr.field(default=Loading.PARTIAL, converter=Loading)
    users: int = 210
    seq_len: int = 1000
    #: per-feedback-step fading correlation
    rho: float = 0.9
    interferers: int = 8
    #: independently fading subbands averaged into one wideband SINR report
    subbands: int = 32
    #: mean on/off holding time in feedback steps (10 steps of 5 ms)
    holding_time: float = 10.0
    alphabet_size: int = DEFAULT_ALPHABET_SIZE
    thresholds: Optional[Tuple[float, ...]] = attr.field(default=None, converter=_to_float_tuple)
    #: range of the mean desired-to-interference ratio in dB, drawn per user
    geometry_db: Tuple[float, float] = attr.field(default=(-5.0, 10.0), converter=tuple)
    interferer_decay: float = 0.5
    noise_db: float = -20.0
    seed: int = 0

    def __attrs_post_init__(self) -> None:
        if not 0.0 < self.rho < 1.0:
            raise DomainError('The fading correlation must lie in (0, 1)', self.rho)
        if self.users < 1 or self.seq_len < 1:
            raise DomainError('A scenario needs at least one user and one feedback', self.users, self.seq_len)
        if self.subbands < 1:
            raise DomainError('A report averages at least one subband', self.subbands)
        if self.interferers < 0:
            raise DomainError('The interferer count cannot be negative', self.interferers)
        if self.holding_time < 1.0:
            raise DomainError('The mean holding time must be at least one step', self.holding_time)
        if not 0.0 < self.interferer_decay <= 1.0:
            raise DomainError('The interferer decay must lie in (0, 1]', self.interferer_decay)
        lo, hi = self.geometry_db
        if lo > hi:
            raise DomainError('Invalid geometry range', self.geometry_db)
        thresholds = self.ladder
        if len(thresholds) != self.alphabet_size - 1:
            raise DomainError(
                f'{self.alphabet_size} MCS levels need {self.alphabet_size - 1} thresholds',
                len(thresholds),
            )
        if any(a >= b for a, b in zip(thresholds, thresholds[1:])):
            raise DomainError('SINR thresholds must be strictly increasing')

    @property
    def ladder(self) -> Tuple[float, ...]:
        if self.thresholds is None:
            return default_thresholds(self.alphabet_size)
        return self.thresholds


def sinr_to_mcs(sinr_db, thresholds: Sequence[float]) -> np.ndarray:
    """The number of thresholds strictly below each SINR value."""
    return np.searchsorted(np.asarray(thresholds), np.asarray(sinr_db), side='left')


def user_ids(count: int) -> List[str]:
    width = max(3, len(str(count - 1)))
    return [f'u{idx:0{width}d}' for idx in range(count)]


def user_rng(seed: int, user_id: str) -> np.random.Generator:
    """An independent random stream per (master seed, user id) pair."""
    return np.random.default_rng(np.random.SeedSequence([seed, zlib.crc32(user_id.encode('utf-8'))]))


def _ar1_fading(rng: np.random.Generator, rho: float, links: int, length: int) -> np.ndarray:
    """Unit-power complex Gaussian AR(1) gains, started in the stationary state."""
    def cn(*shape):
        return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)

    start = cn(links, 1)
    innovations = cn(links, length)
    gains, _ = lfilter([np.sqrt(1 - rho ** 2)], [1.0, -rho], innovations, axis=1, zi=rho * start)
    return gains


def _activity(rng: np.random.Generator, cfg: ScenarioConfig) -> np.ndarray:
    shape = (cfg.interferers, cfg.seq_len)
    if cfg.loading is Loading.FULL:
        return np.ones(shape)
    initial = rng.random((cfg.interferers, 1)) < 0.5
    toggles = rng.random(shape) < 1.0 / cfg.holding_time
    toggles[:, 0] = False
    return (initial ^ (np.cumsum(toggles, axis=1) % 2 == 1)).astype(float)


def generate_user(cfg: ScenarioConfig, user_id: str) -> Trace:
    rng = user_rng(cfg.seed, user_id)
    geometry = rng.uniform(*cfg.geometry_db)
    desired_mean = 10 ** (geometry / 10)
    weights = cfg.interferer_decay ** np.arange(cfg.interferers)
    if cfg.interferers:
        weights = weights / weights.sum()
    noise = 10 ** (cfg.noise_db / 10)

    links = cfg.interferers + 1
    fading = _ar1_fading(rng, cfg.rho, links * cfg.subbands, cfg.seq_len)
    gains = (np.abs(fading) ** 2).reshape(links, cfg.subbands, cfg.seq_len).mean(axis=1)
    desired = desired_mean * gains[0]
    interference = (weights[:, np.newaxis] * gains[1:] * _activity(rng, cfg)).sum(axis=0)
    sinr_db = 10 * np.log10(desired / (interference + noise))
    mcs = sinr_to_mcs(sinr_db, cfg.ladder)
    return Trace.from_symbols(user_id, mcs.tolist())


def generate_scenario(cfg: ScenarioConfig) -> List[Trace]:
    return [generate_user(cfg, user_id) for user_id in user_ids(cfg.users)]


def _to_matrix(value) -> np.ndarray:
    return np.asarray(value, dtype=float)


@attr.define(slots=True, frozen=True, eq=False)
class MarkovSourceConfig:
    """
    A Markov chain of the given order over ``alphabet_size`` symbols.

    Row ``c`` of ``transitions`` is the next-symbol distribution after the
    context whose symbols, oldest first, are the base-``m`` digits of ``c``.
    An order-0 source has a single row.
    """

    alphabet_size: int = attr.field()
    order: int = attr.field()
    transitions: np.ndarray = attr.field(converter=_to_matrix)
    length: int = 1000
    seed: int = 0
    user_id: str = 'markov'
    #: the first ``order`` symbols; drawn uniformly when omitted
    initial: Optional[Tuple[int, ...]] = attr.field(default=None)

    def __attrs_post_init__(self) -> None:
        m = self.alphabet_size
        if m < 2 or self.order < 0:
            raise DomainError('Invalid Markov source shape', m, self.order)
        if self.transitions.shape != (m ** self.order, m):
            raise DomainError(
                f'An order-{self.order} source over {m} symbols needs a '
                f'{m ** self.order}x{m} matrix',
                self.transitions.shape,
            )
        if (self.transitions < 0).any():
            raise DomainError('Transition probabilities must be non-negative')
        if not np.allclose(self.transitions.sum(axis=1), 1.0, rtol=0, atol=ROW_SUM_TOLERANCE):
            raise DomainError('Each row of the transition matrix must sum to 1')
        if self.initial is not None:
            if len(self.initial) != self.order or any(not 0 <= s < m for s in self.initial):
                raise DomainError('The initial context must hold `order` valid symbols', self.initial)
        if self.length < self.order:
            raise DomainError('The sequence is shorter than its initial context', self.length)

    @classmethod
    def iid_uniform(cls, m: int, length: int = 1000, seed: int = 0) -> MarkovSourceConfig:
        return cls(m, 0, np.full((1, m), 1.0 / m), length=length, seed=seed, user_id='iid')


def _entropy_rows(probs: np.ndarray) -> np.ndarray:
    with np.errstate(divide='ignore', invalid='ignore'):
        terms = np.where(probs > 0, probs * np.log2(probs), 0.0)
    return -terms.sum(axis=-1)


@attr.define(slots=True, frozen=True, eq=False)
class MarkovSource:
    """Analytic statistics of a stationary Markov source."""

    cfg: MarkovSourceConfig

    @property
    def states(self) -> int:
        return self.cfg.alphabet_size ** self.cfg.order

    def state_matrix(self) -> np.ndarray:
        """Transitions between length-``order`` contexts."""
        m, states = self.cfg.alphabet_size, self.states
        shift = np.zeros((states, states))
        for c in range(states):
            for x in range(m):
                shift[c, (c * m + x) % states] += self.cfg.transitions[c, x]
        return shift

    def stationary_distribution(self) -> np.ndarray:
        """The stationary distribution over length-``order`` contexts."""
        if self.cfg.order == 0:
            return np.ones(1)
        states = self.states
        system = np.vstack([self.state_matrix().T - np.eye(states), np.ones((1, states))])
        rhs = np.zeros(states + 1)
        rhs[-1] = 1.0
        pi, *_ = np.linalg.lstsq(system, rhs, rcond=None)
        return pi

    def conditional_entropy(self, k: int) -> float:
        """``H(X_n | X_{n-k} .. X_{n-1})`` in bits under stationarity."""
        if k < 0:
            raise DomainError('k must be non-negative', k)
        m, order = self.cfg.alphabet_size, self.cfg.order
        pi = self.stationary_distribution()
        if k >= order:
            return float(pi @ _entropy_rows(self.cfg.transitions))
        joint = pi[:, np.newaxis] * self.cfg.transitions
        reduced = np.zeros((m ** k, m))
        np.add.at(reduced, np.arange(self.states) % (m ** k), joint)
        context_mass = reduced.sum(axis=1)
        nonzero = context_mass > 0
        conditional = reduced[nonzero] / context_mass[nonzero, np.newaxis]
        return float(context_mass[nonzero] @ _entropy_rows(conditional))

    def predictive_information(self, k: int) -> float:
        """``log2(m)`` minus the order-k conditional entropy, in bits."""
        return float(np.log2(self.cfg.alphabet_size)) - self.conditional_entropy(k)


def generate_markov(cfg: MarkovSourceConfig) -> Trace:
    rng = np.random.default_rng(cfg.seed)
    m, order = cfg.alphabet_size, cfg.order
    if cfg.initial is None:
        symbols = rng.integers(m, size=order).tolist()
    else:
        symbols = list(cfg.initial)
    cumulative = np.cumsum(cfg.transitions, axis=1)
    states = m ** order
    state = 0
    for s in symbols:
        state = (state * m + s) % states
    draws = rng.random(cfg.length - order)
    for u in draws:
        x = min(int(np.searchsorted(cumulative[state], u, side='right')), m - 1)
        symbols.append(x)
        state = (state * m + x) % states
    return Trace.from_symbols(cfg.user_id, symbols)
