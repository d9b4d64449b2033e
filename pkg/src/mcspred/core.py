"""
Alphabet, rate table and trace types shared by every other module,
plus the CSV readers and writers for traces and rate-table overrides.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import (
    Dict,
    Iterable,
    Iterator,
    List,
    Sequence,
    Tuple,
    Union,
)

import attr
import numpy as np

from .exceptions import DomainError, TraceFormatError

__all__ = (
    'Alphabet',
    'RateTable',
    'Trace',
    'DEFAULT_ALPHABET_SIZE',
    'DEFAULT_FEEDBACK_PERIOD',
    'MIN_RATE',
    'MAX_RATE',
    'default_rate_table',
    'load_rate_table',
    'load_traces',
    'write_traces',
)

DEFAULT_ALPHABET_SIZE = 28
DEFAULT_FEEDBACK_PERIOD = 5  # subframes

# QPSK with code rate 0.076 and 64-QAM with code rate 0.93, in bits/symbol.
MIN_RATE = 0.1523
MAX_RATE = 5.5547

TRACE_HEADER = ('user_id', 't', 'mcs')
RATE_TABLE_HEADER = ('mcs', 'rate')

PathLike = Union[str, Path]


@attr.define(slots=True, frozen=True)
class Alphabet:
    """
    The finite set of MCS indices ``0 .. size-1``.
    """

    size: int = attr.field(default=DEFAULT_ALPHABET_SIZE)

    @size.validator
    def _check_size(self, attribute, value) -> None:
        if not isinstance(value, int) or value < 2:
            raise DomainError('The alphabet must have at least two symbols', value)

    @property
    def symbols(self) -> range:
        return range(self.size)

    def __contains__(self, symbol: object) -> bool:
        return isinstance(symbol, (int, np.integer)) and 0 <= symbol < self.size

    def validate(self, symbol: int) -> int:
        if symbol not in self:
            raise DomainError(
                f'Symbol {symbol!r} is outside the alphabet of size {self.size}',
            )
        return int(symbol)


def _to_rate_tuple(values: Iterable[float]) -> Tuple[float, ...]:
    return tuple(float(v) for v in values)


@attr.define(slots=True, frozen=True)
class RateTable:
    """
    Spectral efficiency in bits/symbol for each MCS index.
    Rates are positive and strictly increasing in the symbol index.
    """

    rates: Tuple[float, ...] = attr.field(converter=_to_rate_tuple)

    @rates.validator
    def _check_rates(self, attribute, value) -> None:
        if len(value) < 2:
            raise DomainError('A rate table needs at least two entries', len(value))
        if any(r <= 0 for r in value):
            raise DomainError('All rates must be positive')
        if any(a >= b for a, b in zip(value, value[1:])):
            raise DomainError('Rates must be strictly increasing in the MCS index')

    def __len__(self) -> int:
        return len(self.rates)

    def rate(self, symbol: int) -> float:
        return self.rates[symbol]

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet(len(self.rates))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.rates, dtype=float)

    def cost_matrix(self) -> np.ndarray:
        """
        Returns ``C[i, j]``, the rate lost when transmitting at rate ``j``
        while the channel supports rate ``i``: the whole rate ``r_i`` when
        ``r_i < r_j`` (the packet is lost), otherwise the gap ``r_i - r_j``.
        """
        r = self.as_array()
        true_rate = r[:, np.newaxis]
        sent_rate = r[np.newaxis, :]
        return np.where(true_rate < sent_rate, true_rate, true_rate - sent_rate)


def default_rate_table(p: int = DEFAULT_ALPHABET_SIZE) -> RateTable:
    """
    Builds a rate table with the two known end-point efficiencies and
    the intermediate values interpolated uniformly in the log domain.
    """
    if p < 2:
        raise DomainError('The alphabet must have at least two symbols', p)
    rates = np.geomspace(MIN_RATE, MAX_RATE, num=p)
    rates[0] = MIN_RATE
    rates[-1] = MAX_RATE
    return RateTable(rates.tolist())


@attr.define(slots=True, frozen=True)
class Trace:
    """
    The feedback sequence of one user.
    ``t`` counts feedback instants (one per ``delta`` subframes).
    """

    user_id: str = attr.field(converter=str)
    samples: Tuple[Tuple[int, int], ...] = attr.field(
        converter=lambda v: tuple((int(t), int(x)) for t, x in v),
    )
    delta: int = attr.field(default=DEFAULT_FEEDBACK_PERIOD)

    @samples.validator
    def _check_order(self, attribute, value) -> None:
        for (t0, _), (t1, _) in zip(value, value[1:]):
            if t1 <= t0:
                raise DomainError(
                    f'Feedback indices of user {self.user_id} must be strictly increasing',
                    t0, t1,
                )

    @classmethod
    def from_symbols(cls, user_id: str, symbols: Iterable[int], delta: int = DEFAULT_FEEDBACK_PERIOD) -> Trace:
        return cls(user_id, list(enumerate(symbols)), delta)

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def symbols(self) -> Tuple[int, ...]:
        return tuple(x for _, x in self.samples)

    @property
    def times(self) -> Tuple[int, ...]:
        return tuple(t for t, _ in self.samples)

    def validate(self, alphabet: Alphabet) -> Trace:
        for t, x in self.samples:
            if x not in alphabet:
                raise DomainError(
                    f'User {self.user_id} reports MCS {x} at t={t}, '
                    f'outside the alphabet of size {alphabet.size}',
                )
        return self


def _read_rows(path: PathLike, header: Sequence[str]) -> Iterator[Tuple[int, List[str]]]:
    try:
        fp = open(path, 'r', encoding='utf-8', newline='')
    except OSError as e:
        raise TraceFormatError(f'Cannot open {path}: {e.strerror}', path) from e
    with fp:
        reader = csv.reader(fp)
        first = next(reader, None)
        if first is None or tuple(col.strip() for col in first) != tuple(header):
            raise TraceFormatError(
                'Expected the header "{0}"'.format(','.join(header)), path, 1,
            )
        for row in reader:
            if not row or all(not col.strip() for col in row):
                continue
            if len(row) != len(header):
                raise TraceFormatError(
                    f'Expected {len(header)} columns but got {len(row)}',
                    path, reader.line_num,
                )
            yield reader.line_num, [col.strip() for col in row]


def load_traces(path: PathLike, alphabet: Alphabet) -> List[Trace]:
    """
    Reads a trace CSV (``user_id,t,mcs``) into one :class:`Trace` per user,
    in the order the users first appear in the file.
    Samples are sorted by their feedback index.
    """
    per_user: Dict[str, Dict[int, int]] = {}
    for lineno, (user_id, raw_t, raw_x) in _read_rows(path, TRACE_HEADER):
        try:
            t = int(raw_t)
            x = int(raw_x)
        except ValueError:
            raise TraceFormatError('Non-integer feedback index or MCS', path, lineno)
        if x not in alphabet:
            raise DomainError(
                f'MCS {x} at line {lineno} is outside the alphabet of size {alphabet.size}',
            )
        samples = per_user.setdefault(user_id, {})
        if t in samples:
            raise TraceFormatError(f'Duplicate feedback index {t} for user {user_id}', path, lineno)
        samples[t] = x
    return [
        Trace(user_id, sorted(samples.items()))
        for user_id, samples in per_user.items()
    ]


def write_traces(path: PathLike, traces: Iterable[Trace]) -> None:
    with open(path, 'w', encoding='utf-8', newline='') as fp:
        writer = csv.writer(fp, lineterminator='\n')
        writer.writerow(TRACE_HEADER)
        for trace in sorted(traces, key=lambda tr: tr.user_id):
            for t, x in trace.samples:
                writer.writerow((trace.user_id, t, x))


def load_rate_table(path: PathLike, alphabet: Alphabet) -> RateTable:
    """
    Reads a rate-table override CSV (``mcs,rate``) that lists every symbol
    of the alphabet exactly once.
    """
    rates: Dict[int, float] = {}
    for lineno, (raw_mcs, raw_rate) in _read_rows(path, RATE_TABLE_HEADER):
        try:
            mcs = int(raw_mcs)
            rate = float(raw_rate)
        except ValueError:
            raise TraceFormatError('Non-numeric MCS or rate', path, lineno)
        if mcs not in alphabet:
            raise DomainError(f'MCS {mcs} at line {lineno} is outside the alphabet')
        if mcs in rates:
            raise TraceFormatError(f'Duplicate rate for MCS {mcs}', path, lineno)
        rates[mcs] = rate
    missing = [s for s in alphabet.symbols if s not in rates]
    if missing:
        raise DomainError('The rate table does not cover all MCS indices', missing)
    return RateTable([rates[s] for s in alphabet.symbols])
