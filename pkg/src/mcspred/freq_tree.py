"""
Counting tries over symbol contexts.

Both builders share one update rule: for every suffix of the current window
that ends at the incoming symbol, the node at the end of that suffix's path
is credited once.  Intermediate nodes on the path are created but not
credited, so a node count is the number of times its exact context was seen
as a window suffix, not a subtree sum.

Active LeZi sizes the window by the longest word of an LZ78 dictionary; the
PPM builder uses a window of fixed length ``max_depth``.
"""

from __future__ import annotations

from collections import deque
from typing import (
    Deque,
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Optional,
    Sequence,
    Set,
    Tuple,
)

import attr

from .exceptions import DomainError

__all__ = (
    'Node',
    'FrequencyTree',
    'LeZiState',
    'DEFAULT_PPM_DEPTH',
    'lezi_ingest',
    'ppm_ingest',
    'context_count',
    'observed_alphabet',
    'build_lezi_tree',
    'build_ppm_tree',
    'dump_tree',
    'parse_tree_dump',
)

DEFAULT_PPM_DEPTH = 5


@attr.define(slots=True, eq=False)
class Node:
    symbol: Optional[int]
    count: int = 0
    children: Dict[int, Node] = attr.field(factory=dict)

    def child(self, symbol: int) -> Optional[Node]:
        return self.children.get(symbol)

    def ensure_child(self, symbol: int) -> Node:
        node = self.children.get(symbol)
        if node is None:
            node = Node(symbol)
            self.children[symbol] = node
            if len(self.children) > 1 and symbol < max(self.children):
                # keep ascending symbol order for dumps and tie-breaks
                self.children = dict(sorted(self.children.items()))
        return node

    @property
    def continuation_total(self) -> int:
        """The sum of the children counts (continuations stored one level deeper)."""
        return sum(c.count for c in self.children.values())


@attr.define(slots=True, eq=False)
class FrequencyTree:
    """
    A rooted multi-way counting trie.

    The root count equals the number of ingested symbols, so the depth-1
    counts always sum to the root count.  ``max_depth`` is ``None`` for the
    unbounded Active LeZi tree.
    """

    max_depth: Optional[int] = attr.field(default=None)
    root: Node = attr.field(factory=lambda: Node(None))
    _recent: Deque[int] = attr.field(init=False)

    @max_depth.validator
    def _check_depth(self, attribute, value) -> None:
        if value is not None and value < 1:
            raise DomainError('The tree depth must be positive', value)

    def __attrs_post_init__(self) -> None:
        self._recent = deque(maxlen=self.max_depth)

    @property
    def n(self) -> int:
        return self.root.count

    @property
    def depth(self) -> int:
        """The depth of the deepest existing node."""
        best = 0
        stack = [(self.root, 0)]
        while stack:
            node, d = stack.pop()
            best = max(best, d)
            stack.extend((c, d + 1) for c in node.children.values())
        return best

    @property
    def recent(self) -> Tuple[int, ...]:
        return tuple(self._recent)

    def find(self, context: Sequence[int]) -> Optional[Node]:
        node: Optional[Node] = self.root
        for symbol in context:
            assert node is not None
            node = node.children.get(symbol)
            if node is None:
                return None
        return node

    def credit(self, window: Sequence[int]) -> None:
        """
        Credits the terminal node of every suffix of ``window``.
        The last element of the window is the newly ingested symbol.
        """
        window = tuple(window)
        if self.max_depth is not None and len(window) > self.max_depth:
            raise DomainError('The window is longer than the tree depth', len(window))
        self.root.count += 1
        length = len(window)
        for start in range(length):
            node = self.root
            for symbol in window[start:]:
                node = node.ensure_child(symbol)
            node.count += 1

    def ingest(self, v: int) -> None:
        """Fixed-depth (PPM) update with the internally kept recent history."""
        if self.max_depth is None:
            raise DomainError('ingest() requires a fixed-depth tree; use lezi_ingest()')
        self._recent.append(v)
        self.credit(self._recent)

    def iter_nodes(self) -> Iterator[Tuple[int, Node]]:
        """Pre-order traversal yielding ``(depth, node)``, children in ascending symbol order."""
        stack: List[Tuple[int, Node]] = [
            (1, c) for c in reversed(list(self.root.children.values()))
        ]
        while stack:
            depth, node = stack.pop()
            yield depth, node
            stack.extend((depth + 1, c) for c in reversed(list(node.children.values())))


@attr.define(slots=True, eq=False)
class LeZiState:
    """The Active LeZi parser state: sliding window, LZ78 dictionary and current word."""

    window: List[int] = attr.field(factory=list)
    dictionary: Set[Tuple[int, ...]] = attr.field(factory=set)
    word: List[int] = attr.field(factory=list)
    max_word_len: int = 0


def lezi_ingest(state: LeZiState, tree: FrequencyTree, v: int) -> Tuple[LeZiState, FrequencyTree]:
    """
    Appends ``v`` to the current word and to the window, grows the dictionary
    with LZ78 parsing (the word is reset only when it was inserted), trims the
    window to the longest dictionary word and credits every window suffix.
    """
    state.word.append(v)
    state.window.append(v)
    word = tuple(state.word)
    if word not in state.dictionary:
        state.dictionary.add(word)
        state.max_word_len = max(state.max_word_len, len(word))
        state.word = []
    while len(state.window) > state.max_word_len:
        del state.window[0]
    tree.credit(state.window)
    return state, tree


def ppm_ingest(tree: FrequencyTree, history: Sequence[int], v: int) -> FrequencyTree:
    """
    Fixed-depth update: the window is the most recent ``min(m, seen)``
    symbols ending at ``v``, where ``history`` holds the symbols seen before.
    """
    if tree.max_depth is None:
        raise DomainError('ppm_ingest() requires a fixed-depth tree')
    keep = tree.max_depth - 1
    window = list(history[len(history) - keep:]) if keep > 0 else []
    window.append(v)
    tree.credit(window)
    tree._recent.clear()
    tree._recent.extend(window)
    return tree


def context_count(tree: FrequencyTree, context: Sequence[int]) -> int:
    """The count of the node reached by walking ``context`` from the root, or 0."""
    node = tree.find(context)
    return node.count if node is not None else 0


def observed_alphabet(tree: FrequencyTree) -> Tuple[int, FrozenSet[int]]:
    symbols = frozenset(s for s, node in tree.root.children.items() if node.count > 0)
    if not symbols:
        raise DomainError('The frequency tree is empty')
    return len(symbols), symbols


def build_lezi_tree(sequence: Iterable[int]) -> FrequencyTree:
    state = LeZiState()
    tree = FrequencyTree()
    for v in sequence:
        lezi_ingest(state, tree, v)
    return tree


def build_ppm_tree(sequence: Iterable[int], max_depth: int = DEFAULT_PPM_DEPTH) -> FrequencyTree:
    tree = FrequencyTree(max_depth)
    for v in sequence:
        tree.ingest(v)
    return tree


def dump_tree(tree: FrequencyTree) -> str:
    """Renders the tree as pre-order ``depth,symbol,count`` lines."""
    return ''.join(
        f'{depth},{node.symbol},{node.count}\n'
        for depth, node in tree.iter_nodes()
    )


def parse_tree_dump(text: str) -> List[Tuple[int, int, int]]:
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith('#'):
            continue
        depth, symbol, count = (int(v) for v in line.split(','))
        rows.append((depth, symbol, count))
    return rows
