from collections import Counter

import pytest

from mcspred.exceptions import DomainError
from mcspred.freq_tree import (
    FrequencyTree, LeZiState, build_lezi_tree, build_ppm_tree, context_count,
    dump_tree, lezi_ingest, observed_alphabet, parse_tree_dump, ppm_ingest,
)


def ngram_counts(seq, max_len):
    counts = Counter()
    for j in range(len(seq)):
        for d in range(1, max_len + 1):
            if j - d + 1 < 0:
                break
            counts[tuple(seq[j - d + 1:j + 1])] += 1
    return counts


def random_sequences(rng, count, max_len=80):
    for _ in range(count):
        m = int(rng.integers(2, 5))
        length = int(rng.integers(1, max_len))
        yield rng.integers(m, size=length).tolist()


def assert_children_bounded(tree):
    for _, node in tree.iter_nodes():
        assert node.continuation_total <= node.count
    assert tree.root.continuation_total == tree.n


def test_lezi_example_tree(example_symbols, lezi_golden):
    tree = build_lezi_tree(example_symbols)
    assert dump_tree(tree) == lezi_golden
    assert tree.n == 15
    assert context_count(tree, [22]) == 7
    assert context_count(tree, [24]) == 5
    assert context_count(tree, [27]) == 3
    assert context_count(tree, [22, 22]) == 3
    assert context_count(tree, [24, 22, 24]) == 1
    assert context_count(tree, [27, 22]) == 0
    assert_children_bounded(tree)


def test_lezi_first_symbol():
    state, tree = lezi_ingest(LeZiState(), FrequencyTree(), 5)
    assert state.dictionary == {(5,)}
    assert state.max_word_len == 1
    assert state.word == []
    assert state.window == [5]
    assert tree.n == 1
    assert context_count(tree, [5]) == 1


def test_lezi_constant_sequence():
    tree = build_lezi_tree([3] * 50)
    assert context_count(tree, [3]) == 50
    assert tree.n == 50


def test_lezi_invariants(rng):
    for seq in random_sequences(rng, 50):
        state, tree = LeZiState(), FrequencyTree()
        for v in seq:
            lezi_ingest(state, tree, v)
            assert len(state.window) <= state.max_word_len
            assert state.max_word_len == max(len(w) for w in state.dictionary)
            assert state.window[-1] == v
        assert tree.n == len(seq)
        assert_children_bounded(tree)


def test_ppm_counts_are_ngram_counts(rng):
    for seq in random_sequences(rng, 100):
        tree = build_ppm_tree(seq, max_depth=4)
        expected = ngram_counts(seq, 4)
        assert tree.n == len(seq)
        seen = {}
        path = []
        for depth, node in tree.iter_nodes():
            del path[depth - 1:]
            path.append(node.symbol)
            seen[tuple(path)] = node.count
        assert seen == dict(expected)
        assert tree.depth == min(4, len(seq))
        assert_children_bounded(tree)


def test_ppm_example_depth_one(example_symbols):
    tree = build_ppm_tree(example_symbols, max_depth=3)
    assert [(n.symbol, n.count) for n in tree.root.children.values()] == [
        (22, 7), (24, 5), (27, 3),
    ]


def test_ppm_depth_one_tree():
    tree = build_ppm_tree([0, 1, 1, 2], max_depth=1)
    assert tree.depth == 1
    assert context_count(tree, [1]) == 2


def test_ppm_short_sequence():
    tree = build_ppm_tree([0, 1, 0], max_depth=5)
    assert tree.depth == 3
    assert context_count(tree, [0, 1, 0]) == 1


def test_ppm_single_symbol():
    tree = build_ppm_tree([22], max_depth=5)
    assert tree.n == 1
    assert context_count(tree, [22]) == 1
    assert tree.recent == (22,)


def test_ppm_ingest_then_internal_history():
    seq = [0, 1, 2, 1, 0, 2, 2, 1]
    tree = FrequencyTree(3)
    for j, v in enumerate(seq[:5]):
        ppm_ingest(tree, seq[:j], v)
    assert tree.recent == (2, 1, 0)
    for v in seq[5:]:
        tree.ingest(v)
    assert tree.recent == (2, 2, 1)
    assert dump_tree(tree) == dump_tree(build_ppm_tree(seq, max_depth=3))


def test_ppm_ingest_matches_internal_history(rng):
    seq = rng.integers(3, size=60).tolist()
    expected = build_ppm_tree(seq, max_depth=3)
    tree = FrequencyTree(3)
    for j, v in enumerate(seq):
        ppm_ingest(tree, seq[:j], v)
    assert dump_tree(tree) == dump_tree(expected)


def test_tree_errors():
    with pytest.raises(DomainError):
        FrequencyTree(0)
    with pytest.raises(DomainError):
        FrequencyTree().ingest(1)
    with pytest.raises(DomainError):
        ppm_ingest(FrequencyTree(), [], 1)
    with pytest.raises(DomainError):
        FrequencyTree(2).credit([0, 1, 2])


def test_observed_alphabet(example_symbols):
    tree = build_ppm_tree(example_symbols)
    assert observed_alphabet(tree) == (3, frozenset({22, 24, 27}))
    with pytest.raises(DomainError):
        observed_alphabet(FrequencyTree(3))


def test_parse_tree_dump(lezi_golden):
    rows = parse_tree_dump('# depth,symbol,count\n' + lezi_golden)
    assert rows[0] == (1, 22, 7)
    assert rows[-1] == (3, 24, 1)
    assert len(rows) == 19
    assert sum(count for depth, _, count in rows if depth == 1) == 15


def test_children_sorted():
    tree = build_ppm_tree([5, 2, 9, 0], max_depth=2)
    assert list(tree.root.children) == [0, 2, 5, 9]
    top = [symbol for depth, symbol, _ in parse_tree_dump(dump_tree(tree)) if depth == 1]
    assert top == [0, 2, 5, 9]
