import itertools

import numpy as np
import pytest

from etcforest.errors import DomainError
from etcforest.etc_core import count_pairs, etc, etc_value, is_homogeneous, nsrps_step

from oracles import naive_count_pairs, naive_etc


def seq(text):
    return [int(t) for t in text.split(",")] if text else []


def as_table(pcs):
    return {pc.pair: (pc.count, pc.first_position) for pc in pcs}


@pytest.mark.parametrize("text", ["0,0,0,1,1", "1,2,1,2,1,2", "7", "3,3,3,3,3", "2,1,1,1,2,2"])
def test_count_pairs_matches_oracle(text):
    assert as_table(count_pairs(seq(text))) == naive_count_pairs(seq(text))


def test_count_pairs_examples():
    assert as_table(count_pairs(seq("0,0,0,1,1"))) == {(0, 0): (1, 0), (0, 1): (1, 2), (1, 1): (1, 3)}
    table = as_table(count_pairs(seq("1,2,1,2,1,2")))
    assert table[(1, 2)][0] == 3 and table[(2, 1)][0] == 2
    assert count_pairs([7]) == []


def test_worked_example_steps():
    s, pair = nsrps_step(seq("0,0,0,1,1"))
    assert (s, pair) == ((2, 0, 1, 1), (0, 0))
    s, pair = nsrps_step(s)
    assert (s, pair) == ((3, 1, 1), (2, 0))
    assert nsrps_step(seq("1,2,1,2,1,2")) == ((3, 3, 3), (1, 2))


@pytest.mark.parametrize("bad", [[], [4], [1, 1, 1]])
def test_step_on_terminal_sequence(bad):
    with pytest.raises(DomainError, match="terminal"):
        nsrps_step(bad)


def test_is_homogeneous():
    assert is_homogeneous(seq("1,1,1,1,1,1"))
    assert is_homogeneous([])
    assert not is_homogeneous(seq("2,2,2,1,1,1"))


def test_etc_worked_example_trace():
    value, trace = etc(seq("0,0,0,1,1"))
    assert value == 4 == trace.total_steps
    assert [s.pair for s in trace.steps] == [(0, 0), (2, 0), (3, 1), (4, 1)]
    assert [s.replacement for s in trace.steps] == [2, 3, 4, 5]
    assert trace.sequences[-1] == (5,)


@pytest.mark.parametrize("text, expected", [
    ("1,1,1,1,1,1", 0), ("1,2,1,2,1,2", 1), ("2,2,2,1,1,1", 5),
    ("1,2,2,1,1,2", 4), ("2,1,1,1,2,2", 5), ("0,1", 1), ("", 0), ("9", 0),
])
def test_etc_values(text, expected):
    assert etc(seq(text))[0] == expected
    assert etc_value(seq(text)) == expected
    assert etc_value(seq(text), method="sorted") == expected


def test_negative_symbols_rejected():
    with pytest.raises(DomainError):
        etc([0, -1])
    with pytest.raises(DomainError):
        etc_value([0, -1])


def test_same_histogram_different_etc():
    values = [etc(seq(t))[0] for t in ("2,2,2,1,1,1", "1,2,2,1,1,2", "2,1,1,1,2,2")]
    assert values == [5, 4, 5]


def test_compiled_routes_match_oracle_on_random_long_sequences():
    rng = np.random.default_rng(7)
    for n, k in [(50, 2), (200, 3), (300, 6), (120, 40)]:
        for _ in range(5):
            s = rng.integers(0, k, n).tolist()
            expected = naive_etc(s)
            assert etc(s)[0] == expected
            assert etc_value(s, "dense") == expected
            assert etc_value(s, "sorted") == expected


def test_large_alphabet_ids_are_opaque():
    s = [10**9, 5, 10**9, 5, 7]
    assert etc_value(s) == naive_etc(s) == etc(s)[0]


def test_binary_sequences_up_to_length_8_match_oracle():
    for n in range(9):
        for s in itertools.product((0, 1), repeat=n):
            assert etc_value(list(s)) == naive_etc(list(s))
