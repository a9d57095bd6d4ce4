import random

import pytest
from hypothesis import given, settings, strategies as st

from otmlab.errors import IllFoundedCode, InvalidEnumeration, NonExtensionalCode, ParseError
from otmlab.ordinal import OMEGA, pair
from otmlab.problems import hf_sets
from otmlab.setcode import (
    EMPTY,
    Enumeration,
    SetValue,
    canonical_code,
    canonical_enumeration,
    check_rep,
    code_to_text,
    decode,
    encode,
    parse_code,
    parse_set,
    permuted_enumeration,
    rank,
    reencode,
    set_to_text,
    transitive_closure,
)

from oracles import budget_sets, graph_collapse, to_nested

ONE = SetValue([EMPTY])
TWO = SetValue([EMPTY, ONE])


def test_encode_examples():
    assert encode(EMPTY, Enumeration([EMPTY])) == frozenset()
    assert encode(ONE, Enumeration([ONE, EMPTY])) == {2}
    assert encode(TWO, Enumeration([TWO, EMPTY, ONE])) == {2, 5, 6}
    assert canonical_code(TWO) == {pair(1, 0), pair(2, 0), pair(1, 2)}


def test_decode_examples():
    assert decode([]) == EMPTY
    assert decode([2]) == ONE
    with pytest.raises(IllFoundedCode):
        decode([pair(0, 1), pair(1, 0)])
    with pytest.raises(NonExtensionalCode):
        decode([pair(1, 0), pair(2, 0)])  # nodes 1 and 2 are both empty


def test_check_rep_examples():
    assert check_rep([2], ONE)
    assert not check_rep([], ONE)
    assert not check_rep([2], EMPTY)
    assert not check_rep([1, 2], EMPTY)


def test_canonical_enumeration_and_reencode():
    assert canonical_enumeration(ONE).items == (ONE, EMPTY)
    assert all(reencode(frozenset({2}), s) == {2} for s in range(5))
    swapped = encode(TWO, permuted_enumeration(TWO, [2, 1]))
    assert swapped == {pair(2, 0), pair(1, 0), pair(2, 1)}
    codes = {reencode(canonical_code(TWO), s) for s in range(20)}
    assert codes == {canonical_code(TWO), swapped}


def test_invalid_enumerations():
    with pytest.raises(InvalidEnumeration):
        encode(ONE, Enumeration([EMPTY, ONE]))
    with pytest.raises(InvalidEnumeration):
        encode(ONE, Enumeration([ONE]))
    with pytest.raises(InvalidEnumeration):
        encode(ONE, Enumeration([ONE, EMPTY, EMPTY]))
    with pytest.raises(InvalidEnumeration):
        permuted_enumeration(TWO, [1, 1])


def test_round_trip_under_many_enumerations():
    xs = budget_sets()
    assert len(xs) == 500 and max(rank(x) for x in xs) == 4
    for x in xs:
        n = len(transitive_closure(x))
        for seed in range(3):
            perm = list(range(1, n))
            random.Random(seed).shuffle(perm)
            c = encode(x, permuted_enumeration(x, perm))
            assert decode(c) == x
            assert check_rep(c, x)


def test_set_order_is_total_and_canonical():
    xs = hf_sets(2)
    assert len(xs) == 4 and xs == sorted(xs)
    assert xs[0] == EMPTY and xs[1] == ONE
    for a in xs:
        for b in xs:
            assert (a < b) + (b < a) + (a == b) == 1


def test_rank_and_closure():
    assert rank(EMPTY) == 0 and rank(TWO) == 2
    assert transitive_closure(TWO) == {TWO, ONE, EMPTY}


edge_sets = st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), max_size=7, unique=True)


@settings(max_examples=400)
@given(edge_sets)
def test_decode_agrees_with_graph_validator(edges):
    code = [pair(i, j) for i, j in edges]
    verdict, value = graph_collapse(edges)
    if verdict == "ok":
        assert to_nested(decode(code)) == value
    elif verdict == "ill-founded":
        with pytest.raises(IllFoundedCode):
            decode(code)
    else:
        with pytest.raises(NonExtensionalCode):
            decode(code)


def test_literal_and_code_text():
    x = parse_set(" { {}, { {} } , {} } ")
    assert x == TWO and set_to_text(x) == "{{},{{}}}"
    assert code_to_text(canonical_code(TWO)) == "[2,5,6]"
    assert parse_code("[2, 5,6]") == {2, 5, 6}
    assert parse_code("[]") == frozenset()
    assert parse_code("[w*1+3]") == {OMEGA + 3}


@pytest.mark.parametrize("bad", ["", "{", "}", "{{}", "{},", "{,}", "{{}{}}", "{a}", "{} {}"])
def test_bad_literals_have_positions(bad):
    with pytest.raises(ParseError) as info:
        parse_set(bad)
    assert 0 <= info.value.pos <= len(bad)


@pytest.mark.parametrize("bad", ["", "[", "2,5", "[2,,5]", "[2,5", "[02]"])
def test_bad_codes_have_positions(bad):
    with pytest.raises(ParseError):
        parse_code(bad)


@given(st.sampled_from(hf_sets(3)))
def test_literal_round_trip(x):
    assert parse_set(set_to_text(x)) == x
    assert parse_code(code_to_text(canonical_code(x))) == canonical_code(x)
