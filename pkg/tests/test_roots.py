import pytest
from hypothesis import given, strategies as st

from basicvar.roots import (
    BasicSubset, Root, classify, enumerate_basic, format_roots, is_basic,
    parse_roots, positive_roots, root_sum, sort_desc, succ_gt,
)

from conftest import ALL_UP_TO_6, EXAMPLE_8


def R(i, j):
    return Root(i, j)


def test_order_examples():
    assert succ_gt(R(3, 1), R(2, 1))
    assert succ_gt(R(2, 1), R(4, 2))
    assert not succ_gt(R(3, 1), R(3, 1))


def test_order_rejects_negative_roots():
    with pytest.raises(ValueError):
        succ_gt(R(1, 2), R(2, 1))


def test_descending_sequence_n4():
    assert positive_roots(4) == [R(4, 1), R(3, 1), R(2, 1), R(4, 2), R(3, 2), R(4, 3)]


@given(st.integers(2, 7), st.data())
def test_order_is_strict_total(n, data):
    roots = positive_roots(n)
    a, b, c = (data.draw(st.sampled_from(roots)) for _ in range(3))
    assert not succ_gt(a, a)
    if a != b:
        assert succ_gt(a, b) != succ_gt(b, a)
    if succ_gt(a, b) and succ_gt(b, c):
        assert succ_gt(a, c)


def test_is_basic():
    assert is_basic({R(3, 1), R(4, 2)}, 4)
    assert not is_basic({R(3, 1), R(3, 2)}, 4)
    assert is_basic(set(), 3)
    with pytest.raises(ValueError):
        is_basic({R(5, 1)}, 4)


def test_basic_subset_rejects_shared_column():
    with pytest.raises(ValueError):
        BasicSubset.of(4, (3, 1), (4, 1))


def test_root_sum():
    assert root_sum(R(3, 2), R(2, 1)) == R(3, 1)
    assert root_sum(R(2, 1), R(3, 2)) == R(3, 1)
    assert root_sum(R(4, 1), R(3, 2)) is None
    assert root_sum(R(5, 3), R(3, 1)) == R(5, 1)


def test_classify_examples():
    p = classify(BasicSubset.of(4, (3, 1), (4, 2)))
    assert p.singular == {R(4, 3), R(3, 2), R(2, 1)}
    assert p.m_set == {R(4, 1)}
    empty = classify(BasicSubset.of(4))
    assert empty.singular == set() and empty.m_set == set(positive_roots(4))
    assert classify(EXAMPLE_8).m_set == {R(5, 1), R(6, 1), R(7, 1), R(8, 1), R(8, 2), R(6, 4), R(6, 5)}


def test_partition_laws_exhaustive():
    for D in ALL_UP_TO_6:
        p = classify(D)
        everything = set(positive_roots(D.n))
        assert p.singular | p.regular == everything
        assert not p.singular & p.regular
        assert set(D.roots) <= p.regular
        assert p.m_set == p.regular - set(D.roots)
        for a in p.m_set:
            for b in p.m_set:
                s = root_sum(a, b)
                assert s is None or s in p.m_set


def test_enumeration_counts():
    assert [sum(1 for _ in enumerate_basic(n)) for n in range(1, 6)] == [1, 2, 5, 15, 52]


def test_parse_and_format():
    roots = parse_roots(" (4,1), (7, 2),(8,3) ")
    assert roots == [R(4, 1), R(7, 2), R(8, 3)]
    assert format_roots(reversed(roots)) == "(4,1),(7,2),(8,3)"
    assert parse_roots("") == []
    with pytest.raises(ValueError):
        parse_roots("(4,1) junk")


def test_json_round_trip():
    assert EXAMPLE_8.to_json() == {"n": 8, "roots": [[4, 1], [7, 2], [8, 3], [5, 4]]}
    assert BasicSubset.from_json(EXAMPLE_8.to_json()) == EXAMPLE_8
    assert sort_desc(EXAMPLE_8) == list(EXAMPLE_8)
