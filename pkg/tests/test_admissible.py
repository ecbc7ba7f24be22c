import math
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from tzl.admissible import (OffsetTuple, check_admissible, class_root, count_tuples,
                            enumerate_tuples, equivalence_class, extend_admissible,
                            is_power_of)
from tzl.errors import DomainError, ExtensionError, TableRangeError

import oracles


@pytest.mark.parametrize("H,ok,witness", [("0,2", True, None), ("0,2,4", False, 3), ("0", True, None)])
def test_check_examples(H, ok, witness):
    rep = check_admissible(H)
    assert rep.admissible is ok
    assert rep.witness_prime == witness
    if witness:
        assert len(rep.residue_profiles[witness]) == witness


def test_check_matches_coverage_oracle_exhaustively():
    evens = list(range(2, 51, 2))
    checked = 0
    for k in range(1, 7):
        for rest in combinations(evens, k - 1):
            H = (0,) + rest
            assert check_admissible(H).admissible == oracles.admissible_by_coverage(H)
            checked += 1
    assert checked == sum(math.comb(25, j) for j in range(6))


def test_offset_tuple_validation():
    for bad in [(1, 2), (0, 2, 2), (0, 3), (), (0, 4, 2)]:
        with pytest.raises(DomainError):
            OffsetTuple(bad)
    H = OffsetTuple.parse("0,2,6")
    assert str(H) == "0,2,6" and H.k == 3 and H.gaps == (2, 4)


@given(st.sets(st.integers(1, 500), max_size=8))
def test_text_roundtrip(halves):
    H = OffsetTuple((0,) + tuple(sorted(2 * h for h in halves)))
    assert OffsetTuple.parse(str(H)) == H


@pytest.mark.parametrize("base,bound,members", [(2, 20, (2, 4, 8, 16)), (6, 40, (6, 36)), (2, 2, (2,))])
def test_equivalence_class(base, bound, members):
    assert equivalence_class(base, bound).members == members


@pytest.mark.parametrize("h,root", [(8, 2), (36, 6), (2, 2), (64, 2), (100, 10), (1296, 6), (18, 18)])
def test_class_root(h, root):
    assert class_root(h) == root


@given(st.integers(1, 5000))
def test_root_class_contains_h(half):
    h = 2 * half
    root = class_root(h)
    members = equivalence_class(root, h).members
    assert h in members and members[0] == root


def test_domain_errors():
    with pytest.raises(DomainError):
        equivalence_class(3, 10)
    with pytest.raises(DomainError):
        class_root(9)
    with pytest.raises(DomainError):
        extend_admissible("0,2,4", 2)


@pytest.mark.parametrize("H,base,max_power,out", [
    ("0,2", 6, 2, (0, 2, 8)),
    ("0,2", 2, 2, (0, 2, 6)),
    ("0", 2, 1, (0, 2)),
])
def test_extend_examples(H, base, max_power, out):
    assert extend_admissible(H, base, max_power).offsets == out


def test_extend_failure_reports_obstructions():
    with pytest.raises(ExtensionError) as info:
        extend_admissible("0,2,6,8,12", 4)
    # every power of 4 is 1 mod 3, so the new offset fills the last free class
    assert set(info.value.obstructions) == {1, 2, 3, 4}
    assert all(p == 3 for p, _ in info.value.obstructions.values())


@given(st.lists(st.sampled_from([2, 4, 6, 8, 10, 12]), min_size=1, max_size=6))
def test_extend_output_is_admissible(bases):
    H = OffsetTuple((0,))
    for b in bases:
        try:
            new = extend_admissible(H, b)
        except ExtensionError:
            break
        assert oracles.admissible_by_coverage(new.offsets)
        assert is_power_of(new.gaps[-1], b)
        H = new


@pytest.mark.parametrize("H,limit,expected", [
    ("0,2", 100, [3, 5, 11, 17, 29, 41, 59, 71]),
    ("0,2,6", 50, [5, 11, 17, 41]),
    ("0,2,4", 100, [3]),
])
def test_enumerate_examples(small_table, H, limit, expected):
    assert list(enumerate_tuples(H, limit, small_table)) == expected


@pytest.mark.parametrize("H", ["0,2", "0,4", "0,2,6", "0,4,6", "0,2,6,8", "0,6,12"])
def test_enumerate_matches_brute_force(small_table, H):
    offs = OffsetTuple.parse(H).offsets
    expected = [p for p in range(1, 10**4 + 1) if all(oracles.is_prime(p + h) for h in offs)]
    assert list(enumerate_tuples(H, 10**4, small_table)) == expected
    assert count_tuples(H, 10**4, small_table) == len(expected)


def test_count_examples(small_table, table_1e6):
    assert count_tuples("0,2", 100, small_table) == 8
    assert count_tuples("0,2", 3, small_table) == 1
    prefix = sum(1 for p in range(1, 10**4 + 1) if oracles.is_prime(p) and oracles.is_prime(p + 2))
    assert count_tuples("0,2", 10**4, table_1e6) == prefix == 205
    flags = oracles.bytearray_sieve(10**6 + 2)
    full = sum(1 for p in range(1, 10**6 + 1) if flags[p] and flags[p + 2])
    assert count_tuples("0,2", 10**6, table_1e6) == full


def test_enumerate_range_error(small_table):
    with pytest.raises(TableRangeError):
        list(enumerate_tuples("0,2", small_table.limit, small_table))
