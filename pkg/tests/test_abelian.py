import itertools
from collections import Counter
from math import lcm, prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from critgroups.abelian import (
    TRIVIAL_GROUP,
    AbelianGroup,
    InfiniteOrderError,
    MalformedStatisticsError,
    canonicalize,
    cyclic,
    from_order_statistics,
)


def order_statistics_by_enumeration(factors) -> dict[int, int]:
    """Independent oracle: walk every element of +Z_d and tally orders."""
    stats = Counter()
    for elem in itertools.product(*(range(d) for d in factors)):
        o = 1
        for x, d in zip(elem, factors):
            o = lcm(o, d // __import__("math").gcd(x, d))
        stats[o] += 1
    return dict(stats) if factors else {1: 1}


def test_canonicalize_crt_pair():
    assert canonicalize([2, 3]) == AbelianGroup(0, (6,))


def test_canonicalize_discards_ones():
    assert canonicalize([1, 1]) == TRIVIAL_GROUP


def test_canonicalize_prime_power_merge():
    # derived via order-statistics oracle below
    assert canonicalize([8, 2, 3]) == AbelianGroup(0, (2, 24))
    assert (order_statistics_by_enumeration([8, 2, 3])
            == order_statistics_by_enumeration([2, 24]))


def test_canonicalize_rejects_nonpositive():
    with pytest.raises(ValueError):
        canonicalize([0])
    with pytest.raises(ValueError):
        canonicalize([4, -2])


def test_order():
    assert TRIVIAL_GROUP.order() == 1
    assert AbelianGroup(0, (2, 4)).order() == 8


def test_order_of_infinite_group():
    with pytest.raises(InfiniteOrderError):
        AbelianGroup(1, (3,)).order()


def test_divisor_chain_enforced():
    with pytest.raises(ValueError):
        AbelianGroup(0, (4, 6))
    with pytest.raises(ValueError):
        AbelianGroup(0, (1, 2))


def test_direct_sum_identity():
    assert TRIVIAL_GROUP.direct_sum(cyclic(5)) == cyclic(5)


def test_direct_sum_chain_kept():
    assert cyclic(2).direct_sum(cyclic(4)) == AbelianGroup(0, (2, 4))


def test_direct_sum_crt_split():
    # Z_6 + Z_4 = Z_2 + Z_12, derived by splitting 6 = 2*3
    got = cyclic(6).direct_sum(cyclic(4))
    assert got == AbelianGroup(0, (2, 12))
    assert (order_statistics_by_enumeration([6, 4])
            == order_statistics_by_enumeration([2, 12]))


def test_from_order_statistics_trivial():
    assert from_order_statistics({1: 1}) == TRIVIAL_GROUP


@pytest.mark.parametrize("factors", [(2, 4), (2, 2)])
def test_from_order_statistics_enumerated(factors):
    stats = order_statistics_by_enumeration(factors)
    assert from_order_statistics(stats) == AbelianGroup(0, factors)


def test_from_order_statistics_spec_values():
    # frozen from the enumeration oracle above
    assert from_order_statistics({1: 1, 2: 3, 4: 4}) == AbelianGroup(0, (2, 4))
    assert from_order_statistics({1: 1, 2: 3}) == AbelianGroup(0, (2, 2))


def test_from_order_statistics_rejects_garbage():
    with pytest.raises(MalformedStatisticsError):
        from_order_statistics({})
    with pytest.raises(MalformedStatisticsError):
        from_order_statistics({1: 2, 2: 2})
    with pytest.raises(MalformedStatisticsError):
        from_order_statistics({1: 1, 2: 2})  # N_1 = 3 is not a power of 2
    with pytest.raises(MalformedStatisticsError):
        # Z_2 x Z_3 census claiming an element of order 12
        from_order_statistics({1: 1, 2: 1, 3: 2, 12: 4})


def test_element_count_of_order():
    g = AbelianGroup(0, (2, 12))
    stats = order_statistics_by_enumeration((2, 12))
    for t in range(1, 25):
        assert g.element_count_of_order(t) == stats.get(t, 0)


small_order_lists = st.lists(st.integers(min_value=1, max_value=40),
                             min_size=0, max_size=6)


@given(small_order_lists)
def test_canonicalize_permutation_invariant_and_idempotent(orders):
    g = canonicalize(orders)
    assert canonicalize(list(reversed(orders))) == g
    assert canonicalize(sorted(orders)) == g
    assert canonicalize(g.invariant_factors) == g


@given(small_order_lists)
def test_canonicalize_preserves_order(orders):
    assert canonicalize(orders).order() == prod(orders) if orders else True


@given(small_order_lists, small_order_lists)
def test_direct_sum_commutes(a, b):
    ga, gb = canonicalize(a), canonicalize(b)
    assert ga.direct_sum(gb) == gb.direct_sum(ga)


@given(small_order_lists, small_order_lists, small_order_lists)
@settings(max_examples=50)
def test_direct_sum_associative(a, b, c):
    ga, gb, gc = canonicalize(a), canonicalize(b), canonicalize(c)
    assert ga.direct_sum(gb).direct_sum(gc) == ga.direct_sum(gb.direct_sum(gc))


@given(st.lists(st.integers(min_value=2, max_value=24), min_size=0, max_size=4))
@settings(max_examples=60)
def test_order_statistics_round_trip(orders):
    g = canonicalize(orders)
    if g.order() > 10**5:
        return
    stats = order_statistics_by_enumeration(g.invariant_factors)
    assert from_order_statistics(stats) == g


def test_json_round_trip():
    g = AbelianGroup(2, (3, 3, 21))
    assert AbelianGroup.from_json(g.to_json()) == g
    assert g.to_json() == {"free_rank": 2, "invariant_factors": ["3", "3", "21"]}


def test_str():
    assert str(TRIVIAL_GROUP) == "trivial"
    assert str(AbelianGroup(1, (2, 2, 6))) == "Z x Z_2^2 x Z_6"
