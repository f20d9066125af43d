import itertools

import pytest
from hypothesis import given, settings, strategies as st

from higherforms.construct_z import (
    InadmissibleSet,
    TargetSetZ,
    admissibility_witness_z,
    check_admissible_z,
    construct_excluding_z,
    construct_QB_z,
    construct_small,
    frobenius_decompose,
    rank_bound_z,
)
from higherforms.repsearch import represented_set
from higherforms.ring import QQ


def admissible_by_quantifiers(A, m, box=40):
    """Direct check of: a*b^m in A implies a in A, over a box of (a, b)."""
    for a in range(-box, box + 1):
        for b in range(-box, box + 1):
            if a * b**m in A and a not in A:
                return False
    return True


def represented_by_brute_force(Q, bound):
    """Values <= bound of a diagonal-plus-cross form over Z by full enumeration."""
    R = 1
    while (R + 1) ** Q.m <= bound:
        R += 1
    seen = set()
    # coordinates with a pure coefficient above the bound are forced to zero
    live = [i for i in range(Q.n) if Q.pure_coefficient(i).a <= bound]
    for xs in itertools.product(range(R + 1), repeat=len(live)):
        x = [0] * Q.n
        for i, v in zip(live, xs):
            x[i] = v
        v = Q.evaluate(x).a
        if v <= bound:
            seen.add(v)
    return seen


def test_target_set():
    A = TargetSetZ([3, 2, 3])
    assert A.B == 3 and len(A) == 2 and 2 in A
    assert TargetSetZ().B == 0
    with pytest.raises(ValueError):
        TargetSetZ([0])


def test_admissibility_examples():
    assert check_admissible_z({2}, 4)
    assert not check_admissible_z({16}, 4)
    assert admissibility_witness_z({16}, 4) == (1, 2)
    assert check_admissible_z({1, 16}, 4)
    assert check_admissible_z(set(), 4)
    with pytest.raises(ValueError):
        check_admissible_z({2}, 3)


@given(st.sets(st.integers(1, 200), max_size=5), st.sampled_from([4, 6]))
def test_admissibility_matches_quantifiers(A, m):
    assert check_admissible_z(A, m) == admissible_by_quantifiers(A, m, box=12)


def test_construct_small_examples():
    Q = construct_small(2, 4)
    assert dict(Q.terms) == {(4, 0): QQ(1), (0, 4): QQ(2), (2, 2): QQ(2)}
    assert construct_small(1, 4).terms == (((4,), QQ(1)),)
    with pytest.raises(ValueError):
        construct_small(3, 4, delta=2)


@pytest.mark.parametrize("B", [1, 2, 3, 5])
def test_construct_small_against_brute_force(B):
    Q = construct_small(B, 4)
    seen = represented_by_brute_force(Q, B + 1)
    assert set(range(1, B + 1)) <= seen
    assert (B + 1 in seen) == (B + 1 == 16)


@pytest.mark.parametrize("t,B,y", [(10, 2, [2, 1, 0]), (9, 2, [3, 0, 0]), (3, 2, [1, 0, 0]), (6, 5, [1, 0, 0, 0, 0, 0])])
def test_frobenius_examples(t, B, y):
    assert frobenius_decompose(t, B) == y


@given(st.integers(1, 30), st.integers(0, 500))
def test_frobenius_property(B, extra):
    t = B + 1 + extra
    y = frobenius_decompose(t, B)
    assert len(y) == B + 1 and min(y) >= 0
    assert sum((B + 1 + j) * yj for j, yj in enumerate(y)) == t
    with pytest.raises(ValueError):
        frobenius_decompose(B, B)


def test_QB_shape():
    Q = construct_QB_z(2, 4)
    assert Q.rank == 57
    coefs = [Q.pure_coefficient(i).a for i in range(57)]
    assert sorted(set(coefs)) == [3, 4, 5] and all(coefs.count(c) == 19 for c in (3, 4, 5))
    assert sorted(represented_set(Q, 40)) == [0] + list(range(3, 41))


@pytest.mark.parametrize("A", [set(), {2}, {2, 3}, {1, 16}, {5, 7, 11}, {1, 2, 3, 16, 32, 48}])
def test_exclusion_forms(A):
    Q = construct_excluding_z(A, 4)
    assert Q.epd_certificate()
    if A:
        assert Q.rank < rank_bound_z(A, 4)
    else:
        assert Q.rank == 19
    assert represented_set(Q, 60) == set(range(61)) - A


def test_exclusion_rank_examples():
    assert construct_excluding_z({2}, 4).rank == 58
    with pytest.raises(InadmissibleSet) as err:
        construct_excluding_z({16}, 4)
    assert err.value.witness == (1, 2)


@st.composite
def admissible_sets(draw):
    A = draw(st.sets(st.integers(1, 40), max_size=4))
    # close under division by fourth powers so the set is admissible
    closed = set(A)
    for s in A:
        for b in (2, 3):
            if s % b**4 == 0:
                closed.add(s // b**4)
    return closed


@settings(max_examples=15)
@given(admissible_sets())
def test_exclusion_oracle_equivalence(A):
    Q = construct_excluding_z(A, 4)
    assert represented_set(Q, 60) == set(range(61)) - A
    # homogeneity: a represented a gives a * b^m represented
    vals = represented_set(Q, 60)
    for a in vals:
        if a and a * 16 <= 60:
            assert a * 16 in vals
