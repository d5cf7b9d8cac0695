from itertools import product
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hyperconf.poset import Poset

types = st.tuples(st.integers(1, 3), st.integers(1, 5))


def test_small_examples():
    p = Poset(1, 3)
    assert len(p) == 6
    assert sorted(s.dim for s in p) == [0, 0, 0, 1, 1, 1]
    p = Poset(1, 2)
    assert [(s.indices, s.dim) for s in p] == [((1, 2), 0), ((1,), 1), ((2,), 1)]
    p = Poset(2, 4)
    assert [len(p.of_dim(k)) for k in (2, 1, 0)] == [4, 6, 4]


@pytest.mark.parametrize("n,d", [(0, 3), (1, 0), (-1, 2)])
def test_rejects_bad_types(n, d):
    with pytest.raises(ValueError):
        Poset(n, d)


def test_open_and_closed_stars():
    p = Poset(1, 3)
    assert {s.indices for s in p.down_set(p.stratum([1]))} == {(1,), (1, 2), (1, 3)}
    assert {s.indices for s in p.up_set(p.stratum([1, 2]))} == {(1, 2), (1,), (2,)}
    pairs = p.subset(p.of_dim(0))
    assert p.is_open(pairs)
    assert not p.is_open(p.subset([p.stratum([1])]))
    comp = p.complement(pairs)
    assert p.is_closed(comp) and set(comp.members) == set(p.maximal_strata())
    assert pairs.kind == "open" and comp.kind == "closed"
    assert p.subset([p.stratum([1]), p.stratum([2, 3])]).kind == "arbitrary"


@given(types)
def test_order_axioms_and_size(nd):
    n, d = nd
    p = Poset(n, d)
    assert len(p) == sum(comb(d, k) for k in range(1, min(d, n + 1) + 1))
    els = p.elements
    for a, b in product(els, repeat=2):
        if a <= b and b <= a:
            assert a == b
        if a < b:
            assert a.dim < b.dim
        assert (a <= b) == (set(a.indices) >= set(b.indices))
    for a, b, c in product(els, repeat=3):
        if a <= b <= c:
            assert a <= c


@given(types)
def test_stars_and_cover(nd):
    p = Poset(*nd)
    for a in p:
        u, z = p.down_set(a), p.up_set(a)
        assert p.is_open(u) and p.is_closed(z)
        assert set(u.members) & set(z.members) == {a}
    covered = set()
    for m in p.maximal_strata():
        covered |= set(p.down_set(m).members)
    assert covered == set(p.elements)
    for k in range(nd[0] + 1):
        assert p.is_closed(p.dim_at_least(k))


@given(types, st.data())
def test_open_complement_is_closed(nd, data):
    p = Poset(*nd)
    picks = data.draw(st.lists(st.sampled_from(p.elements), max_size=4))
    u = p.down_closure(picks)
    assert p.is_open(u)
    z = p.complement(u)
    assert p.is_closed(z)
    assert set(u.members) | set(z.members) == set(p.elements)


def test_enumeration_order_is_deterministic():
    p = Poset(2, 4)
    sizes = [len(s.indices) for s in p]
    assert sizes == sorted(sizes, reverse=True)
    assert p.elements[0].indices == (1, 2, 3)
