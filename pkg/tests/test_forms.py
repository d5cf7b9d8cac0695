from itertools import combinations
from math import comb

import pytest
from flint import fmpq, fmpq_mat
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperconf import linalg
from hyperconf.forms import FormRing, vandermonde_forms
from hyperconf.poset import Poset


@pytest.fixture(scope="module")
def ring13():
    return FormRing(Poset(1, 3))


@pytest.fixture(scope="module")
def ring24():
    return FormRing(Poset(2, 4))


def test_vandermonde_coefficients():
    forms = vandermonde_forms(1, 3)
    assert [f.coefficients for f in forms] == [(1, 1, 1), (1, 2, 4), (1, 3, 9)]


def test_vandermonde_minors_nonzero():
    forms = vandermonde_forms(2, 4)
    m = linalg.matrix([list(f.coefficients) for f in forms])
    for k in (3, 4):
        for rows in combinations(range(4), k):
            for cols in combinations(range(4), k):
                assert linalg.submatrix(m, rows, cols).det() != 0


def test_dimension_examples(ring13):
    p = ring13.poset
    assert ring13.space(p.stratum([1]), 2).dim == 3
    for s in p:
        assert ring13.space(s, 0).dim == 1
    for m in range(5):
        assert ring13.space(p.stratum([1, 2]), m).dim == 1


@pytest.mark.parametrize("n,d", [(1, 2), (1, 4), (2, 3), (2, 4), (3, 5)])
def test_hilbert_dimensions(n, d):
    ring = FormRing(Poset(n, d))
    for s in ring.poset:
        for m in range(5):
            assert ring.space(s, m).dim == comb(m + s.dim, s.dim)


def test_restriction_identity_and_rank(ring13):
    p = ring13.poset
    a, b = p.stratum([1]), p.stratum([1, 2])
    assert ring13.restrict(a, a, 2) == linalg.identity(3)
    r = ring13.restrict(a, b, 1)
    assert (r.nrows(), r.ncols()) == (1, 2) and linalg.rank(r) == 1
    with pytest.raises(ValueError):
        ring13.restrict(b, a, 1)


def test_restriction_surjective_and_transitive(ring24):
    p = ring24.poset
    for g in p:
        for b in p:
            if not b <= g:
                continue
            for m in range(4):
                r = ring24.restrict(g, b, m)
                assert linalg.rank(r) == r.nrows()
                for a in p:
                    if a <= b:
                        assert ring24.restrict(g, a, m) == ring24.restrict(b, a, m) * r


def test_points(ring13):
    p = ring13.poset
    # hand-solved: L1 = L2 = 0 with last coordinate 1; L1 = 0 with free coordinates (1, 2)
    assert ring13.point_on_stratum(p.stratum([1, 2])).lift == (2, -3, 1)
    assert ring13.point_on_stratum(p.stratum([1])).lift == (-3, 1, 2)
    for s in p:
        pt = ring13.point_on_stratum(s)
        assert ring13.lies_on(pt, s)
        assert any(pt.lift)
        for g in p:
            if g >= s:
                assert ring13.lies_on(pt, g)


def test_evaluate_constant_and_rejects_off_stratum(ring13):
    p = ring13.poset
    pt = ring13.point_on_stratum(p.stratum([1, 2]))
    assert ring13.evaluate(p.stratum([1]), 0, [1], pt) == 1
    with pytest.raises(ValueError):
        ring13.evaluate(p.stratum([3]), 0, [1], pt)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_evaluation_is_multiplicative(ring24, data):
    p = ring24.poset
    s = data.draw(st.sampled_from(p.elements))
    base = data.draw(st.sampled_from([b for b in p if b <= s]))
    pt = ring24.point_on_stratum(base)
    da = ring24.dim(s, 1)
    f = data.draw(st.lists(st.integers(-5, 5), min_size=da, max_size=da))
    g = data.draw(st.lists(st.integers(-5, 5), min_size=da, max_size=da))
    fg = ring24.multiply(s, 1, f, 1, g)
    assert ring24.evaluate(s, 2, fg, pt) == ring24.evaluate(s, 1, f, pt) * ring24.evaluate(s, 1, g, pt)


def test_normal_form_kills_defining_forms(ring24):
    p = ring24.poset
    for s in p:
        for i in s.indices:
            lf = ring24.ambient_poly(ring24.forms[i - 1].coefficients)
            assert ring24.normal_form(s, lf) == {}


def test_restriction_commutes_with_multiplication(ring24):
    p = ring24.poset
    g, a = p.stratum([1]), p.stratum([1, 2, 3])
    x = [fmpq(k + 1) for k in range(ring24.dim(g, 1))]
    y = [fmpq(2 * k - 1) for k in range(ring24.dim(g, 2))]
    lhs = ring24.restrict(g, a, 3) * linalg.column(ring24.multiply(g, 1, x, 2, y))
    rx = ring24.restrict(g, a, 1) * linalg.column(x)
    ry = ring24.restrict(g, a, 2) * linalg.column(y)
    rhs = ring24.multiply(a, 1, rx.entries(), 2, ry.entries())
    assert lhs.entries() == rhs
