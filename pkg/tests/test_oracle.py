from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hyperconf import linalg
from hyperconf.oracle import (
    CohomologyTable,
    bott,
    euler_characteristic_of_faces,
    sheaf_ext_formula,
    simplicial_boundary_homology,
    x0_complex,
    x0_cohomology,
)
from hyperconf.objects import parse_spec
from hyperconf.poset import Poset


def _hilbert_poly_hypersurface(n, d, t):
    """χ(O_X(t)) for a degree-d hypersurface X in P^{n+1}: P(t) - P(t-d)."""
    def p(m):
        num = 1
        for i in range(1, n + 2):
            num *= m + i
        return Fraction(num, factorial(n + 1))
    return p(t) - p(t - d)


def test_bott_examples():
    assert bott(1, 1) == {0: 2}
    assert bott(1, -1) == {}
    assert bott(1, -2) == {1: 1}
    assert bott(2, -3) == {2: 1}
    assert bott(0, -5) == {0: 1}
    assert bott(0, 0) == {0: 1}
    with pytest.raises(ValueError):
        bott(-1, 0)


@given(st.integers(0, 5), st.integers(-12, 12))
def test_bott_serre_duality(k, j):
    assert bott(k, j)[0] == bott(k, -j - k - 1)[k]


@pytest.mark.parametrize("n,d,t,want", [
    (1, 2, 0, {0: 1}),
    (1, 3, 0, {0: 1, 1: 1}),
    (1, 3, 1, {0: 3}),
    (1, 4, 1, {0: 3, 1: 1}),
    (2, 4, 0, {0: 1, 2: 1}),
])
def test_union_cohomology_examples(n, d, t, want):
    assert x0_cohomology(n, d, t) == want


@pytest.mark.parametrize("n,d", [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 5)])
def test_union_euler_characteristic_matches_hypersurface(n, d):
    for t in range(4):
        table = x0_cohomology(n, d, t).as_dict()
        chi = sum((-1) ** k * v for k, v in table.items())
        assert chi == _hilbert_poly_hypersurface(n, d, t)


def test_union_complex_squares_to_zero():
    dims, diffs = x0_complex(2, 4, 2)
    for p, m in diffs.items():
        if p + 1 in diffs:
            assert linalg.is_zero(diffs[p + 1] * m)
    with pytest.raises(ValueError):
        x0_complex(1, 3, -1)


def test_simplicial_homology():
    assert simplicial_boundary_homology(1) == {0: 1, 1: 1}
    assert simplicial_boundary_homology(2) == {0: 1, 2: 1}
    assert simplicial_boundary_homology(4) == {0: 1, 4: 1}
    for n in range(1, 6):
        assert euler_characteristic_of_faces(n) == 1 + (-1) ** n


def test_cohomology_table_behaviour():
    t = CohomologyTable.of({0: 1, 2: 0, 3: 4})
    assert t.as_dict() == {0: 1, 3: 4}
    assert t[3] == 4 and t[1] == 0
    assert t.max_degree == 3
    assert t.vector(0, 3) == [1, 0, 0, 4]
    assert t.to_json() == {"0": 1, "3": 4}
    assert CohomologyTable().max_degree is None
    with pytest.raises(ValueError):
        CohomologyTable.of({0: -1})


def test_sheaf_formula_examples():
    p = Poset(1, 3)
    s1, s12 = p.stratum([1]), p.stratum([1, 2])
    assert sheaf_ext_formula(p, s1, 0, parse_spec("OU(1;2)")) == {0: 3}
    assert sheaf_ext_formula(p, s1, 1, parse_spec("OU(1;-1)")) == {1: 1}
    assert sheaf_ext_formula(p, s1, 0, parse_spec("OU(2;0)")) == {}
    assert sheaf_ext_formula(p, s12, 0, parse_spec("OU(1;-3)")) == {0: 1}
    assert sheaf_ext_formula(p, s12, 0, parse_spec("sky*(1)")) == {}
    assert sheaf_ext_formula(p, s1, 1, parse_spec("sky*(1,2)")) == {0: 1}
    assert sheaf_ext_formula(p, s1, 0, parse_spec("sky!(1,2)")) == {}
    with pytest.raises(ValueError):
        sheaf_ext_formula(p, s1, 0, parse_spec("T(O(0))"))
    with pytest.raises(ValueError):
        sheaf_ext_formula(p, s1, 0, parse_spec("sky*(1@2,3)"))
