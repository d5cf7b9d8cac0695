import random

import pytest
from flint import fmpq, fmpq_mat
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperconf import linalg
from hyperconf import repmod as rm


def _v(alg, idx, t):
    return alg.vertex(alg.poset.stratum(idx), t)


def _first_order_ext(alg, a, b):
    """dim Ext^1(S_a, S_b) by counting two-point extensions.

    A module with one-dimensional spaces at ``a`` and ``b`` is fixed by a scalar
    for each basis element of ``Hom(b, a)``; those scalars must kill every
    element that factors through a third vertex.  No coboundaries exist.
    """
    ks = alg.hom(b, a)
    if a == b or not ks:
        return 0
    products = []
    for v in range(alg.nvertices):
        if v in (a, b):
            continue
        for i in alg.hom(v, a):
            for j in alg.hom(b, v):
                prod = alg.product(i, j)
                products.append([prod.get(k, fmpq(0)) for k in ks])
    if not products:
        return len(ks)
    return len(ks) - linalg.rank(linalg.matrix(products))


def test_projective_shape(a13):
    v = _v(a13, [1], 1)
    p = rm.projective(a13, v)
    p.check()
    assert p.total_dim == 5
    expect = {v: 1, _v(a13, [1], 0): 2, _v(a13, [1, 2], 0): 1, _v(a13, [1, 3], 0): 1}
    assert {u: x for u, x in enumerate(p.dims) if x} == expect


def test_pair_projective_is_simple(a13):
    v = _v(a13, [1, 2], 0)
    assert rm.is_isomorphic(rm.projective(a13, v), rm.simple(a13, v))


def test_hom_from_projective_to_simple(a13):
    for v in range(a13.nvertices):
        p = rm.projective(a13, v)
        for w in range(a13.nvertices):
            assert rm.hom_dim(p, rm.simple(a13, w)) == (1 if v == w else 0)


def test_hom_between_projectives(a13):
    p0 = rm.projective(a13, _v(a13, [1], 0))
    p1 = rm.projective(a13, _v(a13, [1], 1))
    assert rm.hom_dim(p0, p1) == 2
    assert rm.hom_dim(p1, p0) == 0


def test_hom_projective_equals_vertex_space(a24):
    rng = random.Random(3)
    for _ in range(6):
        m = rm.random_module(a24, rng)
        for v in rng.sample(range(a24.nvertices), 4):
            assert rm.hom_dim(rm.projective(a24, v), m) == m.dims[v]
            assert len(rm.yoneda_basis(m, v)) == m.dims[v]
            assert all(f.is_valid() for f in rm.yoneda_basis(m, v))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_random_modules_are_modules(a13, seed):
    m = rm.random_module(a13, random.Random(seed))
    assert not m.violations()
    ker, inc = rm.kernel(rm.identity_map(m))
    assert ker.total_dim == 0
    q, proj = rm.cokernel(rm.zero_map(rm.zero_module(a13), m))
    assert rm.is_isomorphic(q, m)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10_000))
def test_kernel_image_cokernel_dimensions(a13, seed):
    rng = random.Random(seed)
    m = rm.random_module(a13, rng)
    n = rm.random_module(a13, rng)
    homs = rm.hom_space(m, n)
    if not homs:
        return
    f = homs[rng.randrange(len(homs))]
    ker, _ = rm.kernel(f)
    img, _ = rm.image(f)
    cok, _ = rm.cokernel(f)
    for v in range(a13.nvertices):
        assert ker.dims[v] + img.dims[v] == m.dims[v]
        assert img.dims[v] + cok.dims[v] == n.dims[v]


def test_simple_resolutions_bounded(a24):
    for v in range(a24.nvertices):
        res = rm.min_proj_resolution(rm.simple(a24, v))
        assert res.length <= 2 * a24.n


def test_ext_from_projective(a13):
    rng = random.Random(11)
    m = rm.random_module(a13, rng)
    for v in range(a13.nvertices):
        assert rm.ext_dims(rm.projective(a13, v), m) == ({0: m.dims[v]} if m.dims[v] else {})


def test_ext_one_between_simples(a13):
    a, b = _v(a13, [1], 1), _v(a13, [1], 0)
    assert rm.ext_dims(rm.simple(a13, a), rm.simple(a13, b)).get(1, 0) == 2
    assert rm.ext_dims(rm.simple(a13, b), rm.simple(a13, a)).get(1, 0) == 0


@pytest.mark.parametrize("fixture", ["a13", "a24"])
def test_ext_one_matches_extension_count(fixture, request):
    alg = request.getfixturevalue(fixture)
    total = 0
    for a in range(alg.nvertices):
        sa = rm.simple(alg, a)
        res = rm.min_proj_resolution(sa)
        for b in range(alg.nvertices):
            got = rm.ext_dims(sa, rm.simple(alg, b), res).get(1, 0)
            assert got == _first_order_ext(alg, a, b)
            total += got
    assert total == len(alg.arrows)


def test_restrict_support_example(a13):
    p = rm.projective(a13, _v(a13, [1], 1))
    u = a13.poset.down_closure([a13.poset.stratum([1, 2])])
    sub, quot = rm.restrict_support(p, u)
    assert (sub.total_dim, quot.total_dim) == (1, 4)
    u2 = a13.poset.down_closure([a13.poset.stratum([1, 2]), a13.poset.stratum([1, 3])])
    sub, quot = rm.restrict_support(p, u2)
    assert (sub.total_dim, quot.total_dim) == (2, 3)
    assert rm.is_supported_on(sub, u2)


def test_restrict_support_needs_open(a13):
    closed = a13.poset.up_set(a13.poset.stratum([1, 2]))
    with pytest.raises(rm.ModuleError):
        rm.restrict_support(rm.simple(a13, 0), closed)


def test_support_semiorthogonality(a13):
    # modules over an open set have no maps to modules supported on its complement
    rng = random.Random(5)
    p = a13.poset
    u = p.down_closure([p.stratum([1, 2]), p.stratum([2, 3])])
    inside = rm.vertices_over(a13, u)
    outside = rm.vertices_over(a13, p.complement(u))
    for _ in range(4):
        mz = rm.random_module(a13, rng, vertices=outside)
        mu = rm.random_module(a13, rng, vertices=inside)
        assert rm.is_supported_on(mu, u)
        assert rm.ext_dims(mz, mu) == {}


def test_yoneda_map_onto_simple(a13):
    v = _v(a13, [1], 1)
    s = rm.simple(a13, v)
    f = rm.yoneda_map(s, v, [fmpq(1)])
    assert f.is_valid() and rm.is_surjective(f)
    assert rm.kernel(f)[0].total_dim == 4
