import pytest
from flint import fmpq

from hyperconf import cache
from hyperconf.endalgebra import Algebra, AlgebraError, build_algebra, combinatorial_dim
from hyperconf.poset import Poset

from conftest import algebra


def test_sizes_13(a13):
    assert a13.dim == 27
    assert a13.nvertices == 9
    idem = 9
    internal = 3 * 2
    pair_to_single = 12
    assert a13.dim == idem + internal + pair_to_single


@pytest.mark.parametrize("n,d", [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (2, 1), (3, 2)])
def test_dimension_equals_sum(n, d):
    alg = algebra(n, d)
    assert alg.dim == combinatorial_dim(n, d)
    assert alg.validate().passed


def test_hom_dims(a13):
    p = a13.poset
    v = a13.vertex(p.stratum([1]), 0)
    w = a13.vertex(p.stratum([1]), 1)
    x = a13.vertex(p.stratum([2]), 1)
    assert a13.hom_dim(v, w) == 2
    assert a13.hom_dim(v, x) == 0
    for u in range(a13.nvertices):
        assert a13.hom_dim(u, u) == 1
    assert len(a13.basis_of_hom(v, w)) == 2


def test_exhaustive_hom_rule(a24):
    for u in range(a24.nvertices):
        for w in range(a24.nvertices):
            assert a24.hom_dim(u, w) == a24.expected_hom_dim(u, w)


def test_vertex_order_is_linear_extension(a24):
    for u, x in enumerate(a24.vertices):
        for w, y in enumerate(a24.vertices):
            if x < y:
                assert u < w


def test_radical_nilpotent(a13):
    # products of radical basis elements along any chain die after #vertices - 1 steps
    layer = {k: {k: fmpq(1)} for k in a13.radical_basis}
    for _ in range(a13.nvertices):
        nxt = {}
        for k, vec in layer.items():
            for r in a13.radical_basis:
                for b, c in vec.items():
                    for out, val in a13.product(r, b).items():
                        nxt.setdefault((k, r), {})
                        nxt[(k, r)][out] = nxt[(k, r)].get(out, 0) + c * val
        layer = {key: v for key, v in nxt.items() if any(v.values())}
    assert not layer


def test_validate_report_passes(a12):
    rep = a12.validate().as_dict()
    assert rep["passed"] and set(rep["checks"]) == {"dimension", "idempotents", "directedness", "associativity"}


def test_tampered_unit_is_reported(a13):
    data = a13.to_data()
    for entry in data["structure_constants"]:
        i, j = entry[0], entry[1]
        if a13.basis[i].src == a13.basis[i].dst and a13.basis[j].src != a13.basis[j].dst:
            entry[3] = "2"
            break
    rep = Algebra.from_data(data).validate()
    assert not rep.checks["idempotents"] and not rep.passed


def test_tampered_product_breaks_associativity(a24):
    # (2,4) has chains of three non-identity arrows, so a bumped coefficient is visible
    data = a24.to_data()
    for entry in data["structure_constants"]:
        i, j = entry[0], entry[1]
        if a24.basis[i].src != a24.basis[i].dst and a24.basis[j].src != a24.basis[j].dst:
            entry[3] = str(fmpq(entry[3]) + 1)
            break
    rep = Algebra.from_data(data).validate()
    assert not rep.checks["associativity"] and not rep.passed


def test_tampered_cache_rejected(a13, tmp_path):
    data = a13.to_data()
    data["structure_constants"][0][3] = "5"
    import json

    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"schema_version": cache.SCHEMA_VERSION, **data}))
    with pytest.raises(AlgebraError):
        cache.load(path)
    assert not cache.load(path, validate=False).validate().passed


def test_cache_roundtrip_identical(a24):
    text = cache.dumps(a24)
    again = cache.loads(text)
    assert cache.dumps(again) == text
    assert again.mult == a24.mult
    assert cache.dumps(build_algebra(Poset(2, 4))) == text


def test_cache_version_mismatch(a12):
    import json

    data = json.loads(cache.dumps(a12))
    data["schema_version"] = 99
    with pytest.raises(cache.CacheError):
        cache.loads(json.dumps(data))


def test_corner_algebra(a13):
    p = a13.poset
    ids = [a13.vertex(p.stratum([1]), i) for i in range(2)]
    sub, vmap = a13.corner(ids)
    assert sub.nvertices == 2 and sub.dim == 1 + 1 + 2
    assert sub.validate().passed


def test_arrows_generate_radical(a24):
    # every radical basis element lies in the span of products of arrows
    from hyperconf import linalg

    arrows = set(a24.arrows)
    for (u, w), ks in a24._homs.items():
        if u == w:
            continue
        vecs = [[fmpq(1) if k == j else fmpq(0) for k in ks] for j in ks if j in arrows]
        for v in range(u + 1, w):
            for i in a24.hom(v, w):
                for j in a24.hom(u, v):
                    prod = a24.product(i, j)
                    vecs.append([prod.get(k, fmpq(0)) for k in ks])
        m = linalg.matrix([list(r) for r in zip(*vecs)])
        assert linalg.rank(m) == len(ks)
