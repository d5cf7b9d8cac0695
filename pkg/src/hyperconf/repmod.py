"""Finite-dimensional right modules over the directed algebra.

Convention: a module ``M`` has a space ``M_v`` at each vertex, and a basis
element ``a: u -> w`` of the algebra acts by a matrix ``rho(a): M_w -> M_u``
of shape ``(dim M_u, dim M_w)``.  Then ``rho(b ∘ a) = rho(a) rho(b)``.

Maps out of a sum of projectives ``⊕_s P_{v_s}`` are stored in *Yoneda
layout*: one column vector per summand ``s``, the image of the idempotent
``e_{v_s}``, living in ``M_{v_s}``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from flint import fmpq, fmpq_mat

from . import linalg
from .endalgebra import Algebra
from .poset import PosetSubset


class ModuleError(ValueError):
    pass


class Representation:
    def __init__(self, alg: Algebra, dims, action: dict[int, fmpq_mat] | None = None, check: bool = False):
        self.alg = alg
        self.dims = list(dims)
        if len(self.dims) != alg.nvertices:
            raise ModuleError("one dimension per vertex required")
        self._action = dict(action or {})
        for v in range(alg.nvertices):
            if self.dims[v]:
                self._action.setdefault(alg.idempotent(v), linalg.identity(self.dims[v]))
        if check:
            self.check()

    def __repr__(self) -> str:
        return f"Representation(dims={self.dims})"

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    @property
    def offsets(self) -> list[int]:
        out, acc = [], 0
        for x in self.dims:
            out.append(acc)
            acc += x
        return out

    @property
    def support(self) -> list[int]:
        return [v for v, x in enumerate(self.dims) if x]

    def rho(self, k: int) -> fmpq_mat:
        t = self.alg.basis[k]
        m = self._action.get(k)
        if m is None:
            return fmpq_mat(self.dims[t.src], self.dims[t.dst])
        return m

    def act(self, elem, u: int, w: int) -> fmpq_mat:
        """Action of ``elem ∈ Hom(u, w)`` (coordinate vector) as ``M_w -> M_u``."""
        out = fmpq_mat(self.dims[u], self.dims[w])
        if not out.nrows() or not out.ncols():
            return out
        for k, c in zip(self.alg.hom(u, w), elem):
            if c:
                out += self.rho(k) * c
        return out

    def violations(self) -> list[str]:
        bad = []
        alg = self.alg
        for k, m in self._action.items():
            t = alg.basis[k]
            if (m.nrows(), m.ncols()) != (self.dims[t.src], self.dims[t.dst]):
                bad.append(f"basis element {k} has wrong shape")
        for v in range(alg.nvertices):
            if self.dims[v] and self.rho(alg.idempotent(v)) != linalg.identity(self.dims[v]):
                bad.append(f"idempotent at vertex {v} does not act as identity")
        for (i, j), terms in alg.mult.items():
            ti, tj = alg.basis[i], alg.basis[j]
            if not (self.dims[tj.src] and self.dims[ti.dst]):
                continue
            lhs = fmpq_mat(self.dims[tj.src], self.dims[ti.dst])
            for r, c in terms:
                lhs += self.rho(r) * c
            if lhs != self.rho(j) * self.rho(i):
                bad.append(f"rho(b{i}∘b{j}) != rho(b{j}) rho(b{i})")
                if len(bad) > 20:
                    break
        return bad

    def check(self) -> None:
        bad = self.violations()
        if bad:
            raise ModuleError("; ".join(bad[:5]))

    def vertex_basis_labels(self) -> list[tuple[int, int]]:
        return [(v, i) for v, x in enumerate(self.dims) for i in range(x)]


@dataclass
class RepMorphism:
    source: Representation
    target: Representation
    maps: list[fmpq_mat]

    def is_valid(self) -> bool:
        alg = self.source.alg
        for v in range(alg.nvertices):
            if (self.maps[v].nrows(), self.maps[v].ncols()) != (self.target.dims[v], self.source.dims[v]):
                return False
        for k in alg.arrows:
            t = alg.basis[k]
            lhs = self.maps[t.src] * self.source.rho(k)
            rhs = self.target.rho(k) * self.maps[t.dst]
            if lhs != rhs:
                return False
        return True

    def compose(self, other: "RepMorphism") -> "RepMorphism":
        """``self ∘ other``."""
        return RepMorphism(other.source, self.target, [a * b for a, b in zip(self.maps, other.maps)])

    def is_zero(self) -> bool:
        return all(linalg.is_zero(m) for m in self.maps)


def zero_map(m: Representation, n: Representation) -> RepMorphism:
    return RepMorphism(m, n, [fmpq_mat(b, a) for a, b in zip(m.dims, n.dims)])


def identity_map(m: Representation) -> RepMorphism:
    return RepMorphism(m, m, [linalg.identity(x) for x in m.dims])


def zero_module(alg: Algebra) -> Representation:
    return Representation(alg, [0] * alg.nvertices)


# --- standard modules ------------------------------------------------------

def projective(alg: Algebra, v: int) -> Representation:
    """``P_v`` with ``(P_v)_w = Hom(w, v)``; the algebra acts by precomposition."""
    dims = [alg.hom_dim(w, v) for w in range(alg.nvertices)]
    action = {}
    for k, t in enumerate(alg.basis):
        if dims[t.src] and dims[t.dst]:
            action[k] = alg.right_matrix(k, v)
    return Representation(alg, dims, action)


def simple(alg: Algebra, v: int) -> Representation:
    dims = [0] * alg.nvertices
    dims[v] = 1
    return Representation(alg, dims)


def direct_sum(mods: list[Representation], alg: Algebra | None = None) -> Representation:
    if not mods:
        if alg is None:
            raise ModuleError("empty direct sum needs the algebra")
        return zero_module(alg)
    alg = mods[0].alg
    dims = [sum(m.dims[v] for m in mods) for v in range(alg.nvertices)]
    keys = set()
    for m in mods:
        keys.update(m._action)
    action = {}
    for k in keys:
        t = alg.basis[k]
        if dims[t.src] and dims[t.dst]:
            action[k] = linalg.block_diag([m.rho(k) for m in mods])
    return Representation(alg, dims, action)


def proj_sum(alg: Algebra, vertices: list[int]) -> Representation:
    return direct_sum([projective(alg, v) for v in vertices], alg)


def sum_offsets(alg: Algebra, vertices: list[int], u: int) -> list[int]:
    """Offsets of each summand inside ``(⊕_s P_{v_s})_u``."""
    out, acc = [], 0
    for v in vertices:
        out.append(acc)
        acc += alg.hom_dim(u, v)
    return out


# --- Yoneda --------------------------------------------------------------

def yoneda_realize(alg: Algebra, vertices: list[int], gens: list[fmpq_mat], target: Representation) -> RepMorphism:
    """Realize the map ``⊕_s P_{v_s} -> target`` sending ``e_{v_s}`` to ``gens[s]``."""
    source = proj_sum(alg, vertices)
    maps = []
    for u in range(alg.nvertices):
        blocks = []
        for v, g in zip(vertices, gens):
            cols = [target.rho(x) * g for x in alg.hom(u, v)]
            blocks.append(linalg.hstack(cols, nrows=target.dims[u]) if cols else fmpq_mat(target.dims[u], 0))
        maps.append(linalg.hstack(blocks, nrows=target.dims[u]))
    return RepMorphism(source, target, maps)


def yoneda_map(m: Representation, v: int, vec) -> RepMorphism:
    """The morphism ``P_v -> M`` corresponding to ``vec ∈ M_v``."""
    g = vec if isinstance(vec, fmpq_mat) else linalg.column(vec)
    return yoneda_realize(m.alg, [v], [g], m)


def yoneda_basis(m: Representation, v: int) -> list[RepMorphism]:
    """Natural basis of ``Hom(P_v, M)``, in bijection with the standard basis of ``M_v``."""
    eye = linalg.identity(m.dims[v])
    return [yoneda_map(m, v, linalg.col(eye, i)) for i in range(m.dims[v])]


# --- homs, kernels, cokernels ---------------------------------------------

def hom_space(m: Representation, n: Representation) -> list[RepMorphism]:
    """Basis of ``Hom_A(M, N)`` by solving the intertwining equations on the arrows."""
    alg = m.alg
    V = alg.nvertices
    offs, acc = [], 0
    for v in range(V):
        offs.append(acc)
        acc += n.dims[v] * m.dims[v]
    rows: list[list] = []
    for k in alg.arrows:
        t = alg.basis[k]
        u, w = t.src, t.dst
        if not (n.dims[u] and m.dims[w]):
            continue
        rm, rn = m.rho(k), n.rho(k)
        # f_u rho_M(a) - rho_N(a) f_w = 0, entry (r, c)
        for r in range(n.dims[u]):
            for c in range(m.dims[w]):
                row = [fmpq(0)] * acc
                for q in range(m.dims[u]):
                    x = rm[q, c]
                    if x:
                        row[offs[u] + r * m.dims[u] + q] += x
                for q in range(n.dims[w]):
                    x = rn[r, q]
                    if x:
                        row[offs[w] + q * m.dims[w] + c] -= x
                rows.append(row)
    eqs = linalg.matrix(rows, ncols=acc) if rows else fmpq_mat(0, acc)
    ker = linalg.nullspace(eqs)
    out = []
    for j in range(ker.ncols()):
        maps = []
        for v in range(V):
            a, b = n.dims[v], m.dims[v]
            maps.append(fmpq_mat(a, b, [ker[offs[v] + i, j] for i in range(a * b)]))
        out.append(RepMorphism(m, n, maps))
    return out


def hom_dim(m: Representation, n: Representation) -> int:
    return len(hom_space(m, n))


def submodule(m: Representation, subspaces: list[fmpq_mat]) -> tuple[Representation, RepMorphism]:
    """Submodule spanned vertexwise by the (full column rank) ``subspaces``; raises if not stable."""
    alg = m.alg
    dims = [s.ncols() for s in subspaces]
    lefts = [linalg.left_inverse(s) for s in subspaces]
    action = {}
    for k, mat in m._action.items():
        t = alg.basis[k]
        if not (dims[t.src] and dims[t.dst]):
            continue
        img = mat * subspaces[t.dst]
        coords = lefts[t.src] * img
        if subspaces[t.src] * coords != img:
            raise ModuleError("subspaces are not stable under the action")
        action[k] = coords
    sub = Representation(alg, dims, action)
    return sub, RepMorphism(sub, m, list(subspaces))


def quotient(m: Representation, subspaces: list[fmpq_mat]) -> tuple[Representation, RepMorphism]:
    """``M / N`` for a submodule given vertexwise; returns the quotient and the projection."""
    alg = m.alg
    projs, sections = [], []
    for v in range(alg.nvertices):
        s = subspaces[v]
        sub_basis = _colspace(s)
        eye = linalg.identity(m.dims[v])
        comp = linalg.complement_columns(sub_basis, eye)
        sec = linalg.submatrix(eye, range(m.dims[v]), comp)
        full = linalg.hstack([sub_basis, sec], nrows=m.dims[v])
        if full.nrows():
            inv = full.inv()
            proj = linalg.submatrix(inv, range(sub_basis.ncols(), m.dims[v]), range(m.dims[v]))
        else:
            proj = fmpq_mat(0, 0)
        projs.append(proj)
        sections.append(sec)
    dims = [p.nrows() for p in projs]
    action = {}
    for k, mat in m._action.items():
        t = alg.basis[k]
        if dims[t.src] and dims[t.dst]:
            action[k] = projs[t.src] * mat * sections[t.dst]
    q = Representation(alg, dims, action)
    return q, RepMorphism(m, q, projs)


def _colspace(mat: fmpq_mat) -> fmpq_mat:
    piv = linalg.rref(mat)[1]
    return linalg.submatrix(mat, range(mat.nrows()), piv)


def kernel(f: RepMorphism) -> tuple[Representation, RepMorphism]:
    return submodule(f.source, [linalg.nullspace(x) for x in f.maps])


def image(f: RepMorphism) -> tuple[Representation, RepMorphism]:
    return submodule(f.target, [_colspace(x) for x in f.maps])


def cokernel(f: RepMorphism) -> tuple[Representation, RepMorphism]:
    return quotient(f.target, [_colspace(x) for x in f.maps])


def is_injective(f: RepMorphism) -> bool:
    return all(linalg.rank(x) == x.ncols() for x in f.maps)


def is_surjective(f: RepMorphism) -> bool:
    return all(linalg.rank(x) == x.nrows() for x in f.maps)


def is_isomorphic(m: Representation, n: Representation) -> bool:
    """Exact isomorphism test: ``M ≅ N`` iff some morphism is invertible (checked on a generic combination)."""
    if m.dims != n.dims:
        return False
    basis = hom_space(m, n)
    if not basis:
        return m.total_dim == 0
    rng = random.Random(0)
    for _ in range(4):
        coeffs = [rng.randint(-50, 50) for _ in basis]
        ok = True
        for v in range(m.alg.nvertices):
            mat = fmpq_mat(n.dims[v], m.dims[v])
            for c, f in zip(coeffs, basis):
                mat += f.maps[v] * c
            if linalg.rank(mat) != m.dims[v]:
                ok = False
                break
        if ok:
            return True
    return False


# --- radical, tops, resolutions -------------------------------------------

def radical_spaces(m: Representation) -> list[fmpq_mat]:
    """``(M · rad A)_v`` for every vertex."""
    alg = m.alg
    out = []
    for v in range(alg.nvertices):
        imgs = [m.rho(k) for k in alg.arrows if alg.basis[k].src == v and m.dims[alg.basis[k].dst]]
        span = linalg.hstack(imgs, nrows=m.dims[v]) if imgs else fmpq_mat(m.dims[v], 0)
        out.append(_colspace(span) if span.ncols() else span)
    return out


def top_generators(m: Representation) -> tuple[list[int], list[fmpq_mat]]:
    """Vertices and vectors of a minimal generating set (lifts of a basis of the top)."""
    verts, gens = [], []
    for v, rad in enumerate(radical_spaces(m)):
        if not m.dims[v]:
            continue
        eye = linalg.identity(m.dims[v])
        for j in linalg.complement_columns(rad, eye):
            verts.append(v)
            gens.append(linalg.col(eye, j))
    return verts, gens


def top_dims(m: Representation) -> list[int]:
    return [m.dims[v] - r.ncols() for v, r in enumerate(radical_spaces(m))]


@dataclass
class ProjResolution:
    """``... -> P^1 -> P^0 -> M -> 0``.

    ``terms[k]`` lists the vertices of ``P^k``; ``diffs[k]`` (``k >= 1``) are the
    Yoneda columns of ``P^k -> P^{k-1}``; ``augmentation`` the columns of
    ``P^0 -> M``.
    """

    module: Representation
    terms: list[list[int]] = field(default_factory=list)
    diffs: list[list[fmpq_mat]] = field(default_factory=list)
    augmentation: list[fmpq_mat] = field(default_factory=list)

    @property
    def length(self) -> int:
        return len(self.terms) - 1 if self.terms and self.terms[-1] else max(len(self.terms) - 1, 0)

    def multiplicities(self) -> list[dict[int, int]]:
        out = []
        for t in self.terms:
            c: dict[int, int] = {}
            for v in t:
                c[v] = c.get(v, 0) + 1
            out.append(c)
        return out


def min_proj_resolution(m: Representation, max_len: int | None = None) -> ProjResolution:
    alg = m.alg
    limit = max_len if max_len is not None else alg.nvertices + 1
    res = ProjResolution(m, diffs=[[]])
    current = m
    embed: RepMorphism | None = None  # current -> previous projective
    while current.total_dim:
        if len(res.terms) > limit:
            raise ModuleError(f"resolution longer than {limit}: directedness violated?")
        verts, gens = top_generators(current)
        cover = yoneda_realize(alg, verts, gens, current)
        if not is_surjective(cover):
            raise ModuleError("top generators do not generate")
        if embed is None:
            res.augmentation = gens
        else:
            res.diffs.append([embed.maps[v] * g for v, g in zip(verts, gens)])
        res.terms.append(verts)
        current, embed = kernel(cover)
    if not res.terms:
        res.terms.append([])
    return res


def ext_dims(m: Representation, n: Representation, res: ProjResolution | None = None) -> dict[int, int]:
    """``dim Ext^k_A(M, N)`` via ``Hom(P_•(M), N)``; zero degrees omitted."""
    res = res or min_proj_resolution(m)
    alg = m.alg
    dims = {k: sum(n.dims[v] for v in t) for k, t in enumerate(res.terms)}
    ranks = {}
    for k in range(len(res.terms) - 1):
        # Hom(P^k, N) -> Hom(P^{k+1}, N): f -> f ∘ d
        src, dst = res.terms[k], res.terms[k + 1]
        mat = yoneda_pullback(alg, n, src, dst, res.diffs[k + 1])
        ranks[k] = linalg.rank(mat)
    return linalg.cohomology_dims(dims, ranks)


def yoneda_pullback(alg: Algebra, n: Representation, src: list[int], dst: list[int],
                    columns: list[fmpq_mat]) -> fmpq_mat:
    """Matrix of ``f -> f ∘ d`` from ``⊕_{t∈src} N_{v_t}`` to ``⊕_{s∈dst} N_{v_s}``
    where ``d: ⊕_{dst} P -> ⊕_{src} P`` has the given Yoneda columns."""
    rows = sum(n.dims[v] for v in dst)
    cols = sum(n.dims[v] for v in src)
    out = fmpq_mat(rows, cols)
    ro = 0
    for s, vs in enumerate(dst):
        offs = sum_offsets(alg, src, vs)
        co = 0
        for t, vt in enumerate(src):
            h = alg.hom_dim(vs, vt)
            if h and n.dims[vs] and n.dims[vt]:
                elem = [columns[s][offs[t] + i, 0] for i in range(h)]
                block = n.act(elem, vs, vt)
                for i, row in enumerate(block.tolist()):
                    for j, x in enumerate(row):
                        if x:
                            out[ro + i, co + j] = x
            co += n.dims[vt]
        ro += n.dims[vs]
    return out


# --- support ---------------------------------------------------------------

def vertices_over(alg: Algebra, subset) -> list[int]:
    members = subset.members if isinstance(subset, PosetSubset) else set(subset)
    return [v for v, x in enumerate(alg.vertices) if x.stratum in members]


def restrict_support(m: Representation, u: PosetSubset) -> tuple[Representation, Representation]:
    """``(M_U, M_Z)``: the part over the open set ``U`` and the quotient over ``Z = S - U``."""
    sub, quot, _, _ = support_sequence(m, u)
    return sub, quot


def support_sequence(m: Representation, u: PosetSubset):
    """``0 -> M_U -> M -> M_Z -> 0`` with its two maps."""
    if not u.poset.is_open(u):
        raise ModuleError("support restriction needs an open subset")
    over = set(vertices_over(m.alg, u))
    spaces = [linalg.identity(x) if v in over else fmpq_mat(x, 0) for v, x in enumerate(m.dims)]
    sub, inc = submodule(m, spaces)
    quot, proj = quotient(m, spaces)
    return sub, quot, inc, proj


def is_supported_on(m: Representation, subset) -> bool:
    over = set(vertices_over(m.alg, subset))
    return all(v in over for v in m.support)


# --- random modules ----------------------------------------------------------

def random_module(alg: Algebra, rng: random.Random, vertices: list[int] | None = None,
                  max_gens: int = 3, max_rels: int = 3, coeff: int = 3) -> Representation:
    """Cokernel of a random map between sums of projectives at the given vertices."""
    pool = list(range(alg.nvertices)) if vertices is None else list(vertices)
    gens = [rng.choice(pool) for _ in range(rng.randint(1, max_gens))]
    rels = [rng.choice(pool) for _ in range(rng.randint(0, max_rels))]
    target = proj_sum(alg, gens)
    cols = []
    for v in rels:
        vec = [fmpq(rng.randint(-coeff, coeff)) for _ in range(target.dims[v])]
        cols.append(linalg.column(vec) if vec else fmpq_mat(0, 1))
    f = yoneda_realize(alg, rels, cols, target)
    return cokernel(f)[0]
