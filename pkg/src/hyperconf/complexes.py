"""Bounded complexes over the algebra: projective complexes, module complexes,
Hom complexes, cones, lifting through quasi-isomorphisms, twists, pairings.

Conventions
-----------
* ``Hom^k(X, Y) = ⊕_i Hom(X^i, Y^{i+k})`` and ``δf = d_Y f - (-1)^k f d_X``.
* ``Cone(f: X -> Y)^m = Y^m ⊕ X^{m+1}`` with differential ``[[d_Y, f], [0, -d_X]]``.
* ``X[k]^m = X^{m+k}`` with differential ``(-1)^k d_X``.

A degree-k map out of a projective complex ``X`` is stored in Yoneda layout:
for every summand ``s`` of ``X^i`` (a projective ``P_{v_s}``) one column vector
in ``(Y^{i+k})_{v_s}``.  Projective differentials are stored the same way.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from flint import fmpq, fmpq_mat

from . import linalg
from . import repmod as rm
from .endalgebra import Algebra
from .repmod import Representation, RepMorphism


class ComplexError(ValueError):
    pass


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def _zero_col(n: int) -> fmpq_mat:
    return fmpq_mat(n, 1)


class _Buffer:
    """Dense row-major scratch matrix for block assembly."""

    def __init__(self, r: int, c: int):
        self.r, self.c = r, c
        self.data = [fmpq(0)] * (r * c)

    def paste(self, r0: int, c0: int, mat: fmpq_mat, scale: int = 1) -> None:
        c = self.c
        for i, row in enumerate(mat.tolist()):
            base = (r0 + i) * c + c0
            for j, x in enumerate(row):
                if x:
                    self.data[base + j] += x * scale

    def set_col(self, c0: int, r0: int, vec: fmpq_mat, scale: int = 1) -> None:
        for i, x in enumerate(vec.entries()):
            if x:
                self.data[(r0 + i) * self.c + c0] += x * scale

    def matrix(self) -> fmpq_mat:
        return fmpq_mat(self.r, self.c, self.data)


# --- complexes -------------------------------------------------------------

class _ComplexBase:
    alg: Algebra

    def module(self, j: int) -> Representation:
        raise NotImplementedError

    def dmap(self, j: int) -> RepMorphism:
        raise NotImplementedError

    @property
    def degrees(self) -> list[int]:
        raise NotImplementedError

    @property
    def lo(self) -> int:
        return min(self.degrees) if self.degrees else 0

    @property
    def hi(self) -> int:
        return max(self.degrees) if self.degrees else -1

    def vertex_dim(self, j: int, u: int) -> int:
        return self.module(j).dims[u]

    def cohomology_dims(self) -> dict[int, list[int]]:
        """Per degree, the vertexwise dimensions of the cohomology modules."""
        out = {}
        V = self.alg.nvertices
        for j in range(self.lo, self.hi + 1):
            dims = []
            for u in range(V):
                here = self.vertex_dim(j, u)
                r_out = linalg.rank(self.dmap(j).maps[u]) if here else 0
                r_in = linalg.rank(self.dmap(j - 1).maps[u]) if here else 0
                dims.append(here - r_out - r_in)
            if any(dims):
                out[j] = dims
        return out

    def is_acyclic(self) -> bool:
        return not self.cohomology_dims()

    def check(self) -> None:
        for j in self.degrees:
            comp = self.dmap(j + 1).compose(self.dmap(j))
            if not comp.is_zero():
                raise ComplexError(f"d∘d != 0 at degree {j}")


class ProjComplex(_ComplexBase):
    """Bounded complex of finite sums of indecomposable projectives ``P_v``."""

    def __init__(self, alg: Algebra, terms: dict[int, list[int]], diffs: dict[int, list[fmpq_mat]] | None = None,
                 check: bool = True):
        self.alg = alg
        self.terms = {j: list(t) for j, t in terms.items() if t}
        self.diffs = {}
        diffs = diffs or {}
        for j, t in self.terms.items():
            cols = diffs.get(j)
            nxt = self.terms.get(j + 1, [])
            if cols is None or not nxt:
                cols = [_zero_col(sum(alg.hom_dim(v, w) for w in nxt)) for v in t]
            if len(cols) != len(t):
                raise ComplexError(f"degree {j}: {len(cols)} columns for {len(t)} summands")
            for v, c in zip(t, cols):
                want = sum(alg.hom_dim(v, w) for w in nxt)
                if c.nrows() != want:
                    raise ComplexError(f"degree {j}: column of length {c.nrows()}, expected {want}")
            self.diffs[j] = list(cols)
        self._modules: dict[int, Representation] = {}
        self._dmaps: dict[int, RepMorphism] = {}
        if check:
            self.check()

    def __repr__(self) -> str:
        return "ProjComplex(" + ", ".join(
            f"{j}: [{', '.join(str(self.alg.vertices[v]) for v in t)}]" for j, t in sorted(self.terms.items())) + ")"

    @property
    def degrees(self) -> list[int]:
        return sorted(self.terms)

    def summands(self, j: int) -> list[int]:
        return self.terms.get(j, [])

    def module(self, j: int) -> Representation:
        m = self._modules.get(j)
        if m is None:
            m = rm.proj_sum(self.alg, self.summands(j))
            self._modules[j] = m
        return m

    def vertex_dim(self, j: int, u: int) -> int:
        return sum(self.alg.hom_dim(u, v) for v in self.summands(j))

    def dmap(self, j: int) -> RepMorphism:
        f = self._dmaps.get(j)
        if f is None:
            src, dst = self.summands(j), self.summands(j + 1)
            if src and dst:
                f = rm.yoneda_realize(self.alg, src, self.diffs[j], self.module(j + 1))
            else:
                f = rm.zero_map(self.module(j), self.module(j + 1))
            self._dmaps[j] = f
        return f

    def check(self) -> None:
        for j in self.degrees:
            nxt2 = self.summands(j + 2)
            if not nxt2:
                continue
            real = self.dmap(j + 1)
            for v, c in zip(self.summands(j), self.diffs[j]):
                if not linalg.is_zero(real.maps[v] * c):
                    raise ComplexError(f"d∘d != 0 at degree {j}")

    def multiplicities(self) -> dict[int, dict[str, int]]:
        out = {}
        for j, t in sorted(self.terms.items()):
            c: dict[str, int] = {}
            for v in t:
                lab = self.alg.vertices[v].label
                c[lab] = c.get(lab, 0) + 1
            out[j] = c
        return out

    @property
    def rank_total(self) -> int:
        return sum(len(t) for t in self.terms.values())


class ModComplex(_ComplexBase):
    """Bounded complex of representations."""

    def __init__(self, alg: Algebra, modules: dict[int, Representation], maps: dict[int, RepMorphism] | None = None,
                 check: bool = True):
        self.alg = alg
        self.modules = {j: m for j, m in modules.items() if m.total_dim}
        self.maps = {}
        for j in self.modules:
            f = (maps or {}).get(j)
            if f is not None and (j + 1) in self.modules:
                self.maps[j] = f
        if check:
            for f in self.maps.values():
                if not f.is_valid():
                    raise ComplexError("differential is not a module map")
            self.check()

    @classmethod
    def concentrated(cls, m: Representation, degree: int = 0) -> "ModComplex":
        return cls(m.alg, {degree: m}, check=False)

    @property
    def degrees(self) -> list[int]:
        return sorted(self.modules)

    def module(self, j: int) -> Representation:
        m = self.modules.get(j)
        return m if m is not None else rm.zero_module(self.alg)

    def dmap(self, j: int) -> RepMorphism:
        f = self.maps.get(j)
        return f if f is not None else rm.zero_map(self.module(j), self.module(j + 1))


@dataclass
class VSComplex:
    """Complex of finite-dimensional vector spaces; ``diffs[k]: Q^{dims[k]} -> Q^{dims[k+1]}``."""

    dims: dict[int, int]
    diffs: dict[int, fmpq_mat] = field(default_factory=dict)

    def dim(self, k: int) -> int:
        return self.dims.get(k, 0)

    def diff(self, k: int) -> fmpq_mat:
        m = self.diffs.get(k)
        return m if m is not None else fmpq_mat(self.dim(k + 1), self.dim(k))

    @cached_property
    def ranks(self) -> dict[int, int]:
        return {k: linalg.rank(m) for k, m in self.diffs.items()}

    def cohomology(self) -> dict[int, int]:
        return linalg.cohomology_dims(self.dims, self.ranks)

    def check(self) -> None:
        for k in self.dims:
            if not linalg.is_zero(self.diff(k + 1) * self.diff(k)):
                raise ComplexError(f"δ∘δ != 0 at degree {k}")

    def cocycles(self, k: int) -> fmpq_mat:
        return linalg.nullspace(self.diff(k))

    def coboundaries(self, k: int) -> fmpq_mat:
        b = self.diff(k - 1)
        piv = linalg.rref(b)[1]
        return linalg.submatrix(b, range(b.nrows()), piv)

    def cohomology_basis(self, k: int) -> fmpq_mat:
        """Cocycles whose classes form a basis of ``H^k``."""
        z = self.cocycles(k)
        b = self.coboundaries(k)
        picks = linalg.complement_columns(b, z)
        return linalg.submatrix(z, range(z.nrows()), picks)

    def class_of(self, k: int, z: fmpq_mat) -> fmpq_mat:
        """Coordinates of the class of cocycle ``z`` in :meth:`cohomology_basis`."""
        b = self.coboundaries(k)
        reps = self.cohomology_basis(k)
        x = linalg.solve(linalg.hstack([b, reps], nrows=self.dim(k)), z)
        if x is None:
            raise ComplexError("not a cocycle")
        return linalg.submatrix(x, range(b.ncols(), x.nrows()), range(x.ncols()))

    def is_coboundary(self, k: int, z: fmpq_mat) -> bool:
        return linalg.solve(self.diff(k - 1), z) is not None


# --- maps and Hom complexes --------------------------------------------------

@dataclass
class ChainMap:
    """Degree-``degree`` map from a projective complex, in Yoneda layout."""

    source: ProjComplex
    target: _ComplexBase
    degree: int
    comps: dict[int, list[fmpq_mat]]

    def column(self, i: int, s: int) -> fmpq_mat:
        cols = self.comps.get(i)
        if cols is None:
            v = self.source.summands(i)[s]
            return _zero_col(self.target.vertex_dim(i + self.degree, v))
        return cols[s]


class HomComplex(VSComplex):
    def __init__(self, source: ProjComplex, target: _ComplexBase):
        self.source = source
        self.target = target
        alg = source.alg
        lo = target.lo - source.hi
        hi = target.hi - source.lo
        self.layout: dict[int, list[tuple[int, int, int, int]]] = {}
        dims = {}
        for k in range(lo, hi + 1):
            rows, acc = [], 0
            for i in source.degrees:
                for s, v in enumerate(source.summands(i)):
                    size = target.vertex_dim(i + k, v)
                    rows.append((i, s, acc, size))
                    acc += size
            self.layout[k] = rows
            if acc:
                dims[k] = acc
        super().__init__(dims, {})
        self._pull: dict[tuple[int, int], fmpq_mat] = {}
        for k in range(lo - 1, hi + 1):
            if self.dim(k) and self.dim(k + 1):
                self.diffs[k] = self._delta(k)
        del self._pull

    def _offsets(self, k: int) -> dict[tuple[int, int], tuple[int, int]]:
        return {(i, s): (off, size) for i, s, off, size in self.layout.get(k, [])}

    def _pullback(self, i: int, k: int) -> fmpq_mat:
        """``f -> f ∘ d_X^i`` restricted to ``Hom(X^{i+1}, C^{i+1+k}) -> Hom(X^i, C^{i+1+k})``."""
        key = (i, k)
        m = self._pull.get(key)
        if m is None:
            m = rm.yoneda_pullback(self.source.alg, self.target.module(i + 1 + k),
                                   self.source.summands(i + 1), self.source.summands(i), self.source.diffs[i])
            self._pull[key] = m
        return m

    def _delta(self, k: int) -> fmpq_mat:
        X, C = self.source, self.target
        src, dst = self._offsets(k), self._offsets(k + 1)
        buf = _Buffer(self.dim(k + 1), self.dim(k))
        sgn = _sign(k)
        for i in X.degrees:
            summ = X.summands(i)
            if not summ:
                continue
            # d_C ∘ f
            dm = C.dmap(i + k)
            for s, v in enumerate(summ):
                r0, rs = dst[(i, s)]
                c0, cs = src[(i, s)]
                if rs and cs:
                    buf.paste(r0, c0, dm.maps[v])
            # -(-1)^k f ∘ d_X
            nxt = X.summands(i + 1)
            if nxt and C.module(i + 1 + k).total_dim:
                pb = self._pullback(i, k)
                r0 = dst[(i, 0)][0]
                c0 = src[(i + 1, 0)][0]
                buf.paste(r0, c0, pb, -sgn)
        return buf.matrix()

    def to_vector(self, f: ChainMap) -> fmpq_mat:
        k = f.degree
        out = fmpq_mat(self.dim(k), 1)
        for i, s, off, size in self.layout.get(k, []):
            c = f.column(i, s)
            for r in range(size):
                out[off + r, 0] = c[r, 0]
        return out

    def from_vector(self, k: int, vec: fmpq_mat) -> ChainMap:
        comps: dict[int, list[fmpq_mat]] = {}
        for i, s, off, size in self.layout.get(k, []):
            comps.setdefault(i, []).append(linalg.submatrix(vec, range(off, off + size), [0]))
        return ChainMap(self.source, self.target, k, comps)

    def ext_dims(self) -> dict[int, int]:
        return self.cohomology()


def hom_complex(x: ProjComplex, y: _ComplexBase) -> HomComplex:
    return HomComplex(x, y)


def ext_dims(x: ProjComplex, y: _ComplexBase) -> dict[int, int]:
    return HomComplex(x, y).cohomology()


def is_chain_map(f: ChainMap) -> bool:
    h = HomComplex(f.source, f.target)
    v = h.to_vector(f)
    return linalg.is_zero(h.diff(f.degree) * v)


# --- realized maps -----------------------------------------------------------

def realize(f: ChainMap, i: int) -> RepMorphism:
    """The module map ``X^i -> Y^{i+k}`` underlying ``f``."""
    x = f.source
    tgt = f.target.module(i + f.degree)
    summ = x.summands(i)
    if not summ:
        return rm.zero_map(x.module(i), tgt)
    return rm.yoneda_realize(x.alg, summ, [f.column(i, s) for s in range(len(summ))], tgt)


def compose(g: ChainMap, f: ChainMap) -> ChainMap:
    """``g ∘ f`` for ``f: X -> Y`` and ``g: Y -> Z`` (``Y`` projective)."""
    if f.target is not g.source:
        raise ComplexError("maps are not composable")
    comps = {}
    k = f.degree
    for i in f.source.degrees:
        real = realize(g, i + k)
        comps[i] = [real.maps[v] * f.column(i, s) for s, v in enumerate(f.source.summands(i))]
    return ChainMap(f.source, g.target, f.degree + g.degree, comps)


def identity(x: ProjComplex) -> ChainMap:
    comps = {}
    for i in x.degrees:
        cols = []
        summ = x.summands(i)
        for s, v in enumerate(summ):
            offs = rm.sum_offsets(x.alg, summ, v)
            c = _zero_col(x.vertex_dim(i, v))
            c[offs[s], 0] = 1
            cols.append(c)
        comps[i] = cols
    return ChainMap(x, x, 0, comps)


def zero_chain_map(x: ProjComplex, y: _ComplexBase, degree: int = 0) -> ChainMap:
    return ChainMap(x, y, degree, {})


# --- constructions -------------------------------------------------------------

def shift(x: ProjComplex, k: int) -> ProjComplex:
    sgn = _sign(k)
    terms = {j - k: t for j, t in x.terms.items()}
    diffs = {j - k: [c * sgn for c in cols] for j, cols in x.diffs.items()}
    return ProjComplex(x.alg, terms, diffs, check=False)


def shift_map(f: ChainMap, source: ProjComplex, target: _ComplexBase, k: int) -> ChainMap:
    """``f[k]`` between ``source = X[k]`` and ``target = Y[k]``."""
    return ChainMap(source, target, f.degree, {i - k: c for i, c in f.comps.items()})


def _concat(cols: list[fmpq_mat]) -> fmpq_mat:
    return linalg.vstack(cols, ncols=1) if cols else _zero_col(0)


def direct_sum(parts: list[ProjComplex], alg: Algebra | None = None) -> ProjComplex:
    if not parts:
        if alg is None:
            raise ComplexError("empty sum needs the algebra")
        return ProjComplex(alg, {})
    alg = parts[0].alg
    degs = sorted({j for p in parts for j in p.degrees})
    terms, diffs = {}, {}
    for j in degs:
        terms[j] = [v for p in parts for v in p.summands(j)]
        cols = []
        for p in parts:
            for s, v in enumerate(p.summands(j)):
                pieces = []
                for q in parts:
                    if q is p:
                        pieces.append(p.diffs[j][s])
                    else:
                        pieces.append(_zero_col(q.vertex_dim(j + 1, v)))
                cols.append(_concat(pieces))
        diffs[j] = cols
    return ProjComplex(alg, terms, diffs, check=False)


def cone(f: ChainMap, check: bool = True) -> ProjComplex:
    x, y = f.source, f.target
    if not isinstance(y, ProjComplex):
        raise ComplexError("cone needs a projective target")
    if f.degree != 0:
        raise ComplexError("cone needs a degree-0 map")
    if check and not is_chain_map(f):
        raise ComplexError("not a chain map")
    alg = x.alg
    degs = sorted(set(y.degrees) | {j - 1 for j in x.degrees})
    terms, diffs = {}, {}
    for m in degs:
        ys, xs = y.summands(m), x.summands(m + 1)
        terms[m] = ys + xs
        cols = []
        for s, v in enumerate(ys):
            cols.append(_concat([y.diffs[m][s], _zero_col(x.vertex_dim(m + 2, v))]))
        for s, v in enumerate(xs):
            cols.append(_concat([f.column(m + 1, s), -x.diffs[m + 1][s]]))
        diffs[m] = cols
    return ProjComplex(alg, terms, diffs, check=check)


def from_resolution(res: rm.ProjResolution) -> tuple[ProjComplex, ChainMap]:
    """Projective complex in degrees ``<= 0`` and its augmentation to ``M[0]``."""
    alg = res.module.alg
    terms = {-k: t for k, t in enumerate(res.terms) if t}
    diffs = {-k: res.diffs[k] for k in range(1, len(res.terms)) if res.terms[k]}
    p = ProjComplex(alg, terms, diffs, check=False)
    target = ModComplex.concentrated(res.module, 0)
    aug = ChainMap(p, target, 0, {0: list(res.augmentation)} if res.terms and res.terms[0] else {})
    return p, aug


def resolve_module(m: Representation, with_map: bool = False):
    p, aug = from_resolution(rm.min_proj_resolution(m))
    return (p, aug) if with_map else p


def vertexwise_cone_acyclic(q: ChainMap) -> bool:
    """Quasi-isomorphism test: the cone of ``q`` is acyclic at every vertex."""
    x, y = q.source, q.target
    alg = x.alg
    lo = min(x.lo - 1, y.lo - 1)
    hi = max(x.hi, y.hi)
    reals = {i: realize(q, i) for i in x.degrees}
    for u in range(alg.nvertices):
        dims, ranks = {}, {}
        for m in range(lo, hi + 1):
            dims[m] = y.vertex_dim(m, u) + x.vertex_dim(m + 1, u)
        for m in range(lo, hi + 1):
            r_y0, r_x0 = y.vertex_dim(m, u), x.vertex_dim(m + 1, u)
            r_y1, r_x1 = y.vertex_dim(m + 1, u), x.vertex_dim(m + 2, u)
            if not (dims[m] and dims.get(m + 1, 0)):
                continue
            buf = _Buffer(r_y1 + r_x1, r_y0 + r_x0)
            if r_y1 and r_y0:
                buf.paste(0, 0, y.dmap(m).maps[u])
            if r_y1 and r_x0 and (m + 1) in reals:
                buf.paste(0, r_y0, reals[m + 1].maps[u])
            if r_x1 and r_x0:
                buf.paste(r_y1, r_y0, x.dmap(m + 1).maps[u], -1)
            ranks[m] = linalg.rank(buf.matrix())
        if linalg.cohomology_dims(dims, ranks):
            return False
    return True


def is_quasi_iso(q: ChainMap) -> bool:
    return q.degree == 0 and vertexwise_cone_acyclic(q)


@dataclass
class Lift:
    map: ChainMap
    homotopy: ChainMap
    strict: bool


def _postcompose_matrix(q: ChainMap, hx: HomComplex, hz: HomComplex, k: int) -> fmpq_mat:
    """Matrix of ``g -> q ∘ g`` from ``Hom^k(X, Y)`` to ``Hom^k(X, Z)``."""
    buf = _Buffer(hz.dim(k), hx.dim(k))
    src, dst = hx._offsets(k), hz._offsets(k)
    reals = {}
    for i, s, off, size in hx.layout.get(k, []):
        if not size:
            continue
        j = i + k
        if j not in reals:
            reals[j] = realize(q, j)
        v = hx.source.summands(i)[s]
        r0, rs = dst[(i, s)]
        if rs:
            buf.paste(r0, off, reals[j].maps[v])
    return buf.matrix()


def lift_through_qis(f: ChainMap, q: ChainMap, check_qis: bool = True) -> Lift:
    """``g: X -> Y`` with ``q ∘ g - f = δh`` for ``f: X -> Z`` and a quasi-isomorphism ``q: Y -> Z``."""
    x, y, z = f.source, q.source, q.target
    if q.target is not f.target:
        raise ComplexError("f and q must share their target")
    if check_qis and not is_quasi_iso(q):
        raise ComplexError("q is not a quasi-isomorphism")
    hxy = HomComplex(x, y)
    hxz = HomComplex(x, z)
    fv = hxz.to_vector(f)
    n0 = hxy.dim(0)
    qmat = _postcompose_matrix(q, hxy, hxz, 0)
    dmat = hxy.diff(0)
    strict = linalg.vstack([dmat, qmat], ncols=n0)
    rhs = linalg.vstack([fmpq_mat(dmat.nrows(), 1), fv], ncols=1)
    sol = linalg.solve(strict, rhs)
    if sol is not None:
        return Lift(hxy.from_vector(0, sol), zero_chain_map(x, z, -1), True)
    nh = hxz.dim(-1)
    top = linalg.hstack([dmat, fmpq_mat(dmat.nrows(), nh)], nrows=dmat.nrows())
    bottom = linalg.hstack([qmat, -hxz.diff(-1)], nrows=qmat.nrows())
    sol = linalg.solve(linalg.vstack([top, bottom]), rhs)
    if sol is None:
        raise ComplexError("no lift exists; q is not a quasi-isomorphism onto the image of f")
    g = hxy.from_vector(0, linalg.submatrix(sol, range(n0), [0]))
    h = hxz.from_vector(-1, linalg.submatrix(sol, range(n0, n0 + nh), [0]))
    return Lift(g, h, False)


def resolve_complex(c: ModComplex, term_resolutions: dict | None = None) -> tuple[ProjComplex, ChainMap]:
    """Projective replacement ``P -> C`` of a bounded module complex.

    Built by iterated cones: ``C = Cone(σ_{<b} C [-1] -> C^b[-b])``, resolving
    each piece and lifting the connecting map strictly through the
    augmentation of the top term.  ``term_resolutions`` may supply
    ``degree -> (ProjComplex in degrees <= 0, augmentation ChainMap)`` for
    individual terms.
    """
    alg = c.alg
    term_resolutions = term_resolutions or {}
    degs = c.degrees
    if not degs:
        p = ProjComplex(alg, {})
        return p, ChainMap(p, c, 0, {})

    def term(b):
        if b in term_resolutions:
            return term_resolutions[b]
        return resolve_module(c.module(b), with_map=True)

    p, q = None, None
    for b in degs:
        r, aug = term(b)
        py = shift(r, -b)
        qy_cols = {i + b: cols for i, cols in aug.comps.items()}
        if p is None:
            p = py
            q = ChainMap(p, c, 0, qy_cols)
            continue
        # connecting map f∘q_X on P_X^b = P^{b-1}, through d_C^{b-1}
        px = shift(p, -1)
        yb = ModComplex.concentrated(c.module(b), b)
        qy = ChainMap(py, yb, 0, qy_cols)
        fq = {}
        if (b - 1) in p.terms:
            real = c.dmap(b - 1)
            fq[b] = [real.maps[v] * q.column(b - 1, s) for s, v in enumerate(p.summands(b - 1))]
        fq_map = ChainMap(px, yb, 0, fq)
        lift = lift_through_qis(fq_map, qy, check_qis=False)
        if not lift.strict:
            raise ComplexError("connecting map did not lift strictly")
        new_p = cone(lift.map, check=False)
        comps = {}
        for m in new_p.degrees:
            cols = []
            for s in range(len(py.summands(m))):
                cols.append(qy.column(m, s) if m == b else _zero_col(c.vertex_dim(m, py.summands(m)[s])))
            for s in range(len(p.summands(m))):
                cols.append(q.column(m, s))
            comps[m] = cols
        p = new_p
        q = ChainMap(p, c, 0, comps)
    return p, q


def to_projective(obj) -> ProjComplex:
    if isinstance(obj, ProjComplex):
        return obj
    if isinstance(obj, Representation):
        return resolve_module(obj)
    if isinstance(obj, ModComplex):
        return resolve_complex(obj)[0]
    raise TypeError(f"cannot resolve {type(obj).__name__}")


# --- twist functor -------------------------------------------------------------

def _copies(e: ProjComplex, shifts: list[int]) -> tuple[ProjComplex, list[dict[int, int]]]:
    """``⊕_b E[-shifts[b]]`` and per copy the summand offset within each degree."""
    parts = [shift(e, -k) for k in shifts]
    total = direct_sum(parts, e.alg)
    offsets = []
    acc: dict[int, int] = {}
    for part in parts:
        here = {}
        for j in total.degrees:
            here[j] = acc.get(j, 0)
            acc[j] = acc.get(j, 0) + len(part.summands(j))
        offsets.append(here)
    return total, offsets


def twist_functor(e: ProjComplex, f: ProjComplex, reduced: bool = True) -> tuple[ProjComplex, ChainMap]:
    """``T_E(F) = Cone(Hom^•(E, F) ⊗ E -> F)`` and the evaluation map.

    ``reduced`` replaces ``Hom^•(E, F)`` by its cohomology (cocycle
    representatives); otherwise the full Hom complex is tensored.
    """
    hom = HomComplex(e, f)
    if reduced:
        elems: list[tuple[int, fmpq_mat]] = []
        for k in sorted(hom.dims):
            reps = hom.cohomology_basis(k)
            for j in range(reps.ncols()):
                elems.append((k, linalg.col(reps, j)))
        src, offs = _copies(e, [k for k, _ in elems])
    else:
        elems = []
        for k in sorted(hom.dims):
            eye = linalg.identity(hom.dim(k))
            for j in range(hom.dim(k)):
                elems.append((k, linalg.col(eye, j)))
        src, offs = _copies(e, [k for k, _ in elems])
        # cross terms: d(v ⊗ x) = δv ⊗ x + (-1)^p v ⊗ dx
        index = {}
        for b, (k, _) in enumerate(elems):
            index.setdefault(k, []).append(b)
        for b, (k, vec) in enumerate(elems):
            if (k + 1) not in index:
                continue
            dv = hom.diff(k) * vec
            for pos, c in enumerate(index[k + 1]):
                coef = dv[pos, 0]
                if not coef:
                    continue
                for jd in e.degrees:
                    m = jd + k
                    for s, v in enumerate(e.summands(jd)):
                        col = src.diffs[m][offs[b][m] + s]
                        summ = src.summands(m + 1)
                        so = rm.sum_offsets(e.alg, summ, v)
                        col[so[offs[c][m + 1] + s], 0] += coef
    comps: dict[int, list[fmpq_mat]] = {}
    for b, (k, vec) in enumerate(elems):
        phi = hom.from_vector(k, vec)
        for jd in e.degrees:
            m = jd + k
            cols = comps.setdefault(m, [None] * len(src.summands(m)))
            for s in range(len(e.summands(jd))):
                cols[offs[b][m] + s] = phi.column(jd, s)
    ev = ChainMap(src, f, 0, comps)
    return cone(ev), ev


# --- Yoneda pairing -------------------------------------------------------------

def ext_representatives(x: ProjComplex, y: ProjComplex, k: int, hom: HomComplex | None = None) -> list[ChainMap]:
    hom = hom or HomComplex(x, y)
    reps = hom.cohomology_basis(k)
    return [hom.from_vector(k, linalg.col(reps, j)) for j in range(reps.ncols())]


class PairingError(ValueError):
    pass


def yoneda_pairing(e: ProjComplex, f: ProjComplex, n: int) -> dict[int, fmpq_mat]:
    """For each ``j``, the matrix of ``Ext^j(E,F) × Ext^{n-j}(F,E) -> Ext^n(E,E) ≅ Q``."""
    hee = HomComplex(e, e)
    if hee.cohomology().get(n, 0) != 1:
        raise PairingError(f"Ext^{n}(E,E) is not one-dimensional")
    hef, hfe = HomComplex(e, f), HomComplex(f, e)
    out = {}
    for j in range(0, n + 1):
        left = ext_representatives(e, f, j, hef)
        right = ext_representatives(f, e, n - j, hfe)
        mat = fmpq_mat(len(left), len(right))
        for a, x in enumerate(left):
            for b, y in enumerate(right):
                z = hee.to_vector(compose(y, x))
                mat[a, b] = hee.class_of(n, z)[0, 0]
        out[j] = mat
    return out


def pairing_nondegenerate(mats: dict[int, fmpq_mat]) -> bool:
    for m in mats.values():
        if m.nrows() != m.ncols():
            return False
        if m.nrows() and linalg.rank(m) != m.nrows():
            return False
    return True


def euler_char(table: dict[int, int]) -> int:
    return sum(_sign(k) * v for k, v in table.items())
