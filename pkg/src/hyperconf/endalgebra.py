"""The endomorphism algebra ``A = Hom(E, E)`` of the collection ``E_{a,i} = O_{U_a}(i)``.

Vertices are pairs ``(a, i)`` with ``0 <= i <= dim P_a``.  ``Hom((a,i), (b,j))``
is ``W_{j-i}(a)`` when ``a <= b`` and ``i <= j``, zero otherwise.  Composition
of ``x: (a,i) -> (b,j)`` with ``y: (b,j) -> (c,k)`` is ``x * restrict(y)`` in
the graded ring of ``P_a``.

Basis elements are indexed globally; ``mult[(i, j)]`` lists the expansion of
``b_i ∘ b_j`` (``b_j`` applied first).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import comb

from flint import fmpq, fmpq_mat

from . import linalg
from .forms import Exps, FormRing
from .poset import Poset, Stratum


@dataclass(frozen=True)
class Vertex:
    stratum: Stratum
    twist: int

    def __le__(self, other: "Vertex") -> bool:
        return self.stratum <= other.stratum and self.twist <= other.twist

    def __lt__(self, other: "Vertex") -> bool:
        return self <= other and self != other

    @property
    def label(self) -> str:
        return f"({self.stratum.label};{self.twist})"

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class BasisTag:
    src: int
    dst: int
    exps: Exps


class AlgebraError(ArithmeticError):
    pass


@dataclass
class ValidationReport:
    checks: dict[str, bool] = field(default_factory=dict)
    details: dict[str, list[str]] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def fail(self, check: str, msg: str) -> None:
        self.checks[check] = False
        self.details.setdefault(check, []).append(msg)

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checks": dict(self.checks),
            "details": {k: v[:10] for k, v in self.details.items()},
        }


class Algebra:
    """Finite-dimensional basic directed algebra given by basis and structure constants."""

    def __init__(self, n: int, d: int, vertices: list[Vertex], basis: list[BasisTag],
                 mult: dict[tuple[int, int], tuple[tuple[int, fmpq], ...]],
                 poset: Poset | None = None, ring: FormRing | None = None):
        self.n = n
        self.d = d
        self.poset = poset if poset is not None else Poset(n, d)
        self._ring = ring
        self.vertices = list(vertices)
        self.vindex = {v: i for i, v in enumerate(self.vertices)}
        self.basis = list(basis)
        self.mult = dict(mult)
        homs: dict[tuple[int, int], list[int]] = {}
        for k, tag in enumerate(self.basis):
            homs.setdefault((tag.src, tag.dst), []).append(k)
        self._homs = {key: tuple(v) for key, v in homs.items()}
        self._local = {}
        for key, ks in self._homs.items():
            for pos, k in enumerate(ks):
                self._local[k] = pos
        self._left: dict = {}
        self._right: dict = {}

    @property
    def ring(self) -> FormRing:
        if self._ring is None:
            self._ring = FormRing(self.poset)
        return self._ring

    def __repr__(self) -> str:
        return f"Algebra(n={self.n}, d={self.d}, vertices={len(self.vertices)}, dim={self.dim})"

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def nvertices(self) -> int:
        return len(self.vertices)

    def vertex(self, stratum: Stratum, twist: int) -> int:
        return self.vindex[Vertex(stratum, twist)]

    def hom(self, u: int, w: int) -> tuple[int, ...]:
        return self._homs.get((u, w), ())

    def hom_dim(self, u: int, w: int) -> int:
        return len(self._homs.get((u, w), ()))

    def basis_of_hom(self, u: int, w: int) -> list[BasisTag]:
        return [self.basis[k] for k in self.hom(u, w)]

    def local(self, k: int) -> int:
        return self._local[k]

    def idempotent(self, v: int) -> int:
        return self.hom(v, v)[0]

    @cached_property
    def radical_basis(self) -> list[int]:
        return [k for k, t in enumerate(self.basis) if t.src != t.dst]

    @cached_property
    def arrows(self) -> list[int]:
        """Basis elements spanning a complement of rad² in rad; they generate rad."""
        out = []
        for (u, w), ks in sorted(self._homs.items()):
            if u == w:
                continue
            prods = []
            for v in range(u + 1, w):
                for i in self.hom(v, w):
                    for j in self.hom(u, v):
                        vec = [fmpq(0)] * len(ks)
                        for r, c in self.mult.get((i, j), ()):
                            vec[self._local[r]] += c
                        prods.append(vec)
            span = linalg.matrix([list(x) for x in zip(*prods)], ncols=0) if prods else fmpq_mat(len(ks), 0)
            picks = linalg.complement_columns(span, linalg.identity(len(ks)))
            out.extend(ks[p] for p in picks)
        return out

    # --- composition ---------------------------------------------------

    def product(self, i: int, j: int) -> dict[int, fmpq]:
        """``b_i ∘ b_j`` as a sparse dict (empty when not composable)."""
        return dict(self.mult.get((i, j), ()))

    def left_matrix(self, k: int, u: int) -> fmpq_mat:
        """Post-composition with basis element ``k: v -> w`` as a matrix ``Hom(u,v) -> Hom(u,w)``."""
        key = (k, u)
        m = self._left.get(key)
        if m is None:
            tag = self.basis[k]
            src = self.hom(u, tag.src)
            dst = self.hom(u, tag.dst)
            m = fmpq_mat(len(dst), len(src))
            for c, j in enumerate(src):
                for r, val in self.mult.get((k, j), ()):
                    m[self._local[r], c] = val
            self._left[key] = m
        return m

    def right_matrix(self, j: int, z: int) -> fmpq_mat:
        """Pre-composition with basis element ``j: u -> v`` as a matrix ``Hom(v,z) -> Hom(u,z)``."""
        key = (j, z)
        m = self._right.get(key)
        if m is None:
            tag = self.basis[j]
            src = self.hom(tag.dst, z)
            dst = self.hom(tag.src, z)
            m = fmpq_mat(len(dst), len(src))
            for c, i in enumerate(src):
                for r, val in self.mult.get((i, j), ()):
                    m[self._local[r], c] = val
            self._right[key] = m
        return m

    def left_mult(self, elem, v: int, w: int, u: int) -> fmpq_mat:
        """Post-composition with ``elem ∈ Hom(v, w)`` as a matrix ``Hom(u,v) -> Hom(u,w)``."""
        out = fmpq_mat(self.hom_dim(u, w), self.hom_dim(u, v))
        for k, c in zip(self.hom(v, w), elem):
            if c:
                out += self.left_matrix(k, u) * c
        return out

    def compose(self, y, x, u: int, v: int, w: int) -> list[fmpq]:
        """``y ∘ x`` for ``x ∈ Hom(u,v)``, ``y ∈ Hom(v,w)`` given as coordinate vectors."""
        out = [fmpq(0)] * self.hom_dim(u, w)
        hx = self.hom(u, v)
        hy = self.hom(v, w)
        for a, cy in zip(hy, y):
            if not cy:
                continue
            for b, cx in zip(hx, x):
                if not cx:
                    continue
                for r, val in self.mult.get((a, b), ()):
                    out[self._local[r]] += cy * cx * val
        return out

    # --- derived structures ---------------------------------------------

    def corner(self, vertex_ids: list[int]) -> tuple["Algebra", list[int]]:
        """The full subalgebra ``eAe`` on the given vertices and the vertex map into ``self``."""
        vmap = {old: new for new, old in enumerate(vertex_ids)}
        keep = [k for k, t in enumerate(self.basis) if t.src in vmap and t.dst in vmap]
        kmap = {old: new for new, old in enumerate(keep)}
        basis = [BasisTag(vmap[self.basis[k].src], vmap[self.basis[k].dst], self.basis[k].exps) for k in keep]
        mult = {}
        for (i, j), terms in self.mult.items():
            if i in kmap and j in kmap:
                mult[(kmap[i], kmap[j])] = tuple((kmap[r], c) for r, c in terms)
        sub = Algebra(self.n, self.d, [self.vertices[v] for v in vertex_ids], basis, mult,
                      poset=self.poset, ring=self._ring)
        return sub, list(vertex_ids)

    def expected_hom_dim(self, u: int, w: int) -> int:
        a, b = self.vertices[u], self.vertices[w]
        if not a <= b:
            return 0
        return comb(b.twist - a.twist + a.stratum.dim, a.stratum.dim)

    # --- audits --------------------------------------------------------

    def validate(self) -> ValidationReport:
        rep = ValidationReport()
        for name in ("dimension", "idempotents", "directedness", "associativity"):
            rep.checks[name] = True
        V = self.nvertices

        for u in range(V):
            for w in range(V):
                got, want = self.hom_dim(u, w), self.expected_hom_dim(u, w)
                if got != want:
                    rep.fail("dimension", f"dim Hom{self.vertices[u]}->{self.vertices[w]} = {got}, expected {want}")

        for v in range(V):
            hv = self.hom(v, v)
            if len(hv) != 1:
                rep.fail("idempotents", f"End({self.vertices[v]}) has dim {len(hv)}")
                continue
            e = hv[0]
            for w in range(V):
                for k in self.hom(v, w):
                    if self.product(k, e) != {k: 1}:
                        rep.fail("idempotents", f"b{k} ∘ e{v} != b{k}")
                for k in self.hom(w, v):
                    if self.product(e, k) != {k: 1}:
                        rep.fail("idempotents", f"e{v} ∘ b{k} != b{k}")

        for k, t in enumerate(self.basis):
            if t.src != t.dst and not (t.src < t.dst and self.vertices[t.src] < self.vertices[t.dst]):
                rep.fail("directedness", f"basis element {k} goes {t.src} -> {t.dst}")
        for (i, j), terms in self.mult.items():
            ti, tj = self.basis[i], self.basis[j]
            if tj.dst != ti.src:
                rep.fail("directedness", f"product of non-composable b{i}, b{j}")
            for r, _ in terms:
                tr = self.basis[r]
                if (tr.src, tr.dst) != (tj.src, ti.dst):
                    rep.fail("directedness", f"b{i}∘b{j} leaves Hom({tj.src},{ti.dst})")

        # (c∘b)∘a == c∘(b∘a): compare L_{c∘b} with L_c L_b on every Hom(u, v).
        for v in range(V):
            for w in range(v, V):
                hb = self.hom(v, w)
                if not hb:
                    continue
                for x in range(w, V):
                    hc = self.hom(w, x)
                    if not hc:
                        continue
                    for u in range(0, v + 1):
                        if not self.hom(u, v):
                            continue
                        for b in hb:
                            lb = self.left_matrix(b, u)
                            for c in hc:
                                cb = self.product(c, b)
                                lhs = fmpq_mat(self.hom_dim(u, x), self.hom_dim(u, v))
                                for r, val in cb.items():
                                    lhs += self.left_matrix(r, u) * val
                                if lhs != self.left_matrix(c, u) * lb:
                                    rep.fail("associativity", f"(b{c}∘b{b})∘Hom({u},{v}) mismatch")
        return rep

    # --- serialisation helpers ------------------------------------------

    def to_data(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "vertices": [[list(v.stratum.indices), v.twist] for v in self.vertices],
            "basis": [[t.src, t.dst, list(t.exps)] for t in self.basis],
            "structure_constants": [
                [i, j, k, str(c)]
                for (i, j) in sorted(self.mult)
                for k, c in self.mult[(i, j)]
            ],
        }

    @classmethod
    def from_data(cls, data: dict) -> "Algebra":
        poset = Poset(data["n"], data["d"])
        vertices = [Vertex(poset.stratum(idx), tw) for idx, tw in data["vertices"]]
        basis = [BasisTag(s, t, tuple(e)) for s, t, e in data["basis"]]
        mult: dict[tuple[int, int], list] = {}
        for i, j, k, c in data["structure_constants"]:
            mult.setdefault((i, j), []).append((k, fmpq(c)))
        return cls(data["n"], data["d"], vertices, basis,
                   {key: tuple(v) for key, v in mult.items()}, poset=poset)


def build_algebra(poset: Poset, ring: FormRing | None = None, validate: bool = True) -> Algebra:
    ring = ring or FormRing(poset)
    vertices = [Vertex(s, i) for s in poset for i in range(s.dim + 1)]
    basis: list[BasisTag] = []
    homs: dict[tuple[int, int], list[int]] = {}
    for u, a in enumerate(vertices):
        for w, b in enumerate(vertices):
            if a <= b:
                for e in ring.space(a.stratum, b.twist - a.twist).basis:
                    homs.setdefault((u, w), []).append(len(basis))
                    basis.append(BasisTag(u, w, e))

    mult: dict[tuple[int, int], tuple[tuple[int, fmpq], ...]] = {}
    for (u, v), first in homs.items():
        a = vertices[u]
        for w in range(len(vertices)):
            second = homs.get((v, w))
            if not second:
                continue
            target = homs[(u, w)]
            deg = vertices[w].twist - a.twist
            for j in first:
                ej = basis[j].exps
                for i in second:
                    ei = basis[i].exps
                    prod = tuple(x + y for x, y in zip(ej, ei))
                    vec = ring.coords(a.stratum, deg, {prod: fmpq(1)})
                    mult[(i, j)] = tuple((target[p], c) for p, c in enumerate(vec) if c)

    alg = Algebra(poset.n, poset.d, vertices, basis, mult, poset=poset, ring=ring)
    if validate:
        rep = alg.validate()
        if not rep.passed:
            raise AlgebraError(f"algebra audit failed: {rep.as_dict()['details']}")
    return alg


def combinatorial_dim(n: int, d: int) -> int:
    """``Σ_{v <= w} C(j - i + d(a), d(a))`` computed from the poset alone."""
    poset = Poset(n, d)
    total = 0
    for a in poset:
        for b in poset:
            if a <= b:
                for i in range(a.dim + 1):
                    for j in range(i, b.dim + 1):
                        total += comb(j - i + a.dim, a.dim)
    return total


def hom_dim(alg: Algebra, v: int, w: int) -> int:
    return alg.hom_dim(v, w)


def basis_of_hom(alg: Algebra, v: int, w: int) -> list[BasisTag]:
    return alg.basis_of_hom(v, w)


def validate(alg: Algebra) -> dict:
    return alg.validate().as_dict()
