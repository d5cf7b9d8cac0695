"""Graded coordinate rings of the strata.

The hyperplanes are ``L_i = (1, i, i^2, ..., i^{n+1})`` (Vandermonde, hence in
general position).  For a stratum ``a`` the ring of ``P_a`` is the ambient
polynomial ring modulo the linear forms ``L_i, i in a``.  We eliminate the
pivot variables of the reduced row echelon form of those forms; what is left
is a polynomial ring in the free variables, and ``W_m(a)`` has the degree-m
monomials in the free variables as its basis.  Every map (restriction,
multiplication, evaluation) is induced from ambient polynomials, so the maps
are automatically compatible with each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb

from flint import fmpq, fmpq_mat

from . import linalg
from .poset import Poset, Stratum

Exps = tuple[int, ...]
Poly = dict[Exps, fmpq]


class GeneralPositionError(ArithmeticError):
    pass


@dataclass(frozen=True)
class LinearForm:
    coefficients: tuple[fmpq, ...]

    def __call__(self, point) -> fmpq:
        return sum((c * x for c, x in zip(self.coefficients, point)), fmpq(0))


@dataclass(frozen=True)
class FormSpace:
    stratum: Stratum
    degree: int
    basis: tuple[Exps, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class RationalPoint:
    stratum: Stratum
    lift: tuple[fmpq, ...]


def vandermonde_forms(n: int, d: int) -> list[LinearForm]:
    if n < 1 or d < 1:
        raise ValueError("need n, d >= 1")
    return [LinearForm(tuple(fmpq(t) ** k for k in range(n + 2))) for t in range(1, d + 1)]


def _mono_mul(a: Exps, b: Exps) -> Exps:
    return tuple(x + y for x, y in zip(a, b))


def _poly_mul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for ea, ca in p.items():
        for eb, cb in q.items():
            e = _mono_mul(ea, eb)
            v = out.get(e, 0) + ca * cb
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


class FormRing:
    """All graded pieces ``W_m(a)`` of one (n, d) configuration."""

    def __init__(self, poset: Poset):
        self.poset = poset
        self.n = poset.n
        self.nvars = poset.n + 2
        self.forms = vandermonde_forms(poset.n, poset.d)
        self._elim = {}
        for s in poset:
            self._elim[s] = self._eliminate(s)

    def _eliminate(self, s: Stratum):
        rows = [list(self.forms[i - 1].coefficients) for i in s.indices]
        m = linalg.matrix(rows)
        r, pivots = linalg.rref(m)
        if len(pivots) != len(s.indices):
            raise GeneralPositionError(f"forms of stratum {s} are dependent")
        free = [j for j in range(self.nvars) if j not in pivots]
        if len(free) != s.dim + 1:
            raise GeneralPositionError(f"stratum {s} has wrong dimension")
        images: list[Poly] = []
        for j in range(self.nvars):
            if j in free:
                images.append({self._unit(j): fmpq(1)})
            else:
                row = pivots.index(j)
                images.append({self._unit(f): -r[row, f] for f in free if r[row, f]})
        return tuple(pivots), tuple(free), tuple(images), r

    def _unit(self, j: int) -> Exps:
        e = [0] * self.nvars
        e[j] = 1
        return tuple(e)

    def free_variables(self, s: Stratum) -> tuple[int, ...]:
        return self._elim[s][1]

    # --- graded pieces -------------------------------------------------

    @lru_cache(maxsize=None)
    def space(self, s: Stratum, m: int) -> FormSpace:
        if m < 0:
            return FormSpace(s, m, ())
        free = self._elim[s][1]
        basis = []
        for combo in combinations_with_replacement(free, m):
            e = [0] * self.nvars
            for j in combo:
                e[j] += 1
            basis.append(tuple(e))
        if len(basis) != comb(m + s.dim, s.dim):
            raise GeneralPositionError(f"dim W_{m}({s}) = {len(basis)}, expected {comb(m + s.dim, s.dim)}")
        return FormSpace(s, m, tuple(basis))

    @lru_cache(maxsize=None)
    def _index(self, s: Stratum, m: int) -> dict[Exps, int]:
        return {e: i for i, e in enumerate(self.space(s, m).basis)}

    def dim(self, s: Stratum, m: int) -> int:
        return comb(m + s.dim, s.dim) if m >= 0 else 0

    @lru_cache(maxsize=None)
    def _nf_monomial(self, s: Stratum, e: Exps) -> tuple[tuple[Exps, fmpq], ...]:
        images = self._elim[s][2]
        out: Poly = {tuple([0] * self.nvars): fmpq(1)}
        for j, k in enumerate(e):
            for _ in range(k):
                out = _poly_mul(out, images[j])
        return tuple(out.items())

    def normal_form(self, s: Stratum, poly: Poly) -> Poly:
        out: Poly = {}
        for e, c in poly.items():
            for e2, c2 in self._nf_monomial(s, e):
                v = out.get(e2, 0) + c * c2
                if v:
                    out[e2] = v
                else:
                    out.pop(e2, None)
        return out

    def coords(self, s: Stratum, m: int, poly: Poly) -> list[fmpq]:
        idx = self._index(s, m)
        vec = [fmpq(0)] * len(idx)
        for e, c in self.normal_form(s, poly).items():
            if sum(e) != m:
                raise ValueError("polynomial is not homogeneous of the requested degree")
            vec[idx[e]] += c
        return vec

    def as_poly(self, s: Stratum, m: int, vec) -> Poly:
        return {e: fmpq(c) for e, c in zip(self.space(s, m).basis, vec) if c}

    def ambient_poly(self, coeffs) -> Poly:
        """A linear form given by its ambient coefficient vector."""
        return {self._unit(j): linalg.as_q(c) for j, c in enumerate(coeffs) if c}

    # --- maps ----------------------------------------------------------

    @lru_cache(maxsize=None)
    def restrict(self, src: Stratum, dst: Stratum, m: int) -> fmpq_mat:
        """Matrix of the surjection ``W_m(src) -> W_m(dst)``, ``dst <= src``."""
        if not dst <= src:
            raise ValueError(f"cannot restrict from {src} to {dst}: not a substratum")
        sp = self.space(src, m)
        cols = [self.coords(dst, m, {e: fmpq(1)}) for e in sp.basis]
        r = self.dim(dst, m)
        return fmpq_mat(r, len(cols), [cols[j][i] for i in range(r) for j in range(len(cols))])

    def multiply(self, s: Stratum, ma: int, a, mb: int, b) -> list[fmpq]:
        pa = self.as_poly(s, ma, a)
        pb = self.as_poly(s, mb, b)
        return self.coords(s, ma + mb, _poly_mul(pa, pb))

    @lru_cache(maxsize=None)
    def monomial_mult(self, s: Stratum, ma: int, ia: int, mx: int) -> fmpq_mat:
        """Multiplication by the ``ia``-th basis monomial of ``W_ma(s)`` as a
        matrix ``W_mx(s) -> W_{ma+mx}(s)`` (a 0/1 matrix)."""
        ea = self.space(s, ma).basis[ia]
        src = self.space(s, mx)
        idx = self._index(s, ma + mx)
        out = fmpq_mat(len(idx), src.dim)
        for j, e in enumerate(src.basis):
            out[idx[_mono_mul(ea, e)], j] = 1
        return out

    def mult_matrix(self, s: Stratum, ma: int, a, mx: int) -> fmpq_mat:
        out = fmpq_mat(self.dim(s, ma + mx), self.dim(s, mx))
        for i, c in enumerate(a):
            if c:
                out += self.monomial_mult(s, ma, i, mx) * linalg.as_q(c)
        return out

    # --- points --------------------------------------------------------

    @lru_cache(maxsize=None)
    def point_on_stratum(self, s: Stratum) -> RationalPoint:
        """Free coordinates set to 1, 2, 3, ... (in order), pivots solved."""
        pivots, free, _, r = self._elim[s]
        x = [fmpq(0)] * self.nvars
        for k, f in enumerate(free):
            x[f] = fmpq(k + 1)
        for row, p in enumerate(pivots):
            x[p] = -sum((r[row, f] * x[f] for f in free), fmpq(0))
        return RationalPoint(s, tuple(x))

    def lies_on(self, p: RationalPoint, s: Stratum) -> bool:
        return all(self.forms[i - 1](p.lift) == 0 for i in s.indices)

    def evaluate(self, s: Stratum, m: int, vec, p: RationalPoint) -> fmpq:
        if not self.lies_on(p, s):
            raise ValueError(f"point {p.lift} does not lie on stratum {s}")
        total = fmpq(0)
        for e, c in zip(self.space(s, m).basis, vec):
            if c:
                term = linalg.as_q(c)
                for x, k in zip(p.lift, e):
                    if k:
                        term *= x**k
                total += term
        return total

    def eval_row(self, s: Stratum, m: int, p: RationalPoint) -> list[fmpq]:
        """Evaluation at ``p`` as a row vector on ``W_m(s)``."""
        if not self.lies_on(p, s):
            raise ValueError(f"point {p.lift} does not lie on stratum {s}")
        row = []
        for e in self.space(s, m).basis:
            t = fmpq(1)
            for x, k in zip(p.lift, e):
                if k:
                    t *= x**k
            row.append(t)
        return row


def form_space(ring: FormRing, s: Stratum, m: int) -> FormSpace:
    return ring.space(s, m)
