"""Exact linear algebra over Q.

Thin helpers around :class:`flint.fmpq_mat`.  Matrices act on column vectors;
a matrix of shape ``(r, c)`` maps ``Q^c -> Q^r``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from flint import fmpq, fmpq_mat

Q = fmpq

__all__ = [
    "Q",
    "as_q",
    "zeros",
    "identity",
    "matrix",
    "column",
    "hstack",
    "vstack",
    "block_diag",
    "rank",
    "rref",
    "nullspace",
    "solve",
    "left_inverse",
    "complement_columns",
    "is_zero",
    "entries",
    "columns",
    "col",
    "submatrix",
    "cohomology_dims",
]


def as_q(x) -> fmpq:
    if isinstance(x, fmpq):
        return x
    if isinstance(x, Fraction):
        return fmpq(x.numerator, x.denominator)
    if isinstance(x, str):
        return fmpq(x)
    return fmpq(x)


def zeros(r: int, c: int) -> fmpq_mat:
    return fmpq_mat(r, c)


def identity(n: int) -> fmpq_mat:
    m = fmpq_mat(n, n)
    for i in range(n):
        m[i, i] = 1
    return m


def matrix(rows: Sequence[Sequence], ncols: int | None = None) -> fmpq_mat:
    r = len(rows)
    c = len(rows[0]) if r else (ncols or 0)
    flat = [as_q(x) for row in rows for x in row]
    return fmpq_mat(r, c, flat)


def column(vec: Sequence) -> fmpq_mat:
    return fmpq_mat(len(vec), 1, [as_q(x) for x in vec])


def entries(m: fmpq_mat) -> list[list[fmpq]]:
    return m.tolist()


def columns(m: fmpq_mat) -> list[list[fmpq]]:
    rows = m.tolist()
    return [[rows[i][j] for i in range(m.nrows())] for j in range(m.ncols())]


def col(m: fmpq_mat, j: int) -> fmpq_mat:
    return fmpq_mat(m.nrows(), 1, [m[i, j] for i in range(m.nrows())])


def submatrix(m: fmpq_mat, rows: Sequence[int], cols: Sequence[int]) -> fmpq_mat:
    return fmpq_mat(len(rows), len(cols), [m[i, j] for i in rows for j in cols])


def hstack(mats: Sequence[fmpq_mat], nrows: int | None = None) -> fmpq_mat:
    if not mats:
        return fmpq_mat(nrows or 0, 0)
    r = mats[0].nrows()
    if any(m.nrows() != r for m in mats):
        raise ValueError("hstack: row mismatch")
    total = sum(m.ncols() for m in mats)
    parts = [m.tolist() for m in mats]
    flat = [x for i in range(r) for p in parts for x in p[i]]
    return fmpq_mat(r, total, flat)


def vstack(mats: Sequence[fmpq_mat], ncols: int | None = None) -> fmpq_mat:
    if not mats:
        return fmpq_mat(0, ncols or 0)
    c = mats[0].ncols()
    if any(m.ncols() != c for m in mats):
        raise ValueError("vstack: column mismatch")
    total = sum(m.nrows() for m in mats)
    return fmpq_mat(total, c, [x for m in mats for x in m.entries()])


def block_diag(mats: Sequence[fmpq_mat]) -> fmpq_mat:
    r = sum(m.nrows() for m in mats)
    c = sum(m.ncols() for m in mats)
    out = fmpq_mat(r, c)
    ro = co = 0
    for m in mats:
        for i, row in enumerate(m.tolist()):
            for j, v in enumerate(row):
                if v:
                    out[ro + i, co + j] = v
        ro += m.nrows()
        co += m.ncols()
    return out


def is_zero(m: fmpq_mat) -> bool:
    return all(x == 0 for x in m.entries())


def rank(m: fmpq_mat) -> int:
    if m.nrows() == 0 or m.ncols() == 0:
        return 0
    return m.rank()


def rref(m: fmpq_mat) -> tuple[fmpq_mat, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    if m.nrows() == 0 or m.ncols() == 0:
        return m, []
    r, rk = m.rref()
    pivots = []
    j = 0
    for i in range(rk):
        while r[i, j] == 0:
            j += 1
        pivots.append(j)
        j += 1
    return r, pivots


def nullspace(m: fmpq_mat) -> fmpq_mat:
    """Columns form a basis of ``ker m`` (echelon-normalised, deterministic)."""
    c = m.ncols()
    r, pivots = rref(m)
    free = [j for j in range(c) if j not in set(pivots)]
    out = fmpq_mat(c, len(free))
    for k, f in enumerate(free):
        out[f, k] = 1
        for i, p in enumerate(pivots):
            v = r[i, f]
            if v:
                out[p, k] = -v
    return out


def solve(a: fmpq_mat, b: fmpq_mat) -> fmpq_mat | None:
    """Some ``x`` with ``a x = b``, or ``None`` if the system is inconsistent."""
    rows, cols = a.nrows(), a.ncols()
    k = b.ncols()
    if rows == 0:
        return fmpq_mat(cols, k)
    aug = hstack([a, b])
    r, pivots = rref(aug)
    if any(p >= cols for p in pivots):
        return None
    x = fmpq_mat(cols, k)
    for i, p in enumerate(pivots):
        for j in range(k):
            v = r[i, cols + j]
            if v:
                x[p, j] = v
    return x


def left_inverse(b: fmpq_mat) -> fmpq_mat:
    """``L`` with ``L b = 1`` for ``b`` of full column rank."""
    if b.ncols() == 0:
        return fmpq_mat(0, b.nrows())
    bt = b.transpose()
    return (bt * b).inv() * bt


def complement_columns(span: fmpq_mat, ambient: fmpq_mat) -> list[int]:
    """Indices ``j`` of columns of ``ambient`` that extend a basis of
    ``colspace(span)`` to a basis of ``colspace(span) + colspace(ambient)``.

    Greedy in column order, hence deterministic.
    """
    both = hstack([span, ambient], nrows=ambient.nrows())
    _, pivots = rref(both)
    s = span.ncols()
    return [p - s for p in pivots if p >= s]


def cohomology_dims(dims: dict[int, int], ranks: dict[int, int]) -> dict[int, int]:
    """``dim H^k = dim C^k - rank d^k - rank d^{k-1}``; zero entries dropped."""
    out = {}
    for k, dk in dims.items():
        h = dk - ranks.get(k, 0) - ranks.get(k - 1, 0)
        if h < 0:
            raise ArithmeticError("negative cohomology dimension; d^2 != 0?")
        if h:
            out[k] = h
    return out


def from_flat(r: int, c: int, flat: Iterable) -> fmpq_mat:
    return fmpq_mat(r, c, [as_q(x) for x in flat])
