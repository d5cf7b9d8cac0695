"""Ground-truth computations that never touch the algebra.

Bott's formula on projective spaces, the closed-cover Čech complex of the
singular union ``X_0``, simplicial homology of a simplex boundary, and the
stratum-by-stratum formula for ``Ext(E_v, F)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from flint import fmpq_mat

from . import linalg
from .forms import FormRing
from .poset import Poset, Stratum


@dataclass(frozen=True)
class CohomologyTable:
    dims: tuple[tuple[int, int], ...] = ()

    @classmethod
    def of(cls, mapping: dict[int, int]) -> "CohomologyTable":
        for k, v in mapping.items():
            if v < 0:
                raise ValueError("negative dimension")
        return cls(tuple(sorted((k, v) for k, v in mapping.items() if v)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.dims)

    def __getitem__(self, k: int) -> int:
        return self.as_dict().get(k, 0)

    def __eq__(self, other) -> bool:
        if isinstance(other, dict):
            return self.as_dict() == {k: v for k, v in other.items() if v}
        if isinstance(other, CohomologyTable):
            return self.dims == other.dims
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.dims)

    @property
    def max_degree(self) -> int | None:
        return max(self.as_dict()) if self.dims else None

    def vector(self, lo: int, hi: int) -> list[int]:
        d = self.as_dict()
        return [d.get(k, 0) for k in range(lo, hi + 1)]

    def to_json(self) -> dict[str, int]:
        return {str(k): v for k, v in self.dims}


def bott(k: int, j: int) -> CohomologyTable:
    """``H^•(P^k, O(j))``."""
    if k < 0:
        raise ValueError("projective space dimension must be >= 0")
    out = {}
    if j >= 0:
        out[0] = comb(j + k, k)
    if j <= -k - 1:
        out[k] = comb(-j - 1, k)
    return CohomologyTable.of(out)


def _signed_face_sign(big: tuple[int, ...], small: tuple[int, ...]) -> int:
    (extra,) = set(big) - set(small)
    return -1 if big.index(extra) % 2 else 1


def x0_complex(n: int, d: int, t: int) -> tuple[dict[int, int], dict[int, fmpq_mat]]:
    """``J^p = ⊕_{d(γ)=n-p} H^0(P_γ, O(t))`` with signed restriction maps."""
    if t < 0:
        raise ValueError("the closed-cover complex is only used for t >= 0")
    poset = Poset(n, d)
    ring = FormRing(poset)
    levels: dict[int, list[Stratum]] = {}
    for s in poset:
        levels.setdefault(n - s.dim, []).append(s)
    dims = {p: sum(ring.dim(s, t) for s in ss) for p, ss in levels.items()}
    diffs = {}
    for p, ss in levels.items():
        nxt = levels.get(p + 1)
        if not nxt:
            continue
        m = fmpq_mat(dims[p + 1], dims[p])
        co = 0
        for a in ss:
            ro = 0
            for b in nxt:
                if b <= a:
                    block = ring.restrict(a, b, t)
                    sgn = _signed_face_sign(b.indices, a.indices)
                    for i, row in enumerate(block.tolist()):
                        for j, x in enumerate(row):
                            if x:
                                m[ro + i, co + j] = x * sgn
                ro += ring.dim(b, t)
            co += ring.dim(a, t)
        diffs[p] = m
    return dims, diffs


def x0_cohomology(n: int, d: int, t: int) -> CohomologyTable:
    """``H^•(X_0, O(t))`` for the union of the maximal strata, ``t >= 0``."""
    dims, diffs = x0_complex(n, d, t)
    for p in diffs:
        if p + 1 in diffs and not linalg.is_zero(diffs[p + 1] * diffs[p]):
            raise ArithmeticError("closed-cover complex is not a complex")
    ranks = {p: linalg.rank(m) for p, m in diffs.items()}
    return CohomologyTable.of(linalg.cohomology_dims(dims, ranks))


def simplex_boundary_faces(n: int) -> dict[int, list[tuple[int, ...]]]:
    verts = range(n + 2)
    return {k: list(combinations(verts, k + 1)) for k in range(n + 1)}


def simplicial_boundary_homology(n: int) -> CohomologyTable:
    """Homology of the boundary of the ``(n+1)``-simplex (an ``n``-sphere)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    faces = simplex_boundary_faces(n)
    index = {k: {f: i for i, f in enumerate(fs)} for k, fs in faces.items()}
    dims = {k: len(fs) for k, fs in faces.items()}
    ranks = {}
    for k in range(1, n + 1):
        m = fmpq_mat(dims[k - 1], dims[k])
        for j, f in enumerate(faces[k]):
            for pos in range(len(f)):
                g = f[:pos] + f[pos + 1:]
                m[index[k - 1][g], j] = -1 if pos % 2 else 1
        # homological indexing: boundary lowers degree; store rank against the target degree
        ranks[k] = linalg.rank(m)
    out = {}
    for k in range(n + 1):
        h = dims[k] - ranks.get(k, 0) - ranks.get(k + 1, 0)
        if h:
            out[k] = h
    return CohomologyTable.of(out)


def euler_characteristic_of_faces(n: int) -> int:
    return sum((-1) ** k * len(fs) for k, fs in simplex_boundary_faces(n).items())


def sheaf_ext_formula(poset: Poset, stratum: Stratum, twist: int, spec) -> CohomologyTable:
    """``H^•(P_α, F_α(-i))`` for the vertex ``(α, i)`` and a descriptor ``F``.

    Supported descriptors: ``E``/``proj``/``OU`` (a twisted structure sheaf of
    an open star), ``O`` (the structure object twisted), ``sky*`` and ``sky!``.
    """
    kind = spec.kind
    if spec.shift or kind in ("T", "simple"):
        raise ValueError(f"no sheaf-side formula for {spec}")
    a = stratum
    if kind in ("E", "proj", "OU"):
        beta = poset.stratum(spec.indices)
        return bott(a.dim, spec.twist - twist) if a <= beta else CohomologyTable()
    if kind == "O":
        return bott(a.dim, spec.twist - twist)
    beta = poset.stratum(spec.indices)
    base = poset.stratum(spec.point) if spec.point else beta
    if not base <= beta:
        raise ValueError("point must lie on the stratum")
    if kind == "sky*":
        on = a >= beta
    elif kind == "sky!":
        on = a == beta
    else:
        raise ValueError(f"unsupported descriptor {spec}")
    return CohomologyTable.of({0: 1}) if on else CohomologyTable()
