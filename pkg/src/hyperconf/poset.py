"""Intersection poset of a hyperplane configuration scheme of type (n, d).

Strata are the nonempty subsets of ``{1..d}`` of size at most ``n + 1``; the
stratum ``a`` is the linear space cut out by the hyperplanes indexed by ``a``
inside ``P^{n+1}``, of dimension ``n + 1 - |a|``.

Order convention: ``a <= b`` iff ``indices(a) ⊇ indices(b)``, i.e. the smaller
stratum is the deeper intersection and ``P_a`` embeds in ``P_b``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from math import comb


@dataclass(frozen=True)
class Stratum:
    indices: tuple[int, ...]
    dim: int

    @property
    def mask(self) -> int:
        m = 0
        for i in self.indices:
            m |= 1 << (i - 1)
        return m

    def __le__(self, other: "Stratum") -> bool:
        return set(self.indices) >= set(other.indices)

    def __lt__(self, other: "Stratum") -> bool:
        return self <= other and self != other

    def __ge__(self, other: "Stratum") -> bool:
        return other <= self

    def __gt__(self, other: "Stratum") -> bool:
        return other < self

    @property
    def label(self) -> str:
        return ",".join(str(i) for i in self.indices)

    def __str__(self) -> str:
        return "{" + self.label + "}"


@dataclass(frozen=True)
class PosetSubset:
    poset: "Poset"
    members: frozenset[Stratum]

    @property
    def kind(self) -> str:
        if self.poset.is_open(self):
            return "open"
        if self.poset.is_closed(self):
            return "closed"
        return "arbitrary"

    def __contains__(self, s: Stratum) -> bool:
        return s in self.members

    def __iter__(self):
        return iter(self.poset.sort(self.members))

    def __len__(self) -> int:
        return len(self.members)


class Poset:
    """The poset S of strata, enumerated by cardinality descending, then lex."""

    def __init__(self, n: int, d: int):
        if n < 1 or d < 1:
            raise ValueError(f"need n >= 1 and d >= 1, got n={n}, d={d}")
        self.n = n
        self.d = d
        top = min(d, n + 1)
        elems = []
        for k in range(top, 0, -1):
            for c in combinations(range(1, d + 1), k):
                elems.append(Stratum(c, n + 1 - k))
        self.elements: list[Stratum] = elems
        self.index = {s: i for i, s in enumerate(elems)}

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self) -> str:
        return f"Poset(n={self.n}, d={self.d}, |S|={len(self)})"

    @staticmethod
    def expected_size(n: int, d: int) -> int:
        return sum(comb(d, k) for k in range(1, min(d, n + 1) + 1))

    def stratum(self, indices) -> Stratum:
        key = tuple(sorted(set(indices)))
        for s in self.elements:
            if s.indices == key:
                return s
        raise KeyError(f"no stratum with indices {key} in {self!r}")

    def sort(self, strata) -> list[Stratum]:
        return sorted(strata, key=self.index.__getitem__)

    def leq(self, a: Stratum, b: Stratum) -> bool:
        return a <= b

    def subset(self, members) -> PosetSubset:
        members = frozenset(members)
        unknown = members - set(self.elements)
        if unknown:
            raise ValueError(f"not strata of this poset: {sorted(map(str, unknown))}")
        return PosetSubset(self, members)

    def down_set(self, a: Stratum) -> PosetSubset:
        return self.subset(b for b in self.elements if b <= a)

    def up_set(self, a: Stratum) -> PosetSubset:
        return self.subset(g for g in self.elements if g >= a)

    def is_open(self, s: PosetSubset) -> bool:
        return all(b in s.members for a in s.members for b in self.elements if b <= a)

    def is_closed(self, s: PosetSubset) -> bool:
        return all(g in s.members for a in s.members for g in self.elements if g >= a)

    def complement(self, s: PosetSubset) -> PosetSubset:
        return self.subset(set(self.elements) - s.members)

    def down_closure(self, strata) -> PosetSubset:
        strata = list(strata)
        return self.subset(b for b in self.elements if any(b <= a for a in strata))

    def maximal_strata(self) -> list[Stratum]:
        return [s for s in self.elements if s.dim == self.n]

    def of_dim(self, k: int) -> list[Stratum]:
        return [s for s in self.elements if s.dim == k]

    def dim_at_least(self, k: int) -> PosetSubset:
        return self.subset(s for s in self.elements if s.dim >= k)

    @cached_property
    def order_pairs(self) -> list[tuple[int, int]]:
        return [
            (i, j)
            for i, a in enumerate(self.elements)
            for j, b in enumerate(self.elements)
            if a <= b
        ]


def build_poset(n: int, d: int) -> Poset:
    return Poset(n, d)
