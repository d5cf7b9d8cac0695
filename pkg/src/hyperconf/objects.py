"""Standard objects, as modules and as projective complexes.

Descriptor grammar (whitespace ignored)::

    spec  := base ("[" int "]")?
    base  := "E(" idx ";" int ")" | "proj(" idx ";" int ")" | "simple(" idx ";" int ")"
           | "O(" int ")" | "OU(" idx ";" int ")"
           | "sky!(" idx ("@" idx)? ")" | "sky*(" idx ("@" idx)? ")"
           | "T(" spec ")"
    idx   := int ("," int)*

``sky*(1@1,2)`` is the costandard skyscraper on stratum ``{1}`` at the chosen
point of the deeper stratum ``{1,2}``; without ``@`` the point is chosen on the
stratum itself.  ``T(X)`` is the twist of ``X`` by the structure object ``O(0)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from flint import fmpq_mat

from . import complexes as cx
from . import linalg
from . import repmod as rm
from .complexes import ChainMap, ModComplex, ProjComplex
from .endalgebra import Algebra
from .forms import RationalPoint
from .poset import Stratum
from .repmod import Representation, RepMorphism


class SpecError(ValueError):
    pass


@dataclass(frozen=True)
class ObjectSpec:
    kind: str
    indices: tuple[int, ...] = ()
    twist: int = 0
    point: tuple[int, ...] | None = None
    shift: int = 0
    inner: "ObjectSpec | None" = None

    def __str__(self) -> str:
        idx = ",".join(map(str, self.indices))
        if self.kind in ("E", "proj", "simple", "OU"):
            base = f"{self.kind}({idx};{self.twist})"
        elif self.kind == "O":
            base = f"O({self.twist})"
        elif self.kind in ("sky!", "sky*"):
            at = "@" + ",".join(map(str, self.point)) if self.point else ""
            base = f"{self.kind}({idx}{at})"
        else:
            base = f"T({self.inner})"
        return base + (f"[{self.shift}]" if self.shift else "")

    def with_point(self, point: tuple[int, ...]) -> "ObjectSpec":
        return ObjectSpec(self.kind, self.indices, self.twist, tuple(point), self.shift, self.inner)


_IDX = r"\d+(?:,\d+)*"
_INT = r"-?\d+"
_PATTERNS = [
    ("E", re.compile(rf"E\(({_IDX});({_INT})\)")),
    ("proj", re.compile(rf"proj\(({_IDX});({_INT})\)")),
    ("simple", re.compile(rf"simple\(({_IDX});({_INT})\)")),
    ("OU", re.compile(rf"OU\(({_IDX});({_INT})\)")),
    ("O", re.compile(rf"O\(({_INT})\)")),
    ("sky!", re.compile(rf"sky!\(({_IDX})(?:@({_IDX}))?\)")),
    ("sky*", re.compile(rf"sky\*\(({_IDX})(?:@({_IDX}))?\)")),
]


def _indices(text: str) -> tuple[int, ...]:
    return tuple(sorted({int(x) for x in text.split(",")}))


def parse_spec(text: str) -> ObjectSpec:
    s = re.sub(r"\s+", "", text)
    shift = 0
    m = re.fullmatch(rf"(.*)\[({_INT})\]", s)
    if m:
        s, shift = m.group(1), int(m.group(2))
    if s.startswith("T(") and s.endswith(")"):
        return ObjectSpec("T", shift=shift, inner=parse_spec(s[2:-1]))
    for kind, pat in _PATTERNS:
        m = pat.fullmatch(s)
        if not m:
            continue
        if kind == "O":
            return ObjectSpec("O", twist=int(m.group(1)), shift=shift)
        if kind.startswith("sky"):
            point = _indices(m.group(2)) if m.group(2) else None
            return ObjectSpec(kind, _indices(m.group(1)), point=point, shift=shift)
        return ObjectSpec(kind, _indices(m.group(1)), int(m.group(2)), shift=shift)
    raise SpecError(f"cannot parse object descriptor {text!r}")


# --- small helpers -------------------------------------------------------------

def _identity_block_map(src: Representation, dst: Representation, blocks_src: list[list[int]],
                        blocks_dst: list[list[int]], pairs: list[tuple[int, int, int]]) -> RepMorphism:
    """Sum of signed identity maps between matching summands of two direct sums.

    ``blocks_*[u]`` are per-summand dimensions at vertex ``u``; ``pairs`` lists
    ``(summand_src, summand_dst, sign)``.
    """
    maps = []
    for u in range(src.alg.nvertices):
        m = fmpq_mat(dst.dims[u], src.dims[u])
        so = [sum(blocks_src[u][:k]) for k in range(len(blocks_src[u]))]
        do = [sum(blocks_dst[u][:k]) for k in range(len(blocks_dst[u]))]
        for a, b, sgn in pairs:
            size = blocks_src[u][a]
            if size and blocks_dst[u][b]:
                if blocks_dst[u][b] != size:
                    raise ValueError("identity between spaces of different dimension")
                for r in range(size):
                    m[do[b] + r, so[a] + r] = sgn
        maps.append(m)
    return RepMorphism(src, dst, maps)


def sum_chain_maps(parts: list[ChainMap], source: ProjComplex, target_modules: list[Representation],
                   target, degree_shift: int = 0) -> ChainMap:
    """Block-diagonal combination of maps ``P_a -> M_a`` into ``⊕P_a -> ⊕M_a``
    (summands of ``source`` in each degree are the concatenation of the parts)."""
    comps: dict[int, list[fmpq_mat]] = {}
    for a, f in enumerate(parts):
        for i in f.source.degrees:
            for s, v in enumerate(f.source.summands(i)):
                pieces = []
                for b, mod in enumerate(target_modules):
                    if b == a:
                        pieces.append(f.column(i, s))
                    else:
                        pieces.append(fmpq_mat(mod.dims[v], 1))
                comps.setdefault(i + degree_shift, []).append(linalg.vstack(pieces, ncols=1))
    return ChainMap(source, target, 0, comps)


# --- the catalog -----------------------------------------------------------------

class Catalog:
    """Builds (and caches) the standard objects over one algebra."""

    def __init__(self, alg: Algebra):
        self.alg = alg
        self.poset = alg.poset
        self.ring = alg.ring
        self._cache: dict = {}
        self._corners: dict = {}

    def _memo(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    def stratum(self, indices) -> Stratum:
        try:
            return self.poset.stratum(indices)
        except KeyError as exc:
            raise SpecError(str(exc)) from None

    def vertex(self, indices, twist: int) -> int:
        s = self.stratum(indices)
        if not 0 <= twist <= s.dim:
            raise SpecError(f"twist {twist} outside the window [0, {s.dim}] of stratum {s}")
        return self.alg.vertex(s, twist)

    # --- honest modules ---------------------------------------------------------

    def line_bundle_module(self, t: int, support: Stratum | None = None) -> Representation:
        """``θ(O(t))`` on ``U_support`` (everything when ``support`` is None), ``t >= 0``."""
        key = ("lb", t, support)

        def build():
            if t < 0:
                raise SpecError("honest line-bundle modules need t >= 0")
            alg, ring = self.alg, self.ring
            inside = [support is None or x.stratum <= support for x in alg.vertices]
            dims = [ring.dim(x.stratum, t - x.twist) if inside[v] else 0 for v, x in enumerate(alg.vertices)]
            action = {}
            for k, tag in enumerate(alg.basis):
                if not (dims[tag.src] and dims[tag.dst]):
                    continue
                a, b = alg.vertices[tag.src], alg.vertices[tag.dst]
                deg = b.twist - a.twist
                pos = ring._index(a.stratum, deg)[tag.exps]
                mult = ring.monomial_mult(a.stratum, deg, pos, t - b.twist)
                action[k] = mult * ring.restrict(b.stratum, a.stratum, t - b.twist)
            return Representation(alg, dims, action)

        return self._memo(key, build)

    def point(self, indices) -> RationalPoint:
        return self.ring.point_on_stratum(self.stratum(indices))

    def _skyscraper(self, indices, point_indices, star: bool) -> Representation:
        beta = self.stratum(indices)
        base = self.stratum(point_indices) if point_indices else beta
        if not base <= beta:
            raise SpecError(f"point stratum {base} does not lie in {beta}")
        key = ("sky*" if star else "sky!", beta, base)

        def build():
            alg, ring = self.alg, self.ring
            p = ring.point_on_stratum(base)
            if star:
                inside = [x.stratum >= beta for x in alg.vertices]
            else:
                inside = [x.stratum == beta for x in alg.vertices]
            dims = [1 if f else 0 for f in inside]
            action = {}
            for k, tag in enumerate(alg.basis):
                if inside[tag.src] and inside[tag.dst]:
                    a, b = alg.vertices[tag.src], alg.vertices[tag.dst]
                    deg = b.twist - a.twist
                    pos = ring._index(a.stratum, deg)[tag.exps]
                    action[k] = fmpq_mat(1, 1, [ring.eval_row(a.stratum, deg, p)[pos]])
            return Representation(alg, dims, action)

        return self._memo(key, build)

    def sky_star(self, indices, point_indices=None) -> Representation:
        return self._skyscraper(indices, point_indices, True)

    def sky_shriek(self, indices, point_indices=None) -> Representation:
        return self._skyscraper(indices, point_indices, False)

    # --- windows ------------------------------------------------------------------

    def _corner(self, gamma: Stratum):
        if gamma not in self._corners:
            ids = [self.alg.vertex(gamma, i) for i in range(gamma.dim + 1)]
            self._corners[gamma] = self.alg.corner(ids)
        return self._corners[gamma]

    def window_module(self, gamma: Stratum, t: int) -> Representation:
        """The module over the corner algebra of ``γ`` whose resolution gives the window."""
        sub, _ = self._corner(gamma)
        ring, k = self.ring, gamma.dim
        if t >= 0:
            degs = [t - i for i in range(k + 1)]
        else:
            degs = [i - t - k - 1 for i in range(k + 1)]
        dims = [ring.dim(gamma, m) for m in degs]
        action = {}
        for b, tag in enumerate(sub.basis):
            i, j = tag.src, tag.dst
            if not (dims[i] and dims[j]):
                continue
            pos = ring._index(gamma, j - i)[tag.exps]
            if t >= 0:
                action[b] = ring.monomial_mult(gamma, j - i, pos, degs[j])
            else:
                action[b] = ring.monomial_mult(gamma, j - i, pos, degs[i]).transpose()
        return Representation(sub, dims, action)

    def koszul_window(self, gamma_indices, t: int, with_map: bool = False):
        """Complex of ``P_{(γ,i)}``, ``0 <= i <= d(γ)``, representing ``θ(O_{U_γ}(t))``.

        With ``with_map`` (only for ``t >= 0``) also the quasi-isomorphism onto
        the honest module :meth:`line_bundle_module`.
        """
        gamma = gamma_indices if isinstance(gamma_indices, Stratum) else self.stratum(gamma_indices)
        key = ("window", gamma, t)

        def build():
            sub, ids = self._corner(gamma)
            res = rm.min_proj_resolution(self.window_module(gamma, t))
            terms = {-k: [ids[v] for v in term] for k, term in enumerate(res.terms) if term}
            diffs = {-k: res.diffs[k] for k in range(1, len(res.terms)) if res.terms[k]}
            p = ProjComplex(self.alg, terms, diffs, check=False)
            if t < 0:
                return cx.shift(p, -gamma.dim), None
            target = ModComplex.concentrated(self.line_bundle_module(t, gamma), 0)
            aug = ChainMap(p, target, 0, {0: list(res.augmentation)})
            return p, aug

        p, aug = self._memo(key, build)
        if with_map:
            if aug is None:
                raise SpecError("no honest module for negative twists")
            return p, aug
        return p

    # --- Čech objects ---------------------------------------------------------------

    def cech_module_complex(self, t: int) -> tuple[ModComplex, dict[int, list[Stratum]]]:
        """Module complex ``⊕_{d(γ)=j+n} θ(O_{U_γ}(t))`` in degree ``j`` with signed inclusions."""
        if t < 0:
            raise SpecError("Čech objects need t >= 0")
        key = ("cech-mod", t)

        def build():
            n = self.poset.n
            groups: dict[int, list[Stratum]] = {}
            for s in self.poset:
                groups.setdefault(s.dim - n, []).append(s)
            mods, maps = {}, {}
            parts = {j: [self.line_bundle_module(t, g) for g in gs] for j, gs in groups.items()}
            for j, gs in groups.items():
                mods[j] = rm.direct_sum(parts[j], self.alg)
            for j, gs in groups.items():
                if j + 1 not in groups:
                    continue
                targets = groups[j + 1]
                pairs = []
                for a, g in enumerate(gs):
                    for b, h in enumerate(targets):
                        if g <= h:
                            (removed,) = set(g.indices) - set(h.indices)
                            pairs.append((a, b, -1 if g.indices.index(removed) % 2 else 1))
                bs = [[m.dims[u] for m in parts[j]] for u in range(self.alg.nvertices)]
                bd = [[m.dims[u] for m in parts[j + 1]] for u in range(self.alg.nvertices)]
                maps[j] = _identity_block_map(mods[j], mods[j + 1], bs, bd, pairs)
            return ModComplex(self.alg, mods, maps), groups

        return self._memo(key, build)

    def cech_object(self, t: int, with_map: bool = False):
        key = ("cech", t)

        def build():
            c, groups = self.cech_module_complex(t)
            resolutions = {}
            for j, gs in groups.items():
                wins = [self.koszul_window(g, t, with_map=True) for g in gs]
                src = cx.direct_sum([w for w, _ in wins], self.alg)
                mods = [self.line_bundle_module(t, g) for g in gs]
                tgt = ModComplex.concentrated(c.module(j), 0)
                aug = sum_chain_maps([a for _, a in wins], src, mods, tgt)
                resolutions[j] = (src, aug)
            return cx.resolve_complex(c, resolutions)

        p, q = self._memo(key, build)
        return (p, q) if with_map else p

    def localize_line_bundle(self, i: int) -> ProjComplex:
        if i < 0:
            raise SpecError("localization is only provided for non-negative twists")
        return self.cech_object(i)

    def structure_object(self) -> ProjComplex:
        return self.cech_object(0)

    # --- costandard sequence -----------------------------------------------------------

    def costandard_resolution(self, beta_indices, point_indices=None) -> ModComplex:
        """``0 -> sky!(β) -> sky*(β) -> ⊕ sky*(γ) -> ... -> ⊕_{d(δ)=n} sky*(δ) -> 0``.

        ``sky!(β)`` sits in degree -1; the complex is exact iff the sequence is.
        """
        beta = self.stratum(beta_indices)
        pt = tuple(point_indices) if point_indices else beta.indices
        key = ("costd", beta, pt)

        def build():
            levels: dict[int, list[Stratum]] = {}
            for g in self.poset:
                if g >= beta:
                    levels.setdefault(g.dim - beta.dim, []).append(g)
            mods = {-1: self.sky_shriek(beta.indices, pt)}
            parts = {}
            for j, gs in levels.items():
                parts[j] = [self.sky_star(g.indices, pt) for g in gs]
                mods[j] = rm.direct_sum(parts[j], self.alg)
            V = self.alg.nvertices
            maps = {}
            maps[-1] = _identity_block_map(mods[-1], mods[0], [[mods[-1].dims[u]] for u in range(V)],
                                           [[m.dims[u] for m in parts[0]] for u in range(V)], [(0, 0, 1)])
            for j, gs in levels.items():
                if j + 1 not in levels:
                    continue
                pairs = []
                for a, g in enumerate(gs):
                    for b, h in enumerate(levels[j + 1]):
                        if g <= h:
                            (removed,) = set(g.indices) - set(h.indices)
                            pairs.append((a, b, -1 if g.indices.index(removed) % 2 else 1))
                maps[j] = _identity_block_map(mods[j], mods[j + 1],
                                              [[m.dims[u] for m in parts[j]] for u in range(V)],
                                              [[m.dims[u] for m in parts[j + 1]] for u in range(V)], pairs)
            return ModComplex(self.alg, mods, maps)

        return self._memo(key, build)

    # --- descriptors ------------------------------------------------------------------

    def module_of(self, spec: ObjectSpec) -> Representation | None:
        """The honest module of a descriptor, or None if it is only a complex."""
        if spec.shift or spec.kind == "T":
            return None
        if spec.kind in ("E", "proj"):
            return rm.projective(self.alg, self.vertex(spec.indices, spec.twist))
        if spec.kind == "simple":
            return rm.simple(self.alg, self.vertex(spec.indices, spec.twist))
        if spec.kind == "sky!":
            return self.sky_shriek(spec.indices, spec.point)
        if spec.kind == "sky*":
            return self.sky_star(spec.indices, spec.point)
        if spec.kind == "OU" and spec.twist >= 0:
            return self.line_bundle_module(spec.twist, self.stratum(spec.indices))
        if spec.kind == "O" and spec.twist >= 0:
            return self.line_bundle_module(spec.twist)
        return None

    def resolve(self, spec: ObjectSpec | str) -> ProjComplex:
        if isinstance(spec, str):
            spec = parse_spec(spec)
        key = ("spec", spec)

        def build():
            base = self._resolve_base(spec)
            return cx.shift(base, spec.shift) if spec.shift else base

        return self._memo(key, build)

    def _resolve_base(self, spec: ObjectSpec) -> ProjComplex:
        kind = spec.kind
        if kind in ("E", "proj"):
            v = self.vertex(spec.indices, spec.twist)
            return ProjComplex(self.alg, {0: [v]})
        if kind == "OU":
            return self.koszul_window(spec.indices, spec.twist)
        if kind == "O":
            if spec.twist < 0:
                raise SpecError("O(t) is only supported for t >= 0")
            return self.cech_object(spec.twist)
        if kind == "T":
            inner = self.resolve(spec.inner)
            return cx.twist_functor(self.structure_object(), inner)[0]
        base = ObjectSpec(kind, spec.indices, spec.twist, spec.point)
        return cx.resolve_module(self.module_of(base))


def standard_test_set(cat: Catalog) -> list[str]:
    """Generators, negative twists of the opens and the standard skyscrapers."""
    out = []
    poset = cat.poset
    for s in poset:
        for i in range(s.dim + 1):
            out.append(f"E({s.label};{i})")
    for t in (-1, -2):
        for s in poset:
            out.append(f"OU({s.label};{t})")
    for s in poset:
        out.append(f"sky!({s.label})")
    return out
