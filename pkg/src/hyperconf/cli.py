"""Command-line front end.

    hyperconf build --n 1 --d 3 [--cache PATH]
    hyperconf ext   --n 1 --d 3 --source "O(0)" --target "O(0)"
    hyperconf check cy --n 2 --d 4

Every command prints one JSON report on stdout.  Exit status is 0 iff all
checks passed, 1 if a check failed, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import cache
from . import complexes as cx
from .endalgebra import Algebra, AlgebraError, build_algebra, combinatorial_dim
from .objects import Catalog, ObjectSpec, SpecError, parse_spec
from .poset import Poset
from .suites import SUITES, Report, SuiteNotApplicable, run_suite, table_json


def _cache_path(args) -> Path | None:
    if getattr(args, "cache", None):
        return Path(args.cache)
    return cache.default_path(args.n, args.d)


def get_algebra(n: int, d: int, path: Path | None = None) -> Algebra:
    """Load from ``path`` when it exists, otherwise build (and store if a path is given)."""
    if path is not None and path.exists():
        alg = cache.load(path)
        if (alg.n, alg.d) != (n, d):
            raise cache.CacheError(f"cache {path} holds type ({alg.n},{alg.d}), not ({n},{d})")
        return alg
    alg = build_algebra(Poset(n, d))
    if path is not None:
        cache.save(alg, path)
    return alg


def share_point(a: ObjectSpec, b: ObjectSpec) -> tuple[ObjectSpec, ObjectSpec]:
    """Two skyscrapers without explicit points on comparable strata sit at one common point."""
    sky = ("sky*", "sky!")
    if a.kind not in sky or b.kind not in sky or a.point or b.point:
        return a, b
    sa, sb = set(a.indices), set(b.indices)
    if sa >= sb:
        deep = a.indices
    elif sb >= sa:
        deep = b.indices
    else:
        return a, b
    return a.with_point(deep), b.with_point(deep)


def cmd_build(args) -> Report:
    rep = Report("build", {"n": args.n, "d": args.d})
    t0 = time.perf_counter()
    alg = build_algebra(Poset(args.n, args.d), validate=False)
    audit = alg.validate()
    rep.timings["build_seconds"] = f"{time.perf_counter() - t0:.3f}"
    for name, ok in audit.checks.items():
        rep.record(f"audit:{name}", ok)
    want = combinatorial_dim(args.n, args.d)
    rep.record("dimension equals combinatorial sum", alg.dim == want, want, alg.dim)
    rep.tables = {"vertices": alg.nvertices, "basis": alg.dim,
                  "structure_constants": sum(len(v) for v in alg.mult.values())}
    path = _cache_path(args)
    if rep.passed and path is not None:
        cache.save(alg, path)
        rep.inputs["cache"] = str(path)
    return rep


def cmd_ext(args) -> Report:
    src, dst = share_point(parse_spec(args.source), parse_spec(args.target))
    rep = Report("ext", {"n": args.n, "d": args.d, "source": str(src), "target": str(dst)})
    t0 = time.perf_counter()
    alg = get_algebra(args.n, args.d, _cache_path(args))
    cat = Catalog(alg)
    x, y = cat.resolve(src), cat.resolve(dst)
    table = cx.ext_dims(x, y)
    rep.timings["total_seconds"] = f"{time.perf_counter() - t0:.3f}"
    rep.tables = {
        "ext": table_json(table),
        "source_terms": {str(j): len(t) for j, t in sorted(x.terms.items())},
        "target_terms": {str(j): len(t) for j, t in sorted(y.terms.items())},
    }
    return rep


def cmd_check(args) -> Report:
    alg = get_algebra(args.n, args.d, _cache_path(args))
    return run_suite(args.suite, args.n, args.d, alg)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperconf", description="Exact homological checks on hyperplane configuration schemes.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--n", type=int, required=True, help="dimension parameter n >= 1")
        p.add_argument("--d", type=int, required=True, help="number of hyperplanes d >= 1")
        p.add_argument("--cache", help=f"algebra cache file (default: ${cache.CACHE_ENV}/algebra-n<n>-d<d>.json)")
        p.add_argument("--report", help="also write the JSON report to this file")

    p = sub.add_parser("build", help="build, audit and cache the algebra")
    common(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("ext", help="Ext table between two object descriptors")
    common(p)
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.set_defaults(func=cmd_ext)

    p = sub.add_parser("check", help="run a verification suite")
    p.add_argument("suite", choices=sorted(SUITES))
    common(p)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.n < 1 or args.d < 1:
            raise ValueError("need n >= 1 and d >= 1")
        report = args.func(args)
    except (SpecError, SuiteNotApplicable, cache.CacheError, ValueError, AlgebraError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 2
    text = json.dumps(report.to_json(), indent=2, sort_keys=True)
    print(text)
    if args.report:
        Path(args.report).write_text(text + "\n")
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
