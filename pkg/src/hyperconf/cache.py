"""JSON cache of a built algebra (rationals as ``"p/q"`` strings)."""

from __future__ import annotations

import json
import os
from pathlib import Path

from .endalgebra import Algebra, AlgebraError

SCHEMA_VERSION = 1
CACHE_ENV = "HYPERCONF_CACHE_DIR"


class CacheError(ValueError):
    pass


def dumps(alg: Algebra) -> str:
    data = {"schema_version": SCHEMA_VERSION, **alg.to_data()}
    return json.dumps(data, sort_keys=True, separators=(",", ":")) + "\n"


def loads(text: str, validate: bool = True) -> Algebra:
    data = json.loads(text)
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise CacheError(f"cache schema version {version!r} is not {SCHEMA_VERSION}")
    alg = Algebra.from_data(data)
    if validate:
        rep = alg.validate()
        if not rep.passed:
            raise AlgebraError(f"cached algebra fails its audit: {rep.as_dict()['details']}")
    return alg


def save(alg: Algebra, path: str | os.PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(alg))
    return path


def load(path: str | os.PathLike, validate: bool = True) -> Algebra:
    return loads(Path(path).read_text(), validate=validate)


def default_path(n: int, d: int) -> Path | None:
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    return Path(root) / f"algebra-n{n}-d{d}.json"
