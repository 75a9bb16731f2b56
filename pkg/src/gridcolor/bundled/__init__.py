"""Hardcoded colorings and rectangle-free sets shipped with the package.

`catalog.json` lists every file with its kind, palette, strong parameter, cardinality and SHA-256.
Each item is checksummed and re-verified the first time it is loaded.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass
from functools import lru_cache
from importlib.resources import files
from typing import Any

from gridcolor.formats import parse_grid
from gridcolor.grid import CellSet, Coloring, find_rectangle, verify_coloring, verify_strong

logger = logging.getLogger(__name__)


class UnknownBundleError(KeyError):
    """No bundled item has this name."""


class BundledDataError(RuntimeError):
    """A bundled file fails its checksum or its verifier."""


@dataclass(frozen=True)
class BundledItem:
    name: str
    kind: str
    data: Coloring | CellSet
    note: str = ""
    c_prime: int | None = None

    @property
    def coloring(self) -> Coloring:
        if not isinstance(self.data, Coloring):
            raise TypeError(f"{self.name} is a cell set, not a coloring")
        return self.data

    @property
    def cellset(self) -> CellSet:
        if not isinstance(self.data, CellSet):
            raise TypeError(f"{self.name} is a coloring, not a cell set")
        return self.data


@lru_cache(maxsize=1)
def manifest() -> dict[str, dict[str, Any]]:
    return json.loads(files(__name__).joinpath("catalog.json").read_text(encoding="utf-8"))


def names() -> list[str]:
    return list(manifest())


def resolve(name: str) -> str:
    """Accept a catalog name with or without a `bundled/` prefix or file extension."""
    key = name.removeprefix("bundled/")
    for suffix in (".grid", ".rf"):
        key = key.removesuffix(suffix)
    if key not in manifest():
        raise UnknownBundleError(name)
    return key


def _check(entry: dict[str, Any], data: Coloring | CellSet, key: str) -> None:
    if entry["kind"] == "coloring":
        if not isinstance(data, Coloring) or data.c != entry["c"]:
            raise BundledDataError(f"{key}: expected a {entry['c']}-coloring")
        if not verify_coloring(data):
            raise BundledDataError(f"{key}: coloring has a monochromatic rectangle")
        if "c_prime" in entry and not verify_strong(data, entry["c_prime"]):
            raise BundledDataError(f"{key}: not a strong (c, {entry['c_prime']})-coloring")
        return
    if not isinstance(data, CellSet):
        raise BundledDataError(f"{key}: expected a cell set")
    if (rect := find_rectangle(data)) is not None:
        raise BundledDataError(f"{key}: cell set contains {rect}")
    if data.size != entry["size"]:
        raise BundledDataError(f"{key}: expected {entry['size']} cells, found {data.size}")


@lru_cache(maxsize=None)
def item(name: str) -> BundledItem:
    key = resolve(name)
    entry = manifest()[key]
    raw = files(__name__).joinpath(entry["file"]).read_bytes()
    if hashlib.sha256(raw).hexdigest() != entry["sha256"]:
        raise BundledDataError(f"{key}: checksum mismatch for {entry['file']}")
    data = parse_grid(raw.decode("utf-8"))
    _check(entry, data, key)
    logger.debug("loaded bundled %s (%s)", key, data)
    return BundledItem(key, entry["kind"], data, entry.get("note", ""), entry.get("c_prime"))


def load(name: str) -> Coloring | CellSet:
    return item(name).data


def colorings(c: int) -> list[tuple[str, BundledItem]]:
    """Bundled colorings with palette c, in catalog order."""
    return [(key, item(key)) for key, entry in manifest().items() if entry["kind"] == "coloring" and entry["c"] == c]


def cellsets() -> list[tuple[str, BundledItem]]:
    return [(key, item(key)) for key, entry in manifest().items() if entry["kind"] == "cellset"]
