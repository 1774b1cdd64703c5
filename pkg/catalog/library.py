"""
Embedded catalog of known networks and depth bounds.

Networks are stored as JSON files next to an ``index.json`` that records
their kind, claimed size and SHA-256 checksum. Entries of kind
``construction`` have no file and are built on load.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from django.core.exceptions import ValidationError

from core.conf import sortnet_setting
from core.exceptions import CatalogError
from networks.constructions import batcher_network
from networks.serialization import loads

logger = logging.getLogger(__name__)

SCHEME = "catalog://"
KINDS = ("sorting", "prefix", "construction")
EDITIONS = ("new", "old")
BUILDERS = {"batcher": batcher_network}


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    network: object
    kind: str
    claimed_depth: int
    claimed_channels: int
    provenance: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise CatalogError(f"entry {self.id!r} has unknown kind {self.kind!r}")
        if self.network.depth != self.claimed_depth or self.network.channels != self.claimed_channels:
            raise CatalogError(
                f"entry {self.id!r} claims {self.claimed_channels} channels and depth {self.claimed_depth}, "
                f"found {self.network.channels} and {self.network.depth}"
            )


@dataclass(frozen=True)
class BoundsTable:
    channels: tuple
    editions: dict

    def bounds(self, n, edition="new"):
        if edition not in self.editions:
            raise CatalogError(f"unknown bounds edition {edition!r}, expected one of {', '.join(EDITIONS)}")
        if n not in self.channels:
            raise CatalogError(f"depth bounds are known for {self.channels[0]}..{self.channels[-1]} channels, got {n}")
        row = self.editions[edition]
        position = self.channels.index(n)
        return row["lower"][position], row["upper"][position]


def _read_checked(path, checksum):
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise CatalogError(f"cannot read catalog file {path.name}: {exc}") from exc
    digest = hashlib.sha256(data).hexdigest()
    if digest != checksum:
        raise CatalogError(f"checksum mismatch for {path.name}: expected {checksum}, got {digest}")
    logger.debug("catalog file %s: checksum verified", path.name)
    return data.decode()


class Catalog:
    def __init__(self, directory=None):
        self.directory = Path(directory or sortnet_setting("CATALOG_DIR") or Path(__file__).parent / "data")
        try:
            self.index = json.loads((self.directory / "index.json").read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise CatalogError(f"cannot load the catalog index from {self.directory}: {exc}") from exc
        self._records = {record["id"]: record for record in self.index["entries"]}
        self._entries = {}
        self._bounds = None

    def list_ids(self, kind=None):
        return [key for key, record in self._records.items() if kind is None or record["kind"] == kind]

    def get(self, entry_id):
        if entry_id not in self._records:
            raise CatalogError(f"unknown catalog entry {entry_id!r}")
        if entry_id not in self._entries:
            self._entries[entry_id] = self._load(self._records[entry_id])
        return self._entries[entry_id]

    def entries(self, kind=None):
        return [self.get(entry_id) for entry_id in self.list_ids(kind)]

    def _load(self, record):
        if "builder" in record:
            network = BUILDERS[record["builder"]](record["claimed_channels"])
        else:
            text = _read_checked(self.directory / record["file"], record["sha256"])
            try:
                network = loads(text)
            except ValidationError as exc:
                raise CatalogError(f"catalog file {record['file']} is malformed: {exc.messages[0]}") from exc
        return CatalogEntry(
            record["id"],
            network,
            record["kind"],
            record["claimed_depth"],
            record["claimed_channels"],
            record.get("provenance", ""),
        )

    @property
    def bounds_table(self):
        if self._bounds is None:
            meta = self.index["bounds"]
            data = json.loads(_read_checked(self.directory / meta["file"], meta["sha256"]))
            self._bounds = BoundsTable(tuple(data["channels"]), data["editions"])
        return self._bounds

    def bounds(self, n, edition="new"):
        return self.bounds_table.bounds(n, edition)


@lru_cache(maxsize=4)
def _catalog(directory):
    return Catalog(directory)


def default_catalog():
    return _catalog(str(sortnet_setting("CATALOG_DIR") or Path(__file__).parent / "data"))


def get(entry_id):
    return default_catalog().get(entry_id)


def list_ids(kind=None):
    return default_catalog().list_ids(kind)


def bounds(n, edition="new"):
    """``(lower, upper)`` on the minimal depth of a sorting network on ``n`` channels."""
    return default_catalog().bounds(n, edition)


def resolve(reference):
    """Network of a ``catalog://<id>`` reference."""
    if not reference.startswith(SCHEME):
        raise CatalogError(f"{reference!r} is not a catalog reference")
    return get(reference[len(SCHEME):]).network
