"""Content-addressed JSON cache with atomic publication."""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile

SCHEMA_VERSION = 1

log = logging.getLogger(__name__)


def cache_dir_from_env():
    return os.environ.get("JACQUET_CACHE_DIR") or None


def cache_key(algebra, kind, params):
    """Digest of (algebra, kind, parameters, schema version)."""
    blob = json.dumps(
        {"algebra": algebra, "kind": kind, "params": params, "schema_version": SCHEMA_VERSION},
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(blob.encode()).hexdigest()


def _dump(value):
    return json.dumps(value, sort_keys=True, separators=(",", ":")).encode()


class Cache:
    """Directory of ``<key>.json`` files; ``directory=None`` means compute-only."""

    def __init__(self, directory=None):
        self.directory = directory
        self.hits = 0
        self.misses = 0
        if directory is not None:
            try:
                os.makedirs(directory, exist_ok=True)
            except OSError as exc:
                log.warning("cache directory %s unusable (%s); computing without cache", directory, exc)
                self.directory = None

    def path(self, key):
        return os.path.join(self.directory, key + ".json")

    def read(self, key):
        if self.directory is None:
            return None
        p = self.path(key)
        try:
            with open(p, "rb") as fh:
                raw = fh.read()
        except FileNotFoundError:
            return None
        except OSError as exc:
            log.warning("cache read failed for %s: %s", p, exc)
            return None
        try:
            entry = json.loads(raw)
            if entry.get("key") != key or entry.get("schema_version") != SCHEMA_VERSION:
                raise ValueError("key or schema mismatch")
            return entry["value"]
        except (ValueError, KeyError, TypeError, AttributeError) as exc:
            log.warning("discarding corrupt cache entry %s (%s)", p, exc)
            try:
                os.remove(p)
            except OSError:
                pass
            return None

    def write(self, key, value):
        if self.directory is None:
            return
        data = _dump({"key": key, "schema_version": SCHEMA_VERSION, "value": value})
        try:
            fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".tmp-", suffix=".json")
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
            os.replace(tmp, self.path(key))
        except OSError as exc:
            log.warning("cache write failed (%s); continuing without caching", exc)

    def get_or_compute(self, key, producer):
        """Cached JSON value for ``key``; ``producer()`` must return JSON data.

        The value is round-tripped through JSON on a miss so hits and fresh
        computations return identical data.
        """
        hit = self.read(key)
        if hit is not None:
            self.hits += 1
            return hit
        self.misses += 1
        value = json.loads(_dump(producer()))
        self.write(key, value)
        return value


def cache_get_or_compute(key, producer, directory=None):
    return Cache(directory if directory is not None else cache_dir_from_env()).get_or_compute(key, producer)
