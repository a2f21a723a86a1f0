"""Content-addressed result cache with atomic writes and integrity checks."""

from __future__ import annotations

import hashlib
import json
import os
import random
import tempfile
from dataclasses import dataclass
from pathlib import Path

from . import __version__

__all__ = ["ResultCache", "CacheStats", "cache_key", "default_cache_dir", "CACHE_ENV"]

CACHE_ENV = "SPLITCYC_CACHE_DIR"


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "splitcyc"


def _canonical(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()


def cache_key(op: str, inputs, version: str = __version__) -> str:
    return hashlib.sha256(_canonical({"op": op, "inputs": inputs, "version": version})).hexdigest()


@dataclass
class CacheStats:
    hits: int = 0
    misses: int = 0
    evictions: int = 0
    spot_checks: int = 0
    spot_mismatches: int = 0


class ResultCache:
    """JSON values stored under ``root/ab/abcdef...json`` with a sha256 checksum.

    ``spot_check_rate`` is the probability that a hit is recomputed and compared
    byte-for-byte with the stored value.
    """

    def __init__(self, root=None, enabled: bool = True, version: str = __version__,
                 spot_check_rate: float = 0.1, rng: random.Random | None = None):
        self.root = Path(root) if root is not None else default_cache_dir()
        self.enabled = enabled
        self.version = version
        self.spot_check_rate = spot_check_rate
        self.rng = rng or random.Random()
        self.stats = CacheStats()

    def _path(self, key: str) -> Path:
        return self.root / key[:2] / f"{key}.json"

    def key(self, op: str, inputs) -> str:
        return cache_key(op, inputs, self.version)

    def get(self, key: str):
        if not self.enabled:
            return None
        path = self._path(key)
        try:
            raw = path.read_bytes()
        except FileNotFoundError:
            return None
        try:
            entry = json.loads(raw)
            payload = _canonical(entry["value"])
            if entry.get("checksum") != hashlib.sha256(payload).hexdigest() or entry.get("key") != key:
                raise ValueError("checksum mismatch")
            return entry["value"]
        except (ValueError, KeyError, TypeError):
            self.evict(key)
            return None

    def put(self, key: str, value) -> None:
        if not self.enabled:
            return
        path = self._path(key)
        path.parent.mkdir(parents=True, exist_ok=True)
        payload = _canonical(value)
        entry = {"key": key, "checksum": hashlib.sha256(payload).hexdigest(), "value": value}
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(_canonical(entry))
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def evict(self, key: str) -> None:
        self.stats.evictions += 1
        try:
            self._path(key).unlink()
        except FileNotFoundError:
            pass

    def cached(self, op: str, inputs, compute):
        """Return (value, hit).  ``compute`` must return a JSON-serializable value."""
        key = self.key(op, inputs)
        value = self.get(key)
        if value is not None:
            self.stats.hits += 1
            if self.rng.random() < self.spot_check_rate:
                self.stats.spot_checks += 1
                fresh = json.loads(_canonical(compute()))
                if _canonical(fresh) != _canonical(value):
                    self.stats.spot_mismatches += 1
                    self.evict(key)
                    self.put(key, fresh)
                    return fresh, False
            return value, True
        self.stats.misses += 1
        value = json.loads(_canonical(compute()))
        self.put(key, value)
        return value, False
