"""Cache backends for classification verdicts."""

from __future__ import annotations

import json
import logging
import os
import threading
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Any, Iterator, Protocol

logger = logging.getLogger(__name__)


class CacheBackend(Protocol):
    """Store for verdict records keyed by `"{n}x{m}x{c}"`; TTL is optional and unused by the classifier."""

    def get(self, key: str) -> Any | None:  # pragma: no cover - protocol
        ...

    def set(self, key: str, value: Any, ttl_seconds: int | None = None) -> None:  # pragma: no cover - protocol
        ...


class InMemoryCache(CacheBackend):
    """Verdict records held for the life of the process; the default when caching is off."""

    def __init__(self) -> None:
        self._entries: dict[str, tuple[datetime | None, Any]] = {}

    def get(self, key: str) -> Any | None:
        expires_at, value = self._entries.get(key, (None, None))
        if expires_at is not None and expires_at <= datetime.now(timezone.utc):
            return None
        return value

    def set(self, key: str, value: Any, ttl_seconds: int | None = None) -> None:
        expires_at: datetime | None = None
        if ttl_seconds is not None:
            expires_at = datetime.now(timezone.utc) + timedelta(seconds=ttl_seconds)
        self._entries[key] = (expires_at, value)

    def items(self) -> Iterator[tuple[str, Any]]:
        for key in list(self._entries):
            if (value := self.get(key)) is not None:
                yield key, value


class JsonFileCache(CacheBackend):
    """Verdict records in one JSON object on disk; every write rewrites the file through a temporary sibling."""

    def __init__(self, path: str | Path) -> None:
        self.path = Path(path).expanduser()
        self._lock = threading.Lock()
        self._entries: dict[str, Any] = {}
        if self.path.exists():
            try:
                loaded = json.loads(self.path.read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                logger.warning("ignoring unreadable cache file %s: %s", self.path, exc)
            else:
                if isinstance(loaded, dict):
                    self._entries = loaded
                    logger.info("loaded %d cached verdicts from %s", len(loaded), self.path)
                else:
                    logger.warning("ignoring cache file %s: top level is not an object", self.path)

    def get(self, key: str) -> Any | None:
        return self._entries.get(key)

    def set(self, key: str, value: Any, ttl_seconds: int | None = None) -> None:
        with self._lock:
            self._entries[key] = value
            self.path.parent.mkdir(parents=True, exist_ok=True)
            tmp = self.path.with_suffix(self.path.suffix + ".tmp")
            tmp.write_text(json.dumps(self._entries, indent=1, sort_keys=True), encoding="utf-8")
            os.replace(tmp, self.path)

    def items(self) -> Iterator[tuple[str, Any]]:
        return iter(list(self._entries.items()))


class RedisCache(CacheBackend):
    """Verdict records as JSON strings in Redis, shared by concurrent `obs` and `chart` runs."""

    def __init__(self, client: Any) -> None:
        self.client = client

    def get(self, key: str) -> Any | None:
        raw = self.client.get(key)
        if raw is None:
            return None
        try:
            return json.loads(raw)
        except Exception:
            return None

    def set(self, key: str, value: Any, ttl_seconds: int | None = None) -> None:
        payload = json.dumps(value).encode("utf-8")
        if ttl_seconds:
            self.client.setex(key, ttl_seconds, payload)
        else:
            self.client.set(key, payload)


def redis_cache_from_url(url: str) -> RedisCache:
    """Connect a verdict-record store to the Redis server at `url`."""
    try:
        import redis  # type: ignore
    except ImportError as exc:  # pragma: no cover - exercised in runtime
        raise RuntimeError("Install the 'cache' extra to use RedisCache") from exc

    client = redis.Redis.from_url(url)  # type: ignore[call-arg]
    return RedisCache(client)


def cache_from_setting(value: str | None) -> CacheBackend:
    """`none` (or empty) keeps verdicts in memory, `redis://...` uses Redis, anything else is a JSON path."""
    if not value or value.lower() == "none":
        return InMemoryCache()
    if value.startswith(("redis://", "rediss://", "unix://")):
        return redis_cache_from_url(value)
    return JsonFileCache(value)


def verdict_key(n: int, m: int, c: int) -> str:
    return f"{n}x{m}x{c}"


class VerdictCache:
    """Verdict records keyed `"{n}x{m}x{c}"`, mirrored in memory for containment lookups.

    Records are plain dicts: n, m, c, status, rule, witness_ref.
    """

    def __init__(self, backend: CacheBackend | None = None) -> None:
        self.backend = backend if backend is not None else InMemoryCache()
        self._lock = threading.Lock()
        self._seen: dict[str, dict[str, Any]] = {}
        items = getattr(self.backend, "items", None)
        if callable(items):
            for key, record in items():
                if isinstance(record, dict) and {"n", "m", "c", "status"} <= record.keys():
                    self._seen[key] = record

    def get(self, n: int, m: int, c: int) -> dict[str, Any] | None:
        key = verdict_key(n, m, c)
        if key in self._seen:
            return self._seen[key]
        record = self.backend.get(key)
        if isinstance(record, dict):
            with self._lock:
                self._seen[key] = record
            return record
        return None

    def put(self, record: dict[str, Any]) -> None:
        key = verdict_key(record["n"], record["m"], record["c"])
        with self._lock:
            self._seen[key] = record
            self.backend.set(key, record)

    def known(self, c: int, status: str) -> list[dict[str, Any]]:
        """Records for palette c with a given status, as seen by this process."""
        with self._lock:
            return [r for r in self._seen.values() if r["c"] == c and r["status"] == status]
