"""Content-addressed on-disk cache for computed results (JSON payloads)."""
from __future__ import annotations

import hashlib
import json
import logging
import os
from pathlib import Path

log = logging.getLogger(__name__)

ENV_VAR = "RINGLAB_CACHE"


def cache_dir() -> Path:
    root = os.environ.get(ENV_VAR)
    if root:
        return Path(root)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "ringlab"


def make_key(*parts) -> str:
    h = hashlib.sha256()
    for p in parts:
        if isinstance(p, bytes):
            data = p
        else:
            data = json.dumps(p, sort_keys=True, separators=(",", ":"), default=str).encode()
        h.update(len(data).to_bytes(8, "little"))
        h.update(data)
    return h.hexdigest()


class Cache:
    def __init__(self, root: Path | None = None, enabled: bool = True):
        self.root = Path(root) if root is not None else cache_dir()
        self.enabled = enabled

    def _path(self, key: str) -> Path:
        return self.root / key[:2] / f"{key}.json"

    def load(self, key: str):
        """The cached payload, or None on a miss or a corrupt entry."""
        if not self.enabled:
            return None
        path = self._path(key)
        if not path.exists():
            return None
        try:
            with open(path, encoding="utf-8") as fh:
                entry = json.load(fh)
            if entry.get("key") != key:
                raise ValueError("key mismatch")
            return entry["payload"]
        except (OSError, ValueError, KeyError) as exc:
            log.warning("corrupt cache entry %s (%s); recomputing", path, exc)
            return None

    def store(self, key: str, payload) -> None:
        if not self.enabled:
            return
        path = self._path(key)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump({"key": key, "payload": payload}, fh, sort_keys=True)
        os.replace(tmp, path)

    def get_or_compute(self, key: str, compute):
        """(payload, hit)."""
        hit = self.load(key)
        if hit is not None:
            return hit, True
        payload = compute()
        self.store(key, payload)
        return payload, False
