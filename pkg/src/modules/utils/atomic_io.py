"""Atomic text writes for artifacts (CSV/JSON)."""

from __future__ import annotations

import os
import secrets
from pathlib import Path


def atomic_write_text(path: Path, text: str, *, encoding: str = "utf-8") -> None:
    """Atomically write text to ``path``.

    Writes to a temp file in the same directory, then replaces the destination,
    so a reader never sees a half-written artifact. Newlines are written as-is
    (no platform translation) to keep outputs byte-identical across hosts.
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp_path = path.with_name(f".{path.name}.tmp.{os.getpid()}.{secrets.token_hex(6)}")
    try:
        with open(tmp_path, "w", encoding=encoding, newline="") as fh:
            fh.write(text)
        os.replace(tmp_path, path)
    finally:
        try:
            if tmp_path.exists():
                tmp_path.unlink(missing_ok=True)
        except OSError:
            pass
