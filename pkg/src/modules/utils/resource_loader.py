# resource_loader.py
"""
Discovery of the JSON resources shipped under src/modules/resources.

Every ``*.json`` file holds one object with at least a ``name`` key; the
object is registered under that name (falling back to the file stem).
"""

from __future__ import annotations

import json
import threading
from pathlib import Path
from typing import Any

from modules.utils.log_utils import get_logger

logger = get_logger(__name__)

default_resource_path = Path(__file__).parent.parent / "resources"

_resources: dict[str, dict[str, Any]] = {}
_lock = threading.Lock()


def discover_resources(resources_dir: Path = default_resource_path) -> dict[str, dict[str, Any]]:
    """
    Load all .json files found in the resources directory.

    Args:
        resources_dir (Path): Directory to scan (recursively).

    Returns:
        A fresh mapping name -> resource object.
    """
    found: dict[str, dict[str, Any]] = {}
    if not resources_dir.exists():
        logger.error("❌ Resources directory %s does not exist.", resources_dir)
        return found

    files = sorted(resources_dir.rglob("*.json"))
    if not files:
        logger.warning("⚠️ No resource files found in directory '%s'", resources_dir)
        return found

    for path in files:
        try:
            meta = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            logger.error("❌ Could not read resource %s: %s", path, exc)
            continue
        name = str(meta.get("name", path.stem))
        if name in found:
            logger.warning("⚠️ Duplicate resource name %r in %s (kept the first)", name, path)
            continue
        found[name] = meta
    logger.debug("Loaded %d resources from %s", len(found), resources_dir)
    return found


def get_resources() -> dict[str, dict[str, Any]]:
    """Return the process-wide resource registry, loading it on first use."""
    with _lock:
        if not _resources:
            _resources.update(discover_resources())
        return _resources


def get_resource(name: str) -> dict[str, Any]:
    """Return one resource by name.

    Raises:
        KeyError: If no resource of that name exists.
    """
    resources = get_resources()
    if name not in resources:
        raise KeyError(f"unknown resource {name!r}; available: {', '.join(sorted(resources))}")
    return resources[name]
