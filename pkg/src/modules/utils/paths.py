"""
src/modules/utils/paths.py

Project path helpers for a repo layout like:

  PARENT/
    src/
      ...
    output/
      <command>/...

Invariant:
  - project root == parent directory of the nearest 'src' directory.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
import os


class ProjectLayoutError(RuntimeError):
    """Raised when we cannot determine the project root from a file path."""


def project_root_from_src(start: Path) -> Path:
    """Return PARENT for a layout of PARENT/src/... by locating 'src' in parents.

    Raises:
        ProjectLayoutError: If no 'src' ancestor directory is found.
    """
    here = start.resolve()
    for p in (here, *here.parents):
        if p.name == "src":
            return p.parent
    raise ProjectLayoutError(f"Could not locate 'src' in parents of: {start}")


@dataclass(slots=True, frozen=True)
class OutputPaths:
    """Resolved artifact directories for one CLI command."""
    base_output_dir: Path
    command_dir: Path


def resolve_output_paths(
    *,
    command: str,
    start: Path,
    explicit: Path | None = None,
    env_var: str = "SYMSYS_OUTPUT_DIR",
) -> OutputPaths:
    """Resolve (and create) the directory a command writes its artifacts to.

    Resolution order:
      1) ``explicit`` (the ``--out`` flag) is used as-is, without a command subdirectory.
      2) If env_var is set, use it as the base directory.
      3) Otherwise PARENT/output, found by locating 'src' above ``start``.

    Args:
        command: CLI command name (e.g. "charmat").
        start: A path under the project's src tree (typically Path(__file__)).
        explicit: Directory given on the command line.
        env_var: Environment variable that overrides the base output directory.
    """
    if explicit is not None:
        out = explicit.expanduser().resolve()
        out.mkdir(parents=True, exist_ok=True)
        return OutputPaths(base_output_dir=out, command_dir=out)

    if override := os.environ.get(env_var):
        base = Path(override).expanduser().resolve()
    else:
        base = project_root_from_src(start) / "output"
    command_dir = base / command if command.strip() else base
    command_dir.mkdir(parents=True, exist_ok=True)
    return OutputPaths(base_output_dir=base, command_dir=command_dir)
