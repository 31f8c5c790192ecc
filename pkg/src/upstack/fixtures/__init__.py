"""Shipped example models, addressable by file name."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from ..errors import MalformedInputError


def fixture_names() -> list[str]:
    root = resources.files(__package__)
    return sorted(entry.name for entry in root.iterdir() if entry.name.endswith(".upds"))


def fixture_path(name: str) -> Path:
    """Filesystem path of a shipped model, e.g. fixture_path('e1.upds')."""
    candidate = resources.files(__package__) / name
    if not candidate.is_file():
        raise MalformedInputError(f"no shipped model {name!r}; have {fixture_names()}")
    return Path(str(candidate))


def fixture_text(name: str) -> str:
    return fixture_path(name).read_text(encoding="utf-8")
