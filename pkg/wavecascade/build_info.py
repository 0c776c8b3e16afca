"""Build id: SHA-256 over the package's own source files."""

from __future__ import annotations

import hashlib
from functools import lru_cache
from pathlib import Path
from typing import Callable, Optional

_CHUNK_SIZE = 1024 * 1024
BUILD_ID_LENGTH = 12


def hash_file(
    path: Path,
    digest: "hashlib._Hash",
    chunk_size: int = _CHUNK_SIZE,
    on_chunk: Optional[Callable[[int], None]] = None,
) -> None:
    """Feed one file into `digest` chunk by chunk."""
    with open(path, "rb") as f:
        while True:
            chunk = f.read(chunk_size)
            if not chunk:
                break
            digest.update(chunk)
            if on_chunk:
                on_chunk(len(chunk))


def source_files(root: Optional[Path] = None) -> list[Path]:
    root = root or Path(__file__).resolve().parent
    return sorted(p for p in root.rglob("*.py") if "__pycache__" not in p.parts)


def compute_build_id(root: Optional[Path] = None) -> str:
    """First 12 hex digits of SHA-256 over (relative path, contents) of every source, sorted by path."""
    root = root or Path(__file__).resolve().parent
    digest = hashlib.sha256()
    for path in source_files(root):
        digest.update(path.relative_to(root).as_posix().encode("utf-8"))
        digest.update(b"\0")
        hash_file(path, digest)
    return digest.hexdigest()[:BUILD_ID_LENGTH]


@lru_cache(maxsize=1)
def build_id() -> str:
    return compute_build_id()
