from __future__ import annotations

import enum
import hashlib
import importlib.resources
import json
from typing import Any, Iterable, Iterator


class StrEnum(str, enum.Enum):
    """Enum where the values are also (and must be) strings."""

    def __str__(self):
        return self.value

    def __repr__(self):
        return f"{self.__class__.__name__}.{self.name}"


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the positions of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bits_of(indices: Iterable[int]) -> int:
    """Pack element indices into a bitmask."""
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def dump_json(data: Any) -> str:
    """
    Serialize to JSON byte-stably (sorted keys, 2-space indent, trailing newline).

    Every file latcon writes goes through this function so repeated runs produce identical bytes.
    """
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def dumps(data: dict) -> str:
    """JSON for reports: values JSON cannot encode are stringified, then written like :func:`dump_json`."""
    return dump_json(json.loads(json.dumps(data, default=str)))


def data_path(name: str) -> importlib.resources.abc.Traversable:
    """The path of a file shipped in ``latcon/data`` (``name`` may contain ``/``)."""
    return importlib.resources.files("latcon").joinpath("data", *name.split("/"))


def read_data(name: str) -> str:
    """Read a text file shipped in ``latcon/data``."""
    return data_path(name).read_text(encoding="utf-8")


def fixtures_checksum() -> str:
    """
    SHA-256 (first 12 hex digits) over every shipped figure transcription and pattern file.

    Printed by ``latcon --version`` so results can be traced back to a specific transcription.
    """
    digest = hashlib.sha256()
    pending = [("", importlib.resources.files("latcon").joinpath("data"))]
    while pending:
        prefix, root = pending.pop()
        for entry in sorted(root.iterdir(), key=lambda e: e.name):
            if entry.is_dir():
                pending.append((f"{prefix}{entry.name}/", entry))
            elif entry.is_file():
                digest.update(f"{prefix}{entry.name}".encode("utf-8"))
                digest.update(entry.read_bytes())
    return digest.hexdigest()[:12]


def load_json(text: str) -> Any:
    return json.loads(text)


def hashlib_name(text: str) -> str:
    """A short stable file name for ``text`` (first 16 hex digits of its SHA-256)."""
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]
