"""
Reading and writing posets, lattices and embeddings.

Two poset formats are supported:

- text: ``elem x`` declares an element, ``a < b`` declares a cover, ``#`` starts a comment;
- JSON: ``{"elements": [...], "covers": [["a", "b"], ...]}``.

Lattice documents are poset JSON documents with optional ``upper_order`` / ``lower_order`` (a planar embedding) and
``colors`` (``[bottom, top, color]`` triples). Meet and join tables are never stored.
"""

from __future__ import annotations

__all__ = [
    "PosetDocument",
    "LatticeDocument",
    "LatticeBundle",
    "parse_poset_text",
    "dump_poset_text",
    "dump_poset_json",
    "parse_poset",
    "load_poset",
    "parse_lattice",
    "load_lattice",
    "dump_lattice_json",
]

import dataclasses
import logging
import pathlib
import re

import pydantic

from latcon import utils
from latcon.errors import PosetFormatError
from latcon.lattice import FiniteLattice
from latcon.order import Poset
from latcon.planar import PlanarEmbedding

_logger = logging.getLogger(__name__)

_ELEM = re.compile(r"^elem\s+(\S+)$")
_COVER = re.compile(r"^(\S+)\s*<\s*(\S+)$")


class PosetDocument(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(extra="forbid")

    elements: list[str]
    covers: list[tuple[str, str]] = []

    @classmethod
    def from_poset(cls, P: Poset) -> PosetDocument:
        return cls(elements=list(P.elements), covers=_sorted_covers(P))

    def to_poset(self, strict: bool = False) -> Poset:
        return Poset.from_covers(self.elements, self.covers, strict=strict)


class LatticeDocument(PosetDocument):
    upper_order: dict[str, list[str]] | None = None
    lower_order: dict[str, list[str]] | None = None
    colors: list[tuple[str, str, str]] | None = None

    @pydantic.model_validator(mode="after")
    def _orders_come_together(self) -> LatticeDocument:
        if (self.upper_order is None) != (self.lower_order is None):
            raise ValueError("upper_order and lower_order must be given together")
        return self


@dataclasses.dataclass(frozen=True, slots=True)
class LatticeBundle:
    """A lattice with the optional embedding and coloring stored next to it."""

    lattice: FiniteLattice
    embedding: PlanarEmbedding | None = None
    color: dict[tuple[str, str], str] = dataclasses.field(default_factory=dict)


def _sorted_covers(P: Poset) -> list[tuple[str, str]]:
    return sorted(P.covers, key=lambda c: (P.index(c[0]), P.index(c[1])))


def parse_poset_text(text: str, strict: bool = False) -> Poset:
    """
    Parse the text format.

    Raises:
        PosetFormatError: A line is neither a declaration, a cover nor a comment.
    """
    elements: list[str] = []
    covers: list[tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if m := _ELEM.match(line):
            elements.append(m.group(1))
        elif m := _COVER.match(line):
            elements.extend(m.groups())
            covers.append((m.group(1), m.group(2)))
        else:
            raise PosetFormatError(f"Cannot parse line {lineno}: {raw!r}", details={"line": lineno})
    return Poset.from_covers(elements, covers, strict=strict)


def dump_poset_text(P: Poset) -> str:
    lines = [f"elem {e}" for e in P.elements]
    lines += [f"{a} < {b}" for a, b in _sorted_covers(P)]
    return "\n".join(lines) + "\n"


def dump_poset_json(P: Poset) -> str:
    return utils.dump_json(PosetDocument.from_poset(P).model_dump(mode="json"))


def _parse_document(text: str, model: type[pydantic.BaseModel]) -> pydantic.BaseModel:
    try:
        return model.model_validate_json(text)
    except pydantic.ValidationError as e:
        raise PosetFormatError("Invalid JSON document", details=e.errors(include_url=False)) from None


def parse_poset(text: str, strict: bool = False) -> Poset:
    """Parse a poset in the text format or as JSON (JSON is recognized by a leading ``{``)."""
    if text.lstrip().startswith("{"):
        return _parse_document(text, PosetDocument).to_poset(strict)
    return parse_poset_text(text, strict)


def load_poset(path: str | pathlib.Path, strict: bool = False) -> Poset:
    return parse_poset(pathlib.Path(path).read_text(encoding="utf-8"), strict)


def parse_lattice(text: str, strict: bool = False) -> LatticeBundle:
    """Parse a lattice document (a poset in either format is accepted as well)."""
    if not text.lstrip().startswith("{"):
        return LatticeBundle(FiniteLattice.from_poset(parse_poset_text(text, strict)))
    doc = _parse_document(text, LatticeDocument)
    L = FiniteLattice.from_poset(doc.to_poset(strict))
    embedding = None
    if doc.upper_order is not None:
        embedding = PlanarEmbedding(
            lattice=L,
            upper_order={k: tuple(v) for k, v in doc.upper_order.items()},
            lower_order={k: tuple(v) for k, v in doc.lower_order.items()},
        )
    color = {(a, b): c for a, b, c in doc.colors or ()}
    for edge in color:
        if not L.is_cover(*edge):
            raise PosetFormatError(f"Colored pair {edge[0]}-{edge[1]} is not a cover", details=list(edge))
    return LatticeBundle(L, embedding, color)


def load_lattice(path: str | pathlib.Path, strict: bool = False) -> LatticeBundle:
    return parse_lattice(pathlib.Path(path).read_text(encoding="utf-8"), strict)


def dump_lattice_json(
    L: FiniteLattice,
    embedding: PlanarEmbedding | None = None,
    color: dict[tuple[str, str], str] | None = None,
) -> str:
    doc = LatticeDocument(
        elements=list(L.elements),
        covers=_sorted_covers(L.base),
        upper_order={k: list(v) for k, v in embedding.upper_order.items()} if embedding else None,
        lower_order={k: list(v) for k, v in embedding.lower_order.items()} if embedding else None,
        colors=sorted((a, b, c) for (a, b), c in color.items()) if color else None,
    )
    return utils.dump_json(doc.model_dump(mode="json", exclude_none=True))
