"""
Exhaustive generation of small lattices, the slim planar semimodular ones among them, and the catalog of the posets
that occur as their join-irreducible congruences.

Removing an atom from a lattice leaves a lattice, so every lattice with ``n + 1`` elements is a lattice ``K`` with
``n`` elements plus a new atom ``a``. The elements above ``a`` form an up set ``F`` of ``K`` with ``1 ∈ F``, ``0 ∉ F``
and ``x ∧ y ∈ F`` or ``x ∧ y = 0`` for all ``x, y ∈ F``; conversely every such ``F`` gives a lattice. Isomorphic
results are rejected by canonical form.
"""

from __future__ import annotations

__all__ = [
    "CatalogEntry",
    "Catalog",
    "lattice_codes",
    "enumerate_lattices",
    "enumerate_sps",
    "enumerate_sr",
    "build_catalog",
    "hunt_candidates",
]

import concurrent.futures
import dataclasses
import logging
import pathlib
import threading
from typing import Any, Iterator

from latcon import utils
from latcon.config import Settings
from latcon.congruence import ji_congruence_poset
from latcon.errors import CapExceeded, EmbeddingNotFound, PosetFormatError
from latcon.lattice import FiniteLattice, is_planar, is_semimodular, is_slim
from latcon.order import (
    Poset,
    _down_set_masks,
    canonical_form,
    enumerate_posets,
    poset_from_canonical,
)
from latcon.planar import PlanarEmbedding, find_embedding, is_rectangular
from latcon.properties import check_all

_logger = logging.getLogger(__name__)

_levels: dict[int, list[str]] = {1: ["1:0"], 2: ["2:0100"]}
_levels_lock = threading.Lock()


def _extensions(code: str) -> set[str]:
    """Canonical forms of the lattices obtained from ``code`` by adding an atom."""
    K = FiniteLattice.from_poset(poset_from_canonical(code))
    P = K.base
    n = len(K)
    full = (1 << n) - 1
    zero, one = K.index(K.zero), K.index(K.one)
    new = str(n)
    found = set()
    for down in _down_set_masks(P):
        F = full & ~down
        if not F >> one & 1 or F >> zero & 1:
            continue
        members = list(utils.iter_bits(F))
        if any(
            not F >> K.meet_table[x][y] & 1 and K.meet_table[x][y] != zero
            for i, x in enumerate(members)
            for y in members[i + 1 :]
        ):
            continue
        minimal = [P.elements[f] for f in members if P._down[f] & F == 1 << f]
        covers = {(a, b) for a, b in P.covers if not (a == K.zero and F >> P.index(b) & 1)}
        covers |= {(K.zero, new)} | {(new, f) for f in minimal}
        found.add(canonical_form(Poset((*P.elements, new), frozenset(covers))))
    return found


def _checkpoint_path(settings: Settings, n: int) -> pathlib.Path:
    return settings.cache_dir / "lattices" / f"{n}.txt"


def _partial_path(settings: Settings, n: int) -> pathlib.Path:
    return settings.cache_dir / "lattices" / f"{n}.partial.json"


def lattice_codes(n: int, settings: Settings | None = None, persist: bool = False) -> list[str]:
    """
    Canonical forms of all lattices with ``n`` elements, sorted.

    Args:
        n: Lattice size.
        settings: Cap, worker count, checkpoint interval and cache directory.
        persist: Read and write finished levels under ``settings.cache_dir``, and resume an unfinished level from
            its partial checkpoint.

    Raises:
        CapExceeded: ``n`` is above ``settings.lattice_cap``.
        PosetFormatError: A partial checkpoint is malformed.
    """
    settings = settings or Settings()
    if n > settings.lattice_cap:
        raise CapExceeded(
            f"Lattice enumeration is capped at {settings.lattice_cap} elements",
            details={"requested": n, "cap": settings.lattice_cap},
        )
    if n < 1:
        return []
    with _levels_lock:
        if n in _levels:
            return _levels[n]
    path = _checkpoint_path(settings, n)
    if persist and path.exists():
        codes = path.read_text(encoding="utf-8").split()
        _logger.info("Loaded %d lattices of size %d from %s", len(codes), n, path)
    else:
        partial = _partial_path(settings, n) if persist else None
        codes = _next_level(lattice_codes(n - 1, settings, persist), settings, partial)
        if persist:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text("\n".join(codes) + "\n", encoding="utf-8")
            partial.unlink(missing_ok=True)
    with _levels_lock:
        _levels[n] = codes
    return codes


def _read_partial(partial: pathlib.Path) -> tuple[int, set[str]]:
    try:
        state = utils.load_json(partial.read_text(encoding="utf-8"))
        return int(state["processed"]), set(state["found"])
    except (KeyError, ValueError, TypeError) as e:
        raise PosetFormatError(f"Bad partial checkpoint {partial}", details=str(e)) from None


def _next_level(previous: list[str], settings: Settings, partial: pathlib.Path | None = None) -> list[str]:
    """Extend every lattice of ``previous``; with ``partial``, save progress every ``checkpoint_every`` lattices."""
    found: set[str] = set()
    processed = 0
    if partial is not None and partial.exists():
        processed, found = _read_partial(partial)
        _logger.info("Resuming from %s after %d of %d lattices", partial, processed, len(previous))
    with concurrent.futures.ThreadPoolExecutor(max_workers=settings.workers) as pool:
        futures = [(code, pool.submit(_extensions, code)) for code in previous[processed:]]
        for code, future in futures:
            try:
                found |= future.result()
            except Exception:
                _logger.exception("Extending lattice %s failed", code)
                raise
            processed += 1
            if processed % settings.checkpoint_every == 0:
                _logger.info("Extended %d of %d lattices, %d found so far", processed, len(previous), len(found))
                if partial is not None:
                    partial.parent.mkdir(parents=True, exist_ok=True)
                    partial.write_text(
                        utils.dump_json({"processed": processed, "found": sorted(found)}), encoding="utf-8"
                    )
    codes = sorted(found)
    _logger.info("Lattices with %d elements: %d", int(codes[0].split(":")[0]) if codes else 0, len(codes))
    return codes


def enumerate_lattices(n: int, settings: Settings | None = None, persist: bool = False) -> Iterator[FiniteLattice]:
    """
    All lattices with exactly ``n`` elements, one per isomorphism class, in canonical-form order.

    Element ids are ``"0"``, ``"1"``, ... as decoded from the canonical form.

    Raises:
        CapExceeded: ``n`` is above the configured cap.
    """
    for code in lattice_codes(n, settings, persist):
        yield FiniteLattice.from_poset(poset_from_canonical(code))


def enumerate_sps(n: int, settings: Settings | None = None, persist: bool = False) -> Iterator[PlanarEmbedding]:
    """
    The slim planar semimodular lattices with ``n`` elements, each with a planar embedding.

    Raises:
        CapExceeded: ``n`` is above the configured cap.
        EmbeddingNotFound: A lattice passed the planarity test but no embedding was found.
    """
    for L in enumerate_lattices(n, settings, persist):
        if L.rank is None or not is_semimodular(L) or not is_slim(L) or not is_planar(L):
            continue
        try:
            yield find_embedding(L)
        except EmbeddingNotFound:
            _logger.error("Planar SPS lattice without an embedding: %s", canonical_form(L.base))
            raise


def enumerate_sr(n: int, settings: Settings | None = None, persist: bool = False) -> Iterator[PlanarEmbedding]:
    """The slim rectangular lattices with ``n`` elements."""
    return (E for E in enumerate_sps(n, settings, persist) if is_rectangular(E))


# ====================================================================================================
# Catalog


@dataclasses.dataclass(slots=True)
class CatalogEntry:
    """
    Attributes:
        count: How many SPS lattices have this poset of join-irreducible congruences.
        witness: The canonical form of the first such lattice (smallest size first).
    """

    count: int
    witness: str

    @property
    def witness_file(self) -> str:
        return f"{utils.hashlib_name(self.witness)}.lattice.json"


@dataclasses.dataclass(slots=True)
class Catalog:
    """
    Which posets occur as ``Ji Con L`` of a slim planar semimodular lattice ``L`` with at most ``cap`` elements.

    Attributes:
        cap: Largest lattice size searched.
        entries: Canonical form of the poset -> entry.
        metadata: Run parameters and totals.
    """

    cap: int
    entries: dict[str, CatalogEntry] = dataclasses.field(default_factory=dict)
    metadata: dict[str, Any] = dataclasses.field(default_factory=dict)

    def __contains__(self, P: object) -> bool:
        if isinstance(P, Poset):
            return canonical_form(P) in self.entries
        return P in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def add(self, L: FiniteLattice) -> str:
        key = canonical_form(ji_congruence_poset(L).poset)
        entry = self.entries.get(key)
        if entry is None:
            self.entries[key] = CatalogEntry(1, canonical_form(L.base))
        else:
            entry.count += 1
        return key

    def to_tsv(self) -> str:
        lines = [f"{k}\t{e.count}\t{e.witness_file}" for k, e in sorted(self.entries.items())]
        return "".join(line + "\n" for line in lines)

    def save(self, directory: str | pathlib.Path) -> pathlib.Path:
        """
        Write ``catalog.tsv``, ``metadata.json`` and one lattice JSON per witness under ``witnesses/``.

        Returns:
            The path of ``catalog.tsv``.
        """
        from latcon.serialization import dump_lattice_json

        root = pathlib.Path(directory)
        (root / "witnesses").mkdir(parents=True, exist_ok=True)
        for entry in self.entries.values():
            L = FiniteLattice.from_poset(poset_from_canonical(entry.witness))
            E = find_embedding(L)
            (root / "witnesses" / entry.witness_file).write_text(
                dump_lattice_json(L, E), encoding="utf-8"
            )
        (root / "metadata.json").write_text(
            utils.dump_json({"cap": self.cap, **self.metadata}), encoding="utf-8"
        )
        path = root / "catalog.tsv"
        path.write_text(self.to_tsv(), encoding="utf-8")
        _logger.info("Saved a catalog of %d posets to %s", len(self), root)
        return path

    @classmethod
    def load(cls, directory: str | pathlib.Path) -> Catalog:
        """
        Read a catalog written by :meth:`save`.

        Raises:
            PosetFormatError: ``catalog.tsv`` or ``metadata.json`` is malformed.
        """
        from latcon.serialization import load_lattice

        root = pathlib.Path(directory)
        try:
            metadata = utils.load_json((root / "metadata.json").read_text(encoding="utf-8"))
            cap = int(metadata.pop("cap"))
        except (KeyError, ValueError, TypeError) as e:
            raise PosetFormatError(f"Bad catalog metadata in {root}", details=str(e)) from None
        catalog = cls(cap=cap, metadata=metadata)
        for lineno, line in enumerate((root / "catalog.tsv").read_text(encoding="utf-8").splitlines(), 1):
            parts = line.split("\t")
            if len(parts) != 3 or not parts[1].isdigit():
                raise PosetFormatError(f"Bad catalog line {lineno}", details={"line": line})
            key, count, witness_file = parts
            witness = canonical_form(load_lattice(root / "witnesses" / witness_file).lattice.base)
            catalog.entries[key] = CatalogEntry(int(count), witness)
        return catalog

    def replay(self) -> list[str]:
        """Keys whose witness does not reproduce them (empty when the catalog is sound)."""
        bad = []
        for key, entry in sorted(self.entries.items()):
            L = FiniteLattice.from_poset(poset_from_canonical(entry.witness))
            if canonical_form(ji_congruence_poset(L).poset) != key:
                bad.append(key)
        return bad


def build_catalog(n_max: int, settings: Settings | None = None, persist: bool = False) -> Catalog:
    """
    Catalog ``Ji Con L`` for every slim planar semimodular ``L`` with ``2 <= |L| <= n_max``.

    Raises:
        CapExceeded: ``n_max`` is above the configured cap.
    """
    catalog = Catalog(cap=n_max)
    per_size = {}
    for n in range(2, n_max + 1):
        count = 0
        for E in enumerate_sps(n, settings, persist):
            catalog.add(E.lattice)
            count += 1
        per_size[str(n)] = count
        _logger.info("SPS lattices with %d elements: %d (catalog size %d)", n, count, len(catalog))
    catalog.metadata = {"sps_per_size": per_size, "keys": len(catalog), "fixtures": utils.fixtures_checksum()}
    return catalog


def hunt_candidates(n_max_poset: int, catalog: Catalog, settings: Settings | None = None) -> list[Poset]:
    """
    Posets with at most ``n_max_poset`` elements that pass every known property yet are not in the catalog.

    Raises:
        CapExceeded: ``n_max_poset`` is above ``settings.poset_cap``.
    """
    settings = settings or Settings()
    if n_max_poset > settings.poset_cap:
        raise CapExceeded(
            f"Poset enumeration is capped at {settings.poset_cap} elements",
            details={"requested": n_max_poset, "cap": settings.poset_cap},
        )
    candidates = []
    for n in range(1, n_max_poset + 1):
        for P in enumerate_posets(n):
            if all(r.passed for r in check_all(P)) and P not in catalog:
                candidates.append(P)
        _logger.info("Posets up to %d elements: %d candidates", n, len(candidates))
    return candidates
