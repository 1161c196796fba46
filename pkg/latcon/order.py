"""Finite posets, isomorphism, cover-preserving embeddings and Birkhoff duality."""

from __future__ import annotations

__all__ = [
    "Poset",
    "EmbeddingWitness",
    "chain_poset",
    "antichain_poset",
    "f3",
    "principal_down_set",
    "down_set_lattice",
    "join_irreducibles",
    "are_isomorphic",
    "find_cover_preserving_embedding",
    "iter_cover_preserving_embeddings",
    "canonical_form",
    "poset_from_canonical",
    "enumerate_posets",
]

import collections
import dataclasses
import functools
import logging
from typing import TYPE_CHECKING, Iterable, Iterator, Mapping

from latcon import utils
from latcon.errors import (
    CyclicOrderError,
    RedundantCoverError,
    UnknownElementError,
    PosetFormatError,
)

if TYPE_CHECKING:
    from latcon.lattice import FiniteLattice

_logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True, slots=True)
class Poset:
    """
    A finite ordered set given by its cover relation.

    - The covers must be irredundant and acyclic; use :meth:`from_covers` to load hand-written input, it reduces
      redundant covers instead of rejecting them (unless ``strict=True``).
    - Values are immutable; every derived structure is computed once in ``__post_init__``.

    Attributes:
        elements: The element ids, in declaration order (this order is kept by every derived poset).
        covers: Pairs ``(a, b)`` meaning ``a`` is covered by ``b``.
    """

    elements: tuple[str, ...]
    covers: frozenset[tuple[str, str]]
    _index: dict[str, int] = dataclasses.field(init=False, repr=False, compare=False)
    _upper: tuple[tuple[int, ...], ...] = dataclasses.field(init=False, repr=False, compare=False)
    _lower: tuple[tuple[int, ...], ...] = dataclasses.field(init=False, repr=False, compare=False)
    _down: tuple[int, ...] = dataclasses.field(init=False, repr=False, compare=False)
    _up: tuple[int, ...] = dataclasses.field(init=False, repr=False, compare=False)
    _topo: tuple[int, ...] = dataclasses.field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "covers", frozenset(self.covers))
        index: dict[str, int] = {}
        for i, e in enumerate(self.elements):
            if e in index:
                raise PosetFormatError(f"Duplicate element id {e!r}")
            index[e] = i
        n = len(self.elements)
        upper: list[list[int]] = [[] for _ in range(n)]
        lower: list[list[int]] = [[] for _ in range(n)]
        for a, b in self.covers:
            if a not in index or b not in index:
                raise UnknownElementError(
                    f"Cover {a!r} < {b!r} uses an undeclared element",
                    details={"cover": [a, b]},
                )
            if a == b:
                raise CyclicOrderError(f"Self loop on {a!r}")
            upper[index[a]].append(index[b])
            lower[index[b]].append(index[a])
        for lst in (*upper, *lower):
            lst.sort()

        topo = _topological_order(n, upper, lower)
        if topo is None:
            raise CyclicOrderError("The cover relation contains a cycle")
        down = [0] * n
        for i in topo:
            mask = 1 << i
            for j in lower[i]:
                mask |= down[j]
            down[i] = mask
        up = [0] * n
        for i in reversed(topo):
            mask = 1 << i
            for j in upper[i]:
                mask |= up[j]
            up[i] = mask
        for i in range(n):
            for j in lower[i]:
                if any(k != j and down[k] >> j & 1 for k in lower[i]):
                    raise RedundantCoverError(
                        f"Cover {self.elements[j]!r} < {self.elements[i]!r} is implied by other covers",
                        details={"cover": [self.elements[j], self.elements[i]]},
                    )

        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_upper", tuple(map(tuple, upper)))
        object.__setattr__(self, "_lower", tuple(map(tuple, lower)))
        object.__setattr__(self, "_down", tuple(down))
        object.__setattr__(self, "_up", tuple(up))
        object.__setattr__(self, "_topo", tuple(topo))

    @classmethod
    def from_covers(
        cls,
        elements: Iterable[str],
        covers: Iterable[tuple[str, str]],
        strict: bool = False,
    ) -> Poset:
        """
        Build a poset from possibly redundant covers.

        Args:
            elements: The element ids (isolated elements must be listed here, others may be).
            covers: Pairs ``(a, b)`` with ``a < b``; pairs implied by transitivity are dropped with a warning.
            strict: Reject redundant pairs with :class:`RedundantCoverError` instead of dropping them.
        """
        elems = list(dict.fromkeys(elements))
        pairs = list(dict.fromkeys((str(a), str(b)) for a, b in covers))
        for a, b in pairs:
            for e in (a, b):
                if e not in elems:
                    elems.append(e)
        if strict:
            return cls(tuple(elems), frozenset(pairs))
        return poset_from_relation(elems, pairs)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[str]:
        return iter(self.elements)

    def __contains__(self, item: object) -> bool:
        return item in self._index

    def __str__(self) -> str:
        return f"Poset(size={len(self)}, covers={len(self.covers)})"

    def index(self, x: str) -> int:
        """The position of ``x`` in :attr:`elements`."""
        try:
            return self._index[x]
        except KeyError:
            raise UnknownElementError(f"Unknown element {x!r}", details={"element": x}) from None

    def leq(self, a: str, b: str) -> bool:
        """``a <= b``."""
        return bool(self._down[self.index(b)] >> self.index(a) & 1)

    def lt(self, a: str, b: str) -> bool:
        return a != b and self.leq(a, b)

    def comparable(self, a: str, b: str) -> bool:
        return self.leq(a, b) or self.leq(b, a)

    def is_cover(self, a: str, b: str) -> bool:
        return (a, b) in self.covers

    def upper_covers(self, x: str) -> tuple[str, ...]:
        return tuple(self.elements[j] for j in self._upper[self.index(x)])

    def lower_covers(self, x: str) -> tuple[str, ...]:
        return tuple(self.elements[j] for j in self._lower[self.index(x)])

    def maximal(self) -> tuple[str, ...]:
        return tuple(e for i, e in enumerate(self.elements) if not self._upper[i])

    def minimal(self) -> tuple[str, ...]:
        return tuple(e for i, e in enumerate(self.elements) if not self._lower[i])

    def linear_extension(self) -> tuple[str, ...]:
        """A deterministic linear extension (smallest declaration index first among the available elements)."""
        return tuple(self.elements[i] for i in self._topo)

    def down_mask(self, x: str) -> int:
        """Bitmask (over :attr:`elements` positions) of ``{y : y <= x}``."""
        return self._down[self.index(x)]

    def up_mask(self, x: str) -> int:
        """Bitmask (over :attr:`elements` positions) of ``{y : y >= x}``."""
        return self._up[self.index(x)]

    def mask_of(self, subset: Iterable[str]) -> int:
        return utils.bits_of(self.index(x) for x in subset)

    def subset_of(self, mask: int) -> tuple[str, ...]:
        return tuple(self.elements[i] for i in utils.iter_bits(mask))

    def down_set(self, subset: Iterable[str]) -> frozenset[str]:
        """The smallest down set containing ``subset``."""
        mask = 0
        for h in subset:
            mask |= self.down_mask(h)
        return frozenset(self.subset_of(mask))

    def up_set(self, subset: Iterable[str]) -> frozenset[str]:
        mask = 0
        for h in subset:
            mask |= self.up_mask(h)
        return frozenset(self.subset_of(mask))

    def is_down_set(self, subset: Iterable[str]) -> bool:
        s = set(subset)
        return all(set(self.lower_covers(x)) <= s for x in s)

    def subposet(self, subset: Iterable[str]) -> Poset:
        """The induced subposet (covers recomputed from the restricted order)."""
        keep = set(subset)
        elems = [e for e in self.elements if e in keep]
        rel = [(a, b) for a in elems for b in elems if a != b and self.leq(a, b)]
        return poset_from_relation(elems, rel)

    def dual(self) -> Poset:
        return Poset(self.elements, frozenset((b, a) for a, b in self.covers))

    def relabel(self, mapping: Mapping[str, str]) -> Poset:
        """Rename the elements (``mapping`` must be injective; unmapped elements keep their id)."""
        new = tuple(mapping.get(e, e) for e in self.elements)
        return Poset(
            new,
            frozenset((mapping.get(a, a), mapping.get(b, b)) for a, b in self.covers),
        )

    def height(self, x: str) -> int:
        """Length of the longest chain from a minimal element to ``x``."""
        return self._heights()[self.index(x)]

    def _heights(self) -> tuple[int, ...]:
        heights = [0] * len(self)
        for i in self._topo:
            heights[i] = max((heights[j] + 1 for j in self._lower[i]), default=0)
        return tuple(heights)

    def _depths(self) -> tuple[int, ...]:
        depths = [0] * len(self)
        for i in reversed(self._topo):
            depths[i] = max((depths[j] + 1 for j in self._upper[i]), default=0)
        return tuple(depths)


@dataclasses.dataclass(frozen=True, slots=True)
class EmbeddingWitness:
    """
    An injective map from the elements of a pattern to the elements of a host.

    Attributes:
        mapping: pattern element -> host element.
    """

    mapping: dict[str, str]

    def __getitem__(self, item: str) -> str:
        return self.mapping[item]

    def image(self) -> frozenset[str]:
        return frozenset(self.mapping.values())

    def is_valid(self, pattern: Poset, host: Poset, max_to_max: bool = False) -> bool:
        """Re-check the witness: injective, covers preserved, order reflected (and maximal elements kept)."""
        if set(self.mapping) != set(pattern.elements):
            return False
        if len(self.image()) != len(self.mapping):
            return False
        if any(not host.is_cover(self.mapping[a], self.mapping[b]) for a, b in pattern.covers):
            return False
        for x in pattern:
            for y in pattern:
                if host.leq(self.mapping[x], self.mapping[y]) and not pattern.leq(x, y):
                    return False
        if max_to_max:
            host_max = set(host.maximal())
            if any(self.mapping[m] not in host_max for m in pattern.maximal()):
                return False
        return True


def _topological_order(
    n: int, upper: list[list[int]], lower: list[list[int]]
) -> list[int] | None:
    indeg = [len(lower[i]) for i in range(n)]
    ready = [i for i in range(n) if indeg[i] == 0]
    order: list[int] = []
    while ready:
        ready.sort(reverse=True)
        i = ready.pop()
        order.append(i)
        for j in upper[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                ready.append(j)
    return order if len(order) == n else None


def poset_from_relation(
    elements: Iterable[str], relation: Iterable[tuple[str, str]]
) -> Poset:
    """
    Build a poset from any relation whose transitive closure is a strict order.

    The covers are the transitive reduction of the relation.
    """
    elems = list(dict.fromkeys(elements))
    index = {e: i for i, e in enumerate(elems)}
    n = len(elems)
    succ: list[set[int]] = [set() for _ in range(n)]
    for a, b in relation:
        if a not in index or b not in index:
            raise UnknownElementError(f"Relation {a!r} < {b!r} uses an undeclared element")
        if a == b:
            raise CyclicOrderError(f"Self loop on {a!r}")
        succ[index[a]].add(index[b])
    pred: list[list[int]] = [[] for _ in range(n)]
    for i in range(n):
        for j in succ[i]:
            pred[j].append(i)
    topo = _topological_order(n, [sorted(s) for s in succ], pred)
    if topo is None:
        raise CyclicOrderError("The relation contains a cycle")
    below = [0] * n
    for i in topo:
        mask = 0
        for j in pred[i]:
            mask |= below[j] | (1 << j)
        below[i] = mask
    covers = set()
    for i in range(n):
        strictly_below = list(utils.iter_bits(below[i]))
        for j in strictly_below:
            if not any(below[k] >> j & 1 for k in strictly_below):
                covers.add((elems[j], elems[i]))
    redundant = sum(map(len, pred)) - len(covers)
    if redundant > 0:
        _logger.warning("Dropped %d relation pairs implied by transitivity", redundant)
    return Poset(tuple(elems), frozenset(covers))


def chain_poset(n: int, prefix: str = "c") -> Poset:
    """The ``n``-element chain ``c0 < c1 < ...``."""
    elems = tuple(f"{prefix}{i}" for i in range(n))
    return Poset(elems, frozenset(zip(elems, elems[1:])))


def antichain_poset(n: int, prefix: str = "x") -> Poset:
    return Poset(tuple(f"{prefix}{i}" for i in range(n)), frozenset())


def f3() -> Poset:
    """The fork: one bottom with three covers."""
    return Poset(("o", "a", "b", "c"), frozenset({("o", "a"), ("o", "b"), ("o", "c")}))


def principal_down_set(P: Poset, H: Iterable[str]) -> frozenset[str]:
    """``{x : x <= h for some h in H}``."""
    return P.down_set(H)


def _subset_id(P: Poset, mask: int) -> str:
    return "{" + ",".join(P.subset_of(mask)) + "}"


def down_set_lattice(P: Poset) -> FiniteLattice:
    """
    The lattice of all down sets of ``P`` ordered by inclusion.

    Element ids are the down sets written as ``{a,b}`` (members in the declaration order of ``P``); ``{}`` is the
    bottom.
    """
    from latcon.lattice import FiniteLattice

    masks = _down_set_masks(P)
    masks.sort(key=lambda m: (utils.popcount(m), [i for i in utils.iter_bits(m)]))
    ids = {m: _subset_id(P, m) for m in masks}
    covers = set()
    for m in masks:
        for i in range(len(P)):
            if not m >> i & 1 and (P._down[i] & ~(1 << i)) & ~m == 0:
                covers.add((ids[m], ids[m | 1 << i]))
    return FiniteLattice.from_poset(Poset(tuple(ids[m] for m in masks), frozenset(covers)))


def _down_set_masks(P: Poset) -> list[int]:
    seen = {0}
    stack = [0]
    while stack:
        m = stack.pop()
        for i in range(len(P)):
            if not m >> i & 1 and (P._down[i] & ~(1 << i)) & ~m == 0:
                nxt = m | 1 << i
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
    return list(seen)


def join_irreducibles(D: FiniteLattice | Poset) -> Poset:
    """The subposet of elements with exactly one lower cover."""
    base = D if isinstance(D, Poset) else D.base
    return base.subposet(e for e in base if len(base.lower_covers(e)) == 1)


# ====================================================================================================
# Embeddings and isomorphism


def _search_order(P: Poset) -> list[str]:
    """Pattern elements sorted by (in-degree, out-degree, id), then reordered so each element touches a placed one."""
    ranked = sorted(
        P.elements,
        key=lambda e: (len(P.lower_covers(e)), len(P.upper_covers(e)), e),
    )
    order: list[str] = []
    placed: set[str] = set()
    remaining = list(ranked)
    while remaining:
        pick = next(
            (
                e
                for e in remaining
                if any(n in placed for n in (*P.lower_covers(e), *P.upper_covers(e)))
            ),
            remaining[0],
        )
        order.append(pick)
        placed.add(pick)
        remaining.remove(pick)
    return order


def iter_cover_preserving_embeddings(
    pattern: Poset,
    host: Poset,
    max_to_max: bool = False,
    bijective: bool = False,
) -> Iterator[EmbeddingWitness]:
    """
    Yield every injective map that maps covers to covers and reflects the order, in a deterministic order.

    Args:
        pattern: The poset to embed.
        host: The poset to embed into.
        max_to_max: Maximal elements of ``pattern`` must land on maximal elements of ``host``.
        bijective: Require an isomorphism (equal sizes, equal degrees and heights).
    """
    if len(pattern) > len(host):
        return
    if bijective and (
        len(pattern) != len(host) or len(pattern.covers) != len(host.covers)
    ):
        return
    order = _search_order(pattern)
    host_elems = sorted(
        host.elements,
        key=lambda e: (len(host.lower_covers(e)), len(host.upper_covers(e)), e),
    )
    host_max = set(host.maximal())
    pattern_max = set(pattern.maximal())
    p_heights = dict(zip(pattern.elements, pattern._heights()))
    h_heights = dict(zip(host.elements, host._heights()))
    p_depths = dict(zip(pattern.elements, pattern._depths()))
    h_depths = dict(zip(host.elements, host._depths()))

    def candidates_ok(x: str, y: str) -> bool:
        nl, nu = len(pattern.lower_covers(x)), len(pattern.upper_covers(x))
        ml, mu = len(host.lower_covers(y)), len(host.upper_covers(y))
        if bijective:
            return (
                (nl, nu) == (ml, mu)
                and p_heights[x] == h_heights[y]
                and p_depths[x] == h_depths[y]
            )
        if ml < nl or mu < nu:
            return False
        if max_to_max and x in pattern_max and y not in host_max:
            return False
        return True

    mapping: dict[str, str] = {}
    used: set[str] = set()

    def consistent(x: str, y: str) -> bool:
        for z, w in mapping.items():
            if pattern.is_cover(x, z) and not host.is_cover(y, w):
                return False
            if pattern.is_cover(z, x) and not host.is_cover(w, y):
                return False
            if host.leq(y, w) and not pattern.leq(x, z):
                return False
            if host.leq(w, y) and not pattern.leq(z, x):
                return False
            if bijective and host.is_cover(y, w) != pattern.is_cover(x, z):
                return False
            if bijective and host.is_cover(w, y) != pattern.is_cover(z, x):
                return False
        return True

    def extend(k: int) -> Iterator[EmbeddingWitness]:
        if k == len(order):
            yield EmbeddingWitness(dict(mapping))
            return
        x = order[k]
        anchored = [
            mapping[n] for n in (*pattern.lower_covers(x), *pattern.upper_covers(x)) if n in mapping
        ]
        if anchored:
            first = anchored[0]
            pool = sorted(
                set(host.lower_covers(first)) | set(host.upper_covers(first)),
                key=host_elems.index,
            )
        else:
            pool = host_elems
        for y in pool:
            if y in used or not candidates_ok(x, y) or not consistent(x, y):
                continue
            mapping[x] = y
            used.add(y)
            yield from extend(k + 1)
            del mapping[x]
            used.discard(y)

    yield from extend(0)


def find_cover_preserving_embedding(
    pattern: Poset, host: Poset, max_to_max: bool = False
) -> EmbeddingWitness | None:
    """The first cover-preserving embedding of ``pattern`` into ``host`` (deterministic), or ``None``."""
    return next(iter_cover_preserving_embeddings(pattern, host, max_to_max), None)


def are_isomorphic(P: Poset, Q: Poset) -> EmbeddingWitness | None:
    """A bijective cover-preserving witness ``P -> Q`` if the posets are isomorphic, else ``None``."""
    if len(P) != len(Q) or len(P.covers) != len(Q.covers):
        return None
    if sorted(map(len, P._upper)) != sorted(map(len, Q._upper)):
        return None
    if sorted(P._heights()) != sorted(Q._heights()):
        return None
    return next(iter_cover_preserving_embeddings(P, Q, bijective=True), None)


# ====================================================================================================
# Canonical forms


def _refine(P: Poset, cells: list[list[int]]) -> list[list[int]]:
    """Equitable refinement of an ordered partition by the cell indices of upper and lower covers."""
    while True:
        cell_of = {v: c for c, cell in enumerate(cells) for v in cell}
        new_cells: list[list[int]] = []
        for cell in cells:
            groups: dict[tuple, list[int]] = collections.defaultdict(list)
            for v in cell:
                sig = (
                    tuple(sorted(cell_of[u] for u in P._upper[v])),
                    tuple(sorted(cell_of[u] for u in P._lower[v])),
                )
                groups[sig].append(v)
            for sig in sorted(groups):
                new_cells.append(groups[sig])
        if len(new_cells) == len(cells):
            return new_cells
        cells = new_cells


def _encode(P: Poset, order: list[int]) -> str:
    pos = {v: i for i, v in enumerate(order)}
    n = len(order)
    rows = []
    for v in order:
        row = ["0"] * n
        for u in P._upper[v]:
            row[pos[u]] = "1"
        rows.append("".join(row))
    return f"{n}:" + "".join(rows)


def canonical_form(P: Poset) -> str:
    """
    A string that is equal for two posets iff they are isomorphic.

    The string is ``"<n>:<bits>"``: the row-major cover matrix under the ordering of the elements that minimizes it
    among the orderings reachable by refinement and individualization. Twin elements (same upper and lower covers)
    are interchangeable, so only one of them is individualized.
    """
    n = len(P)
    if n == 0:
        return "0:"
    heights, depths = P._heights(), P._depths()
    keyed: dict[tuple, list[int]] = collections.defaultdict(list)
    for v in range(n):
        keyed[(heights[v], depths[v], len(P._lower[v]), len(P._upper[v]))].append(v)
    cells = _refine(P, [keyed[k] for k in sorted(keyed)])
    best: list[str] = []

    def search(cells: list[list[int]]) -> None:
        target = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if target is None:
            code = _encode(P, [c[0] for c in cells])
            if not best or code < best[0]:
                best[:] = [code]
            return
        seen_twins: set[tuple] = set()
        for v in cells[target]:
            twin_key = (P._upper[v], P._lower[v])
            if twin_key in seen_twins:
                continue
            seen_twins.add(twin_key)
            rest = [u for u in cells[target] if u != v]
            search(_refine(P, cells[:target] + [[v], rest] + cells[target + 1 :]))

    search(cells)
    return best[0]


@functools.lru_cache(maxsize=4096)
def poset_from_canonical(code: str) -> Poset:
    """Decode a :func:`canonical_form` string into a poset with elements ``"0"``, ``"1"``, ..."""
    try:
        size, bits = code.split(":")
        n = int(size)
    except ValueError:
        raise PosetFormatError(f"Not a canonical poset encoding: {code!r}") from None
    if len(bits) != n * n:
        raise PosetFormatError(f"Not a canonical poset encoding: {code!r}")
    elems = tuple(str(i) for i in range(n))
    covers = frozenset(
        (elems[i], elems[j]) for i in range(n) for j in range(n) if bits[i * n + j] == "1"
    )
    return Poset(elems, covers)


def enumerate_posets(n: int) -> list[Poset]:
    """
    All posets with exactly ``n`` elements, one per isomorphism class, sorted by canonical form.

    Every poset arises from a smaller one by adding a new maximal element above a down set; duplicates are
    rejected by canonical form.
    """
    level: dict[str, Poset] = {"0:": Poset((), frozenset())}
    for size in range(1, n + 1):
        nxt: dict[str, Poset] = {}
        for code in sorted(level):
            base = poset_from_canonical(code)
            new = str(size - 1)
            for mask in sorted(_down_set_masks(base)):
                tops = [
                    base.elements[i]
                    for i in utils.iter_bits(mask)
                    if not any(base._down[j] >> i & 1 for j in utils.iter_bits(mask) if j != i)
                ]
                cand = Poset(
                    (*base.elements, new),
                    base.covers | {(t, new) for t in tops},
                )
                key = canonical_form(cand)
                if key not in nxt:
                    nxt[key] = poset_from_canonical(key)
        level = nxt
        _logger.debug("Posets with %d elements: %d", size, len(level))
    return [level[k] for k in sorted(level)]
