"""Finite lattices: validation, meet/join tables, structural predicates and gluing."""

from __future__ import annotations

__all__ = [
    "FiniteLattice",
    "from_poset",
    "is_semimodular",
    "is_modular",
    "is_distributive",
    "is_slim",
    "is_planar",
    "glued_sum",
    "glued_sum_maps",
    "product",
    "dual_lattice",
    "find_cover_preserving_sublattice",
    "iter_sublattice_embeddings",
    "chain",
    "boolean",
    "m3",
    "n5",
    "s7",
    "grid",
]

import dataclasses
import functools
import itertools
import logging
from typing import Iterable, Iterator

import networkx as nx

from latcon import utils
from latcon.errors import EmptyPosetError, NotALatticeError
from latcon.order import EmbeddingWitness, Poset, antichain_poset, down_set_lattice

_logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True, slots=True)
class FiniteLattice:
    """
    A poset validated to be a lattice, with materialized meet and join tables.

    - Build it with :meth:`from_poset`; the tables are always recomputed, never deserialized.
    - The tables are indexed by positions in ``base.elements``; use :meth:`meet` / :meth:`join` for ids.

    Attributes:
        base: The underlying poset.
        meet_table: ``meet_table[i][j]`` is the position of the meet of the ``i``-th and ``j``-th elements.
        join_table: Same for joins.
        rank: Element -> rank, or ``None`` when the lattice is not graded.
    """

    base: Poset
    meet_table: tuple[tuple[int, ...], ...] = dataclasses.field(repr=False)
    join_table: tuple[tuple[int, ...], ...] = dataclasses.field(repr=False)
    rank: dict[str, int] | None = dataclasses.field(repr=False, compare=False, hash=False)
    _cover_set: frozenset[tuple[int, int]] = dataclasses.field(
        init=False, repr=False, compare=False, hash=False
    )

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "_cover_set",
            frozenset((self.base.index(a), self.base.index(b)) for a, b in self.base.covers),
        )

    @classmethod
    def from_poset(cls, P: Poset) -> FiniteLattice:
        return from_poset(P)

    def __len__(self) -> int:
        return len(self.base)

    def __iter__(self) -> Iterable[str]:
        return iter(self.base.elements)

    def __contains__(self, item: object) -> bool:
        return item in self.base

    def __str__(self) -> str:
        return f"FiniteLattice(size={len(self)}, graded={self.rank is not None})"

    @property
    def elements(self) -> tuple[str, ...]:
        return self.base.elements

    @property
    def covers(self) -> frozenset[tuple[str, str]]:
        return self.base.covers

    @property
    def zero(self) -> str:
        return self.base.minimal()[0]

    @property
    def one(self) -> str:
        return self.base.maximal()[0]

    def index(self, x: str) -> int:
        return self.base.index(x)

    def meet(self, a: str, b: str) -> str:
        return self.base.elements[self.meet_table[self.index(a)][self.index(b)]]

    def join(self, a: str, b: str) -> str:
        return self.base.elements[self.join_table[self.index(a)][self.index(b)]]

    def meet_all(self, items: Iterable[str]) -> str:
        return functools.reduce(self.meet, items, self.one)

    def join_all(self, items: Iterable[str]) -> str:
        return functools.reduce(self.join, items, self.zero)

    def leq(self, a: str, b: str) -> bool:
        return self.base.leq(a, b)

    def is_cover(self, a: str, b: str) -> bool:
        return (a, b) in self.base.covers

    def upper_covers(self, x: str) -> tuple[str, ...]:
        return self.base.upper_covers(x)

    def lower_covers(self, x: str) -> tuple[str, ...]:
        return self.base.lower_covers(x)

    def edges(self) -> list[tuple[str, str]]:
        """All covers, sorted by (bottom position, top position)."""
        return sorted(self.base.covers, key=lambda e: (self.index(e[0]), self.index(e[1])))

    def is_join_irreducible(self, x: str) -> bool:
        return len(self.lower_covers(x)) == 1

    def is_meet_irreducible(self, x: str) -> bool:
        return len(self.upper_covers(x)) == 1

    def is_doubly_irreducible(self, x: str) -> bool:
        return self.is_join_irreducible(x) and self.is_meet_irreducible(x)

    def interval(self, a: str, b: str) -> tuple[str, ...]:
        """The elements of ``[a, b]`` in declaration order."""
        return self.base.subset_of(self.base.up_mask(a) & self.base.down_mask(b))

    def height(self) -> int:
        """Length of the longest chain."""
        return self.base.height(self.one)

    def dual(self) -> FiniteLattice:
        return from_poset(self.base.dual())

    def relabel(self, mapping: dict[str, str]) -> FiniteLattice:
        return from_poset(self.base.relabel(mapping))


def from_poset(P: Poset) -> FiniteLattice:
    """
    Verify that ``P`` is a lattice and build its tables.

    Bitmasks are re-indexed by a linear extension so the first member of a set of common upper bounds is one of its
    minimal elements: the least upper bound exists iff that member's up set is the whole set.

    Raises:
        EmptyPosetError: ``P`` has no elements.
        NotALatticeError: Some pair has no (unique) least upper or greatest lower bound.
    """
    n = len(P)
    if n == 0:
        raise EmptyPosetError("A lattice needs at least one element")
    topo = [P.index(e) for e in P.linear_extension()]
    pos = {v: p for p, v in enumerate(topo)}

    def remap(mask: int) -> int:
        return utils.bits_of(pos[v] for v in utils.iter_bits(mask))

    up_t = [remap(P._up[v]) for v in topo]
    down_t = [remap(P._down[v]) for v in topo]
    meet = [[0] * n for _ in range(n)]
    join = [[0] * n for _ in range(n)]
    for p in range(n):
        for q in range(p, n):
            common = up_t[p] & up_t[q]
            if not common:
                raise NotALatticeError(_pair(P, topo, p, q), "no-lub")
            low = (common & -common).bit_length() - 1
            if up_t[low] != common:
                raise NotALatticeError(_pair(P, topo, p, q), "not-unique", "lub")
            common = down_t[p] & down_t[q]
            if not common:
                raise NotALatticeError(_pair(P, topo, p, q), "no-glb")
            high = common.bit_length() - 1
            if down_t[high] != common:
                raise NotALatticeError(_pair(P, topo, p, q), "not-unique", "glb")
            a, b = topo[p], topo[q]
            join[a][b] = join[b][a] = topo[low]
            meet[a][b] = meet[b][a] = topo[high]

    heights = P._heights()
    graded = all(heights[P.index(b)] == heights[P.index(a)] + 1 for a, b in P.covers)
    rank = {e: heights[i] for i, e in enumerate(P.elements)} if graded else None
    return FiniteLattice(
        base=P,
        meet_table=tuple(map(tuple, meet)),
        join_table=tuple(map(tuple, join)),
        rank=rank,
    )


def _pair(P: Poset, topo: list[int], p: int, q: int) -> tuple[str, str]:
    return P.elements[topo[p]], P.elements[topo[q]]


# ====================================================================================================
# Predicates


def is_semimodular(L: FiniteLattice) -> bool:
    """``a ∧ b ≺ a`` implies ``b ≺ a ∨ b`` for all ``a``, ``b``."""
    covers = L._cover_set
    n = len(L)
    for a in range(n):
        for b in range(n):
            if (L.meet_table[a][b], a) in covers and (b, L.join_table[a][b]) not in covers:
                return False
    return True


def is_modular(L: FiniteLattice) -> bool:
    """``a <= c`` implies ``a ∨ (b ∧ c) = (a ∨ b) ∧ c``."""
    M, J = L.meet_table, L.join_table
    n = len(L)
    for a in range(n):
        for c in range(n):
            if M[a][c] != a:
                continue
            for b in range(n):
                if J[a][M[b][c]] != M[J[a][b]][c]:
                    return False
    return True


def is_distributive(L: FiniteLattice) -> bool:
    """``x ∧ (y ∨ z) = (x ∧ y) ∨ (x ∧ z)`` for all triples."""
    M, J = L.meet_table, L.join_table
    n = len(L)
    for x in range(n):
        mx = M[x]
        for y in range(n):
            for z in range(y + 1, n):
                if mx[J[y][z]] != J[mx[y]][mx[z]]:
                    return False
    return True


def find_m3_triple(L: FiniteLattice) -> tuple[str, str, str] | None:
    """Three pairwise incomparable elements with a common meet and a common join (an M3 sublattice), or ``None``."""
    M, J = L.meet_table, L.join_table
    P = L.base
    n = len(L)
    for x in range(n):
        for y in range(x + 1, n):
            u, v = M[x][y], J[x][y]
            if u in (x, y):
                continue
            between = P._up[u] & P._down[v] & ~(1 << u) & ~(1 << v)
            for z in utils.iter_bits(between):
                if z <= y:
                    continue
                if M[x][z] == u and M[y][z] == u and J[x][z] == v and J[y][z] == v:
                    return P.elements[x], P.elements[y], P.elements[z]
    return None


def is_slim(L: FiniteLattice) -> bool:
    """No M3 sublattice."""
    return find_m3_triple(L) is None


def cover_graph(L: FiniteLattice) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(L.elements)
    graph.add_edges_from(L.covers)
    return graph


def is_planar(L: FiniteLattice) -> bool:
    """The undirected cover graph plus an edge ``{0, 1}`` is a planar graph."""
    graph = cover_graph(L)
    if len(L) > 1:
        graph.add_edge(L.zero, L.one)
    planar, _ = nx.check_planarity(graph)
    return planar


# ====================================================================================================
# Constructions


def _disjoint_ids(A: FiniteLattice, B: FiniteLattice) -> tuple[dict[str, str], dict[str, str]]:
    """Renamings of A and B for gluing (identity unless an id of A reappears above the bottom of B)."""
    if set(A.elements) & (set(B.elements) - {B.zero}):
        return {e: f"l.{e}" for e in A.elements}, {e: f"u.{e}" for e in B.elements}
    return {e: e for e in A.elements}, {e: e for e in B.elements}


def glued_sum(A: FiniteLattice, B: FiniteLattice) -> FiniteLattice:
    """
    Stack ``B`` on top of ``A``, identifying the top of ``A`` with the bottom of ``B``.

    Ids are kept when the two id sets are disjoint (otherwise prefixed with ``l.`` and ``u.``); the identified
    element keeps the id of the top of ``A``.
    """
    return glued_sum_maps(A, B)[0]


def glued_sum_maps(
    A: FiniteLattice, B: FiniteLattice
) -> tuple[FiniteLattice, dict[str, str], dict[str, str]]:
    """:func:`glued_sum` together with the maps sending the elements of ``A`` and ``B`` to their new ids."""
    ra, rb = _disjoint_ids(A, B)
    rb[B.zero] = ra[A.one]
    elements = [ra[e] for e in A.elements] + [rb[e] for e in B.elements if e != B.zero]
    covers = {(ra[a], ra[b]) for a, b in A.covers} | {(rb[a], rb[b]) for a, b in B.covers}
    return from_poset(Poset(tuple(elements), frozenset(covers))), ra, rb


def product(A: FiniteLattice, B: FiniteLattice) -> FiniteLattice:
    """The direct product; element ids are ``(a,b)``."""
    elements = [f"({a},{b})" for a in A.elements for b in B.elements]
    covers = set()
    for a, a2 in A.covers:
        for b in B.elements:
            covers.add((f"({a},{b})", f"({a2},{b})"))
    for b, b2 in B.covers:
        for a in A.elements:
            covers.add((f"({a},{b})", f"({a},{b2})"))
    return from_poset(Poset(tuple(elements), frozenset(covers)))


def dual_lattice(L: FiniteLattice) -> FiniteLattice:
    """The order dual (meets and joins swap)."""
    return L.dual()


def chain(n: int, prefix: str = "c") -> FiniteLattice:
    """The ``n``-element chain ``c0 < c1 < ...``."""
    elements = tuple(f"{prefix}{i}" for i in range(n))
    return from_poset(Poset(elements, frozenset(zip(elements, elements[1:]))))


def boolean(k: int) -> FiniteLattice:
    """The Boolean lattice of subsets of ``{x0, ..., x(k-1)}``; ids are written like ``{x0,x2}``."""
    return down_set_lattice(antichain_poset(k))


def _lattice(elements: str, covers: str) -> FiniteLattice:
    pairs = [tuple(c.split("<")) for c in covers.split()]
    return from_poset(Poset(tuple(elements.split()), frozenset(pairs)))


def m3() -> FiniteLattice:
    return _lattice("0 a b c 1", "0<a 0<b 0<c a<1 b<1 c<1")


def n5() -> FiniteLattice:
    return _lattice("0 a b c 1", "0<a a<b b<1 0<c c<1")


def s7() -> FiniteLattice:
    """The seven-element lattice with a top covering three elements ``m_l``, ``m``, ``m_r``."""
    return _lattice(
        "0 a b m_l m m_r 1",
        "0<a 0<b a<m_l a<m b<m b<m_r m_l<1 m<1 m_r<1",
    )


def grid(m: int, n: int) -> FiniteLattice:
    """
    The grid ``C_m × C_n`` with elements ``(i,j)``, ``0 <= i < m``, ``0 <= j < n``.

    The first coordinate runs along the lower-left boundary, the second along the lower-right one.
    """
    elements = tuple(f"({i},{j})" for i in range(m) for j in range(n))
    covers = {(f"({i},{j})", f"({i + 1},{j})") for i in range(m - 1) for j in range(n)}
    covers |= {(f"({i},{j})", f"({i},{j + 1})") for i in range(m) for j in range(n - 1)}
    return from_poset(Poset(elements, frozenset(covers)))


# ====================================================================================================
# Sublattice search


def iter_sublattice_embeddings(
    L: FiniteLattice,
    pattern: FiniteLattice,
    required_covers: Iterable[tuple[str, str]] | None = None,
) -> Iterator[EmbeddingWitness]:
    """
    Yield every injective map ``pattern -> L`` preserving meets and joins, in a deterministic order.

    Args:
        L: The host lattice.
        pattern: A small lattice (at most a handful of elements).
        required_covers: Pattern covers whose images must be covers of ``L`` (default: all of them).
    """
    required = set(pattern.covers if required_covers is None else required_covers)
    order = list(reversed(pattern.base.linear_extension()))
    placed: dict[str, str] = {}
    used: set[str] = set()

    def pool(x: str) -> Iterable[str]:
        anchors = [placed[t] for t in pattern.upper_covers(x) if t in placed and (x, t) in required]
        if anchors:
            return L.lower_covers(anchors[0])
        above = [placed[t] for t in pattern.upper_covers(x) if t in placed]
        if above:
            return tuple(e for e in L.elements if L.leq(e, above[0]) and e != above[0])
        return L.elements

    def ok(x: str, y: str) -> bool:
        for z, w in placed.items():
            mz = pattern.meet(x, z)
            if mz in placed and placed[mz] != L.meet(y, w):
                return False
            if mz == x and L.meet(y, w) != y:
                return False
            jz = pattern.join(x, z)
            if jz in placed and placed[jz] != L.join(y, w):
                return False
            if jz == x and L.join(y, w) != y:
                return False
            if (x, z) in required and not L.is_cover(y, w):
                return False
            if (z, x) in required and not L.is_cover(w, y):
                return False
        return True

    def extend(k: int) -> Iterator[EmbeddingWitness]:
        if k == len(order):
            yield EmbeddingWitness(dict(placed))
            return
        x = order[k]
        for y in pool(x):
            if y in used or not ok(x, y):
                continue
            placed[x] = y
            used.add(y)
            yield from extend(k + 1)
            del placed[x]
            used.discard(y)

    yield from extend(0)


def find_cover_preserving_sublattice(
    L: FiniteLattice, pattern: FiniteLattice
) -> EmbeddingWitness | None:
    """The first sublattice embedding of ``pattern`` into ``L`` whose image covers are covers of ``L``."""
    return next(iter_sublattice_embeddings(L, pattern), None)


def edge_pairs(L: FiniteLattice) -> Iterator[tuple[tuple[str, str], tuple[str, str]]]:
    """All ordered pairs of edges (used by the swing and lamp computations)."""
    return itertools.product(L.edges(), repeat=2)
