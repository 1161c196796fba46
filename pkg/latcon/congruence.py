"""Principal congruences, the congruence lattice and the poset of its join-irreducibles, coloring audits."""

from __future__ import annotations

__all__ = [
    "Congruence",
    "ColoredLattice",
    "JiCongruences",
    "ColoringReport",
    "CongruenceReport",
    "principal_congruence",
    "perspectivity_classes",
    "ji_congruence_poset",
    "congruence_lattice",
    "all_congruences_bruteforce",
    "is_congruence",
    "collapsed_edges",
    "edge_congruences",
    "verify_coloring",
    "congruence_report",
]

import collections
import dataclasses
import itertools
import logging
from typing import Any, Iterable, Iterator, Mapping

from latcon.errors import SizeGuardExceeded, TrivialLatticeError
from latcon.lattice import FiniteLattice
from latcon.order import Poset, down_set_lattice, poset_from_relation

_logger = logging.getLogger(__name__)

Edge = tuple[str, str]


@dataclasses.dataclass(frozen=True, slots=True)
class Congruence:
    """
    A congruence of a fixed lattice, stored as a normalized partition.

    Block ids are assigned in order of the least element id of each block, so two congruences are equal iff their
    partitions are. :meth:`blocks` lists the blocks in that order, each sorted by id.

    Attributes:
        elements: The elements of the lattice.
        labels: ``labels[i]`` is the block id of ``elements[i]``.
    """

    elements: tuple[str, ...]
    labels: tuple[int, ...]

    @classmethod
    def from_labels(cls, elements: tuple[str, ...], labels: Iterable[int]) -> Congruence:
        labels = tuple(labels)
        least: dict[int, str] = {}
        for e, k in zip(elements, labels):
            if k not in least or e < least[k]:
                least[k] = e
        renumber = {k: i for i, k in enumerate(sorted(least, key=least.__getitem__))}
        return cls(elements, tuple(renumber[k] for k in labels))

    @classmethod
    def from_blocks(cls, elements: tuple[str, ...], blocks: Iterable[Iterable[str]]) -> Congruence:
        index = {e: i for i, e in enumerate(elements)}
        labels = list(range(len(elements)))
        for k, block in enumerate(blocks):
            for x in block:
                labels[index[x]] = len(elements) + k
        return cls.from_labels(elements, labels)

    @classmethod
    def identity(cls, elements: tuple[str, ...]) -> Congruence:
        return cls.from_labels(elements, range(len(elements)))

    @classmethod
    def full(cls, elements: tuple[str, ...]) -> Congruence:
        return cls(elements, (0,) * len(elements))

    def __str__(self) -> str:
        return " | ".join(",".join(b) for b in self.blocks())

    def blocks(self) -> list[tuple[str, ...]]:
        grouped: dict[int, list[str]] = collections.defaultdict(list)
        for e, k in zip(self.elements, self.labels):
            grouped[k].append(e)
        return [tuple(sorted(grouped[k])) for k in sorted(grouped)]

    def block_of(self, x: str) -> tuple[str, ...]:
        k = self.labels[self.elements.index(x)]
        return tuple(sorted(e for e, j in zip(self.elements, self.labels) if j == k))

    def same(self, a: str, b: str) -> bool:
        return self.labels[self.elements.index(a)] == self.labels[self.elements.index(b)]

    def refines(self, other: Congruence) -> bool:
        """Every block of ``self`` lies inside a block of ``other``."""
        image: dict[int, int] = {}
        return all(image.setdefault(k, j) == j for k, j in zip(self.labels, other.labels))

    def __le__(self, other: Congruence) -> bool:
        return self.refines(other)

    def __lt__(self, other: Congruence) -> bool:
        return self != other and self.refines(other)

    @property
    def is_identity(self) -> bool:
        return len(set(self.labels)) == len(self.labels)

    @property
    def is_full(self) -> bool:
        return len(set(self.labels)) <= 1


class _UnionFind:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def _closure(L: FiniteLattice, pairs: Iterable[tuple[int, int]]) -> Congruence:
    """
    The least congruence collapsing every given pair of positions.

    Every union is queued as a dirty pair; a popped pair ``(x, y)`` merges ``x∧z`` with ``y∧z`` and ``x∨z`` with
    ``y∨z`` for all ``z``. Compatibility of the generating pairs of an equivalence implies compatibility of the whole
    relation, so the result is a congruence when the queue runs dry.
    """
    M, J = L.meet_table, L.join_table
    n = len(L)
    uf = _UnionFind(n)
    queue = collections.deque()
    for a, b in pairs:
        if uf.union(a, b):
            queue.append((a, b))
    while queue:
        x, y = queue.popleft()
        mx, my, jx, jy = M[x], M[y], J[x], J[y]
        for z in range(n):
            if uf.union(mx[z], my[z]):
                queue.append((mx[z], my[z]))
            if uf.union(jx[z], jy[z]):
                queue.append((jx[z], jy[z]))
    return Congruence.from_labels(L.elements, (uf.find(i) for i in range(n)))


def principal_congruence(L: FiniteLattice, a: str, b: str) -> Congruence:
    """
    ``con(a, b)``: the smallest congruence of ``L`` collapsing ``a`` and ``b``.

    Raises:
        UnknownElementError: ``a`` or ``b`` is not an element of ``L``.
    """
    return _closure(L, [(L.index(a), L.index(b))])


def congruence_join(L: FiniteLattice, thetas: Iterable[Congruence]) -> Congruence:
    """The least congruence containing all the given ones."""
    pairs = []
    for theta in thetas:
        for block in theta.blocks():
            pairs.extend((L.index(block[0]), L.index(x)) for x in block[1:])
    return _closure(L, pairs)


def _up_perspective(L: FiniteLattice, p: Edge, q: Edge) -> bool:
    (a, b), (c, d) = p, q
    return L.join(b, c) == d and L.meet(b, c) == a


def perspectivity_classes(L: FiniteLattice) -> list[list[Edge]]:
    """
    The edges grouped by the equivalence generated by perspectivity.

    Perspective edges generate the same congruence, so one closure per class suffices. Classes are listed by their
    least edge, each class sorted.
    """
    edges = L.edges()
    uf = _UnionFind(len(edges))
    by_top: dict[str, list[int]] = collections.defaultdict(list)
    for k, (_, d) in enumerate(edges):
        by_top[d].append(k)
    for i, p in enumerate(edges):
        # p = [a, b] transposes up to [c, d] only for tops d above b
        for d in L.base.subset_of(L.base.up_mask(p[1])):
            for k in by_top.get(d, ()):
                if k != i and _up_perspective(L, p, edges[k]):
                    uf.union(i, k)
    grouped: dict[int, list[Edge]] = collections.defaultdict(list)
    for k, e in enumerate(edges):
        grouped[uf.find(k)].append(e)
    return [grouped[r] for r in sorted(grouped)]


def edge_congruences(L: FiniteLattice) -> dict[Edge, Congruence]:
    """``con(p)`` for every edge ``p``, computed once per perspectivity class."""
    result: dict[Edge, Congruence] = {}
    classes = perspectivity_classes(L)
    for group in classes:
        a, b = group[0]
        theta = principal_congruence(L, a, b)
        for e in group:
            result[e] = theta
    _logger.debug("Computed %d edge congruences from %d closures", len(result), len(classes))
    return result


@dataclasses.dataclass(frozen=True, slots=True)
class JiCongruences:
    """
    The join-irreducible congruences of a lattice.

    Attributes:
        poset: Elements ``j0, j1, ...`` ordered by refinement.
        congruences: Poset element -> the congruence it stands for.
        edge_map: Every edge of the lattice -> the poset element of ``con(edge)``.
    """

    poset: Poset
    congruences: dict[str, Congruence]
    edge_map: dict[Edge, str]

    def generators(self, j: str) -> list[Edge]:
        """The edges generating ``j``, sorted."""
        return sorted(e for e, k in self.edge_map.items() if k == j)


def ji_congruence_poset(L: FiniteLattice) -> JiCongruences:
    """
    ``Ji Con L`` as the poset of the distinct ``con(a, b)`` with ``a ≺ b``, ordered by refinement.

    Elements are named ``j0, j1, ...`` in order of their least generating edge.

    Raises:
        TrivialLatticeError: ``L`` has no edges.
    """
    if len(L) < 2:
        raise TrivialLatticeError("A one-element lattice has no edges")
    per_edge = edge_congruences(L)
    names: dict[Congruence, str] = {}
    for e in L.edges():
        theta = per_edge[e]
        if theta not in names:
            names[theta] = f"j{len(names)}"
    relation = [
        (names[s], names[t]) for s, t in itertools.permutations(names, 2) if s.refines(t)
    ]
    poset = poset_from_relation(names.values(), relation)
    _logger.debug("Ji Con of a %d-element lattice has %d elements", len(L), len(names))
    return JiCongruences(
        poset=poset,
        congruences={j: theta for theta, j in names.items()},
        edge_map={e: names[theta] for e, theta in per_edge.items()},
    )


def congruence_lattice(L: FiniteLattice) -> FiniteLattice:
    """
    ``Con L``, built as the down-set lattice of ``Ji Con L``.

    Element ids are the down sets of ``j`` names, ``{}`` being the identity congruence.
    """
    if len(L) < 2:
        return down_set_lattice(Poset((), frozenset()))
    return down_set_lattice(ji_congruence_poset(L).poset)


def is_congruence(L: FiniteLattice, partition: Congruence | Mapping[str, Any]) -> bool:
    """
    Check the substitution property of an equivalence given as a :class:`Congruence` or an element -> block map.

    Checking consecutive members of each block suffices, the rest follows by transitivity.
    """
    if not isinstance(partition, Congruence):
        if set(partition) != set(L.elements):
            return False
        partition = Congruence.from_labels(
            L.elements, _label_ids(partition[e] for e in L.elements)
        )
    labels = partition.labels
    M, J = L.meet_table, L.join_table
    n = len(L)
    for block in partition.blocks():
        idx = [L.index(x) for x in block]
        for x, y in zip(idx, idx[1:]):
            for z in range(n):
                if labels[M[x][z]] != labels[M[y][z]] or labels[J[x][z]] != labels[J[y][z]]:
                    return False
    return True


def _label_ids(values: Iterable[Any]) -> Iterator[int]:
    ids: dict[Any, int] = {}
    for v in values:
        yield ids.setdefault(v, len(ids))


def _set_partitions(n: int) -> Iterator[list[int]]:
    """Restricted growth strings of length ``n``."""
    if n == 0:
        yield []
        return
    labels = [0] * n

    def grow(i: int, top: int) -> Iterator[list[int]]:
        if i == n:
            yield list(labels)
            return
        for k in range(top + 2):
            labels[i] = k
            yield from grow(i + 1, max(top, k))

    yield from grow(1, 0)


def all_congruences_bruteforce(L: FiniteLattice, guard: int = 12) -> set[Congruence]:
    """
    Every congruence of ``L``, found by filtering all set partitions (a test oracle).

    Raises:
        SizeGuardExceeded: ``L`` has more than ``guard`` elements.
    """
    if len(L) > guard:
        raise SizeGuardExceeded(
            f"Brute-force congruence enumeration is limited to {guard} elements",
            details={"size": len(L), "guard": guard},
        )
    result = set()
    for labels in _set_partitions(len(L)):
        theta = Congruence.from_labels(L.elements, labels)
        if is_congruence(L, theta):
            result.add(theta)
    _logger.debug("Brute force found %d congruences", len(result))
    return result


def collapsed_edges(L: FiniteLattice, theta: Congruence) -> list[Edge]:
    """The edges whose endpoints ``theta`` identifies."""
    return [e for e in L.edges() if theta.same(*e)]


# ====================================================================================================
# Colorings


@dataclasses.dataclass(frozen=True, slots=True)
class ColoredLattice:
    """
    A lattice with a partial edge coloring.

    Attributes:
        lattice: The lattice.
        color: Edge -> color id (edges may be left uncolored).
    """

    lattice: FiniteLattice
    color: dict[Edge, str]

    def colors(self) -> list[str]:
        return sorted(set(self.color.values()))

    def edges_of(self, c: str) -> list[Edge]:
        return sorted(e for e, k in self.color.items() if k == c)


@dataclasses.dataclass(frozen=True, slots=True)
class ColoringReport:
    """
    The result of auditing a coloring.

    Attributes:
        ok: No two edges of the same color generate different congruences.
        violations: ``(p, q)`` pairs of same-colored edges with ``con(p) != con(q)``.
        strictly_above: ``(c, d)`` -> ``con(c) > con(d)``, over ordered pairs of distinct colors.
    """

    ok: bool
    violations: list[tuple[Edge, Edge]]
    strictly_above: dict[tuple[str, str], bool]

    def to_dict(self) -> dict[str, Any]:
        return {
            "ok": self.ok,
            "violations": [[list(p), list(q)] for p, q in self.violations],
            "order": [
                {"upper": c, "lower": d, "strictly_above": v}
                for (c, d), v in sorted(self.strictly_above.items())
            ],
        }


def verify_coloring(CL: ColoredLattice) -> ColoringReport:
    """Check that same-colored edges generate the same congruence and tabulate the order of the colors."""
    per_edge = edge_congruences(CL.lattice)
    violations = []
    representative: dict[str, Congruence] = {}
    for c in CL.colors():
        edges = CL.edges_of(c)
        representative[c] = per_edge[edges[0]]
        for p, q in itertools.combinations(edges, 2):
            if per_edge[p] != per_edge[q]:
                violations.append((p, q))
    above = {
        (c, d): representative[d] < representative[c]
        for c, d in itertools.permutations(representative, 2)
    }
    if violations:
        _logger.info("Coloring audit found %d violating pairs", len(violations))
    return ColoringReport(ok=not violations, violations=violations, strictly_above=above)


@dataclasses.dataclass(frozen=True, slots=True)
class CongruenceReport:
    ji: JiCongruences
    coloring: ColoringReport | None = None

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "join_irreducibles": [
                {
                    "name": j,
                    "generators": [list(e) for e in self.ji.generators(j)],
                    "blocks": [list(b) for b in self.ji.congruences[j].blocks() if len(b) > 1],
                }
                for j in self.ji.poset.elements
            ],
            "order": sorted([a, b] for a, b in self.ji.poset.covers),
        }
        if self.coloring is not None:
            data["coloring"] = self.coloring.to_dict()
        return data

    def to_text(self) -> str:
        lines = [f"Ji Con L: {len(self.ji.poset)} join-irreducible congruences"]
        for j in self.ji.poset.elements:
            gens = ", ".join(f"{a}-{b}" for a, b in self.ji.generators(j))
            lines.append(f"  {j}: {self.ji.congruences[j]}  [{gens}]")
        for a, b in sorted(self.ji.poset.covers):
            lines.append(f"  {a} < {b}")
        if self.coloring is not None:
            lines.append("coloring: " + ("ok" if self.coloring.ok else "VIOLATED"))
            for p, q in self.coloring.violations:
                lines.append(f"  {p[0]}-{p[1]} vs {q[0]}-{q[1]}")
            for (c, d), v in sorted(self.coloring.strictly_above.items()):
                if v:
                    lines.append(f"  con({c}) > con({d})")
        return "\n".join(lines) + "\n"


def congruence_report(L: FiniteLattice, color: Mapping[Edge, str] | None = None) -> CongruenceReport:
    coloring = verify_coloring(ColoredLattice(L, dict(color))) if color else None
    return CongruenceReport(ji=ji_congruence_poset(L), coloring=coloring)
