"""
Planar embeddings of graded lattices.

An embedding is given by the left-to-right order of the upper and of the lower covers of every element. From it we
derive the left/right boundary chains, classify rectangular lattices and patch lattices, compute natural diagrams
(meet-embeddings into the product of the two lower boundary segments) and group edges into lamps.
"""

from __future__ import annotations

__all__ = [
    "PlanarEmbedding",
    "EmbeddingReport",
    "Boundaries",
    "DiagramCoords",
    "EdgeKind",
    "Lamp",
    "validate_embedding",
    "find_embedding",
    "mirror",
    "boundary_chains",
    "rectangular_corners",
    "is_rectangular",
    "is_patch",
    "is_sr",
    "natural_diagram",
    "classify_edges",
    "find_peaks",
    "is_c1_diagram",
    "interior_lower_covers",
    "compute_lamps",
    "layered_coords",
]

import collections
import dataclasses
import itertools
import logging
from typing import Iterator

from latcon import utils
from latcon.errors import (
    EmbeddingNotFound,
    InvalidDeltaError,
    NotGradedError,
    NotRectangularError,
    NotSRError,
    VerificationFailed,
)
from latcon.lattice import (
    FiniteLattice,
    is_semimodular,
    is_slim,
    iter_sublattice_embeddings,
    s7,
)

_logger = logging.getLogger(__name__)

Edge = tuple[str, str]


@dataclasses.dataclass(frozen=True, slots=True)
class PlanarEmbedding:
    """
    A graded lattice together with the left-to-right order of the covers of each element.

    Attributes:
        lattice: The lattice (must be graded).
        upper_order: Element -> its upper covers, left to right.
        lower_order: Element -> its lower covers, left to right.
    """

    lattice: FiniteLattice
    upper_order: dict[str, tuple[str, ...]]
    lower_order: dict[str, tuple[str, ...]]

    def uppers(self, x: str) -> tuple[str, ...]:
        return self.upper_order.get(x, ())

    def lowers(self, x: str) -> tuple[str, ...]:
        return self.lower_order.get(x, ())

    def layers(self) -> list[list[str]]:
        """The elements of each rank, left to right."""
        position = _left_to_right(self)
        rank = _rank(self.lattice)
        grouped: dict[int, list[str]] = collections.defaultdict(list)
        for x in self.lattice.elements:
            grouped[rank[x]].append(x)
        return [sorted(grouped[r], key=position.__getitem__) for r in range(len(grouped))]


def _rank(L: FiniteLattice) -> dict[str, int]:
    if L.rank is None:
        raise NotGradedError("Planar embeddings are only defined for graded lattices")
    return L.rank


def _left_to_right(E: PlanarEmbedding) -> dict[str, int]:
    """
    A topological order placing left elements first among incomparable ones.

    Reverse postorder of a depth-first search from 0 that visits upper covers right to left.
    """
    L = E.lattice
    seen = {L.zero}
    postorder: list[str] = []
    stack: list[tuple[str, Iterator[str]]] = [(L.zero, iter(reversed(E.uppers(L.zero))))]
    while stack:
        x, children = stack[-1]
        child = next(children, None)
        if child is None:
            stack.pop()
            postorder.append(x)
        elif child not in seen:
            seen.add(child)
            stack.append((child, iter(reversed(E.uppers(child)))))
    for x in L.elements:
        if x not in seen:
            postorder.insert(0, x)
    return {x: i for i, x in enumerate(reversed(postorder))}


@dataclasses.dataclass(frozen=True, slots=True)
class EmbeddingReport:
    ok: bool
    problems: list[str]
    crossings: list[tuple[Edge, Edge]]

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "problems": self.problems,
            "crossings": [[list(p), list(q)] for p, q in self.crossings],
        }


def validate_embedding(E: PlanarEmbedding) -> EmbeddingReport:
    """
    Check the cover lists and look for crossings in the drawing layered by rank.

    Raises:
        NotGradedError: The lattice is not graded.
    """
    L = E.lattice
    rank = _rank(L)
    problems = []
    for x in L.elements:
        if sorted(E.uppers(x)) != sorted(L.upper_covers(x)):
            problems.append(f"upper_order[{x}] does not list the upper covers of {x}")
        if sorted(E.lowers(x)) != sorted(L.lower_covers(x)):
            problems.append(f"lower_order[{x}] does not list the lower covers of {x}")
    if problems:
        return EmbeddingReport(False, problems, [])
    position = _left_to_right(E)
    for x in L.elements:
        for kind, items in (("upper", E.uppers(x)), ("lower", E.lowers(x))):
            if [position[y] for y in items] != sorted(position[y] for y in items):
                problems.append(f"{kind}_order[{x}] disagrees with the left-to-right order")
    by_level: dict[int, list[Edge]] = collections.defaultdict(list)
    for a, b in L.edges():
        by_level[rank[a]].append((a, b))
    crossings = []
    for edges in by_level.values():
        for (a, b), (c, d) in itertools.combinations(edges, 2):
            if a != c and b != d and (position[a] - position[c]) * (position[b] - position[d]) < 0:
                crossings.append(((a, b), (c, d)))
    return EmbeddingReport(not problems and not crossings, problems, crossings)


def _candidate_orders(layer: list[str], spans: dict[str, tuple[int, int]]) -> Iterator[list[str]]:
    """Orders of ``layer`` whose edges down to the previous layer do not cross."""
    ordered = sorted(layer, key=lambda u: spans[u])
    for u, v in zip(ordered, ordered[1:]):
        if spans[u][1] > spans[v][0] or (spans[u] == spans[v] and spans[u][0] < spans[u][1]):
            return
    groups = [list(g) for _, g in itertools.groupby(ordered, key=lambda u: spans[u])]
    for choice in itertools.product(*(itertools.permutations(g) for g in groups)):
        yield [u for g in choice for u in g]


def find_embedding(L: FiniteLattice) -> PlanarEmbedding:
    """
    Search for a planar embedding, layer by layer from the bottom.

    The order of each rank layer is forced by the lower covers of its elements, up to permuting elements whose only
    lower cover is the same element; those permutations are backtracked over.

    Raises:
        NotGradedError: ``L`` is not graded.
        EmbeddingNotFound: No crossing-free layered drawing exists.
    """
    rank = _rank(L)
    height = max(rank.values())
    layers: list[list[str]] = [[] for _ in range(height + 1)]
    for x in L.elements:
        layers[rank[x]].append(x)

    def place(orders: list[list[str]]) -> list[list[str]] | None:
        if len(orders) == len(layers):
            return orders
        prev = {x: i for i, x in enumerate(orders[-1])}
        spans = {}
        for u in layers[len(orders)]:
            below = [prev[y] for y in L.lower_covers(u)]
            spans[u] = (min(below), max(below))
        for order in _candidate_orders(layers[len(orders)], spans):
            found = place(orders + [order])
            if found is not None:
                return found
        return None

    orders = place([layers[0]])
    if orders is None:
        raise EmbeddingNotFound("No planar layered drawing exists", details={"size": len(L)})
    position = {x: i for order in orders for i, x in enumerate(order)}
    return PlanarEmbedding(
        lattice=L,
        upper_order={x: tuple(sorted(L.upper_covers(x), key=position.__getitem__)) for x in L.elements},
        lower_order={x: tuple(sorted(L.lower_covers(x), key=position.__getitem__)) for x in L.elements},
    )


def mirror(E: PlanarEmbedding) -> PlanarEmbedding:
    """The left-right reflection."""
    return PlanarEmbedding(
        lattice=E.lattice,
        upper_order={x: tuple(reversed(v)) for x, v in E.upper_order.items()},
        lower_order={x: tuple(reversed(v)) for x, v in E.lower_order.items()},
    )


# ====================================================================================================
# Boundaries and rectangularity


@dataclasses.dataclass(frozen=True, slots=True)
class Boundaries:
    """
    The boundary chains of an embedding and their split at the corners.

    A corner is the unique doubly-irreducible element of a boundary chain; it is ``None`` (and the segments are empty)
    when the chain has no or several doubly-irreducible elements.
    """

    left: tuple[str, ...]
    right: tuple[str, ...]
    left_corner: str | None
    right_corner: str | None
    lower_left: tuple[str, ...]
    upper_left: tuple[str, ...]
    lower_right: tuple[str, ...]
    upper_right: tuple[str, ...]


def _walk(E: PlanarEmbedding, pick: int) -> tuple[str, ...]:
    x = E.lattice.zero
    chain = [x]
    while E.uppers(x):
        x = E.uppers(x)[pick]
        chain.append(x)
    return tuple(chain)


def _split(L: FiniteLattice, chain: tuple[str, ...]) -> tuple[str | None, tuple[str, ...], tuple[str, ...]]:
    doubly = [x for x in chain if L.is_doubly_irreducible(x)]
    if len(doubly) != 1:
        return None, (), ()
    k = chain.index(doubly[0])
    return doubly[0], chain[: k + 1], chain[k:]


def boundary_chains(E: PlanarEmbedding) -> Boundaries:
    """Follow the left-most (right-most) upper covers from 0 to 1."""
    left, right = _walk(E, 0), _walk(E, -1)
    cl, ll, ul = _split(E.lattice, left)
    cr, lr, ur = _split(E.lattice, right)
    return Boundaries(left, right, cl, cr, ll, ul, lr, ur)


def rectangular_corners(E: PlanarEmbedding) -> tuple[str, str] | None:
    """``(cornl, cornr)`` when the embedding is rectangular, else ``None``."""
    b = boundary_chains(E)
    L = E.lattice
    if b.left_corner is None or b.right_corner is None:
        return None
    if L.join(b.left_corner, b.right_corner) != L.one or L.meet(b.left_corner, b.right_corner) != L.zero:
        return None
    return b.left_corner, b.right_corner


def is_rectangular(E: PlanarEmbedding) -> bool:
    return rectangular_corners(E) is not None


def is_patch(E: PlanarEmbedding) -> bool:
    """
    A rectangular lattice whose corners are coatoms.

    Raises:
        NotRectangularError: The embedding is not rectangular.
    """
    corners = rectangular_corners(E)
    if corners is None:
        raise NotRectangularError("Only rectangular lattices can be patch lattices")
    return all(E.lattice.is_cover(c, E.lattice.one) for c in corners)


def is_sr(E: PlanarEmbedding) -> bool:
    """Slim, rectangular and semimodular (planarity comes with the embedding)."""
    L = E.lattice
    return L.rank is not None and is_semimodular(L) and is_slim(L) and is_rectangular(E)


def _require_sr(E: PlanarEmbedding) -> tuple[str, str]:
    if not is_sr(E):
        raise NotSRError("The embedding is not a slim rectangular lattice")
    return rectangular_corners(E)


# ====================================================================================================
# Natural diagrams


class EdgeKind(utils.StrEnum):
    NORMAL = "normal"
    STEEP = "steep"


@dataclasses.dataclass(frozen=True, slots=True)
class DiagramCoords:
    """
    Grid coordinates of a diagram.

    Attributes:
        lattice: The lattice being drawn.
        position: Element -> ``(left, right)``: the ranks of ``x ∧ cornl`` and ``x ∧ cornr``.
    """

    lattice: FiniteLattice
    position: dict[str, tuple[int, int]]

    def drawing(self, x: str) -> tuple[int, int]:
        """Plane coordinates ``(right - left, right + left)``; normal edges get slopes of 45 or 135 degrees."""
        left, right = self.position[x]
        return right - left, right + left

    def is_meet_embedding(self) -> bool:
        L = self.lattice
        if len(set(self.position.values())) != len(L):
            return False
        for x, y in itertools.combinations(L.elements, 2):
            (a, b), (c, d) = self.position[x], self.position[y]
            if self.position[L.meet(x, y)] != (min(a, c), min(b, d)):
                return False
        return True


def natural_diagram(E: PlanarEmbedding) -> DiagramCoords:
    """
    The natural diagram ``x -> (x ∧ cornl, x ∧ cornr)`` of a slim rectangular lattice.

    Raises:
        NotSRError: The embedding is not slim rectangular.
        VerificationFailed: The map is not a bound-preserving meet-embedding.
    """
    cl, cr = _require_sr(E)
    L = E.lattice
    rank = L.rank
    coords = DiagramCoords(
        lattice=L,
        position={x: (rank[L.meet(x, cl)], rank[L.meet(x, cr)]) for x in L.elements},
    )
    if not coords.is_meet_embedding() or coords.position[L.one] != (rank[cl], rank[cr]):
        raise VerificationFailed("The natural map is not a meet-embedding", details=coords.position)
    return coords


def classify_edges(coords: DiagramCoords) -> dict[Edge, EdgeKind]:
    """
    Normal edges go one grid line in one direction, steep edges go up in both directions.

    Raises:
        InvalidDeltaError: Some edge goes down in a direction or does not move.
    """
    result = {}
    for a, b in coords.lattice.edges():
        (la, ra), (lb, rb) = coords.position[a], coords.position[b]
        dl, dr = lb - la, rb - ra
        if (dl >= 1 and dr == 0) or (dl == 0 and dr >= 1):
            result[(a, b)] = EdgeKind.NORMAL
        elif dl >= 1 and dr >= 1:
            result[(a, b)] = EdgeKind.STEEP
        else:
            raise InvalidDeltaError(f"Edge {a}-{b} has delta ({dl},{dr})", details={"edge": [a, b]})
    return result


def find_peaks(L: FiniteLattice) -> list[Edge]:
    """
    The middle edges of the peak sublattices: S7 sublattices whose three top edges are edges of ``L``.

    Returned sorted and without duplicates.
    """
    pattern = s7()
    top = [("m_l", "1"), ("m", "1"), ("m_r", "1")]
    if all(len(L.lower_covers(x)) < 3 for x in L.elements):
        return []
    middles = {(w["m"], w["1"]) for w in iter_sublattice_embeddings(L, pattern, required_covers=top)}
    return sorted(middles)


def is_c1_diagram(E: PlanarEmbedding, coords: DiagramCoords) -> bool:
    """
    The middle edges of the peak sublattices are steep and every other edge is normal.

    Raises:
        NotSRError: The embedding is not slim rectangular.
    """
    _require_sr(E)
    try:
        kinds = classify_edges(coords)
    except InvalidDeltaError:
        return False
    peaks = set(find_peaks(E.lattice))
    return all((kind == EdgeKind.STEEP) == (e in peaks) for e, kind in kinds.items())


# ====================================================================================================
# Lamps


def interior_lower_covers(E: PlanarEmbedding, h: str) -> tuple[str, ...]:
    """The lower covers of ``h`` other than the left-most and right-most one (empty unless ``h`` covers three)."""
    lowers = E.lowers(h)
    return lowers[1:-1] if len(lowers) >= 3 else ()


@dataclasses.dataclass(frozen=True, slots=True)
class Lamp:
    """
    An internal-swing class of edges with meet-irreducible bottoms.

    Attributes:
        edges: The member edges, sorted.
    """

    edges: tuple[Edge, ...]

    @property
    def top(self) -> str:
        return self.edges[0][1]


def _internal_swing(E: PlanarEmbedding, p: Edge, q: Edge) -> bool:
    if p[1] != q[1]:
        return False
    interior = interior_lower_covers(E, p[1])
    return p[0] in interior and q[0] in interior


def _internal_swing_relation(E: PlanarEmbedding) -> tuple[list[Edge], set[tuple[Edge, Edge]]]:
    L = E.lattice
    eligible = [e for e in L.edges() if L.is_meet_irreducible(e[0])]
    related = {(p, q) for p in eligible for q in eligible if p == q or _internal_swing(E, p, q)}
    return eligible, related


def compute_lamps(E: PlanarEmbedding) -> list[Lamp]:
    """
    Partition the edges with meet-irreducible bottoms by internal swing.

    The relation is closed under transitivity here and a warning is logged if that added any pair.

    Raises:
        NotSRError: The embedding is not slim rectangular.
    """
    _require_sr(E)
    eligible, related = _internal_swing_relation(E)
    classes: list[set[Edge]] = []
    for e in eligible:
        merged = {e} | {q for p, q in related if p == e}
        for c in [c for c in classes if c & merged]:
            merged |= c
            classes.remove(c)
        classes.append(merged)
    closure = {(p, q) for c in classes for p in c for q in c}
    if closure != related:
        _logger.warning("Internal swing was not transitive: closure added %d pairs", len(closure - related))
    return sorted((Lamp(tuple(sorted(c))) for c in classes), key=lambda lamp: lamp.edges)


def lamp_closure_is_trivial(E: PlanarEmbedding) -> bool:
    """Internal swing on the eligible edges already is an equivalence relation."""
    _, related = _internal_swing_relation(E)
    return all(
        (p, r) in related for p, q in related for q2, r in related if q == q2
    ) and all((q, p) in related for p, q in related)


# ====================================================================================================
# Fallback drawing


def layered_coords(E: PlanarEmbedding) -> dict[str, tuple[float, int]]:
    """
    Drawing positions for any embedding: ``y`` is the rank and ``x`` the barycenter of the lower covers, kept in
    left-to-right order with unit spacing.
    """
    coords: dict[str, tuple[float, int]] = {}
    for r, layer in enumerate(E.layers()):
        xs: list[float] = []
        for x in layer:
            below = [coords[y][0] for y in E.lowers(x)]
            target = sum(below) / len(below) if below else 0.0
            xs.append(target if not xs else max(target, xs[-1] + 1.0))
        for x, value in zip(layer, xs):
            coords[x] = (value, r)
    return coords
