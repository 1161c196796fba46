"""
Planar semimodular lattices with prescribed congruence lattices, and the patch decomposition of ``Con L``.

:func:`represent` builds, for a finite poset ``P``, a planar semimodular lattice ``L`` with ``Ji Con L ≅ P``:

- every element that takes part in a cover gets a *free line* ``k`` of a square grid, and an eye (an M3 filling the
  cell, added with :func:`insert_m3`) on the diagonal cell ``(k, k)`` gives both grid directions of line ``k`` the
  same color;
- every cover ``b ≺ a`` of ``P`` gets two more consecutive lines ``u = i - 1`` and ``w = i`` and a fork at ``(i, i)``:
  the grid points ``(k, i - 1)`` and ``(i - 1, k)`` with ``k >= i`` are removed, which turns the cell below ``(i, i)``
  into the middle of an S7 and forces ``con(w) < con(u)``; eyes in the cells ``(u, k_a)``, ``(k_a, u)`` and
  ``(w, k_b)`` (``k_x`` the free line of ``x``) give line ``u`` the color ``a`` and line ``w`` the color ``b``;
- every isolated element becomes a tail, a colored two-element chain glued below the grid with
  :func:`glued_sum_colored`.

The result is always checked (planar, semimodular, ``x -> con(x)`` an isomorphism ``P -> Ji Con L``); a failed check
raises :class:`VerificationFailed` instead of returning.
"""

from __future__ import annotations

__all__ = [
    "Representation",
    "s8_gadget",
    "glued_sum_colored",
    "build_block",
    "represent",
    "represent_lattice",
    "insert_m3",
    "decompose_hat",
    "patch_report",
]

import dataclasses
import functools
import logging
from typing import Any

from latcon import utils
from latcon.congruence import (
    ColoredLattice,
    congruence_lattice,
    edge_congruences,
    ji_congruence_poset,
    verify_coloring,
)
from latcon.errors import (
    EmptyPosetError,
    NotACoveringSquareError,
    NotDistributiveError,
    VerificationFailed,
)
from latcon.lattice import (
    FiniteLattice,
    glued_sum_maps,
    is_distributive,
    is_planar,
    is_semimodular,
)
from latcon.order import Poset, join_irreducibles
from latcon.planar import PlanarEmbedding, find_embedding, is_patch, rectangular_corners, validate_embedding

_logger = logging.getLogger(__name__)

Edge = tuple[str, str]


# ====================================================================================================
# Gadgets and blocks


@functools.cache
def s8_gadget() -> ColoredLattice:
    """
    The eight-element semimodular lattice with an eye in its lower cell, colored ``p < q``.

    Loaded from ``s8.lattice.json``; the shape and the coloring are checked on load.

    Raises:
        VerificationFailed: The shipped transcription does not have the expected properties.
    """
    from latcon.serialization import parse_lattice

    bundle = parse_lattice(utils.read_data("s8.lattice.json"))
    gadget = ColoredLattice(bundle.lattice, bundle.color)
    L = gadget.lattice
    audit = verify_coloring(gadget)
    if not (
        len(L) == 8
        and is_planar(L)
        and is_semimodular(L)
        and audit.ok
        and audit.strictly_above.get(("q", "p"))
    ):
        raise VerificationFailed("The S8 transcription is not a semimodular lattice colored p < q")
    return gadget


def glued_sum_colored(A: ColoredLattice, B: ColoredLattice) -> ColoredLattice:
    """The glued sum of the lattices, each edge keeping its color."""
    L, ra, rb = glued_sum_maps(A.lattice, B.lattice)
    color = {(ra[a], ra[b]): c for (a, b), c in A.color.items()}
    color.update({(rb[a], rb[b]): c for (a, b), c in B.color.items()})
    return ColoredLattice(L, color)


def _recolored_copy(gadget: ColoredLattice, tag: str, colors: dict[str, str]) -> ColoredLattice:
    rename = {x: f"{tag}.{x}" for x in gadget.lattice.elements}
    return ColoredLattice(
        gadget.lattice.relabel(rename),
        {(rename[a], rename[b]): colors[c] for (a, b), c in gadget.color.items()},
    )


def build_block(a: str, below: list[str]) -> ColoredLattice:
    """
    Glue one recolored copy of S8 per element of ``below``, the copy for ``below[0]`` on top.

    In copy ``i`` the outer edges get color ``a`` and the inner edges color ``below[i]``, so ``con(a) > con(below[i])``
    inside that copy. Copies are glued, so equal colors in different copies are not forced together (that is the
    grid's job).

    Raises:
        EmptyPosetError: ``below`` is empty.
        VerificationFailed: Some copy does not force its comparability.
    """
    if not below:
        raise EmptyPosetError("A block needs at least one lower cover")
    gadget = s8_gadget()
    copies = [
        _recolored_copy(gadget, f"{a}{i}", {"q": a, "p": b}) for i, b in enumerate(below)
    ]
    block = copies[-1]
    for copy in reversed(copies[:-1]):
        block = glued_sum_colored(block, copy)
    per_edge = edge_congruences(block.lattice)
    for i, b in enumerate(below):
        tag = f"{a}{i}."
        mine = {e: c for e, c in block.color.items() if e[0].startswith(tag) or e[1].startswith(tag)}
        upper = next(e for e, c in mine.items() if c == a)
        lower = next(e for e, c in mine.items() if c == b)
        if not per_edge[lower] < per_edge[upper]:
            raise VerificationFailed(f"Copy {i} of the block for {a!r} does not force con({a}) > con({b})")
    return block


# ====================================================================================================
# The representation


@dataclasses.dataclass(frozen=True, slots=True)
class Representation:
    """
    A planar semimodular lattice representing a poset as its join-irreducible congruences.

    Attributes:
        poset: The represented poset.
        embedding: The lattice with a planar embedding.
        color: Edge -> element of ``poset`` (every edge is colored).
        positions: Element -> ``(left, right)`` grid coordinates used for drawing (eyes sit in cell centers).
        isomorphism: Element of ``poset`` -> element of ``Ji Con L``.
    """

    poset: Poset
    embedding: PlanarEmbedding
    color: dict[Edge, str]
    positions: dict[str, tuple[float, float]]
    isomorphism: dict[str, str]

    @property
    def lattice(self) -> FiniteLattice:
        return self.embedding.lattice

    def colored(self) -> ColoredLattice:
        return ColoredLattice(self.lattice, self.color)

    def drawing(self) -> dict[str, tuple[float, float]]:
        """Plane coordinates ``(right - left, right + left)`` of :attr:`positions`, the grid turned by 45 degrees."""
        return {x: (r - l, r + l) for x, (l, r) in self.positions.items()}


def _point(x: int, y: int) -> str:
    return f"({x},{y})"


@dataclasses.dataclass
class _GridPlan:
    """Line colors, removed points and eye cells of the grid part."""

    size: int
    line_color: dict[int, str]
    removed: set[tuple[int, int]]
    eyes: list[tuple[int, int]]
    forks: list[int]


def _plan(P: Poset, linked: list[str]) -> _GridPlan:
    free = {x: k for k, x in enumerate(linked, start=1)}
    covers = sorted(P.covers, key=lambda c: (P.index(c[1]), P.index(c[0])))
    size = len(linked) + 2 * len(covers)
    line_color = {k: x for x, k in free.items()}
    removed: set[tuple[int, int]] = set()
    eyes = [(k, k) for k in free.values()]
    forks = []
    for j, (b, a) in enumerate(covers, start=1):
        i = len(linked) + 2 * j
        u, w = i - 1, i
        line_color[u], line_color[w] = a, b
        removed |= {(k, i - 1) for k in range(i, size + 1)} | {(i - 1, k) for k in range(i, size + 1)}
        eyes += [(u, free[a]), (free[a], u), (w, free[b])]
        forks.append(i)
    return _GridPlan(size, line_color, removed, eyes, forks)


def _grid_part(plan: _GridPlan) -> tuple[list[str], set[Edge], dict[Edge, str], dict[str, tuple[float, float]]]:
    points = [
        (x, y)
        for y in range(plan.size + 1)
        for x in range(plan.size + 1)
        if (x, y) not in plan.removed
    ]
    kept = set(points)
    covers: set[Edge] = set()
    color: dict[Edge, str] = {}
    for x, y in points:
        # removed points never leave a gap of more than two steps, so the covers lie in a small window
        above = [
            (p, q)
            for p in range(x, x + 4)
            for q in range(y, y + 4)
            if (p, q) in kept and (p, q) != (x, y)
        ]
        for p, q in above:
            if any((s, t) != (p, q) and s <= p and t <= q for s, t in above):
                continue
            edge = (_point(x, y), _point(p, q))
            covers.add(edge)
            if q == y:
                color[edge] = plan.line_color[x + 1]
            elif p == x:
                color[edge] = plan.line_color[y + 1]
            else:
                # fork middle edge: the lower of the two merged lines
                color[edge] = plan.line_color[p]
    elements = [_point(x, y) for x, y in points]
    positions: dict[str, tuple[float, float]] = {_point(x, y): (float(x), float(y)) for x, y in points}
    return elements, covers, color, positions


def _cell(x: int, y: int) -> tuple[str, str, str, str]:
    return _point(x - 1, y - 1), _point(x, y - 1), _point(x - 1, y), _point(x, y)


def represent(P: Poset) -> Representation:
    """
    Build a planar semimodular lattice ``L`` with ``Ji Con L ≅ P``.

    The grid with its forks is laid out first; :func:`insert_m3` then fills every cell whose two sides carry the same
    color, and each isolated element is a two-element chain glued below with :func:`glued_sum_colored`.

    Raises:
        EmptyPosetError: ``P`` is empty.
        VerificationFailed: The result failed its own check.
    """
    if not P.elements:
        raise EmptyPosetError("Cannot represent the empty poset")
    linked = [x for x in P.elements if P.upper_covers(x) or P.lower_covers(x)]
    isolated = [x for x in P.elements if x not in linked]
    plan = _plan(P, linked) if linked else _GridPlan(0, {}, set(), [], [])
    elements, covers, color, positions = _grid_part(plan)
    grid = FiniteLattice.from_poset(Poset(tuple(elements), frozenset(covers)))
    E = find_embedding(grid)
    if plan.eyes:
        E = insert_m3(E, *(_cell(x, y) for x, y in plan.eyes))
        for (x, y), eye in zip(plan.eyes, E.lattice.elements[len(grid) :]):
            bottom, _, _, top = _cell(x, y)
            color[(bottom, eye)] = color[(eye, top)] = plan.line_color[x]
            positions[eye] = (x - 0.5, y - 0.5)

    colored = ColoredLattice(E.lattice, color)
    upper, lower = dict(E.upper_order), dict(E.lower_order)
    above = E.lattice.zero
    for k, x in enumerate(isolated, start=1):
        tail = f"t{k}"
        edge = (tail, above)
        stub = FiniteLattice.from_poset(Poset(edge, frozenset({edge})))
        colored = glued_sum_colored(ColoredLattice(stub, {edge: x}), colored)
        upper[tail], lower[above] = (above,), (tail,)
        positions[tail] = (-float(k), -float(k))
        above = tail
    E = PlanarEmbedding(colored.lattice, upper, lower)

    _logger.debug(
        "Representing a %d-element poset: %d-grid, %d forks, %d eyes, %d tails, %d elements",
        len(P),
        plan.size,
        len(plan.forks),
        len(plan.eyes),
        len(isolated),
        len(E.lattice),
    )
    isomorphism = _verify(P, E, colored.color)
    return Representation(P, E, colored.color, positions, isomorphism)


def _verify(P: Poset, E: PlanarEmbedding, color: dict[Edge, str]) -> dict[str, str]:
    L = E.lattice
    if not is_planar(L):
        raise VerificationFailed("The constructed lattice is not planar")
    report = validate_embedding(E)
    if not report.ok:
        raise VerificationFailed("The constructed embedding is not planar", details=report.to_dict())
    if not is_semimodular(L):
        raise VerificationFailed("The constructed lattice is not semimodular")
    audit = verify_coloring(ColoredLattice(L, color))
    if not audit.ok:
        raise VerificationFailed("The constructed coloring is inconsistent", details=audit.to_dict())
    ji = ji_congruence_poset(L)
    iso: dict[str, str] = {}
    for edge, x in sorted(color.items()):
        iso.setdefault(x, ji.edge_map[edge])
    if sorted(iso) != sorted(P.elements) or len(set(iso.values())) != len(ji.poset):
        raise VerificationFailed("x -> con(x) is not a bijection onto Ji Con L", details=iso)
    for x in P.elements:
        for y in P.elements:
            if P.leq(x, y) != ji.poset.leq(iso[x], iso[y]):
                raise VerificationFailed(
                    f"x -> con(x) does not preserve the order on {x!r}, {y!r}", details=iso
                )
    return iso


def represent_lattice(D: FiniteLattice) -> Representation:
    """
    A planar semimodular lattice whose congruence lattice is isomorphic to the distributive lattice ``D``.

    Raises:
        NotDistributiveError: ``D`` is not distributive.
        EmptyPosetError: ``D`` is trivial (its poset of join-irreducibles is empty).
    """
    if not is_distributive(D):
        raise NotDistributiveError("Only distributive lattices are congruence lattices")
    return represent(join_irreducibles(D))


# ====================================================================================================
# Eyes and hats


def insert_m3(
    E: PlanarEmbedding, square: tuple[str, str, str, str], *more: tuple[str, str, str, str]
) -> PlanarEmbedding:
    """
    Turn each covering square ``(bottom, left, right, top)`` into an M3 by adding a middle element.

    The new elements are named ``e<k>`` (first free ``k``), appended to the elements in the order of the squares and
    drawn between ``left`` and ``right``. The lattice is rebuilt once for all squares.

    Raises:
        NotACoveringSquareError: Some four elements do not form a covering square.
    """
    L = E.lattice
    elements, covers = list(L.elements), set(L.covers)
    upper, lower = dict(E.upper_order), dict(E.lower_order)
    k = 0
    for bottom, left, right, top in (square, *more):
        if left == right or not all(
            L.is_cover(a, b) for a, b in ((bottom, left), (bottom, right), (left, top), (right, top))
        ):
            raise NotACoveringSquareError("Not a covering square", details=[bottom, left, right, top])
        ups = list(upper.get(bottom, ()))
        if ups.index(left) > ups.index(right):
            left, right = right, left
        while f"e{k}" in L or f"e{k}" in upper:
            k += 1
        eye = f"e{k}"
        elements.append(eye)
        covers |= {(bottom, eye), (eye, top)}
        ups.insert(ups.index(left) + 1, eye)
        downs = list(lower.get(top, ()))
        downs.insert(downs.index(left) + 1, eye)
        upper[bottom], upper[eye] = tuple(ups), (top,)
        lower[top], lower[eye] = tuple(downs), (bottom,)
    M = FiniteLattice.from_poset(Poset(tuple(elements), frozenset(covers)))
    return PlanarEmbedding(M, upper, lower)


def decompose_hat(D: FiniteLattice) -> FiniteLattice | None:
    """
    Write ``D`` as ``D^h`` glued below a four-element Boolean lattice, if possible, and return ``D^h``.

    Raises:
        NotDistributiveError: ``D`` is not distributive.
    """
    if not is_distributive(D):
        raise NotDistributiveError("decompose_hat expects a distributive lattice")
    coatoms = D.lower_covers(D.one)
    if len(coatoms) != 2:
        return None
    u, v = coatoms
    h = D.meet(u, v)
    if any(not D.leq(x, h) for x in D.elements if x not in (u, v, D.one)):
        return None
    return FiniteLattice.from_poset(D.base.subposet(D.interval(D.zero, h)))


def patch_report(E: PlanarEmbedding) -> dict[str, Any]:
    """Patch classification of a rectangular lattice next to the hat decomposition of its congruence lattice."""
    corners = rectangular_corners(E)
    con = congruence_lattice(E.lattice)
    hat = decompose_hat(con)
    patch = is_patch(E) if corners is not None else False
    return {
        "rectangular": corners is not None,
        "corners": list(corners) if corners else None,
        "patch": patch,
        "con_size": len(con),
        "hat": hat is not None,
        "hat_size": len(hat) if hat is not None else None,
        "consistent": corners is None or patch == (hat is not None),
    }
