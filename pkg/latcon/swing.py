"""
Perspectivities, swings, and the swing-based description of principal congruences.

In a slim planar semimodular lattice an edge ``q`` is collapsed by ``con(p)`` iff one can climb from ``p`` to an
up-perspective edge and then walk down to ``q`` by down-perspectivities and swings, every edge visited once and the
tops never increasing. :func:`swing_collapse` runs that walk as a breadth-first search and returns a replayable
witness for every edge it reaches.
"""

from __future__ import annotations

__all__ = [
    "Edge",
    "Move",
    "SwingKind",
    "Step",
    "SwingWitness",
    "SwingLemmaReport",
    "up_perspective",
    "down_perspective",
    "swing",
    "swing_collapse",
    "replay_witness",
    "check_swing_lemma",
]

import collections
import dataclasses
import logging
from typing import Any, NamedTuple

from latcon import utils
from latcon.congruence import collapsed_edges, edge_congruences
from latcon.errors import NotSPSError
from latcon.lattice import FiniteLattice, is_planar, is_semimodular, is_slim
from latcon.planar import PlanarEmbedding, interior_lower_covers

_logger = logging.getLogger(__name__)


class Edge(NamedTuple):
    bottom: str
    top: str

    def __str__(self) -> str:
        return f"{self.bottom}-{self.top}"


class Move(utils.StrEnum):
    DOWN = "down-perspective"
    SWING = "swing"


class SwingKind(utils.StrEnum):
    NONE = "none"
    EXTERNAL = "external"
    INTERNAL = "internal"


class Step(NamedTuple):
    source: Edge
    move: Move
    target: Edge


@dataclasses.dataclass(frozen=True, slots=True)
class SwingWitness:
    """
    How ``con(p)`` reaches an edge.

    Attributes:
        climb: ``(p, r0)`` with ``p`` up-perspective to ``r0``.
        steps: The moves from ``r0`` to the collapsed edge.
    """

    climb: tuple[Edge, Edge]
    steps: tuple[Step, ...] = ()

    @property
    def target(self) -> Edge:
        return self.steps[-1].target if self.steps else self.climb[1]

    def path(self) -> list[Edge]:
        """``r0, r1, ..., rn``."""
        return [self.climb[1], *(s.target for s in self.steps)]

    def extend(self, move: Move, target: Edge) -> SwingWitness:
        return SwingWitness(self.climb, (*self.steps, Step(self.target, move, target)))

    def to_dict(self) -> dict[str, Any]:
        return {
            "climb": [list(self.climb[0]), list(self.climb[1])],
            "steps": [{"from": list(s.source), "move": str(s.move), "to": list(s.target)} for s in self.steps],
        }

    def to_text(self, indent: str = "  ") -> str:
        lines = [f"{indent}climb {self.climb[0]} -> {self.climb[1]}"]
        lines += [f"{indent}{indent}{s.move} {s.source} -> {s.target}" for s in self.steps]
        return "\n".join(lines)


def _edge(e: tuple[str, str]) -> Edge:
    return e if isinstance(e, Edge) else Edge(*e)


def up_perspective(L: FiniteLattice, p: tuple[str, str], q: tuple[str, str]) -> bool:
    """``0_p = 1_p ∧ 0_q`` and ``1_q = 1_p ∨ 0_q``."""
    (a, b), (c, d) = p, q
    return L.meet(b, c) == a and L.join(b, c) == d


def down_perspective(L: FiniteLattice, p: tuple[str, str], q: tuple[str, str]) -> bool:
    return up_perspective(L, q, p)


def swing(E: PlanarEmbedding, p: tuple[str, str], q: tuple[str, str]) -> SwingKind:
    """
    Whether ``p`` swings to ``q``: same top ``h`` covering at least three elements, ``0_q`` neither the left-most nor
    the right-most lower cover of ``h``. The swing is external when ``0_p`` is, internal otherwise.
    """
    if p[1] != q[1]:
        return SwingKind.NONE
    interior = interior_lower_covers(E, p[1])
    if q[0] not in interior:
        return SwingKind.NONE
    return SwingKind.INTERNAL if p[0] in interior else SwingKind.EXTERNAL


def _require_sps(L: FiniteLattice) -> None:
    if L.rank is None or not is_semimodular(L) or not is_slim(L) or not is_planar(L):
        raise NotSPSError("The lattice is not slim, planar and semimodular")


def _collapse(E: PlanarEmbedding, p: Edge, edges: list[Edge]) -> dict[Edge, SwingWitness]:
    L = E.lattice
    found: dict[Edge, SwingWitness] = {}
    queue: collections.deque[Edge] = collections.deque()
    for r in edges:
        if up_perspective(L, p, r):
            found[r] = SwingWitness((p, r))
            queue.append(r)
    while queue:
        s = queue.popleft()
        for r in edges:
            if r in found:
                continue
            if up_perspective(L, r, s):
                move = Move.DOWN
            elif swing(E, s, r) is not SwingKind.NONE:
                move = Move.SWING
            else:
                continue
            found[r] = found[s].extend(move, r)
            queue.append(r)
    return found


def swing_collapse(E: PlanarEmbedding, p: tuple[str, str]) -> dict[Edge, SwingWitness]:
    """
    Every edge reachable from ``p`` by a climb followed by down-perspectivities and swings, with a shortest witness.

    Ties between witnesses of equal length go to the lexicographically smaller edges.

    Raises:
        NotSPSError: The lattice is not slim, planar and semimodular.
    """
    _require_sps(E.lattice)
    return _collapse(E, _edge(p), sorted(map(_edge, E.lattice.edges())))


def replay_witness(E: PlanarEmbedding, p: tuple[str, str], q: tuple[str, str], witness: SwingWitness) -> bool:
    """Re-check a witness move by move: the climb, each step, distinct edges and non-increasing tops."""
    L = E.lattice
    if tuple(witness.climb[0]) != tuple(p) or not up_perspective(L, p, witness.climb[1]):
        return False
    current = witness.climb[1]
    for step in witness.steps:
        if tuple(step.source) != tuple(current):
            return False
        if step.move is Move.DOWN and not up_perspective(L, step.target, step.source):
            return False
        if step.move is Move.SWING and swing(E, step.source, step.target) is SwingKind.NONE:
            return False
        current = step.target
    path = witness.path()
    if len(set(path)) != len(path):
        return False
    if any(not L.leq(b[1], a[1]) for a, b in zip(path, path[1:])):
        return False
    return tuple(current) == tuple(q)


@dataclasses.dataclass(frozen=True, slots=True)
class SwingLemmaReport:
    """
    Swing reachability against the congruence closure, edge by edge.

    Attributes:
        missing: Edge -> edges collapsed by ``con(edge)`` that the walk did not reach.
        extra: Edge -> edges the walk reached that ``con(edge)`` does not collapse.
        bad_witnesses: ``(p, q)`` pairs whose witness failed to replay.
    """

    edges: int
    missing: dict[Edge, list[Edge]]
    extra: dict[Edge, list[Edge]]
    bad_witnesses: list[tuple[Edge, Edge]]

    @property
    def ok(self) -> bool:
        return not self.missing and not self.extra and not self.bad_witnesses

    def to_dict(self) -> dict[str, Any]:
        return {
            "ok": self.ok,
            "edges": self.edges,
            "missing": {str(p): [list(q) for q in v] for p, v in self.missing.items()},
            "extra": {str(p): [list(q) for q in v] for p, v in self.extra.items()},
            "bad_witnesses": [[list(p), list(q)] for p, q in self.bad_witnesses],
        }


def check_swing_lemma(E: PlanarEmbedding) -> SwingLemmaReport:
    """
    Compare :func:`swing_collapse` with the edges collapsed by the principal congruence of every edge.

    The gate checks the lattice only; an embedding with wrongly ordered covers is accepted and shows up as
    differences.

    Raises:
        NotSPSError: The lattice is not slim, planar and semimodular.
    """
    L = E.lattice
    _require_sps(L)
    edges = sorted(map(_edge, L.edges()))
    thetas = edge_congruences(L)
    missing, extra, bad = {}, {}, []
    for p in edges:
        reached = _collapse(E, p, edges)
        expected = set(map(_edge, collapsed_edges(L, thetas[p])))
        if expected - set(reached):
            missing[p] = sorted(expected - set(reached))
        if set(reached) - expected:
            extra[p] = sorted(set(reached) - expected)
        bad.extend((p, q) for q, w in reached.items() if not replay_witness(E, p, q, w))
    report = SwingLemmaReport(len(edges), missing, extra, bad)
    _logger.info(
        "Swing check on %d edges: %d missing, %d extra, %d bad witnesses",
        len(edges),
        len(missing),
        len(extra),
        len(bad),
    )
    return report
