"""
Necessary conditions on the poset of join-irreducible congruences of a slim planar semimodular lattice.

Each checker returns a :class:`PropertyReport`; a failing report always carries a witness that :meth:`PropertyReport.replays`
re-validates. Forbidden configurations are data: every ``latcon/data/patterns/<name>.poset`` file is one
:class:`ForbiddenConfig`, with an optional ``# max_to_max: true`` directive.
"""

from __future__ import annotations

__all__ = [
    "ForbiddenConfig",
    "PropertyReport",
    "registered_patterns",
    "get_pattern",
    "two_cover",
    "two_max",
    "no_child",
    "partition_property",
    "maximal_cover",
    "forbidden",
    "check_all",
    "PROPERTY_NAMES",
]

import collections
import dataclasses
import functools
import logging
import re
from typing import Any, Callable

from latcon import utils
from latcon.errors import EmptyPosetError, UnknownPatternError
from latcon.order import (
    EmbeddingWitness,
    Poset,
    f3,
    find_cover_preserving_embedding,
)

_logger = logging.getLogger(__name__)

_DIRECTIVE = re.compile(r"^#\s*max_to_max\s*:\s*(true|false)\s*$", re.IGNORECASE)


@dataclasses.dataclass(frozen=True, slots=True)
class ForbiddenConfig:
    """
    A pattern that must not have a cover-preserving embedding.

    Attributes:
        name: Registry name (the file stem).
        pattern: The pattern poset.
        max_to_max: Maximal elements of the pattern must land on maximal elements.
    """

    name: str
    pattern: Poset
    max_to_max: bool = False


@functools.cache
def registered_patterns() -> tuple[ForbiddenConfig, ...]:
    """Every shipped pattern, sorted by name."""
    from latcon.serialization import parse_poset_text

    configs = []
    root = utils.data_path("patterns")
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if not entry.name.endswith(".poset"):
            continue
        text = entry.read_text(encoding="utf-8")
        flag = False
        for line in text.splitlines():
            if m := _DIRECTIVE.match(line.strip()):
                flag = m.group(1).lower() == "true"
        configs.append(ForbiddenConfig(entry.name.removesuffix(".poset"), parse_poset_text(text), flag))
    _logger.debug("Loaded %d forbidden configurations", len(configs))
    return tuple(configs)


def get_pattern(name: str, max_to_max: bool | None = None) -> ForbiddenConfig:
    """
    Look up a registered pattern, optionally overriding its ``max_to_max`` flag.

    Raises:
        UnknownPatternError: No pattern has this name.
    """
    for config in registered_patterns():
        if config.name == name:
            return config if max_to_max is None else dataclasses.replace(config, max_to_max=max_to_max)
    raise UnknownPatternError(
        f"No forbidden configuration named {name!r}",
        details={"known": [c.name for c in registered_patterns()]},
    )


@dataclasses.dataclass(frozen=True, slots=True)
class PropertyReport:
    """
    The verdict of one property on one poset.

    Attributes:
        name: The property name.
        passed: Verdict.
        witness: On failure, an embedding of the offending pattern or the offending elements.
        note: Extra human readable information (e.g. the partition found).
    """

    name: str
    passed: bool
    witness: EmbeddingWitness | tuple[str, ...] | None = None
    note: str = ""

    def to_dict(self) -> dict[str, Any]:
        witness: Any = None
        if isinstance(self.witness, EmbeddingWitness):
            witness = dict(sorted(self.witness.mapping.items()))
        elif self.witness is not None:
            witness = list(self.witness)
        return {"property": self.name, "passed": self.passed, "witness": witness, "note": self.note}

    def to_text(self) -> str:
        line = f"{self.name}: {'pass' if self.passed else 'FAIL'}"
        if self.note:
            line += f" ({self.note})"
        if isinstance(self.witness, EmbeddingWitness):
            line += "  witness " + ", ".join(f"{k}->{v}" for k, v in sorted(self.witness.mapping.items()))
        elif self.witness:
            line += "  witness " + " ".join(self.witness)
        return line

    def replays(self, P: Poset) -> bool:
        """Re-validate the witness of a failing report against ``P``."""
        if self.passed:
            return True
        return _REPLAY[self.name.split(":")[0]](self, P)


def two_cover(P: Poset) -> PropertyReport:
    """Every element has at most two upper covers (equivalently F3 has no cover-preserving embedding)."""
    for x in P.elements:
        uppers = P.upper_covers(x)
        if len(uppers) > 2:
            return PropertyReport(
                "two_cover",
                False,
                EmbeddingWitness({"o": x, "a": uppers[0], "b": uppers[1], "c": uppers[2]}),
                note=f"{x} has {len(uppers)} covers",
            )
    return PropertyReport("two_cover", True)


def two_max(P: Poset) -> PropertyReport:
    """
    At least two maximal elements.

    Raises:
        EmptyPosetError: ``P`` is empty.
    """
    if not P.elements:
        raise EmptyPosetError("two_max needs a nonempty poset")
    maximal = P.maximal()
    if len(maximal) >= 2:
        return PropertyReport("two_max", True)
    return PropertyReport("two_max", False, maximal, note="a single maximal element")


def no_child(P: Poset) -> PropertyReport:
    """No maximal ``z`` covering distinct ``x``, ``y`` that both cover a common ``u``."""
    for z in P.maximal():
        lowers = P.lower_covers(z)
        for i, x in enumerate(lowers):
            for y in lowers[i + 1 :]:
                common = sorted(set(P.lower_covers(x)) & set(P.lower_covers(y)), key=P.index)
                if common:
                    return PropertyReport("no_child", False, (z, x, y, common[0]))
    return PropertyReport("no_child", True)


def partition_property(P: Poset) -> PropertyReport:
    """
    The maximal elements split into two nonempty parts, no two elements of a part covering a common element.

    The conflict graph joins maximal elements covering a common element; the property holds iff it is bipartite and
    there are at least two maximal elements. A failure carries an odd cycle (closed, first element repeated) or the
    single maximal element.
    """
    maximal = P.maximal()
    if len(maximal) < 2:
        return PropertyReport("partition", False, tuple(maximal), note="fewer than two maximal elements")
    conflicts: dict[str, set[str]] = {m: set() for m in maximal}
    for x in P.elements:
        above = [m for m in P.upper_covers(x) if m in conflicts]
        for m in above:
            conflicts[m].update(n for n in above if n != m)
    side: dict[str, int] = {}
    parent: dict[str, str | None] = {}
    for root in maximal:
        if root in side:
            continue
        side[root], parent[root] = 0, None
        queue = collections.deque([root])
        while queue:
            m = queue.popleft()
            for n in sorted(conflicts[m], key=P.index):
                if n not in side:
                    side[n], parent[n] = 1 - side[m], m
                    queue.append(n)
                elif side[n] == side[m]:
                    return PropertyReport("partition", False, _odd_cycle(parent, m, n), note="odd conflict cycle")
    left = [m for m in maximal if side[m] == 0]
    right = [m for m in maximal if side[m] == 1]
    if not right:
        right = [left.pop()]
    return PropertyReport("partition", True, note=f"{{{','.join(left)}}} / {{{','.join(right)}}}")


def _odd_cycle(parent: dict[str, str | None], m: str, n: str) -> tuple[str, ...]:
    def path(x: str) -> list[str]:
        out = [x]
        while parent[out[-1]] is not None:
            out.append(parent[out[-1]])
        return out

    pm, pn = path(m), path(n)
    common = next(x for x in pm if x in pn)
    cycle = pm[: pm.index(common) + 1] + list(reversed(pn[: pn.index(common)]))
    return tuple(cycle + [cycle[0]])


def maximal_cover(P: Poset) -> PropertyReport:
    """If ``x`` is covered by a maximal ``y``, then ``y`` is not the only cover of ``x``."""
    maximal = set(P.maximal())
    for x in P.elements:
        uppers = P.upper_covers(x)
        if len(uppers) == 1 and uppers[0] in maximal:
            return PropertyReport("maximal_cover", False, (x, uppers[0]))
    return PropertyReport("maximal_cover", True)


def forbidden(P: Poset, config: ForbiddenConfig) -> PropertyReport:
    """No cover-preserving embedding of ``config.pattern`` (maximal to maximal if the config asks for it)."""
    name = f"forbidden:{config.name}"
    if len(P) < len(config.pattern):
        return PropertyReport(name, True)
    witness = find_cover_preserving_embedding(config.pattern, P, max_to_max=config.max_to_max)
    if witness is None:
        return PropertyReport(name, True)
    return PropertyReport(name, False, witness)


PROPERTY_NAMES = ("two_cover", "two_max", "no_child", "partition", "maximal_cover")

_CHECKERS: dict[str, Callable[[Poset], PropertyReport]] = {
    "two_cover": two_cover,
    "two_max": two_max,
    "no_child": no_child,
    "partition": partition_property,
    "maximal_cover": maximal_cover,
}


def check_all(P: Poset, names: list[str] | None = None) -> list[PropertyReport]:
    """
    Run the properties in a fixed order: the five structural ones, then every registered pattern.

    Args:
        P: The poset to check.
        names: Restrict to these properties (structural names or ``forbidden:<pattern>``).
    """
    reports = [fn(P) for name, fn in _CHECKERS.items() if names is None or name in names]
    for config in registered_patterns():
        if names is None or f"forbidden:{config.name}" in names:
            reports.append(forbidden(P, config))
    failed = [r.name for r in reports if not r.passed]
    if failed:
        _logger.debug("Poset of size %d fails %s", len(P), ", ".join(failed))
    return reports


# ====================================================================================================
# Witness replay


def _replay_two_cover(report: PropertyReport, P: Poset) -> bool:
    return isinstance(report.witness, EmbeddingWitness) and report.witness.is_valid(f3(), P)


def _replay_two_max(report: PropertyReport, P: Poset) -> bool:
    return len(P.maximal()) < 2 and tuple(report.witness) == P.maximal()


def _replay_no_child(report: PropertyReport, P: Poset) -> bool:
    z, x, y, u = report.witness
    return (
        z in P.maximal()
        and x != y
        and P.is_cover(x, z)
        and P.is_cover(y, z)
        and P.is_cover(u, x)
        and P.is_cover(u, y)
    )


def _replay_partition(report: PropertyReport, P: Poset) -> bool:
    maximal = set(P.maximal())
    w = report.witness
    if len(maximal) < 2:
        return set(w) == maximal
    if len(w) < 4 or w[0] != w[-1] or (len(w) - 1) % 2 == 0 or not set(w) <= maximal:
        return False

    def conflict(m: str, n: str) -> bool:
        return bool(set(P.lower_covers(m)) & set(P.lower_covers(n)))

    return all(conflict(m, n) for m, n in zip(w, w[1:]))


def _replay_maximal_cover(report: PropertyReport, P: Poset) -> bool:
    x, y = report.witness
    return y in P.maximal() and P.upper_covers(x) == (y,)


def _replay_forbidden(report: PropertyReport, P: Poset) -> bool:
    config = get_pattern(report.name.split(":", 1)[1])
    return isinstance(report.witness, EmbeddingWitness) and report.witness.is_valid(
        config.pattern, P, max_to_max=config.max_to_max
    )


_REPLAY: dict[str, Callable[[PropertyReport, Poset], bool]] = {
    "two_cover": _replay_two_cover,
    "two_max": _replay_two_max,
    "no_child": _replay_no_child,
    "partition": _replay_partition,
    "maximal_cover": _replay_maximal_cover,
    "forbidden": _replay_forbidden,
}
