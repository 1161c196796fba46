import pytest

from latcon.congruence import (
    ColoredLattice,
    Congruence,
    all_congruences_bruteforce,
    collapsed_edges,
    congruence_join,
    congruence_lattice,
    congruence_report,
    is_congruence,
    ji_congruence_poset,
    perspectivity_classes,
    principal_congruence,
    verify_coloring,
)
from latcon.enumeration import enumerate_lattices
from latcon.errors import SizeGuardExceeded, TrivialLatticeError, UnknownElementError
from latcon.lattice import boolean, chain, grid, is_distributive, m3, n5, s7
from latcon.order import antichain_poset, are_isomorphic, chain_poset, poset_from_relation


def test_principal_congruence_of_equal_elements_is_identity():
    assert principal_congruence(s7(), "m", "m").is_identity


def test_principal_congruence_rejects_unknown_elements():
    with pytest.raises(UnknownElementError):
        principal_congruence(s7(), "m", "zz")


def test_m3_is_simple():
    L = m3()
    for a, b in [("0", "a"), ("a", "b"), ("b", "1")]:
        assert principal_congruence(L, a, b).is_full
    assert all_congruences_bruteforce(L) == {Congruence.identity(L.elements), Congruence.full(L.elements)}
    assert len(congruence_lattice(L)) == 2


def test_s7_congruences():
    L = s7()
    middle = principal_congruence(L, "m", "1")
    assert middle.blocks() == [("0",), ("1", "m"), ("a", "m_l"), ("b", "m_r")]
    assert principal_congruence(L, "0", "a").blocks() == [("0", "a", "m_l"), ("1", "b", "m", "m_r")]
    assert middle.block_of("m") == ("1", "m")
    assert middle < principal_congruence(L, "0", "a")
    assert middle < principal_congruence(L, "0", "b")

    ji = ji_congruence_poset(L)
    assert ji.poset.maximal() == ("j0", "j1")
    assert ji.poset.minimal() == ("j2",)
    assert ji.poset.covers == {("j2", "j0"), ("j2", "j1")}
    assert ji.edge_map[("m", "1")] == "j2"
    assert ji.generators("j2") == [("a", "m_l"), ("b", "m_r"), ("m", "1")]


def test_perspectivity_classes_of_s7():
    assert perspectivity_classes(s7()) == [
        [("0", "a"), ("b", "m"), ("m_r", "1")],
        [("0", "b"), ("a", "m"), ("m_l", "1")],
        [("a", "m_l"), ("b", "m_r"), ("m", "1")],
    ]


@pytest.mark.parametrize(
    "L, expected",
    [
        (chain(2), chain_poset(1)),
        (chain(3), antichain_poset(2)),
        (boolean(2), antichain_poset(2)),
        (grid(3, 3), antichain_poset(4)),
    ],
)
def test_ji_congruence_poset_of_distributive_lattices(L, expected):
    assert are_isomorphic(ji_congruence_poset(L).poset, expected) is not None


def test_ji_congruence_poset_of_trivial_lattice():
    with pytest.raises(TrivialLatticeError):
        ji_congruence_poset(chain(1))
    assert len(congruence_lattice(chain(1))) == 1


def test_s8_gadget_is_colored_p_below_q(s8):
    ji = ji_congruence_poset(s8.lattice)
    assert len(ji.poset) == 2
    assert len(ji.poset.covers) == 1
    report = verify_coloring(s8)
    assert report.ok
    assert report.strictly_above[("q", "p")]
    assert not report.strictly_above[("p", "q")]


def test_coloring_violations_are_reported():
    L = s7()
    report = verify_coloring(ColoredLattice(L, {("0", "a"): "x", ("m", "1"): "x"}))
    assert not report.ok
    assert report.violations == [(("0", "a"), ("m", "1"))]


def test_is_congruence():
    L = chain(3)
    assert is_congruence(L, {"c0": 0, "c1": 0, "c2": 1})
    assert not is_congruence(L, {"c0": 0, "c1": 1})
    N = n5()
    assert not is_congruence(N, {"0": 0, "a": 0, "b": 1, "c": 2, "1": 3})


def test_bruteforce_guard():
    with pytest.raises(SizeGuardExceeded):
        all_congruences_bruteforce(chain(5), guard=4)


def test_collapsed_edges_and_join():
    L = s7()
    theta = congruence_join(L, [principal_congruence(L, "0", "a"), principal_congruence(L, "0", "b")])
    assert theta.is_full
    assert collapsed_edges(L, principal_congruence(L, "m", "1")) == [("a", "m_l"), ("b", "m_r"), ("m", "1")]


def _agrees_with_bruteforce(L) -> None:
    brute = all_congruences_bruteforce(L)
    con = congruence_lattice(L)
    assert len(con) == len(brute)
    assert is_distributive(con)
    for a, b in L.edges():
        assert principal_congruence(L, a, b) in brute
    ordered = sorted(brute, key=lambda theta: theta.labels)
    names = [f"t{i}" for i in range(len(ordered))]
    refinement = poset_from_relation(
        names,
        [(names[i], names[j]) for i, s in enumerate(ordered) for j, t in enumerate(ordered) if s < t],
    )
    assert are_isomorphic(con.base, refinement) is not None


def test_congruence_engine_matches_bruteforce():
    for n in range(1, 7):
        for L in enumerate_lattices(n):
            _agrees_with_bruteforce(L)


@pytest.mark.slow
def test_congruence_engine_matches_bruteforce_slow():
    for n in (7, 8):
        for L in enumerate_lattices(n):
            _agrees_with_bruteforce(L)


def _is_monotone(L) -> bool:
    con = {(a, b): principal_congruence(L, a, b) for a in L.elements for b in L.elements if L.leq(a, b)}
    return all(
        con[(a2, b2)] <= con[(a, b)]
        for (a, b) in con
        for (a2, b2) in con
        if L.leq(a, a2) and L.leq(b2, b)
    )


def test_principal_congruence_is_monotone():
    assert _is_monotone(s7())
    assert _is_monotone(n5())
    for n in range(1, 6):
        assert all(_is_monotone(L) for L in enumerate_lattices(n))


def test_labels_are_numbered_by_least_element_id():
    theta = Congruence.from_labels(("z", "a", "m"), [7, 3, 7])
    assert theta.labels == (1, 0, 1)
    assert theta.blocks() == [("a",), ("m", "z")]
    assert theta == Congruence.from_blocks(("z", "a", "m"), [("m", "z")])
    assert str(theta) == "a | m,z"

def test_congruence_report(s8):
    report = congruence_report(s8.lattice, s8.color)
    data = report.to_dict()
    assert len(data["join_irreducibles"]) == 2
    assert data["coloring"]["ok"]
    assert "coloring: ok" in report.to_text()
