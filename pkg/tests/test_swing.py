import pytest

from latcon.enumeration import enumerate_sps
from latcon.errors import NotSPSError
from latcon.lattice import grid, m3
from latcon.planar import PlanarEmbedding, find_embedding, validate_embedding
from latcon.swing import (
    Edge,
    Move,
    Step,
    SwingKind,
    SwingWitness,
    check_swing_lemma,
    down_perspective,
    replay_witness,
    swing,
    swing_collapse,
    up_perspective,
)


def test_perspectivity(s7_embedding):
    L = s7_embedding.lattice
    assert up_perspective(L, ("0", "a"), ("b", "m"))
    assert up_perspective(L, ("0", "a"), ("m_r", "1"))
    assert not up_perspective(L, ("0", "a"), ("m_l", "1"))
    assert down_perspective(L, ("m_r", "1"), ("0", "a"))


def test_swing_kinds(s7_embedding):
    assert swing(s7_embedding, ("m_l", "1"), ("m", "1")) == SwingKind.EXTERNAL
    assert swing(s7_embedding, ("m", "1"), ("m", "1")) == SwingKind.INTERNAL
    assert swing(s7_embedding, ("m", "1"), ("m_l", "1")) == SwingKind.NONE
    assert swing(s7_embedding, ("a", "m"), ("m", "1")) == SwingKind.NONE


def test_swing_collapse_of_the_middle_edge(s7_embedding):
    reached = swing_collapse(s7_embedding, ("m", "1"))
    assert set(reached) == {("m", "1"), ("a", "m_l"), ("b", "m_r")}
    assert reached[Edge("m", "1")].steps == ()
    assert reached[Edge("a", "m_l")].steps == (Step(Edge("m", "1"), Move.DOWN, Edge("a", "m_l")),)


def test_swing_collapse_walks_through_a_swing(s7_embedding):
    reached = swing_collapse(s7_embedding, ("0", "a"))
    assert set(reached) == {
        ("0", "a"),
        ("b", "m"),
        ("m_r", "1"),
        ("m", "1"),
        ("a", "m_l"),
        ("b", "m_r"),
    }
    witness = reached[Edge("m", "1")]
    assert witness.climb == (Edge("0", "a"), Edge("m_r", "1"))
    assert [s.move for s in witness.steps] == [Move.SWING]
    assert replay_witness(s7_embedding, ("0", "a"), ("m", "1"), witness)
    assert "swing m_r-1 -> m-1" in witness.to_text()


def test_replay_rejects_tampered_witnesses(s7_embedding):
    witness = swing_collapse(s7_embedding, ("0", "a"))[Edge("m", "1")]
    tampered = SwingWitness(witness.climb, (Step(Edge("m_r", "1"), Move.DOWN, Edge("m", "1")),))
    assert not replay_witness(s7_embedding, ("0", "a"), ("m", "1"), tampered)
    assert not replay_witness(s7_embedding, ("0", "b"), ("m", "1"), witness)
    assert not replay_witness(s7_embedding, ("0", "a"), ("a", "m_l"), witness)


def test_swing_requires_sps():
    E = find_embedding(m3())
    with pytest.raises(NotSPSError):
        swing_collapse(E, ("0", "a"))
    with pytest.raises(NotSPSError):
        check_swing_lemma(E)


def test_swing_lemma_on_s7_and_grids(s7_embedding):
    report = check_swing_lemma(s7_embedding)
    assert report.ok
    assert report.edges == 9
    assert check_swing_lemma(find_embedding(grid(3, 4))).ok


def test_swing_lemma_on_all_small_sps_lattices(sweep_size):
    for n in range(3, sweep_size + 1):
        for E in enumerate_sps(n):
            report = check_swing_lemma(E)
            assert report.ok, report.to_dict()


def test_misordered_embedding_is_caught(s7_embedding):
    E = s7_embedding
    reversed_top = PlanarEmbedding(E.lattice, E.upper_order, {**E.lower_order, "1": tuple(reversed(E.lowers("1")))})
    assert not validate_embedding(reversed_top).ok

    middle_first = PlanarEmbedding(E.lattice, E.upper_order, {**E.lower_order, "1": ("m", "m_l", "m_r")})
    assert not validate_embedding(middle_first).ok
    report = check_swing_lemma(middle_first)
    assert not report.ok
    assert ("m_l", "1") in report.extra[("m", "1")]
    assert ("m", "1") in report.missing[("m_l", "1")]
