import pytest

from latcon.congruence import congruence_lattice
from latcon.construct import decompose_hat
from latcon.enumeration import enumerate_sr
from latcon.errors import EmbeddingNotFound, NotGradedError, NotRectangularError, NotSRError
from latcon.lattice import boolean, chain, grid, m3, n5, s7
from latcon.planar import (
    EdgeKind,
    PlanarEmbedding,
    boundary_chains,
    classify_edges,
    compute_lamps,
    find_embedding,
    find_peaks,
    is_c1_diagram,
    is_patch,
    is_rectangular,
    is_sr,
    lamp_closure_is_trivial,
    layered_coords,
    mirror,
    natural_diagram,
    rectangular_corners,
    validate_embedding,
)


def test_shipped_s7_embedding_is_valid(s7_embedding):
    report = validate_embedding(s7_embedding)
    assert report.ok
    assert report.crossings == []
    assert s7_embedding.layers() == [["0"], ["a", "b"], ["m_l", "m", "m_r"], ["1"]]


def test_validate_embedding_reports_inconsistent_orders(s7_embedding):
    broken = PlanarEmbedding(
        s7_embedding.lattice,
        dict(s7_embedding.upper_order) | {"a": ("m", "m_l")},
        s7_embedding.lower_order,
    )
    assert not validate_embedding(broken).ok

    missing = PlanarEmbedding(
        s7_embedding.lattice,
        dict(s7_embedding.upper_order) | {"a": ("m_l",)},
        s7_embedding.lower_order,
    )
    report = validate_embedding(missing)
    assert not report.ok
    assert report.problems == ["upper_order[a] does not list the upper covers of a"]


@pytest.mark.parametrize("L", [chain(1), chain(3), boolean(2), m3(), s7(), grid(3, 4)])
def test_find_embedding_is_valid(L):
    assert validate_embedding(find_embedding(L)).ok


def test_find_embedding_failures():
    with pytest.raises(NotGradedError):
        find_embedding(n5())
    with pytest.raises(EmbeddingNotFound):
        find_embedding(boolean(3))


def test_boundaries_of_s7(s7_embedding):
    b = boundary_chains(s7_embedding)
    assert b.left == ("0", "a", "m_l", "1")
    assert b.right == ("0", "b", "m_r", "1")
    assert (b.left_corner, b.right_corner) == ("m_l", "m_r")
    assert b.lower_left == ("0", "a", "m_l")
    assert b.upper_right == ("m_r", "1")
    assert boundary_chains(mirror(s7_embedding)).left == ("0", "b", "m_r", "1")


def test_rectangular_and_patch_lattices(s7_embedding):
    assert set(rectangular_corners(find_embedding(grid(3, 3)))) == {"(0,2)", "(2,0)"}
    assert is_patch(find_embedding(grid(2, 2)))
    assert not is_patch(find_embedding(grid(3, 2)))
    assert is_patch(s7_embedding)
    assert is_sr(s7_embedding)

    E = find_embedding(chain(3))
    assert not is_rectangular(E)
    with pytest.raises(NotRectangularError):
        is_patch(E)


def test_natural_diagram_of_s7(s7_embedding):
    coords = natural_diagram(s7_embedding)
    assert coords.position["m"] == (1, 1)
    assert coords.drawing("m") == (0, 2)
    assert coords.position["1"] == (2, 2)
    assert coords.is_meet_embedding()
    kinds = classify_edges(coords)
    assert [e for e, k in kinds.items() if k == EdgeKind.STEEP] == [("m", "1")]
    assert find_peaks(s7_embedding.lattice) == [("m", "1")]
    assert is_c1_diagram(s7_embedding, coords)


def test_grid_diagram_has_only_normal_edges():
    E = find_embedding(grid(3, 4))
    coords = natural_diagram(E)
    assert set(classify_edges(coords).values()) == {EdgeKind.NORMAL}
    assert find_peaks(E.lattice) == []
    assert is_c1_diagram(E, coords)


def test_natural_diagram_needs_slim_rectangular():
    with pytest.raises(NotSRError):
        natural_diagram(find_embedding(chain(3)))
    with pytest.raises(NotSRError):
        natural_diagram(find_embedding(m3()))


def test_lamps_of_s7(s7_embedding):
    lamps = compute_lamps(s7_embedding)
    assert [lamp.edges for lamp in lamps] == [(("m", "1"),), (("m_l", "1"),), (("m_r", "1"),)]
    assert all(lamp.top == "1" for lamp in lamps)
    assert lamp_closure_is_trivial(s7_embedding)


def test_layered_coords(s7_embedding):
    coords = layered_coords(s7_embedding)
    assert coords["0"] == (0.0, 0)
    assert coords["m_r"] == (2.0, 2)
    assert coords["1"] == (1.0, 3)


def test_enumerated_sr_lattices(sweep_size):
    seen = 0
    for n in range(4, sweep_size + 1):
        for E in enumerate_sr(n):
            coords = natural_diagram(E)
            assert coords.is_meet_embedding()
            assert is_c1_diagram(E, coords)
            assert lamp_closure_is_trivial(E)
            hat = decompose_hat(congruence_lattice(E.lattice))
            assert is_patch(E) == (hat is not None)
            seen += 1
    assert seen >= 2
