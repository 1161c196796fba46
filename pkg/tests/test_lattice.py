import pytest
from hypothesis import given, settings, strategies as st

from latcon.enumeration import enumerate_lattices
from latcon.errors import EmptyPosetError, NotALatticeError
from latcon.lattice import (
    FiniteLattice,
    boolean,
    chain,
    find_cover_preserving_sublattice,
    glued_sum,
    grid,
    is_distributive,
    is_modular,
    is_planar,
    is_semimodular,
    is_slim,
    iter_sublattice_embeddings,
    m3,
    n5,
    product,
    s7,
)
from latcon.order import Poset, antichain_poset, canonical_form

SMALL = [chain(1), chain(2), chain(3), boolean(2), m3(), n5(), s7(), grid(2, 3)]


def test_from_poset_reports_the_failure():
    with pytest.raises(NotALatticeError) as e:
        FiniteLattice.from_poset(antichain_poset(2))
    assert e.value.details["reason"] == "no-lub"
    assert sorted(e.value.pair) == ["x0", "x1"]

    with pytest.raises(NotALatticeError) as e:
        FiniteLattice.from_poset(Poset.from_covers("abc", [("a", "c"), ("b", "c")]))
    assert e.value.reason == "no-glb"

    bowtie = Poset.from_covers(
        ["0", "a", "b", "c", "d", "1"],
        [("0", "a"), ("0", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "1"), ("d", "1")],
    )
    with pytest.raises(NotALatticeError) as e:
        FiniteLattice.from_poset(bowtie)
    assert e.value.reason == "not-unique"

    with pytest.raises(EmptyPosetError):
        FiniteLattice.from_poset(Poset((), frozenset()))


def test_meet_join_and_rank():
    L = s7()
    assert L.join("a", "b") == "m"
    assert L.meet("m_l", "m_r") == "0"
    assert L.meet("m_l", "m") == "a"
    assert L.join_all(["m_l", "m_r"]) == "1"
    assert L.meet_all([]) == "1"
    assert L.rank == {"0": 0, "a": 1, "b": 1, "m_l": 2, "m": 2, "m_r": 2, "1": 3}
    assert n5().rank is None
    assert L.interval("a", "1") == ("a", "m_l", "m", "1")
    assert L.is_doubly_irreducible("m_l")
    assert not L.is_doubly_irreducible("a")


def test_from_poset_is_idempotent():
    for L in SMALL:
        again = FiniteLattice.from_poset(L.base)
        assert again.meet_table == L.meet_table
        assert again.join_table == L.join_table


def test_predicates_on_standard_lattices():
    assert is_distributive(chain(4))
    assert not is_distributive(m3())
    assert not is_distributive(n5())
    assert is_modular(m3())
    assert not is_modular(n5())
    assert not is_semimodular(n5())
    assert is_semimodular(s7())
    assert not is_distributive(s7())
    assert not is_slim(m3())
    assert is_slim(s7())
    assert is_slim(grid(3, 3))


def test_planarity():
    assert is_planar(m3())
    assert is_planar(s7())
    assert is_planar(grid(4, 3))
    assert not is_planar(boolean(3))
    assert not is_planar(boolean(4))


def test_glued_sum():
    C3 = glued_sum(chain(2), chain(2))
    assert len(C3) == 3
    assert canonical_form(C3.base) == canonical_form(chain(3).base)

    assert glued_sum(s7(), chain(1)).base == s7().base

    two_diamonds = glued_sum(boolean(2), boolean(2))
    assert len(two_diamonds) == 7
    assert is_distributive(two_diamonds)


@given(st.lists(st.sampled_from(SMALL), min_size=3, max_size=3))
@settings(max_examples=100, deadline=None)
def test_glued_sum_is_associative(triple):
    A, B, C = triple
    left = glued_sum(glued_sum(A, B), C)
    right = glued_sum(A, glued_sum(B, C))
    assert canonical_form(left.base) == canonical_form(right.base)


def test_product_and_dual():
    P = product(chain(2), chain(3))
    assert len(P) == 6
    assert is_distributive(P)
    assert canonical_form(P.base) == canonical_form(grid(2, 3).base)
    assert canonical_form(n5().dual().base) == canonical_form(n5().base)


def test_sublattice_search():
    assert find_cover_preserving_sublattice(m3(), m3()) is not None
    assert find_cover_preserving_sublattice(grid(3, 3), m3()) is None
    assert len(list(iter_sublattice_embeddings(chain(3), chain(2)))) == 2

    witness = find_cover_preserving_sublattice(s7(), s7())
    assert witness is not None
    assert witness["1"] == "1" and witness["m"] == "m"
    assert witness.is_valid(s7().base, s7().base)


def test_slim_lattices_have_no_m3(sweep_size):
    for n in range(1, min(sweep_size, 7) + 1):
        for L in enumerate_lattices(n):
            if is_slim(L):
                assert find_cover_preserving_sublattice(L, m3()) is None


def test_semimodular_lattices_are_graded(sweep_size):
    for n in range(1, sweep_size + 1):
        for L in enumerate_lattices(n):
            if is_semimodular(L):
                assert L.rank is not None
