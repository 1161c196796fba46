import pytest

from latcon import enumeration, utils
from latcon.config import Settings
from latcon.enumeration import (
    Catalog,
    build_catalog,
    enumerate_lattices,
    enumerate_sps,
    enumerate_sr,
    hunt_candidates,
    lattice_codes,
)
from latcon.errors import CapExceeded, PosetFormatError
from latcon.lattice import boolean, chain, glued_sum
from latcon.order import antichain_poset, canonical_form


@pytest.fixture
def fresh_levels(monkeypatch):
    monkeypatch.setattr(enumeration, "_levels", {1: ["1:0"], 2: ["2:0100"]})


@pytest.mark.parametrize("n, count", [(0, 0), (1, 1), (2, 1), (3, 1), (4, 2), (5, 5), (6, 15), (7, 53)])
def test_lattice_counts(n, count):
    assert len(lattice_codes(n)) == count


@pytest.mark.slow
@pytest.mark.parametrize("n, count", [(8, 222), (9, 1078)])
def test_lattice_counts_slow(n, count):
    assert len(lattice_codes(n)) == count


def test_enumerated_lattices_are_distinct_lattices():
    codes = [canonical_form(L.base) for L in enumerate_lattices(6)]
    assert len(codes) == len(set(codes)) == 15
    assert canonical_form(boolean(2).base) in lattice_codes(4)


def test_parallel_enumeration_matches(fresh_levels, settings):
    settings.workers = 4
    assert len(lattice_codes(6, settings)) == 15


def test_cap(settings):
    settings.lattice_cap = 5
    with pytest.raises(CapExceeded) as e:
        lattice_codes(6, settings)
    assert e.value.details == {"requested": 6, "cap": 5}
    assert e.value.exit_code == 2


def test_checkpoints_are_written_and_reused(fresh_levels, monkeypatch, settings):
    codes = lattice_codes(5, settings, persist=True)
    level = settings.cache_dir / "lattices" / "5.txt"
    assert level.read_text().split() == codes
    assert (settings.cache_dir / "lattices" / "3.txt").exists()

    level.write_text(codes[0] + "\n")
    monkeypatch.setattr(enumeration, "_levels", {1: ["1:0"], 2: ["2:0100"]})
    assert lattice_codes(5, settings, persist=True) == [codes[0]]


def test_unfinished_level_resumes_from_its_partial_checkpoint(fresh_levels, settings):
    settings.checkpoint_every = 1
    codes = lattice_codes(5, settings, persist=True)
    lattices = settings.cache_dir / "lattices"
    assert not list(lattices.glob("*.partial.json"))

    (lattices / "5.txt").unlink()
    partial = lattices / "5.partial.json"
    partial.write_text(utils.dump_json({"processed": len(lattice_codes(4)), "found": codes[:1]}))
    enumeration._levels.pop(5)
    assert lattice_codes(5, settings, persist=True) == codes[:1]
    assert not partial.exists()

    (lattices / "5.txt").unlink()
    partial.write_text("{}")
    enumeration._levels.pop(5)
    with pytest.raises(PosetFormatError):
        lattice_codes(5, settings, persist=True)


@pytest.mark.parametrize("n, count", [(2, 1), (3, 1), (4, 2), (5, 3), (6, 5)])
def test_sps_counts(n, count):
    assert len(list(enumerate_sps(n))) == count


def test_sr_lattices():
    assert [len(E.lattice) for E in enumerate_sr(4)] == [4]
    assert len(list(enumerate_sr(3))) == 0
    assert any(len(E.lattice.lower_covers(E.lattice.one)) == 3 for E in enumerate_sr(7))


def test_build_catalog():
    catalog = build_catalog(5)
    assert len(catalog) == 4
    assert catalog.metadata["sps_per_size"] == {"2": 1, "3": 1, "4": 2, "5": 3}
    assert catalog.entries[canonical_form(antichain_poset(2))].count == 2
    assert catalog.entries[canonical_form(antichain_poset(3))].count == 3
    assert antichain_poset(4) in catalog
    assert "1:0" in catalog
    assert catalog.replay() == []


def test_catalog_add_keeps_the_first_witness():
    catalog = Catalog(cap=5)
    key = catalog.add(chain(3))
    assert catalog.add(boolean(2)) == key
    assert catalog.entries[key].witness == canonical_form(chain(3).base)
    assert catalog.entries[key].count == 2
    assert catalog.to_tsv() == f"{key}\t2\t{catalog.entries[key].witness_file}\n"


def test_catalog_save_and_load(tmp_path):
    catalog = build_catalog(5)
    path = catalog.save(tmp_path)
    assert path == tmp_path / "catalog.tsv"
    assert len(list((tmp_path / "witnesses").iterdir())) == 4

    loaded = Catalog.load(tmp_path)
    assert loaded.cap == 5
    assert loaded.entries == catalog.entries
    assert loaded.metadata == catalog.metadata
    assert loaded.replay() == []


def test_catalog_files_are_byte_stable(tmp_path):
    first, second = tmp_path / "first", tmp_path / "second"
    build_catalog(6).save(first)
    build_catalog(6).save(second)
    names = sorted(p.relative_to(first) for p in first.rglob("*") if p.is_file())
    assert names == sorted(p.relative_to(second) for p in second.rglob("*") if p.is_file())
    assert len(names) == 2 + len(Catalog.load(first))
    for name in names:
        assert (first / name).read_bytes() == (second / name).read_bytes()


def test_catalog_load_rejects_malformed_files(tmp_path):
    Catalog(cap=3).save(tmp_path)
    (tmp_path / "catalog.tsv").write_text("2:0000\tmany\tx.lattice.json\n")
    with pytest.raises(PosetFormatError):
        Catalog.load(tmp_path)
    (tmp_path / "metadata.json").write_text("{}")
    with pytest.raises(PosetFormatError):
        Catalog.load(tmp_path)


def test_replay_flags_wrong_witnesses():
    catalog = Catalog(cap=4)
    key = catalog.add(chain(3))
    catalog.entries[key].witness = canonical_form(glued_sum(boolean(2), chain(2)).base)
    assert catalog.replay() == [key]


def test_hunt_candidates():
    small = build_catalog(5)
    candidates = hunt_candidates(3, small)
    assert len(candidates) == 1
    (V,) = candidates
    assert len(V.maximal()) == 2 and len(V.minimal()) == 1
    assert hunt_candidates(3, build_catalog(7)) == []

    with pytest.raises(CapExceeded):
        hunt_candidates(3, small, Settings(poset_cap=2))
