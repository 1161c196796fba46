import json

import pytest

from latcon import utils
from latcon.errors import PosetFormatError, RedundantCoverError
from latcon.lattice import s7
from latcon.order import f3
from latcon.serialization import (
    dump_lattice_json,
    dump_poset_json,
    dump_poset_text,
    load_lattice,
    load_poset,
    parse_lattice,
    parse_poset,
    parse_poset_text,
)


def test_parse_poset_text(fig3):
    assert fig3.elements == ("a", "b", "c", "d", "e")
    assert fig3.covers == {("b", "a"), ("d", "a"), ("c", "b")}


def test_cover_lines_declare_their_elements():
    P = parse_poset_text("x < y\ny < z  # trailing comment\n")
    assert P.elements == ("x", "y", "z")


def test_parse_errors():
    with pytest.raises(PosetFormatError) as e:
        parse_poset_text("elem a\na <= b\n")
    assert e.value.details == {"line": 2}
    with pytest.raises(PosetFormatError):
        parse_poset('{"elements": ["a"], "extra": 1}')
    with pytest.raises(PosetFormatError):
        parse_lattice('{"elements": ["0", "1"], "covers": [["0", "1"]], "upper_order": {}}')


def test_strict_covers():
    text = "a < b\nb < c\na < c\n"
    assert parse_poset(text).covers == {("a", "b"), ("b", "c")}
    with pytest.raises(RedundantCoverError):
        parse_poset(text, strict=True)


def test_text_and_json_dumps_parse_back(fig1):
    assert parse_poset(dump_poset_text(fig1)) == fig1
    assert parse_poset(dump_poset_json(fig1)) == fig1
    assert json.loads(dump_poset_json(f3()))["covers"] == [["o", "a"], ["o", "b"], ["o", "c"]]


def test_lattice_document_with_embedding_and_colors():
    text = utils.read_data("s8.lattice.json")
    bundle = parse_lattice(text)
    assert bundle.embedding is not None
    assert bundle.embedding.uppers("0") == ("a", "c", "b")
    assert bundle.color[("m", "1")] == "p"
    again = parse_lattice(dump_lattice_json(bundle.lattice, bundle.embedding, bundle.color))
    assert again.color == bundle.color
    assert again.embedding.upper_order == bundle.embedding.upper_order


def test_colored_pairs_must_be_covers():
    doc = {"elements": ["0", "a", "1"], "covers": [["0", "a"], ["a", "1"]], "colors": [["0", "1", "x"]]}
    with pytest.raises(PosetFormatError):
        parse_lattice(json.dumps(doc))


def test_parse_lattice_accepts_plain_posets():
    bundle = parse_lattice("elem 0\n0 < a\na < 1\n")
    assert len(bundle.lattice) == 3
    assert bundle.embedding is None and bundle.color == {}


def test_dump_lattice_json_is_byte_stable():
    assert dump_lattice_json(s7()) == dump_lattice_json(s7())
    assert dump_lattice_json(s7()).endswith("}\n")
    assert "upper_order" not in dump_lattice_json(s7())


def test_files(tmp_path, fig3):
    path = tmp_path / "fig3.poset"
    path.write_text(dump_poset_text(fig3))
    assert load_poset(path) == fig3
    lattice_path = tmp_path / "s7.lattice.json"
    lattice_path.write_text(dump_lattice_json(s7()))
    assert load_lattice(lattice_path).lattice.base == s7().base
