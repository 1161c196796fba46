import pathlib

from latcon import utils


def test_bitmasks():
    assert list(utils.iter_bits(0b101001)) == [0, 3, 5]
    assert utils.bits_of([0, 3, 5]) == 0b101001
    assert utils.popcount(0b101001) == 3


def test_dump_json_is_byte_stable():
    assert utils.dump_json({"b": [1, 2], "a": "é"}) == '{\n  "a": "é",\n  "b": [\n    1,\n    2\n  ]\n}\n'


def test_dumps_sorts_keys_and_stringifies():
    assert utils.dumps({"b": 1, "a": pathlib.PurePosixPath("x")}) == '{\n  "a": "x",\n  "b": 1\n}\n'
    assert utils.dumps({2: "x", 10: "y"}) == '{\n  "10": "y",\n  "2": "x"\n}\n'
