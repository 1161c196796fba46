import json

import pytest
from click.testing import CliRunner

from latcon import __version__
from latcon.cli import cli
from latcon.congruence import ji_congruence_poset
from latcon.lattice import grid, m3
from latcon.order import chain_poset, are_isomorphic
from latcon.serialization import dump_lattice_json, load_lattice, parse_lattice


@pytest.fixture
def run(tmp_path):
    runner = CliRunner()

    def invoke(*args: str):
        return runner.invoke(cli, ["--cache-dir", str(tmp_path / "cache"), *args], catch_exceptions=False)

    return invoke


def test_version(run):
    result = run("--version")
    assert result.exit_code == 0
    assert result.output.startswith(f"latcon {__version__} (fixtures ")


def test_check(run):
    result = run("check", "2chain.poset")
    assert result.exit_code == 1
    assert "two_max: FAIL" in result.output
    assert "witness" not in result.output

    result = run("check", "2chain.poset", "--witness")
    assert "two_max: FAIL (a single maximal element)  witness y" in result.output

    result = run("check", "fig3.poset", "--property", "two_max", "--property", "two_cover")
    assert result.exit_code == 0
    assert result.output == "two_cover: pass\ntwo_max: pass\n"


def test_check_json(run):
    result = run("--json", "check", "f3.poset", "--property", "two_cover")
    assert result.exit_code == 1
    (report,) = json.loads(result.output)["reports"]
    assert report["property"] == "two_cover"
    assert report["witness"]["o"] == "o"


def test_check_rejects_unknown_properties(run):
    result = run("check", "fig3.poset", "--property", "three_max")
    assert result.exit_code == 2
    assert "unknown properties three_max" in result.output


def test_missing_input(run):
    result = run("check", "nowhere.poset")
    assert result.exit_code == 2
    assert "neither a file nor a shipped fixture" in result.output


def test_con(run):
    result = run("con", "s8.lattice.json")
    assert result.exit_code == 0
    assert result.output.startswith("Ji Con L: 2 join-irreducible congruences\n")
    assert "coloring: ok" in result.output
    assert "con(q) > con(p)" in result.output


def test_swing(run, tmp_path):
    result = run("swing", "s7.lattice.json")
    assert result.exit_code == 0
    assert result.output == "edges 9: ok\n"

    result = run("swing", "s7.lattice.json", "--edge", "m", "1")
    assert result.exit_code == 0
    assert "a-m_l" in result.output and "b-m_r" in result.output

    result = run("swing", "s7.lattice.json", "--edge", "m", "zz")
    assert result.exit_code == 2
    assert "UnknownElementError" in result.output

    path = tmp_path / "m3.lattice.json"
    path.write_text(dump_lattice_json(m3()))
    result = run("swing", str(path))
    assert result.exit_code == 2
    assert "NotSPSError" in result.output


def test_build(run, tmp_path):
    out, svg = tmp_path / "two.lattice.json", tmp_path / "two.svg"
    result = run("build", "--poset", "2chain.poset", "-o", str(out), "--render", str(svg))
    assert result.exit_code == 0
    bundle = load_lattice(out)
    assert are_isomorphic(ji_congruence_poset(bundle.lattice).poset, chain_poset(2)) is not None
    assert bundle.embedding is not None
    assert set(bundle.color.values()) == {"x", "y"}
    assert svg.read_text().startswith("<svg")
    assert svg.read_text().count("<circle") == len(bundle.lattice)


def test_block(run):
    result = run("block", "a", "b", "c")
    assert result.exit_code == 0
    bundle = parse_lattice(result.output)
    assert len(bundle.lattice) == 15
    assert sorted(set(bundle.color.values())) == ["a", "b", "c"]
    assert bundle.embedding is not None
    assert run("block", "a").exit_code == 2


def test_enumerate(run):
    result = run("enumerate", "--max-size", "5", "--no-persist")
    assert result.exit_code == 0
    assert result.output == "1\t1\n2\t1\n3\t1\n4\t2\n5\t5\n"


def test_enumerate_catalog_and_hunt(run, tmp_path):
    result = run(
        "--json", "enumerate", "--class", "sps", "--max-size", "5",
        "--catalog", str(tmp_path / "catalog"), "--hunt", "3",
    )
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data["counts"] == {"1": 1, "2": 1, "3": 1, "4": 2, "5": 3}
    assert data["catalog"]["keys"] == 4
    assert len(data["candidates"]) == 1
    assert (tmp_path / "catalog" / "catalog.tsv").exists()


def test_enumerate_respects_the_cap(run):
    result = run("enumerate", "--max-size", "5", "--lattice-cap", "4", "--no-persist")
    assert result.exit_code == 2
    assert "CapExceeded" in result.output


def test_render(run, tmp_path):
    result = run("render", "s7.lattice.json")
    assert result.exit_code == 0
    assert result.output.count("stroke-dasharray") == 1

    result = run("render", "s7.lattice.json", "--layered", "--no-labels")
    assert "stroke-dasharray" not in result.output
    assert "<text" not in result.output

    out = tmp_path / "s7.tex"
    result = run("render", "s7.lattice.json", "--tikz", "-o", str(out))
    assert result.output == ""
    assert "at (0.00,2.00)" in out.read_text()


def test_duality(run):
    result = run("duality", "down", "fig1-right.poset")
    assert result.exit_code == 0
    assert len(json.loads(result.output)["elements"]) == 20

    result = run("duality", "ji", "s7.lattice.json")
    assert result.exit_code == 0
    assert result.output.splitlines()[:4] == ["elem a", "elem b", "elem m_l", "elem m_r"]


def test_patch(run, tmp_path):
    path = tmp_path / "grid.lattice.json"
    path.write_text(dump_lattice_json(grid(2, 2)))
    result = run("patch", str(path))
    assert result.exit_code == 0
    assert "patch: True" in result.output
    assert "consistent: True" in result.output


def test_bad_config(run, tmp_path):
    config = tmp_path / "latcon.cfg"
    config.write_text("workers = none\n")
    result = run("--config", str(config), "check", "fig3.poset")
    assert result.exit_code == 2
    assert "ConfigError" in result.output
