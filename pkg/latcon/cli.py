"""
The ``latcon`` command line.

Exit codes: 0 success, 1 a property or a verification failed, 2 bad usage or unsuitable input.
"""

from __future__ import annotations

__all__ = ["cli", "main"]

import logging
import pathlib
from typing import Any

import click

from latcon import __version__, utils
from latcon.config import Settings, load_settings
from latcon.congruence import congruence_report
from latcon.construct import build_block, patch_report, represent
from latcon.enumeration import (
    build_catalog,
    enumerate_lattices,
    enumerate_sps,
    enumerate_sr,
    hunt_candidates,
)
from latcon.errors import LatconError, NotSPSError, UnknownElementError
from latcon.lattice import FiniteLattice
from latcon.order import down_set_lattice, join_irreducibles
from latcon.planar import PlanarEmbedding, find_embedding, validate_embedding
from latcon.properties import PROPERTY_NAMES, check_all, registered_patterns
from latcon.render import RenderStyle, auto_coords, render_svg, render_tikz
from latcon.serialization import (
    LatticeBundle,
    dump_lattice_json,
    dump_poset_json,
    dump_poset_text,
    parse_lattice,
    parse_poset,
)
from latcon.swing import check_swing_lemma, swing_collapse

_logger = logging.getLogger(__name__)


class _Source(click.ParamType):
    """An existing file, or the name of a file shipped in ``latcon/data``."""

    name = "file"

    def convert(self, value: Any, param: click.Parameter | None, ctx: click.Context | None) -> str:
        path = pathlib.Path(value)
        if path.is_file():
            return path.read_text(encoding="utf-8")
        shipped = utils.data_path(str(value))
        if shipped.is_file():
            return shipped.read_text(encoding="utf-8")
        self.fail(f"{value!r} is neither a file nor a shipped fixture", param, ctx)


SOURCE = _Source()


class _Group(click.Group):
    def invoke(self, ctx: click.Context) -> Any:
        try:
            return super().invoke(ctx)
        except LatconError as e:
            _logger.debug("Command failed", exc_info=True)
            click.echo(f"latcon: {e}", err=True)
            ctx.exit(e.exit_code)


def _print_version(ctx: click.Context, _param: click.Parameter, value: bool) -> None:
    if not value or ctx.resilient_parsing:
        return
    click.echo(f"latcon {__version__} (fixtures {utils.fixtures_checksum()})")
    ctx.exit()


def _settings(ctx: click.Context) -> Settings:
    return ctx.obj["settings"]


def _emit(ctx: click.Context, data: dict[str, Any], text: str) -> None:
    click.echo(utils.dumps(data) if ctx.obj["json"] else text, nl=not ctx.obj["json"])


def _lattice(ctx: click.Context, source: str) -> LatticeBundle:
    return parse_lattice(source, strict=_settings(ctx).strict_covers)


def _embedding(bundle: LatticeBundle) -> PlanarEmbedding:
    return bundle.embedding if bundle.embedding is not None else find_embedding(bundle.lattice)


@click.group(cls=_Group, context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--config", "config_file", type=click.Path(exists=True, dir_okay=False), help="A key = value settings file.")
@click.option("--log-level", type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False))
@click.option("--cache-dir", type=click.Path(file_okay=False), help="Checkpoint and catalog directory.")
@click.option("--json", "as_json", is_flag=True, help="Machine readable output.")
@click.option(
    "--version",
    is_flag=True,
    expose_value=False,
    is_eager=True,
    callback=_print_version,
    help="Print the version and the checksum of the shipped fixtures.",
)
@click.pass_context
def cli(ctx: click.Context, config_file: str | None, log_level: str | None, cache_dir: str | None, as_json: bool) -> None:
    """Congruences of finite lattices, slim planar semimodular lattices in particular."""
    settings = load_settings(config_file, log_level=log_level, cache_dir=cache_dir)
    logging.basicConfig(level=settings.log_level, format="%(levelname)s %(name)s: %(message)s")
    ctx.obj = {"settings": settings, "json": as_json}


@cli.command()
@click.argument("poset", type=SOURCE)
@click.option(
    "--property",
    "names",
    multiple=True,
    default=("all",),
    show_default=True,
    help="A property name, forbidden:<pattern>, or all. Repeatable.",
)
@click.option("--witness", is_flag=True, help="Print the witness of every failure.")
@click.pass_context
def check(ctx: click.Context, poset: str, names: tuple[str, ...], witness: bool) -> None:
    """Check the necessary conditions for being Ji Con of an SPS lattice."""
    P = parse_poset(poset, strict=_settings(ctx).strict_covers)
    known = [*PROPERTY_NAMES, *(f"forbidden:{c.name}" for c in registered_patterns())]
    unknown = [n for n in names if n != "all" and n not in known]
    if unknown:
        raise click.BadParameter(f"unknown properties {', '.join(unknown)} (known: {', '.join(known)})")
    reports = check_all(P, None if "all" in names else list(names))
    lines = []
    for r in reports:
        line = r.to_text()
        lines.append(line if witness or r.passed else line.split("  witness ")[0])
    _emit(ctx, {"reports": [r.to_dict() for r in reports]}, "\n".join(lines))
    if not all(r.passed for r in reports):
        ctx.exit(1)


@cli.command()
@click.argument("lattice", type=SOURCE)
@click.pass_context
def con(ctx: click.Context, lattice: str) -> None:
    """Print Ji Con L, the edge assignment and (for colored input) the coloring audit."""
    bundle = _lattice(ctx, lattice)
    report = congruence_report(bundle.lattice, bundle.color or None)
    _emit(ctx, report.to_dict(), report.to_text())
    if report.coloring is not None and not report.coloring.ok:
        ctx.exit(1)


@cli.command()
@click.argument("lattice", type=SOURCE)
@click.option("--edge", nargs=2, metavar="BOTTOM TOP", help="Collapse this edge; without it every edge is checked.")
@click.pass_context
def swing(ctx: click.Context, lattice: str, edge: tuple[str, str] | None) -> None:
    """Swing Lemma reachability on an SPS lattice."""
    E = _embedding(_lattice(ctx, lattice))
    if not edge:
        report = check_swing_lemma(E)
        _emit(ctx, report.to_dict(), f"edges {report.edges}: {'ok' if report.ok else 'MISMATCH'}")
        if not report.ok:
            ctx.exit(1)
        return
    if not E.lattice.is_cover(*edge):
        raise UnknownElementError(f"{edge[0]}-{edge[1]} is not an edge", details=list(edge))
    reached = swing_collapse(E, edge)
    _emit(
        ctx,
        {"edge": list(edge), "collapsed": {str(q): w.to_dict() for q, w in sorted(reached.items())}},
        "\n".join(f"{q}\n{w.to_text()}" for q, w in sorted(reached.items())),
    )


@cli.command()
@click.option("--poset", "poset", type=SOURCE, required=True, help="The poset to represent.")
@click.option("-o", "--output", type=click.Path(dir_okay=False, writable=True), help="Write the lattice JSON here.")
@click.option("--render", "svg", type=click.Path(dir_okay=False, writable=True), help="Also draw the lattice.")
@click.pass_context
def build(ctx: click.Context, poset: str, output: str | None, svg: str | None) -> None:
    """Build a planar semimodular lattice whose Ji Con is the given poset."""
    rep = represent(parse_poset(poset, strict=_settings(ctx).strict_covers))
    document = dump_lattice_json(rep.lattice, rep.embedding, rep.color)
    if svg:
        drawing = render_svg(rep.embedding, color=rep.color, layout=rep.drawing())
        pathlib.Path(svg).write_text(drawing, encoding="utf-8")
    if output:
        pathlib.Path(output).write_text(document, encoding="utf-8")
        _logger.info("Wrote %d-element lattice to %s", len(rep.lattice), output)
    else:
        click.echo(document, nl=False)


@cli.command()
@click.argument("top")
@click.argument("below", nargs=-1, required=True)
def block(top: str, below: tuple[str, ...]) -> None:
    """Print the colored block of S8 copies forcing con(TOP) above con(B) for every B in BELOW."""
    colored = build_block(top, list(below))
    click.echo(dump_lattice_json(colored.lattice, find_embedding(colored.lattice), colored.color), nl=False)


@cli.command("enumerate")
@click.option("--max-size", type=click.IntRange(1), required=True)
@click.option("--class", "kind", type=click.Choice(["lattice", "sps", "sr"]), default="lattice", show_default=True)
@click.option("--catalog", type=click.Path(file_okay=False), help="Build the Ji Con catalog (sps) and save it here.")
@click.option("--hunt", type=click.IntRange(1), help="List posets up to this size missing from the catalog.")
@click.option("--workers", type=click.IntRange(1))
@click.option("--lattice-cap", type=click.IntRange(1))
@click.option("--persist/--no-persist", default=True, show_default=True, help="Checkpoint levels in the cache.")
@click.pass_context
def enumerate_command(
    ctx: click.Context,
    max_size: int,
    kind: str,
    catalog: str | None,
    hunt: int | None,
    workers: int | None,
    lattice_cap: int | None,
    persist: bool,
) -> None:
    """Count lattices, SPS or SR lattices by size; optionally build the catalog."""
    settings = _settings(ctx).model_copy(
        update={k: v for k, v in {"workers": workers, "lattice_cap": lattice_cap}.items() if v is not None}
    )
    stream = {"lattice": enumerate_lattices, "sps": enumerate_sps, "sr": enumerate_sr}[kind]
    counts = {n: sum(1 for _ in stream(n, settings, persist)) for n in range(1, max_size + 1)}
    data: dict[str, Any] = {"class": kind, "counts": {str(n): c for n, c in counts.items()}}
    lines = [f"{n}\t{c}" for n, c in counts.items()]
    if catalog or hunt:
        cat = build_catalog(max_size, settings, persist)
        if catalog:
            cat.save(catalog)
        data["catalog"] = {"keys": len(cat), "path": catalog}
        lines.append(f"catalog: {len(cat)} posets")
        if hunt:
            found = hunt_candidates(hunt, cat, settings)
            data["candidates"] = [dump_poset_text(P) for P in found]
            lines.append(f"candidates: {len(found)}")
            lines += [dump_poset_text(P) for P in found]
    _emit(ctx, data, "\n".join(lines))


@cli.command()
@click.argument("lattice", type=SOURCE)
@click.option("-o", "--output", type=click.Path(dir_okay=False, writable=True))
@click.option("--tikz", is_flag=True, help="Emit TikZ instead of SVG.")
@click.option("--layered", is_flag=True, help="Draw by rank even for slim rectangular lattices.")
@click.option("--no-labels", is_flag=True)
@click.option("--no-steep", is_flag=True, help="Do not highlight steep edges.")
@click.pass_context
def render(
    ctx: click.Context, lattice: str, output: str | None, tikz: bool, layered: bool, no_labels: bool, no_steep: bool
) -> None:
    """Draw a lattice (natural diagram when slim rectangular, layered otherwise)."""
    bundle = _lattice(ctx, lattice)
    E = _embedding(bundle)
    report = validate_embedding(E)
    if not report.ok:
        raise NotSPSError("The stored embedding is not planar", details=report.to_dict())
    coords = None if layered else auto_coords(E)
    style = RenderStyle(labels=not no_labels, steep=not no_steep)
    text = (render_tikz if tikz else render_svg)(E, coords, bundle.color, style)
    if output:
        pathlib.Path(output).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


@cli.command()
@click.argument("direction", type=click.Choice(["down", "ji"]))
@click.argument("source", type=SOURCE)
@click.pass_context
def duality(ctx: click.Context, direction: str, source: str) -> None:
    """``down``: the lattice of down sets of a poset; ``ji``: the join-irreducibles of a lattice."""
    strict = _settings(ctx).strict_covers
    if direction == "down":
        click.echo(dump_lattice_json(down_set_lattice(parse_poset(source, strict))), nl=False)
        return
    L: FiniteLattice = parse_lattice(source, strict).lattice
    P = join_irreducibles(L)
    click.echo(dump_poset_json(P) if ctx.obj["json"] else dump_poset_text(P), nl=False)


@cli.command()
@click.argument("lattice", type=SOURCE)
@click.pass_context
def patch(ctx: click.Context, lattice: str) -> None:
    """Compare the patch classification of a rectangular lattice with the hat decomposition of Con L."""
    report = patch_report(_embedding(_lattice(ctx, lattice)))
    _emit(ctx, report, "\n".join(f"{k}: {v}" for k, v in report.items()))
    if not report["consistent"]:
        ctx.exit(1)


def main() -> None:
    cli(prog_name="latcon")
