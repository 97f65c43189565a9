"""Command line interface.

Every subcommand prints a report as text or JSON.  Exit status is 0 when all
checks pass, 1 when a checked condition fails and 2 on invalid input.
"""

import json
import sys

import click

from .diagram import Diagram, DiagramError, linking_matrix
from .kirby import SurgeryPresentation, apply_moves, h1_surgery
from .milnor import is_homotopy_trivial, mu_table
from .scenarios import (
    FAMILIES,
    ScenarioSpec,
    banded_system,
    build_universal_link,
    extract_figure8_lagrangian,
    fig9_example,
    natural_system,
    verify_theorem1,
)
from .seifert import (
    CurveSystem,
    check_lagrangian_trivial,
    check_lagrangian_trivial_plus,
    is_extended_form,
    is_good_block_form,
    seifert_matrix_of,
)

FORMAT = click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)


class InputError(click.ClickException):
    exit_code = 2


def _sign(text: str) -> int:
    if text in ("+", "+1", "1"):
        return 1
    if text in ("-", "-1"):
        return -1
    raise InputError(f"bad sign {text!r}, expected + or -")


def _pair(text: str):
    try:
        k, j = (int(t) for t in text.split(","))
    except ValueError:
        raise InputError(f"bad --parallels {text!r}, expected k,j") from None
    return k, j


def _clasps(text):
    """'-+,-' gives ((-1, 1), (-1,))."""
    if text is None:
        return None
    sides = text.split(",")
    if len(sides) != 2:
        raise InputError("--clasps takes two comma separated sign strings")
    return tuple(tuple(_sign(c) for c in s) for s in sides)


def _spec(family, parallels, clasps, clasp_inner) -> ScenarioSpec:
    try:
        return ScenarioSpec(family, _pair(parallels), _clasps(clasps), _sign(clasp_inner))
    except DiagramError as e:
        raise InputError(str(e)) from None


def _load(path, cls):
    try:
        with click.open_file(path) as fh:
            return cls.from_json(fh.read())
    except (OSError, ValueError, KeyError, TypeError, DiagramError) as e:
        raise InputError(f"cannot read {path}: {e}") from None


def _emit(fmt, data: dict, text: str):
    if fmt == "json":
        click.echo(json.dumps(data, indent=2, sort_keys=True))
    else:
        click.echo(text)


def _matrix_text(M, labels) -> str:
    w = max(len(str(x)) for x in labels)
    rows = [" " * w + " " + " ".join(f"{str(x):>{w}}" for x in labels)]
    for lab, row in zip(labels, M):
        rows.append(f"{str(lab):>{w}} " + " ".join(f"{int(v):>{w}}" for v in row))
    return "\n".join(rows)


def scenario_options(f):
    f = click.option("--clasp-inner", default="+", show_default=True, help="clasp sign of the inner WhL")(f)
    f = click.option("--clasps", default=None, help="per-copy clasp signs per side, e.g. '-+,-+'")(f)
    f = click.option("--parallels", default="2,2", show_default=True, help="copies k,j of L1 and L2")(f)
    return f


@click.group()
def main():
    """Link invariants, Seifert surface conditions and surgery moves."""


@main.command()
@click.option("--family", type=click.Choice(FAMILIES), default="2b-simplified", show_default=True)
@scenario_options
@click.option("--system", type=click.Choice(["link", "banded", "natural", "lagrangian"]), default="link",
              show_default=True, help="what to output")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="write JSON here")
@FORMAT
def build(family, parallels, clasps, clasp_inner, system, out, fmt):
    """Build a universal link or one of its curve systems."""
    spec = _spec(family, parallels, clasps, clasp_inner)
    try:
        if system == "link":
            obj = build_universal_link(spec)
        elif system == "lagrangian":
            obj = extract_figure8_lagrangian(banded_system(spec))
        else:
            obj = (banded_system if system == "banded" else natural_system)(spec)
    except DiagramError as e:
        raise InputError(str(e)) from None
    if out:
        with open(out, "w") as fh:
            fh.write(obj.to_json())
    d = obj if isinstance(obj, Diagram) else obj.diagram
    labels = [c.label for c in d.components]
    text = f"{len(labels)} components, {len(d.crossings())} crossings\n" + _matrix_text(linking_matrix(d), labels)
    _emit(fmt, obj.to_dict(), text)


@main.command()
@click.option("--in", "path", required=True, type=click.Path(), help="diagram JSON ('-' for stdin)")
@click.option("--max-length", type=int, default=None)
@click.option("--homotopy", is_flag=True, help="also decide homotopy triviality (exit 1 if essential)")
@FORMAT
def mu(path, max_length, homotopy, fmt):
    """Milnor invariants of a diagram."""
    d = _load(path, Diagram)
    try:
        rep = mu_table(d, max_length)
        hom = is_homotopy_trivial(d) if homotopy else None
    except DiagramError as e:
        raise InputError(str(e)) from None
    data, text = rep.to_dict(), rep.to_text()
    if hom is not None:
        data["homotopy_trivial"] = hom.trivial
        text += f"\nhomotopy trivial: {hom.trivial}"
    _emit(fmt, data, text)
    if hom is not None and not hom.trivial:
        sys.exit(1)


CONDITIONS = {
    "trivial": lambda cs: check_lagrangian_trivial(cs),
    "trivial-plus": lambda cs: check_lagrangian_trivial_plus(cs),
    "extended": lambda cs: is_extended_form(seifert_matrix_of(cs)),
    "good-block": lambda cs: is_good_block_form(seifert_matrix_of(cs)),
}


@main.command()
@click.option("--system", type=click.Choice(["fig9", "banded", "natural"]), default=None)
@click.option("--in", "path", type=click.Path(), default=None, help="curve system JSON")
@click.option("--condition", type=click.Choice(sorted(CONDITIONS)), required=True)
@scenario_options
@FORMAT
def check(system, path, condition, parallels, clasps, clasp_inner, fmt):
    """Check a Seifert surface condition on a curve system."""
    if (system is None) == (path is None):
        raise InputError("give exactly one of --system and --in")
    try:
        if path is not None:
            cs = _load(path, CurveSystem)
        elif system == "fig9":
            cs = fig9_example()
        else:
            spec = _spec("2b-simplified", parallels, clasps, clasp_inner)
            cs = (banded_system if system == "banded" else natural_system)(spec)
        rep = CONDITIONS[condition](cs)
    except DiagramError as e:
        raise InputError(str(e)) from None
    _emit(fmt, rep.to_dict(), rep.to_text())
    if not rep:
        sys.exit(1)


@main.command()
@scenario_options
@FORMAT
def theorem1(parallels, clasps, clasp_inner, fmt):
    """Run the Lagrangian-triviality pipeline on Wh o P o WhL."""
    spec = _spec("2b-simplified", parallels, clasps, clasp_inner)
    try:
        rep = verify_theorem1(spec)
    except DiagramError as e:
        raise InputError(str(e)) from None
    data = rep.to_dict()
    data["as_expected"] = rep.as_expected
    _emit(fmt, data, rep.to_text() + f"\nas expected: {rep.as_expected}")
    if not rep.as_expected:
        sys.exit(1)


@main.command()
@click.option("--clasp", default="+", show_default=True)
@FORMAT
def fig9(clasp, fmt):
    """The genus (1,1) example whose Seifert form is extended but not in good block form."""
    cs = fig9_example(_sign(clasp))
    V = seifert_matrix_of(cs)
    reps = [is_extended_form(V), is_good_block_form(V), check_lagrangian_trivial_plus(cs),
            check_lagrangian_trivial(cs)]
    data = {"seifert_matrix": V.to_dict(), "reports": [r.to_dict() for r in reps]}
    text = _matrix_text(V.entries, V.labels) + "\n" + "\n".join(r.to_text() for r in reps)
    _emit(fmt, data, text)
    # good block form is expected to fail here
    if not (reps[0] and not reps[1] and reps[2] and reps[3]):
        sys.exit(1)


@main.command()
@click.option("--in", "path", required=True, type=click.Path(), help="surgery presentation JSON")
@click.option("--script", type=click.Path(), default=None, help="JSON list of moves")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@FORMAT
def kirby(path, script, out, fmt):
    """Apply handle slides and blow-ups/downs, reporting framings and H1."""
    sp = _load(path, SurgeryPresentation)
    moves = []
    if script:
        try:
            with click.open_file(script) as fh:
                moves = json.load(fh)
        except (OSError, ValueError) as e:
            raise InputError(f"cannot read {script}: {e}") from None
    try:
        h_before = h1_surgery(sp)
        res = apply_moves(sp, moves)
        h_after = h1_surgery(res)
    except (DiagramError, KeyError, TypeError) as e:
        raise InputError(str(e)) from None
    if out:
        with open(out, "w") as fh:
            fh.write(res.to_json())
    fr = {str(k): v for k, v in res.framings.items()}
    data = {"framings": fr, "h1_before": h_before.to_dict(), "h1_after": h_after.to_dict(),
            "h1_equal": h_before == h_after, "moves": len(moves)}
    text = "\n".join([f"framings: {fr}", f"H1 before: {h_before}", f"H1 after: {h_after}"])
    _emit(fmt, data, text)
    if h_before != h_after:
        sys.exit(1)


if __name__ == "__main__":
    main()
