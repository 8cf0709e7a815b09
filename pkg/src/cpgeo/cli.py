"""Command-line interface: ``cpgeo verify | examples | classify | curvature``."""

import sys

import click

from . import library
from .connection import levi_civita, second_fundamental_form
from .contact_pair import validate
from .errors import CpgeoError
from .report import render, run_verify
from .structfile import build, parse, resolve_subspace
from .submanifold import analyze_subspace, classify

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(click.ClickException):
    exit_code = EXIT_INPUT


def _load(file, example=None):
    if example is not None:
        if file is not None:
            raise InputError("give either a file or --example, not both")
        try:
            return library.load(example), example
        except KeyError as exc:
            raise InputError(exc.args[0]) from None
    if file is None:
        raise InputError("missing input file (or use --example NAME)")
    try:
        with open(file) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {file}: {exc.strerror}") from None
    try:
        return parse(text), file
    except CpgeoError as exc:
        raise InputError(f"{file}: {exc}") from None


def _structure(sf):
    model = build(sf)
    v = validate(model.algebra, model.alpha1, model.alpha2, model.phi, model.metric)
    if not v.ok:
        name, r = v.checks[-1]
        raise InputError(f"not a metric contact pair: {name} failed ({r.detail or 'no detail'})")
    return model, v.structure


def _fmt(value):
    r = render(value)
    return "(" + ", ".join(r) + ")" if isinstance(r, list) else str(r)


# click reports usage errors with exit status 2, which matches EXIT_INPUT.
@click.group()
@click.version_option(package_name="artifact")
def main():
    """Exact verification of left-invariant metric contact pairs."""


@main.command()
@click.argument("file", required=False, type=click.Path(dir_okay=False))
@click.option("--example", "example", metavar="NAME", help="Use a built-in example instead of a file.")
@click.option("--subspace", "subspaces", multiple=True, metavar="SPEC",
              help="Subspace to analyse, e.g. TF2, 'leaf(a=1,b=2)' or 'span(Y1, Y3)'. Repeatable.")
@click.option("--json", "as_json", is_flag=True, help="Emit the JSON report.")
@click.option("--expect-fail", "expect_fail", multiple=True, metavar="CHECKID",
              help="Treat a failure of this check as expected. Repeatable.")
def verify(file, example, subspaces, as_json, expect_fail):
    """Run every check on a structure file and report the verdicts."""
    sf, name = _load(file, example)
    try:
        report = run_verify(sf, subspaces, expect_fail, input_name=name)
    except CpgeoError as exc:
        raise InputError(str(exc)) from None
    click.echo(report.to_json() if as_json else report.to_text(), nl=False)
    sys.exit(EXIT_OK if report.ok else EXIT_FAIL)


@main.group()
def examples():
    """List or print the built-in examples."""


@examples.command("list")
def examples_list():
    for name in library.names():
        click.echo(f"{name:10} {library.DESCRIPTIONS[name]}")


@examples.command("show")
@click.argument("name")
def examples_show(name):
    try:
        click.echo(library.source(name), nl=False)
    except KeyError as exc:
        raise InputError(exc.args[0]) from None


def _subspace_input(file, example, spec):
    sf, _ = _load(file, example)
    try:
        model, cps = _structure(sf)
        basis = resolve_subspace(model, spec, cps)
    except CpgeoError as exc:
        raise InputError(str(exc)) from None
    return model, cps, basis


@main.command("classify")
@click.argument("file", required=False, type=click.Path(dir_okay=False))
@click.option("--example", "example", metavar="NAME")
@click.option("--subspace", "spec", required=True, metavar="SPEC")
def classify_cmd(file, example, spec):
    """Classify a phi-invariant subspace and print its angle data."""
    model, cps, basis = _subspace_input(file, example, spec)
    try:
        inv = analyze_subspace(cps, basis)
        cls = classify(inv)
    except (CpgeoError, AssertionError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_FAIL)
    click.echo(f"case: {cls.case}")
    if cls.tangent_index is not None:
        click.echo(f"tangent Reeb field: Z{cls.tangent_index}")
    c = cls.certificate
    if c is not None:
        click.echo(f"cos^2 theta1: {_fmt(c.cos2)}")
        click.echo(f"sin^2 theta1: {_fmt(c.sin2)}")
        if c.tan is not None:
            click.echo(f"tan theta1: {_fmt(c.tan)}")


@main.command("curvature")
@click.argument("file", required=False, type=click.Path(dir_okay=False))
@click.option("--example", "example", metavar="NAME")
@click.option("--subspace", "spec", required=True, metavar="SPEC")
def curvature_cmd(file, example, spec):
    """Second fundamental form and mean curvature of an involutive subspace."""
    model, cps, basis = _subspace_input(file, example, spec)
    conn = levi_civita(model.algebra, model.metric)
    try:
        cd = second_fundamental_form(conn, basis)
    except CpgeoError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_FAIL)
    for (a, b), v in sorted(cd.second_fundamental_form.items()):
        if not v.is_zero():
            click.echo(f"II(w{a + 1}, w{b + 1}) = {_fmt(v)}")
    click.echo(f"mean curvature: {_fmt(cd.mean_curvature)}")
    click.echo(f"minimal: {cd.minimal}")
    click.echo(f"totally geodesic: {cd.totally_geodesic}")


if __name__ == "__main__":
    main()
