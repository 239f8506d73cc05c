"""``tsde`` command line.

Usage errors exit with status 2, computation errors with status 1 and a JSON
message on stderr.  All output is deterministic.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import _kernels
from .cli_io import parse_graph, render_class, render_graph, validate
from .graph_core import DisconnectedGraph, components, graph_class, jackets

# errors that mean "the computation failed", not "the command line was wrong"
_COMPUTE_ERRORS = (ValueError, RuntimeError, ArithmeticError, KeyError, AssertionError)


def _dump(payload, schema=None):
    if schema:
        validate(payload, schema)
    click.echo(json.dumps(payload, indent=1, sort_keys=True))


class _Group(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except click.exceptions.Exit:
            raise
        except click.ClickException:
            raise
        except _COMPUTE_ERRORS as exc:
            click.echo(json.dumps({"error": type(exc).__name__, "message": str(exc)}), err=True)
            ctx.exit(1)


@click.group(cls=_Group)
@click.version_option(package_name="artifact")
def main():
    """Coloured graphs, Schwinger-Dyson equations and the simple-model solver."""


def _graph_arg(text):
    try:
        return parse_graph(text)
    except ValueError as exc:
        raise click.BadParameter(str(exc), param_hint="GRAPH") from exc


def _graph_payload(g):
    flat = g.to_graph() if isinstance(g, DisconnectedGraph) else g
    cls = graph_class(flat)
    parts = components(flat)
    return {"graph": render_graph(g), "class": render_class(flat), "D": flat.D, "k": flat.k,
            "tau": [list(p) for p in flat.tau], "connected": cls.connected,
            "components": len(parts.components), "aut_order": cls.aut_order,
            "degree": None if cls.degree is None else float(cls.degree)}


@main.command()
@click.option("--rank", "D", type=click.IntRange(2, 6), required=True)
@click.option("--max-vertices", type=click.IntRange(2, 16), required=True,
              help="largest number of vertices 2k")
@click.option("--connected", is_flag=True, help="connected classes only")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="text")
def census(D, max_vertices, connected, fmt):
    """Classes of D-coloured graphs up to a number of vertices."""
    from .enumeration import census as run
    rows = run(D, max_vertices // 2, connected_only=connected)
    counts = {}
    for r in rows:
        counts[str(r.vertices)] = counts.get(str(r.vertices), 0) + 1
    if fmt == "text":
        click.echo(",".join(str(counts.get(str(2 * k), 0)) for k in range(1, max_vertices // 2 + 1)))
        return
    _dump({"rank": D, "max_vertices": max_vertices, "connected_only": connected,
           "counts": counts, "rows": [r.as_dict() for r in rows]}, "census")


@main.command()
@click.argument("graph")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="text")
def aut(graph, fmt):
    """Order of the coloured automorphism group."""
    p = _graph_payload(_graph_arg(graph))
    click.echo(p["aut_order"]) if fmt == "text" else _dump(p, "graph")


@main.command()
@click.argument("graph")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="text")
def degree(graph, fmt):
    """Gurau degree of a connected graph."""
    g = _graph_arg(graph)
    p = _graph_payload(g)
    if p["degree"] is None:
        raise ValueError("the degree is defined for connected graphs")
    p["jackets"] = len(jackets(p["D"]))
    if fmt == "text":
        d = p["degree"]
        click.echo(int(d) if d == int(d) else d)
    else:
        _dump(p, "graph")


@main.command()
@click.argument("source", type=click.Path(exists=True, dir_okay=False, allow_dash=True))
@click.option("--model", type=click.Choice(["melonic-quartic", "simple-v1"]), default=None,
              help="also report Feynman-graph membership")
def boundary(source, model):
    """Boundary graph of an open graph read from SOURCE ('-' for stdin)."""
    from .boundary_feynman import boundary as bd, is_feynman, melonic_quartic, parse_open, simple_v1_model
    text = sys.stdin.read() if source == "-" else Path(source).read_text()
    g = parse_open(text)
    B = bd(g)
    out = {"boundary": render_class(B.to_graph()) if isinstance(B, DisconnectedGraph) else render_class(B)}
    if model:
        vs = melonic_quartic(g.D) if model == "melonic-quartic" else simple_v1_model()
        out["feynman"] = is_feynman(g, vs)
    _dump(out)


@main.command()
@click.option("--rank", "D", type=click.IntRange(3, 5), default=3)
@click.option("--model", "kind", type=click.Choice(["melonic-quartic", "simple-v1"]),
              default="melonic-quartic")
@click.option("--graph", "graph", required=True)
@click.option("--alpha", type=click.IntRange(1), default=1)
@click.option("--format", "fmt", type=click.Choice(["json", "latex", "text"]), default="json")
def sde(D, kind, graph, alpha, fmt):
    """Schwinger-Dyson equation of a connected boundary graph."""
    from .sde_generator import equation_to_json, model, render, sde_equation
    g = _graph_arg(graph)
    if isinstance(g, DisconnectedGraph):
        raise click.BadParameter("the equation needs a connected graph", param_hint="--graph")
    eq = sde_equation(model(kind, D), g, alpha)
    if fmt == "json":
        _dump(equation_to_json(eq), "equation")
    else:
        click.echo(render(eq, fmt), nl=False)


@main.command()
@click.option("--rank", "D", type=click.IntRange(3, 5), default=3)
@click.option("--order", type=click.IntRange(2), required=True)
@click.option("--colour", type=click.IntRange(1), default=1)
@click.option("--format", "fmt", type=click.Choice(["json"]), default="json")
def yterm(D, order, colour, fmt):
    """Coefficients of the Ward-identity Y-term up to an order in the sources."""
    from .sde_generator import model, y_term
    from .symbolic import term_to_json
    if order % 2:
        raise click.BadParameter("order must be even", param_hint="--order")
    if colour > D:
        raise click.BadParameter("colour exceeds the rank", param_hint="--colour")
    out = y_term(model("melonic-quartic", D), colour, order)
    _dump({"rank": D, "order": order, "colour": colour,
           "targets": {t: [term_to_json(x) for x in terms] for t, terms in out.items()}})


@main.command("solve-simple")
@click.option("--m2", type=float, default=1.0)
@click.option("--lambda", "lam", type=float, default=0.01)
@click.option("--cutoff", "N", type=click.IntRange(1), default=3)
@click.option("--tol", type=float, default=1e-10)
@click.option("--max-iter", type=click.IntRange(1), default=10_000)
@click.option("--damping", type=click.FloatRange(0, 1, min_open=True), default=0.5)
@click.option("--kmax", type=click.IntRange(1), default=1)
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None)
def solve_simple(m2, lam, N, tol, max_iter, damping, kmax, out):
    """Melonic 2k-point functions of the simple quartic model."""
    from .simple_model_solver import ModelParams, solve_melonic_tower
    try:
        p = ModelParams(m2, lam, N, tol, max_iter, damping)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    fields = solve_melonic_tower(p, kmax)
    payload = {"params": {"m2": m2, "lam": lam, "N": N, "tol": tol, "max_iter": max_iter,
                          "damping": damping},
               "backend": _kernels.backend(),
               "orders": [{"points": 2 * f.k, "iterations": f.iterations, "residual": f.residual,
                           "values": {",".join(map(str, key)): v for key, v in f.table().items()}}
                          for f in fields]}
    validate(payload, "solve")
    text = json.dumps(payload, indent=1, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n")
        click.echo(json.dumps([{k: o[k] for k in ("points", "iterations", "residual")}
                               for o in payload["orders"]]))
    else:
        click.echo(text)


@main.command("gw-census")
@click.option("--points", type=click.Choice(["2", "4"]), required=True)
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json")
def gw_census(points, fmt):
    """Boundary graphs of the complex Gurau-Witten model."""
    from .gw_boundary import gw_census as run
    out = run(int(points))
    if fmt == "text":
        for row in out["classes"]:
            click.echo(f"{row['family']}\t{row['graph']}")
    else:
        _dump(out, "gw_census")


@main.command("verify-golden")
@click.option("--verbose", "-v", is_flag=True)
def verify_golden(verbose):
    """Compare every reference transcription with the generator."""
    from .golden import check_all
    bad = 0
    for fid, (ok, report) in check_all().items():
        click.echo(f"{'ok  ' if ok else 'FAIL'} {fid}")
        if not ok:
            bad += 1
        if verbose or not ok:
            for line in report:
                click.echo(f"     {line}")
    if bad:
        raise RuntimeError(f"{bad} reference equation(s) differ")


if __name__ == "__main__":  # pragma: no cover
    main()
