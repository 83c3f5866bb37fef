"""Command-line client for the foxknot service.

Every subcommand is a thin HTTP client: by default requests are served
in-process by the FastAPI app; ``--server URL`` targets a running
instance instead.  Exit codes: 0 success, 1 invalid input, 2
reduction/verification failure.  Errors are emitted to stderr as a
single JSON object.
"""

from __future__ import annotations

import json
import os
import sys

import click
import httpx

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_FAILURE = 2

DEPTH_ENV = "FOXKNOT_DEPTH"


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app, raise_server_exceptions=False)


def _fail(payload, code: int):
    json.dump(payload, sys.stderr)
    sys.stderr.write("\n")
    sys.exit(code)


def _call(server, method, path, **kwargs):
    with _client(server) as client:
        try:
            resp = client.request(method, path, **kwargs)
        except httpx.HTTPError as e:
            _fail({"error": {"kind": "transport", "message": str(e)}},
                  EXIT_INVALID)
    if resp.status_code == 200:
        return resp.json()
    try:
        body = resp.json()
    except ValueError:
        body = {"error": {"kind": "http", "message": resp.text}}
    if "detail" in body:  # pydantic request validation
        body = {"error": {"kind": "invalid-input", "message": body["detail"]}}
    kind = body.get("error", {}).get("kind", "")
    code = EXIT_FAILURE if kind in ("reduction-failure",
                                    "verification-failure") else EXIT_INVALID
    _fail(body, code)


def _load_doc(path: str) -> dict:
    """Read a diagram file: either a structured document or bare PD text."""
    from .codec import ColoredDiagramDoc

    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        _fail({"error": {"kind": "invalid-input", "message": str(e)}},
              EXIT_INVALID)
    try:
        doc = ColoredDiagramDoc.from_text(text)
    except ValueError as e:
        _fail({"error": {"kind": "invalid-input", "message": str(e)}},
              EXIT_INVALID)
    out = {"pd": doc.pd, "name": doc.name}
    if doc.p is not None:
        out["p"] = doc.p
    if doc.colors is not None:
        out["colors"] = list(doc.colors)
    return out


@click.group()
@click.option("--server", default=None, metavar="URL",
              help="Base URL of a running service (default: in-process).")
@click.pass_context
def main(ctx, server):
    """Fox p-colorings of knot diagrams and 17-to-6-color reduction."""
    ctx.obj = server


@main.command()
@click.argument("file", type=click.Path())
@click.option("--p", default=17, show_default=True, help="Coloring modulus.")
@click.pass_obj
def color(server, file, p):
    """Solve the coloring space of a diagram at modulus P."""
    body = _load_doc(file)
    body["p"] = p
    out = _call(server, "POST", "/color", json=body)
    click.echo(f"p: {out['p']}")
    click.echo(f"dimension: {out['dimension']}")
    click.echo(f"count: {out['count']}")
    if out["sample"] is not None:
        click.echo("sample: " + ",".join(str(x) for x in out["sample"]))
    else:
        click.echo("sample: none")


@main.command()
@click.argument("file", type=click.Path())
@click.option("--coloring", "coloring_file", type=click.Path(), default=None,
              help="Document supplying the initial 17-coloring.")
@click.option("--depth", default=None, type=int,
              help=f"Search depth cap (default ${DEPTH_ENV} or 8).")
@click.option("--report", "report_file", type=click.Path(), default=None,
              help="Write the JSON run report (with trace) here.")
@click.pass_obj
def reduce(server, file, coloring_file, depth, report_file):
    """Re-diagram a 17-colored knot onto the palette {0,2,3,4,8,12}."""
    body = _load_doc(file)
    if coloring_file:
        cdoc = _load_doc(coloring_file)
        for key in ("p", "colors"):
            if key in cdoc:
                body[key] = cdoc[key]
    if depth is None:
        depth = int(os.environ.get(DEPTH_ENV, "8"))
    body["depth"] = depth
    out = _call(server, "POST", "/reduce", json=body)
    if report_file:
        with open(report_file, "w") as fh:
            json.dump({"report": out["report"], "trace": out["trace"],
                       "input_colors": out["input_colors"],
                       "input_pd": body["pd"]}, fh, indent=2)
    rep = out["report"]
    click.echo("final palette: {" +
               ",".join(str(x) for x in rep["final_palette"]) + "}")
    click.echo(f"total moves: {rep['total_moves']}")
    click.echo(f"final checksum: {rep['final_checksum']}")
    click.echo("result pd: " + out["result"]["pd"])
    click.echo("result colors: " +
               ",".join(str(x) for x in out["result"]["colors"]))


@main.command()
@click.argument("file", type=click.Path())
@click.pass_obj
def verify(server, file):
    """Validate a diagram document (structure, coloring, planarity)."""
    body = _load_doc(file)
    out = _call(server, "POST", "/verify", json=body)
    click.echo(f"valid: crossings={out['crossings']} arcs={out['arcs']} "
               f"chi={out['euler_characteristic']} "
               f"coloring_checked={out['coloring_checked']}")
    click.echo(f"checksum: {out['checksum']}")


@main.command()
@click.pass_obj
def tables(server):
    """Print the minimum-palette bounds and the special-case tables."""
    out = _call(server, "GET", "/tables")
    click.echo("minimum palette size by modulus:")
    for p, v in out["minimum_palette_bound"].items():
        click.echo(f"  {p} | {v}")
    click.echo("schedule: " + ",".join(str(x) for x in out["schedule"]))
    click.echo("target palette: {" +
               ",".join(str(x) for x in out["target_palette"]) + "}")
    for name, rows in out["special_cases"].items():
        click.echo(f"{name}:")
        for row in rows:
            cols = "(" + ",".join(str(x) for x in row["colors"]) + ")"
            val = row["value"]
            val = ("(" + ",".join(str(x) for x in val) + ")"
                   if isinstance(val, list) else str(val))
            click.echo(f"  step {row['step']} {cols} -> {val}")


@main.command()
@click.argument("file", type=click.Path())
@click.pass_obj
def invariants(server, file):
    """Determinant, p-colorability, and coloring counts for primes <= 17."""
    body = _load_doc(file)
    out = _call(server, "POST", "/invariants", json=body)
    click.echo(f"determinant: {out['determinant']}")
    for p in sorted(out["colorable"], key=int):
        click.echo(f"p={p}: colorable={out['colorable'][p]} "
                   f"count={out['coloring_counts'][p]}")


@main.command()
@click.argument("trace_file", type=click.Path())
@click.pass_obj
def replay(server, trace_file):
    """Re-apply a reduction trace, verifying every checksum."""
    try:
        with open(trace_file) as fh:
            blob = json.load(fh)
    except (OSError, ValueError) as e:
        _fail({"error": {"kind": "invalid-input", "message": str(e)}},
              EXIT_INVALID)
    try:
        body = {"initial": {"pd": blob["input_pd"], "p": blob["trace"]["p"],
                            "colors": blob["input_colors"]},
                "trace": blob["trace"]}
    except KeyError as e:
        _fail({"error": {"kind": "invalid-input",
                         "message": f"trace file missing {e}"}}, EXIT_INVALID)
    out = _call(server, "POST", "/replay", json=body)
    click.echo(f"verified steps: {out['verified_steps']}")
    click.echo(f"final checksum: {out['final_checksum']}")


if __name__ == "__main__":
    main()
