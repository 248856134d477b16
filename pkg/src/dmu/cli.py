"""Batch front door: JSON in, JSON/CSV reports out.

The CLI is a thin client of the HTTP service. By default requests are
dispatched to an in-process instance of the app (no network, fully
deterministic); pass --server to talk to a running instance instead.
Reports start with a single `# dmu-report <timestamp>` header line; the
body below it is byte-deterministic for a given build and config.

Exit codes: 0 success, 1 numerical acceptance failure, 2 input error.
"""
from __future__ import annotations

import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import click
import numpy as np

from . import __version__

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_INPUT = 2

_PRESETS = ("dirichlet", "hardy")


class ServiceClient:
    """Dispatches requests either in-process or to a remote server."""

    def __init__(self, server: str | None = None):
        if server:
            import httpx

            self._client = httpx.Client(base_url=server, timeout=600.0)
        else:
            from fastapi.testclient import TestClient

            from .service import app

            self._client = TestClient(app)

    def post(self, path: str, payload: dict):
        resp = self._client.post(path, json=payload)
        try:
            body = resp.json()
        except Exception:
            body = {"detail": resp.text}
        return resp.status_code, body


def _fail_input(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(EXIT_INPUT)


def load_measure(spec: str) -> dict:
    """A measure argument is a preset name (dirichlet, hardy, alpha:a,
    atom:re,im,mass) or a path to a measure JSON file."""
    if spec in _PRESETS:
        if spec == "dirichlet":
            return {"label": "dirichlet", "atoms": [],
                    "circle_density": {"coeffs": [[0, 1.0, 0.0]]}}
        return {"label": "hardy", "atoms": [], "disk_density": {"kind": "hardy"}}
    if spec.startswith("alpha:"):
        return {"label": spec, "atoms": [],
                "disk_density": {"kind": "alpha", "alpha": float(spec.split(":", 1)[1])}}
    if spec.startswith("atom:"):
        re_, im_, mass = (float(x) for x in spec.split(":", 1)[1].split(","))
        return {"label": spec, "atoms": [[re_, im_, mass]]}
    path = Path(spec)
    if not path.exists():
        _fail_input(f"measure {spec!r} is neither a preset nor an existing file")
    try:
        return json.loads(_strip_report_header(path.read_text()))
    except json.JSONDecodeError as exc:
        _fail_input(f"malformed measure JSON {spec!r}: {exc}")


def _strip_report_header(text: str) -> str:
    lines = text.splitlines()
    while lines and lines[0].startswith("#"):
        lines.pop(0)
    return "\n".join(lines)


def load_json(path: str, what: str):
    p = Path(path)
    if not p.exists():
        _fail_input(f"{what} file not found: {path}")
    try:
        return json.loads(_strip_report_header(p.read_text()))
    except json.JSONDecodeError as exc:
        _fail_input(f"malformed {what} JSON {path!r}: {exc}")


def write_report(out: str | None, payload: dict, fmt: str = "json"):
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    lines = [f"# dmu-report {stamp}"]
    if fmt == "json":
        lines.append(json.dumps(payload, sort_keys=True, indent=2))
    else:
        lines.append(payload["csv"].rstrip("\n"))
    text = "\n".join(lines) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


def _dispatch(ctx, path: str, payload: dict) -> dict:
    client: ServiceClient = ctx.obj["client"]
    status, body = client.post(path, payload)
    if status in (400, 422):
        _fail_input(json.dumps(body.get("detail", body), default=str))
    if status != 200:
        _fail_input(f"service error {status}: {body}")
    return body


def _common(fn):
    fn = click.option("--out", default=None, help="Write the report here instead of stdout.")(fn)
    return fn


@click.group()
@click.version_option(version=__version__, prog_name="dmu")
@click.option("--server", default=None,
              help="Base URL of a running service; default is in-process dispatch.")
@click.pass_context
def main(ctx, server):
    """Numerics for Dirichlet-type spaces on the unit disk."""
    ctx.ensure_object(dict)
    ctx.obj["client"] = ServiceClient(server)


@main.command()
@click.option("--measure", required=True, help="Preset name or measure JSON path.")
@click.option("--grid-radius", default=0.9, show_default=True)
@click.option("--grid-nr", default=12, show_default=True)
@click.option("--grid-ntheta", default=24, show_default=True)
@click.option("--ncircle", default=256, show_default=True)
@_common
@click.pass_context
def weight(ctx, measure, grid_radius, grid_nr, grid_ntheta, ncircle, out):
    """Evaluate both weights on a polar grid; emits CSV rows re,im,u,v."""
    radii = grid_radius * (np.arange(1, grid_nr + 1) / grid_nr)
    thetas = 2 * np.pi * np.arange(grid_ntheta) / grid_ntheta
    pts = [[float(r * np.cos(t)), float(r * np.sin(t))] for r in radii for t in thetas]
    body = _dispatch(ctx, "/v1/weight", {
        "measure": load_measure(measure), "points": pts,
        "options": {"n_circle": ncircle}})
    rows = ["re,im,u,v"] + [f"{r['re']!r},{r['im']!r},{r['u']!r},{r['v']!r}"
                            for r in body["rows"]]
    write_report(out, {"csv": "\n".join(rows)}, fmt="csv")


@main.command()
@click.option("--measure", required=True)
@click.option("--poly", "poly_path", required=True, help="Polynomial JSON path.")
@click.option("--mode", type=click.Choice(["u", "v", "measure"]), default="v",
              show_default=True)
@click.option("--nr", default=96, show_default=True)
@click.option("--ntheta", default=192, show_default=True)
@_common
@click.pass_context
def norm(ctx, measure, poly_path, mode, nr, ntheta, out):
    """Squared D(mu) norm of a polynomial, with cross-mode residuals."""
    body = _dispatch(ctx, "/v1/norm", {
        "measure": load_measure(measure), "poly": load_json(poly_path, "polynomial"),
        "mode": mode, "options": {"n_r": nr, "n_theta": ntheta}})
    write_report(out, body)


@main.command()
@click.option("--poly", "poly_path", required=True)
@click.option("--point", required=True, help="Complex point as re,im.")
@click.option("--method", type=click.Choice(["boundary", "area"]), default="boundary",
              show_default=True)
@_common
@click.pass_context
def localdir(ctx, poly_path, point, method, out):
    """Local Dirichlet integral of a polynomial at a point of the closed disk."""
    try:
        re_, im_ = (float(x) for x in point.split(","))
    except ValueError:
        _fail_input("point must be re,im")
    body = _dispatch(ctx, "/v1/localdir", {
        "poly": load_json(poly_path, "polynomial"), "point": [re_, im_],
        "method": method})
    write_report(out, body)


@main.command(name="dual-check")
@click.option("--measure", required=True)
@click.option("--p", "p_path", required=True)
@click.option("--q", "q_path", required=True)
@_common
@click.pass_context
def dual_check(ctx, measure, p_path, q_path, out):
    """Residual of the Cauchy-duality pairing identity."""
    body = _dispatch(ctx, "/v1/dual-check", {
        "measure": load_measure(measure),
        "p": load_json(p_path, "polynomial"), "q": load_json(q_path, "polynomial")})
    write_report(out, body)


@main.command(name="hd-norm")
@click.option("--measure", required=True)
@click.option("--trig", "trig_path", required=True,
              help="Trig polynomial JSON: {\"coeffs\": [[m, re, im], ...]}.")
@_common
@click.pass_context
def hd_norm(ctx, measure, trig_path, out):
    """Norm in the harmonic Dirichlet-type space."""
    data = load_json(trig_path, "trig polynomial")
    body = _dispatch(ctx, "/v1/hd-norm", {
        "measure": load_measure(measure), "coeffs": data["coeffs"]})
    write_report(out, body)


@main.command()
@click.option("--measure", "nu", required=True, help="Embedding measure nu.")
@click.option("--base-measure", "mu", required=True, help="Base measure mu.")
@click.option("--degree", default=12, show_default=True)
@_common
@click.pass_context
def carleson(ctx, nu, mu, degree, out):
    """Certified lower bound for the D(mu)-Carleson constant of nu."""
    body = _dispatch(ctx, "/v1/carleson", {
        "measure": load_measure(nu), "base_measure": load_measure(mu),
        "degree": degree})
    write_report(out, body)


@main.command(name="mult-norm")
@click.option("--measure", required=True)
@click.option("--poly", "poly_path", required=True)
@click.option("--degree", default=12, show_default=True)
@click.option("--certificate/--no-certificate", default=False,
              help="Also report sup on the circle and the Carleson constant.")
@_common
@click.pass_context
def mult_norm(ctx, measure, poly_path, degree, certificate, out):
    """Lower bound for the multiplier norm of a polynomial."""
    body = _dispatch(ctx, "/v1/mult-norm", {
        "measure": load_measure(measure), "poly": load_json(poly_path, "polynomial"),
        "degree": degree, "certificate": certificate})
    write_report(out, body)


@main.command()
@click.option("--measure", required=True)
@click.option("--poly", "poly_path", required=True)
@click.option("--points", "points_path", required=True,
              help="JSON list of [re, im] points.")
@click.option("--degree", default=20, show_default=True)
@click.option("--space", type=click.Choice(["h2", "dmu", "emu"]), default="emu",
              show_default=True)
@_common
@click.pass_context
def pick(ctx, measure, poly_path, points_path, degree, space, out):
    """Minimum eigenvalue of the Pick matrix for a candidate multiplier."""
    body = _dispatch(ctx, "/v1/pick", {
        "measure": load_measure(measure), "poly": load_json(poly_path, "polynomial"),
        "points": load_json(points_path, "points"), "degree": degree, "space": space})
    write_report(out, body)


@main.group()
def corona():
    """Corona solver: build and verify holomorphic Bezout solutions."""


def _corona_request(problem_path, nr, ntheta, degree, grid, jobs):
    data = load_json(problem_path, "problem")
    for key in ("measure", "f", "h"):
        if key not in data:
            _fail_input(f"problem JSON is missing {key!r}")
    req = {
        "measure": data["measure"], "f": data["f"], "h": data["h"],
        "delta": data.get("delta"), "grid_radius": grid,
        "options": {"n_r": nr, "n_theta": ntheta},
    }
    if degree is not None:
        req["fit_degree"] = degree
    if jobs is None:
        jobs = os.environ.get("MU_CORONA_JOBS")
    if jobs is not None:
        req["jobs"] = int(jobs)
    return req


@corona.command(name="solve")
@click.option("--problem", "problem_path", required=True,
              help="Problem JSON: {measure, f: [poly...], h: poly, delta: optional}.")
@click.option("--nr", default=96, show_default=True)
@click.option("--ntheta", default=256, show_default=True)
@click.option("--degree", default=None, type=int, help="Fit degree cap override.")
@click.option("--grid", default=0.95, show_default=True, help="Evaluation grid radius.")
@click.option("--jobs", default=None, type=int,
              help="Parallel transforms (fallback: MU_CORONA_JOBS).")
@_common
@click.pass_context
def corona_solve_cmd(ctx, problem_path, nr, ntheta, degree, grid, jobs, out):
    """Solve the Bezout problem and write the full solution report."""
    req = _corona_request(problem_path, nr, ntheta, degree, grid, jobs)
    body = _dispatch(ctx, "/v1/corona/solve", req)
    write_report(out, body)


@corona.command(name="verify")
@click.option("--problem", "problem_path", required=True)
@click.option("--solution", "solution_path", default=None,
              help="Optional solution JSON to cross-check against a fresh solve.")
@click.option("--nr", default=96, show_default=True)
@click.option("--ntheta", default=256, show_default=True)
@click.option("--grid", default=0.95, show_default=True)
@click.option("--tol", default=None, type=float,
              help="Gate: fail (exit 1) if the Bezout residual exceeds this.")
@click.option("--jobs", default=None, type=int)
@_common
@click.pass_context
def corona_verify_cmd(ctx, problem_path, solution_path, nr, ntheta, grid, tol, jobs, out):
    """Re-run the construction deterministically and verify residuals."""
    req = {"problem": _corona_request(problem_path, nr, ntheta, None, grid, jobs)}
    if solution_path:
        sol = load_json(solution_path, "solution")
        req["solution"] = sol.get("solution", sol)
    body = _dispatch(ctx, "/v1/corona/verify", req)
    write_report(out, body)
    bad = body["matches_supplied"] is False
    if tol is not None and body["report"]["bezout_residual"] > tol:
        bad = True
    if bad:
        sys.exit(EXIT_NUMERICAL)


@main.command()
@click.option("--criteria", default=None,
              help="Comma-separated criterion indices (default: all).")
@_common
@click.pass_context
def selftest(ctx, criteria, out):
    """Run the acceptance suite and print one pass/fail line per criterion."""
    indices = None
    if criteria:
        try:
            indices = [int(x) for x in criteria.split(",")]
        except ValueError:
            _fail_input("criteria must be comma-separated integers")
    body = _dispatch(ctx, "/v1/selftest", {"criteria": indices})
    for r in body["results"]:
        mark = "PASS" if r["passed"] else "FAIL"
        click.echo(f"[{mark}] {r['index']:2d} {r['name']} ({r['seconds']:.2f}s)")
    if out:
        write_report(out, body)
    if not body["passed"]:
        sys.exit(EXIT_NUMERICAL)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run("dmu.service:app", host=host, port=port)


if __name__ == "__main__":
    main()
