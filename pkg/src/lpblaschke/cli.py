"""Command-line front end.

Exit codes: 0 success, 1 failed verification checks, 2 usage errors,
3 violated preconditions, 4 solver non-convergence.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .blaschke import (
    NotSymmetricError,
    blaschke_sum,
    curvature_image,
    normalized_blaschke_sum,
    normalized_curvature_image,
    rotate_quarter,
)
from .convexbody import (
    DegenerateBodyError,
    OriginNotInteriorError,
    Polytope,
    SampledBody,
    SingularMapError,
)
from .lptransform import centroid_body, moment_body, projection_body, projection_body_boundary
from .minkowski import (
    P_MAX,
    ExponentError,
    NonConvergenceError,
    NormalMismatchError,
    SolverConfig,
    solve_even,
    solve_normalized_even,
)
from .spherical import DiscreteMeasure, GridError, MeasureError, default_grid
from .verify import ball_polytope, catalog, random_hull, report_json, run_suite

log = logging.getLogger("lpblaschke")

EXIT_FAILED, EXIT_USAGE, EXIT_PRECONDITION, EXIT_NONCONVERGENCE = 1, 2, 3, 4

PRECONDITION_ERRORS = (
    MeasureError,
    GridError,
    ExponentError,
    NotSymmetricError,
    OriginNotInteriorError,
    DegenerateBodyError,
    SingularMapError,
    NormalMismatchError,
)


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# documents


def read_document(path) -> tuple[object, dict]:
    """Load a grid, measure or body file; returns ``(object, meta)``.

    Bodies come back as :class:`Polytope` or :class:`SampledBody`; measures
    are attached to the default grid of their resolution when they match it.
    """
    obj = json.loads(Path(path).read_text())
    meta = obj.get("meta", {})
    if "masses" in obj:
        d = np.asarray(obj["directions"], dtype=float)
        grid = None
        try:
            grid = default_grid(int(obj["dim"]), len(d))
        except (GridError, ValueError):
            pass
        return DiscreteMeasure.from_json(obj, grid), meta
    if "support_values" in obj:
        return SampledBody.from_json(obj), meta
    if "vertices" in obj or "facets" in obj:
        return Polytope.from_json(obj), meta
    raise MeasureError(f"{path}: not a body or measure document")


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_document(path, thing, meta: dict | None = None) -> None:
    doc = dict(thing if isinstance(thing, dict) else thing.to_json())
    if meta is not None:
        doc["meta"] = meta
    Path(path).write_text(dumps(doc))


def polygon_vertices(body) -> np.ndarray:
    """Counter-clockwise boundary vertices of a planar body."""
    if isinstance(body, SampledBody):
        body = Polytope.from_halfspaces(body.grid.directions, body.support_values)
    v = body.vertices
    c = v.mean(axis=0)
    order = np.argsort(np.arctan2(v[:, 1] - c[1], v[:, 0] - c[0]))
    return v[order]


def emit_polygon(path, body) -> None:
    if body.dim != 2:
        raise UsageError("--emit-polygon needs a planar body")
    np.savetxt(path, polygon_vertices(body), delimiter=",", header="x,y", comments="", fmt="%.17g")


# ---------------------------------------------------------------------------
# argument parsing


def _floats(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from None


def _ints(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}") from None


def _tau(text):
    t = float(text)
    if not -1.0 <= t <= 1.0:
        raise argparse.ArgumentTypeError("tau must lie in [-1, 1]")
    return t


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(prog="lpblaschke", description="L_p Brunn-Minkowski toolkit.",
                                     formatter_class=fmt)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dim", type=int, choices=(2, 3), default=None,
                        help="dimension (inferred from --in when omitted, else 2)")
    common.add_argument("--resolution", type=int, default=None,
                        help="grid size: 360 in the plane, 2562 directions in space")
    common.add_argument("--out", type=Path, default=None, help="output JSON path")
    common.add_argument("--emit-polygon", type=Path, default=None, metavar="CSV",
                        help="also write the planar boundary as x,y rows")
    withp = argparse.ArgumentParser(add_help=False)
    withp.add_argument("--p", type=float, default=2.0, help="exponent p > 1")
    solver = argparse.ArgumentParser(add_help=False)
    solver.add_argument("--tol", type=float, default=SolverConfig.residual_tol, help="solver residual tolerance")
    solver.add_argument("--seed", type=int, default=0, help="seed for random starts")
    solver.add_argument("--max-iterations", type=int, default=SolverConfig.max_iterations,
                        help="solver iteration budget")
    mode = solver.add_mutually_exclusive_group()
    mode.add_argument("--normalized", dest="normalized", action="store_true", default=True,
                      help="volume-normalized problem S_p/V = data")
    mode.add_argument("--plain", dest="normalized", action="store_false", default=argparse.SUPPRESS,
                      help="plain problem S_p = data (p != n)")
    tau = argparse.ArgumentParser(add_help=False)
    tau.add_argument("--tau", type=_tau, default=0.0, help="asymmetry parameter in [-1, 1]")

    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, parents, help_text, need_in=True, nargs_in=None):
        sp = sub.add_parser(name, parents=parents, help=help_text, description=help_text, formatter_class=fmt)
        if need_in:
            sp.add_argument("--in", dest="inputs", type=Path, action="append", required=nargs_in is not None,
                            default=None, help="input JSON path" + (" (give twice)" if nargs_in == 2 else ""))
        return sp

    g = add("grid", [common], "write a direction grid", need_in=False)
    g.set_defaults(handler=cmd_grid)
    add("solve", [common, withp, solver], "solve the even L_p Minkowski problem for a measure",
        nargs_in=1).set_defaults(handler=cmd_solve)
    pr = add("projection", [common, withp, tau], "L_p projection body (exact facet normals)", nargs_in=1)
    pr.add_argument("--boundary", action="store_true", help="boundary variant: skip facets through the origin")
    pr.set_defaults(handler=cmd_projection)
    add("centroid", [common, withp], "L_p centroid body", nargs_in=1).set_defaults(handler=cmd_centroid)
    add("moment", [common, withp, tau], "L_p moment body", nargs_in=1).set_defaults(handler=cmd_moment)
    add("curvature-image", [common, withp, solver],
        "symmetric L_p curvature image (default input: the unit ball polytope of the grid)"
        ).set_defaults(handler=cmd_curvature_image)
    add("blaschke-sum", [common, withp, solver], "L_p Blaschke sum of two symmetric bodies",
        nargs_in=2).set_defaults(handler=cmd_blaschke_sum)
    add("rotate90", [common], "quarter turn of a planar body", nargs_in=1).set_defaults(handler=cmd_rotate90)
    v = add("verify", [], "run the property suite", need_in=False)
    v.add_argument("--seed", type=int, default=0, help="seed for random bodies and maps")
    v.add_argument("--dims", type=_ints, default=[2, 3], help="comma-separated dimensions")
    v.add_argument("--p-values", type=_floats, default=[1.5, 2.5, 3.0], help="comma-separated exponents")
    v.add_argument("--trials", type=int, default=2, help="random inputs per dimension and p")
    v.add_argument("--out", type=Path, default=None, help="report JSON path")
    v.set_defaults(handler=cmd_verify)
    b = add("body", [common], "write a catalog body, or re-write a body file")
    b.add_argument("--name", default=None,
                   choices=("square", "cross", "pentagon", "cube", "octahedron", "ball", "random"),
                   help="catalog body (omit to re-write --in)")
    b.add_argument("--seed", type=int, default=0, help="seed for --name random")
    b.set_defaults(handler=cmd_body)
    return parser


# ---------------------------------------------------------------------------
# helpers


def _meta(args) -> dict:
    out = {"command": args.command}
    for k, v in sorted(vars(args).items()):
        if k in ("handler", "command", "verbose"):
            continue
        if isinstance(v, Path):
            v = str(v)
        elif isinstance(v, list):
            v = [str(x) if isinstance(x, Path) else x for x in v]
        out[k] = v
    return out


def _input(args, index=0):
    if not args.inputs or len(args.inputs) <= index:
        raise UsageError("missing --in")
    return read_document(args.inputs[index])[0]


def _body(args, index=0):
    thing = _input(args, index)
    if not isinstance(thing, (Polytope, SampledBody)):
        raise UsageError(f"{args.inputs[index]} holds a measure, not a body")
    _agree_dim(args, thing.dim)
    return thing


def _polytope(args, index=0) -> Polytope:
    body = _body(args, index)
    if not isinstance(body, Polytope):
        raise UsageError("this command needs a polytope body file (vertices or facets)")
    return body


def _agree_dim(args, dim):
    if getattr(args, "dim", None) is not None and args.dim != dim:
        raise UsageError(f"--dim {args.dim} disagrees with the input dimension {dim}")
    args.dim = dim


def _grid(args):
    dim = args.dim or 2
    return default_grid(dim, args.resolution)


def _config(args) -> SolverConfig:
    return SolverConfig(max_iterations=args.max_iterations, residual_tol=args.tol, seed=args.seed)


def _finish(args, thing, summary, report=None):
    meta = _meta(args)
    if report is not None:
        meta["solver"] = report.to_json()
    if args.out is not None:
        write_document(args.out, thing, meta)
    if getattr(args, "emit_polygon", None) is not None:
        emit_polygon(args.emit_polygon, thing)
    print(summary)
    return 0


def _check_report(args, body, report):
    if report.converged:
        return None
    path = Path(args.out).with_suffix(".report.json") if args.out else Path("lpblaschke-report.json")
    path.write_text(dumps({"meta": _meta(args), "solver": report.to_json(), "body": body.to_json()}))
    print(f"solver did not converge (residual {report.final_residual:.3g}); report written to {path}",
          file=sys.stderr)
    return EXIT_NONCONVERGENCE


def _body_summary(body, extra=""):
    if isinstance(body, Polytope):
        size = f"volume {body.volume:.10g}"
    else:
        size = f"mean support {float(np.mean(body.support_values)):.10g}"
    h = body.support(default_grid(body.dim).directions)
    return f"{size}, support range [{h.min():.10g}, {h.max():.10g}]" + extra


# ---------------------------------------------------------------------------
# commands


def cmd_grid(args):
    grid = _grid(args)
    doc = {
        "dim": grid.dim,
        "resolution": grid.resolution,
        "directions": grid.directions.tolist(),
        "weights": grid.weights.tolist(),
    }
    return _finish(args, doc, f"grid: {grid.resolution} directions, weight sum {grid.weights.sum():.15g}")


def cmd_solve(args):
    mu = _input(args)
    if not isinstance(mu, DiscreteMeasure):
        raise UsageError(f"{args.inputs[0]} holds a body, not a measure")
    _agree_dim(args, mu.dim)
    cfg = _config(args)
    if args.normalized:
        body, report = solve_normalized_even(mu, args.p, cfg)
    else:
        body, report = solve_even(mu, args.p, cfg, return_report=True)
    code = _check_report(args, body, report)
    if code:
        return code
    return _finish(args, body, _body_summary(body, f", residual {report.final_residual:.3g}"), report)


def cmd_projection(args):
    K = _polytope(args)
    grid = _grid(args)
    if args.boundary:
        body = projection_body_boundary(K, args.p, args.tau, grid)
    else:
        body = projection_body(K, args.p, args.tau, grid)
    return _finish(args, body, _body_summary(body))


def cmd_centroid(args):
    body = centroid_body(_polytope(args), args.p, _grid(args))
    return _finish(args, body, _body_summary(body))


def cmd_moment(args):
    body = moment_body(_polytope(args), args.p, args.tau, _grid(args))
    return _finish(args, body, _body_summary(body))


def cmd_curvature_image(args):
    if args.inputs:
        K = _polytope(args)
        grid = _grid(args)
    else:
        grid = _grid(args)
        K = ball_polytope(grid)
    cfg = _config(args)
    op = normalized_curvature_image if args.normalized else curvature_image
    body, report = op(K, args.p, grid, cfg, return_report=True)
    code = _check_report(args, body, report)
    if code:
        return code
    radius = float(np.mean(body.support(grid.directions)))
    return _finish(args, body, _body_summary(body, f", mean radius {radius:.6g}, residual "
                                                    f"{report.final_residual:.3g}"), report)


def cmd_blaschke_sum(args):
    K, L = _polytope(args, 0), _polytope(args, 1)
    cfg = _config(args)
    op = normalized_blaschke_sum if args.normalized else blaschke_sum
    body, report = op(K, L, args.p, cfg, return_report=True)
    code = _check_report(args, body, report)
    if code:
        return code
    return _finish(args, body, _body_summary(body, f", residual {report.final_residual:.3g}"), report)


def cmd_rotate90(args):
    body = rotate_quarter(_body(args))
    return _finish(args, body, _body_summary(body))


def cmd_verify(args):
    results = run_suite(args.seed, args.dims, args.p_values, trials=args.trials)
    text = report_json(results, **_meta(args))
    if args.out is not None:
        Path(args.out).write_text(text + "\n")
    failed = [r for r in results if not r.passed and not r.skipped]
    skipped = sum(r.skipped for r in results)
    for r in failed:
        print(f"FAIL {r.check_name}: {r.measured:.3g} > {r.tolerance:.3g} {r.notes}", file=sys.stderr)
    print(f"{len(results) - len(failed) - skipped} passed, {len(failed)} failed, {skipped} skipped")
    return EXIT_FAILED if failed else 0


def cmd_body(args):
    if args.name is None:
        if not args.inputs:
            raise UsageError("give --name or --in")
        # re-write keeps the document's own metadata
        thing, meta = read_document(args.inputs[0])
        if args.out is not None:
            write_document(args.out, thing, meta or None)
        if args.emit_polygon is not None:
            emit_polygon(args.emit_polygon, thing)
        print(_body_summary(thing) if not isinstance(thing, DiscreteMeasure) else f"measure, {len(thing.masses)} atoms")
        return 0
    dim = args.dim or (3 if args.name in ("cube", "octahedron") else 2)
    args.dim = dim
    if args.name == "ball":
        body = ball_polytope(_grid(args))
    elif args.name == "random":
        body = random_hull(np.random.default_rng(args.seed), dim)
    else:
        bodies = catalog(dim)
        if args.name not in bodies:
            raise UsageError(f"{args.name} is not a {dim}-dimensional catalog body")
        body = bodies[args.name]
    return _finish(args, body, _body_summary(body))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        p = getattr(args, "p", None)
        if p is not None and not (1.0 < p <= P_MAX and math.isfinite(p)):
            raise ExponentError(f"p must lie in (1, {P_MAX:g}], got {p}")
        return args.handler(args)
    except UsageError as exc:
        parser.error(str(exc))
    except NonConvergenceError as exc:
        path = Path("lpblaschke-report.json")
        path.write_text(dumps({"meta": _meta(args), "solver": exc.report.to_json() if exc.report else None}))
        print(f"solver did not converge: {exc}; report written to {path}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except PRECONDITION_ERRORS as exc:
        print(f"precondition violated ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
