"""Command-line front end: JSON/CSV output for batch sweeps and plot data.

Conventions: complex flags are "re,im"; integer ranges "start..end" are
inclusive; grids are "lo:hi:count".  Exit codes: 0 success, 1 a solve that
declared failure (payload still emitted), 2 usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import cochain, filling_solver, schwarzian_end, torus_end
from .config import RunConfig, load_config
from .hypcore import MobiusTransform, SL2Vector, classify, complex_translation_length
from .schwarzian_end import GridSpec, parse_map
from .torus_end import EndParameter, EndRegion

USAGE_EXIT = 2
FAILURE_EXIT = 1


class UsageError(ValueError):
    pass


def _parse_complex(text: str) -> complex:
    try:
        re_s, im_s = text.split(",")
        return complex(float(re_s), float(im_s))
    except ValueError as exc:
        raise UsageError(f"expected complex as 're,im', got {text!r}") from exc


def _parse_int_list(text: str) -> list[int]:
    try:
        if ".." in text:
            lo, hi = text.split("..")
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise ValueError
            return list(range(lo, hi + 1))
        return [int(v) for v in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"expected integers 'start..end' or 'a,b,c', got {text!r}") from exc


def _parse_region(text: str) -> EndRegion:
    try:
        spans = [tuple(float(v) for v in part.split(":")) for part in text.split(",")]
        (x0, x1), (y0, y1), (t0, t1) = spans
        return EndRegion(x0, x1, y0, y1, t0, t1)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"expected region 'x0:x1,y0:y1,t0:t1', got {text!r}") from exc


def _cpx(z: complex) -> list[float]:
    return [z.real, z.imag]


def _mobius_payload(m: MobiusTransform) -> dict:
    return {"matrix": [_cpx(m.a11), _cpx(m.a12), _cpx(m.a21), _cpx(m.a22)]}


def _class_payload(m: MobiusTransform, tol: float) -> dict:
    cls = classify(m, tol=tol)
    out: dict = {"kind": cls.kind}
    if cls.kind == "elliptic":
        out["angle"] = cls.angle
    if cls.kind in ("elliptic", "loxodromic"):
        out["complex_length"] = _cpx(complex_translation_length(m, tol=tol))
    return out


def _emit_json(payload) -> None:
    sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")


def _emit_rows(rows: list[dict], columns: list[str], fmt: str) -> None:
    if fmt == "csv":
        sys.stdout.write(",".join(columns) + "\n")
        for row in rows:
            sys.stdout.write(",".join(repr(row[c]) if isinstance(row[c], float) else str(row[c]) for c in columns) + "\n")
    else:
        _emit_json(rows)


def cmd_holonomy(args, cfg: RunConfig) -> int:
    s = EndParameter(_parse_complex(args.a), _parse_complex(args.b))
    m = torus_end.holonomy(s, args.m, args.n)
    payload = _mobius_payload(m)
    payload["classification"] = _class_payload(m, cfg.classify_tol)
    _emit_json(payload)
    return 0


def cmd_fill(args, cfg: RunConfig) -> int:
    s = EndParameter(_parse_complex(args.a), _parse_complex(args.b))
    payload = {"coordinates": torus_end.filling_coordinates(s).to_dict()}
    if args.classify:
        tol = args.tol if args.tol is not None else cfg.rational_tol
        max_den = args.max_den if args.max_den is not None else cfg.max_denominator
        payload["completion"] = torus_end.classify_completion(s, tol, max_den).to_dict()
    _emit_json(payload)
    return 0


def cmd_sequence(args, cfg: RunConfig) -> int:
    b = _parse_complex(args.b)
    n_list = _parse_int_list(args.n)
    params = filling_solver.filling_sequence(b, args.p, args.q, n_list)
    rows = []
    for n, s in zip(n_list, params):
        rows.append(
            {
                "n": n,
                "a_re": s.a.real,
                "a_im": s.a.imag,
                "cusp_residual": filling_solver.cusp_distance(s, aligned=False),
            }
        )
    _emit_rows(rows, ["n", "a_re", "a_im", "cusp_residual"], args.format or cfg.output)
    return 0


def _load_path(text: str) -> filling_solver.HolomorphicPath:
    try:
        if text.strip().startswith("{"):
            data = json.loads(text)
        else:
            with open(text) as fh:
                data = json.load(fh)
        return filling_solver.HolomorphicPath.from_dict(data)
    except (OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot load path spec from {text!r}: {exc}") from exc


def cmd_solve(args, cfg: RunConfig) -> int:
    path = _load_path(args.path)
    w0 = _parse_complex(args.w0)
    try:
        report = filling_solver.solve_on_path(
            path, args.x, args.y, w0, tol=args.tol or cfg.newton_tol, max_iter=args.max_iter or cfg.newton_max_iter
        )
    except filling_solver.DomainExit as exc:
        _emit_json({"converged": False, "error": str(exc)})
        return FAILURE_EXIT
    _emit_json(report.to_dict())
    return 0 if report.converged else FAILURE_EXIT


def cmd_crosssection(args, cfg: RunConfig) -> int:
    s = EndParameter(_parse_complex(args.a), _parse_complex(args.b))
    if args.eps_grid:
        try:
            lo, hi, count = args.eps_grid.split(":")
            lo, hi, count = float(lo), float(hi), int(count)
        except ValueError as exc:
            raise UsageError(f"expected eps grid 'lo:hi:count', got {args.eps_grid!r}") from exc
        rows = [
            {"eps": float(e), "length": torus_end.cross_section_length(s, args.x, args.y, float(e))}
            for e in np.linspace(lo, hi, count)
        ]
        _emit_rows(rows, ["eps", "length"], args.format or cfg.output)
    else:
        if args.eps is None:
            raise UsageError("provide --eps or --eps-grid")
        _emit_json({"length": torus_end.cross_section_length(s, args.x, args.y, args.eps)})
    return 0


def cmd_schwarzian(args, cfg: RunConfig) -> int:
    f = parse_map(args.f)
    if args.depth:
        grid = GridSpec.parse(args.grid or cfg.grid)
        _emit_json({"injectivity_depth": schwarzian_end.injectivity_depth(f, grid)})
        return 0
    if args.grid:
        grid = GridSpec.parse(args.grid)
        rows = []
        for z in grid.points():
            sc = schwarzian_end.schwarzian(f, z)
            rows.append(
                {
                    "z_re": z.real,
                    "z_im": z.imag,
                    "sc_re": sc.real,
                    "sc_im": sc.imag,
                    "norm": z.imag ** 2 * abs(sc),
                }
            )
        _emit_rows(rows, ["z_re", "z_im", "sc_re", "sc_im", "norm"], args.format or cfg.output)
        return 0
    if args.z is None:
        raise UsageError("provide --z or --grid")
    z = _parse_complex(args.z)
    sc = schwarzian_end.schwarzian(f, z)
    _emit_json({"sc": _cpx(sc), "norm": schwarzian_end.schwarzian_norm(f, z)})
    return 0


def cmd_theta_check(args, cfg: RunConfig) -> int:
    f = parse_map(args.f)
    try:
        u_s, v_s, t_s = args.point.split(",")
        point = schwarzian_end.H3Point(complex(float(u_s), float(v_s)), float(t_s))
    except ValueError as exc:
        raise UsageError(f"expected point 'u,v,t', got {args.point!r}") from exc
    report = schwarzian_end.jacobian_check(f, point, h=args.h or cfg.fd_step, richardson=args.richardson)
    _emit_json(report.to_dict())
    return 0


def _parse_sl2(entries) -> SL2Vector:
    vals = [complex(re, im) for re, im in entries]
    return SL2Vector(np.array([[vals[0], vals[1]], [vals[2], vals[3]]], dtype=complex))


def _load_representation(path: str) -> cochain.MarkedRepresentation:
    try:
        with open(path) as fh:
            return cochain.MarkedRepresentation.from_dict(json.load(fh))
    except (OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot load representation from {path!r}: {exc}") from exc


def cmd_cocycle(args, cfg: RunConfig) -> int:
    rep = _load_representation(args.rep)
    dim_z, dim_b, dim_h = cochain.h1_dimension(rep, cfg.rank_rtol)
    payload: dict = {"dim_z1": dim_z, "dim_b1": dim_b, "dim_h1": dim_h}
    if args.values:
        try:
            with open(args.values) as fh:
                data = json.load(fh)
            c = cochain.Cocycle(tuple(_parse_sl2(entries) for entries in data["values"]))
        except (OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot load cocycle values from {args.values!r}: {exc}") from exc
        ok, residual = cochain.is_cocycle(rep, c, tol=args.tol)
        payload["is_cocycle"] = ok
        payload["max_relator_residual"] = residual
        v, res = cochain.solve_coboundary(rep, c)
        payload["coboundary_residual"] = res
        payload["coboundary_v"] = [[float(x.real), float(x.imag)] for x in np.ravel(v.m)]
    _emit_json(payload)
    return 0


def cmd_bilipschitz(args, cfg: RunConfig) -> int:
    s1 = EndParameter(_parse_complex(args.a1), _parse_complex(args.b1))
    s2 = EndParameter(_parse_complex(args.a2), _parse_complex(args.b2))
    region = _parse_region(args.region)
    value = torus_end.estimate_bilipschitz(
        s1, s2, region, args.samples, seed=args.seed if args.seed is not None else cfg.seed,
        chart=args.chart or cfg.chart,
    )
    _emit_json({"khat": value})
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dehnscope", description=__doc__)
    parser.add_argument("--config", help="path to a JSON run-config file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("holonomy", help="holonomy of g1^m g2^n with classification")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_holonomy)

    p = sub.add_parser("fill", help="filling coordinates and optional completion class")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--classify", action="store_true")
    p.add_argument("--tol", type=float)
    p.add_argument("--max-den", type=int)
    p.set_defaults(func=cmd_fill)

    p = sub.add_parser("sequence", help="filling sequence toward the cusp")
    p.add_argument("--b", required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", required=True, help="inclusive range 'start..end' or list 'a,b,c'")
    p.add_argument("--format", choices=("json", "csv"))
    p.set_defaults(func=cmd_sequence)

    p = sub.add_parser("solve", help="Newton solve for coordinates along a path")
    p.add_argument("--path", required=True, help="path JSON file or inline JSON")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--w0", required=True)
    p.add_argument("--tol", type=float)
    p.add_argument("--max-iter", type=int)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("crosssection", help="tube cross-section length")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--eps", type=float)
    p.add_argument("--eps-grid", help="'lo:hi:count' sweep")
    p.add_argument("--format", choices=("json", "csv"))
    p.set_defaults(func=cmd_crosssection)

    p = sub.add_parser("schwarzian", help="Schwarzian derivative, norm, injectivity depth")
    p.add_argument("--f", required=True, help="identity|square|log|power:<c>|mobius:<8 floats>")
    p.add_argument("--z")
    p.add_argument("--grid", help="'re0:re1:n,im0:im1:m'")
    p.add_argument("--depth", action="store_true", help="report arccosh of the norm sup over the grid")
    p.add_argument("--format", choices=("json", "csv"))
    p.set_defaults(func=cmd_schwarzian)

    p = sub.add_parser("theta-check", help="finite-difference Jacobian of the end extension map")
    p.add_argument("--f", required=True)
    p.add_argument("--point", required=True, help="'u,v,t' with v >= 0, t > 0")
    p.add_argument("--h", type=float)
    p.add_argument("--richardson", action="store_true")
    p.set_defaults(func=cmd_theta_check)

    p = sub.add_parser("cocycle", help="cocycle checks and cohomology dimensions")
    p.add_argument("--rep", required=True, help="representation JSON file")
    p.add_argument("--values", help="cocycle values JSON file")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_cocycle)

    p = sub.add_parser("bilipschitz", help="sampled biLipschitz estimate between two end charts")
    p.add_argument("--a1", required=True)
    p.add_argument("--b1", required=True)
    p.add_argument("--a2", required=True)
    p.add_argument("--b2", required=True)
    p.add_argument("--region", required=True, help="'x0:x1,y0:y1,t0:t1'")
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--chart", choices=("printed", "corrected"))
    p.set_defaults(func=cmd_bilipschitz)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else RunConfig()
        return args.func(args, cfg)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE_EXIT
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())
