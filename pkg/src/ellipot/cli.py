"""Command-line front end.

    ellipot potential --axes 3,2,1 --point 4,0,0 --point -1,0.5,0
    ellipot field     --axes 3,2,1 --points-file pts.csv --format csv
    ellipot tau       --axes 1,1,1 --point 2,0,0
    ellipot demag     --axes 3,2,1
    ellipot grid      --axes 1,1,1 --grid -2:2:5 --grid -2:2:5 --grid 0:0:2
    ellipot validate  --axes 3,2,1 --seed 42

Output is JSON lines by default (one object per point, in input order) or
CSV with a header row.  Floats are written with ``repr`` so they round-trip
exactly.  Exit status: 0 success, 1 usage or domain error, 2 when any
quadrature missed its tolerance (results are still written) or, for
``validate``, 1 when a check fails.

CSV columns, in order:

* potential: ``x1..xN, class, tau, value, error_estimate, converged``
  then ``hollow_value`` with ``--scale`` and ``gravitational_potential``
  with ``--G``
* field: ``x1..xN, class, tau, g1..gN, error_estimate, converged``
* tau: ``x1..xN, class, tau``
* demag: ``P1, P2, P3, trace``
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from itertools import product
from pathlib import Path

import numpy as np

from .demag import demag_factors
from .errors import DimensionMismatch, MalformedLine, ToleranceNotMet
from .geometry import Ellipsoid, classify_point, make_ellipsoid
from .potential import (
    GravityConfig,
    evaluate_field,
    gravitational_potential,
    hollow_shell_potential,
    potential_at,
)
from .quadrature import QuadratureConfig
from .validation import run_validation

COMMANDS = ("potential", "field", "demag", "tau", "validate", "grid")
THREADS_ENV = "ELLIPSOID_THREADS"


class UsageError(Exception):
    pass


def _floats(text: str, what: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"malformed {what}: {text!r}") from None
    if not all(math.isfinite(v) for v in vals):
        raise UsageError(f"{what} must be finite: {text!r}")
    return vals


def parse_points_file(path, dim: int | None = None) -> list[tuple[float, ...]]:
    """Read points, one per line, as CSV (no header) or JSON arrays.

    Blank lines are skipped; line numbers in errors are 1-based.
    """
    points = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                if line.startswith("["):
                    vals = json.loads(line)
                    if not isinstance(vals, list):
                        raise ValueError
                    vals = [float(v) for v in vals]
                else:
                    vals = [float(v) for v in line.split(",")]
            except (ValueError, TypeError):
                raise MalformedLine(lineno, line) from None
            if not vals or not all(math.isfinite(v) for v in vals):
                raise MalformedLine(lineno, line)
            if dim is not None and len(vals) != dim:
                raise DimensionMismatch(
                    f"line {lineno}: {len(vals)} coordinates, ellipsoid has {dim}"
                )
            points.append(tuple(vals))
    return points


def parse_grid(specs: list[str], dim: int) -> list[tuple[float, ...]]:
    """Cartesian grid from one ``min:max:steps`` spec per axis, last axis fastest."""
    if len(specs) != dim:
        raise UsageError(f"--grid must be given once per axis ({dim}), got {len(specs)}")
    axes = []
    for spec in specs:
        parts = spec.split(":")
        if len(parts) != 3:
            raise UsageError(f"grid spec must be min:max:steps, got {spec!r}")
        try:
            lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise UsageError(f"malformed grid spec {spec!r}") from None
        if steps < 2:
            raise UsageError(f"grid resolution must be >= 2, got {steps}")
        axes.append(np.linspace(lo, hi, steps).tolist())
    return [tuple(p) for p in product(*axes)]


def _thread_count(flag: int | None) -> int:
    if flag is not None:
        n = flag
    elif os.environ.get(THREADS_ENV):
        try:
            n = int(os.environ[THREADS_ENV])
        except ValueError:
            raise UsageError(f"{THREADS_ENV} must be an integer") from None
    else:
        n = os.cpu_count() or 1
    if n < 1:
        raise UsageError("thread count must be >= 1")
    return n


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ellipot",
        description="Potential, field and demagnetizing factors of homogeneous ellipsoids.",
    )
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    def common(p, points=True):
        p.add_argument("--axes", required=True, help="semi-axes a1,a2,...,aN (N >= 3)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--rel-tol", type=float, default=QuadratureConfig.rel_tol)
        p.add_argument("--abs-tol", type=float, default=QuadratureConfig.abs_tol)
        p.add_argument("--max-subdivisions", type=int, default=QuadratureConfig.max_subdivisions)
        p.add_argument("--threads", type=int, default=None)
        if points:
            p.add_argument("--point", action="append", default=[],
                           help="x1,...,xN; repeatable")
            p.add_argument("--points-file", type=Path)

    for name in ("potential", "field", "tau"):
        p = sub.add_parser(name)
        common(p)
        if name == "potential":
            _gravity_args(p)

    p = sub.add_parser("grid")
    common(p, points=False)
    p.add_argument("--grid", action="append", default=[], help="min:max:steps, once per axis")
    p.add_argument("--quantity", choices=("potential", "field"), default="potential")
    _gravity_args(p)

    p = sub.add_parser("demag")
    common(p, points=False)
    p.add_argument("--method", choices=("auto", "integral", "carlson", "triaxial"), default="auto")

    p = sub.add_parser("validate")
    common(p, points=False)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=200_000)
    return parser


def _gravity_args(p):
    p.add_argument("--scale", type=float, default=None, help="hollow shell: scale*E minus E")
    p.add_argument("--G", dest="G", type=float, default=None)
    mass = p.add_mutually_exclusive_group()
    mass.add_argument("--rho", type=float, default=None)
    mass.add_argument("--mass", type=float, default=None)


def _fmt(v):
    if isinstance(v, bool) or v is None:
        return json.dumps(v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


class _Emitter:
    def __init__(self, out, fmt: str, columns: list[str]):
        self.out = out
        self.fmt = fmt
        self.columns = columns
        self._csv = None
        if fmt == "csv":
            self._csv = csv.writer(out, lineterminator="\n")
            self._csv.writerow(columns)

    def emit(self, record: dict, flat: list):
        if self._csv is not None:
            self._csv.writerow([_fmt(v) for v in flat])
        else:
            self.out.write(json.dumps(record) + "\n")


def _point_job(args, e: Ellipsoid, cfg: QuadratureConfig, gravity):
    kind = args.command if args.command != "grid" else args.quantity

    def job(x):
        if kind == "tau":
            pc = classify_point(e, x)
            rec = {"point": list(x), "class": pc.kind.value, "tau": pc.tau}
            return rec, [*x, pc.kind.value, pc.tau], True
        if kind == "field":
            fv = evaluate_field(e, x, cfg)
            g = fv.gradient.tolist()
            rec = {
                "point": list(x),
                "class": fv.point_class.kind.value,
                "tau": fv.point_class.tau,
                "gradient": g,
                "error_estimate": fv.error_estimate,
                "converged": fv.converged,
            }
            return rec, [*x, rec["class"], rec["tau"], *g, rec["error_estimate"], rec["converged"]], fv.converged
        pv = potential_at(e, x, cfg)
        ok = pv.quadrature.converged
        rec = {
            "point": list(x),
            "class": pv.point_class.kind.value,
            "tau": pv.point_class.tau,
            "value": pv.value,
            "error_estimate": pv.quadrature.error_estimate,
            "converged": ok,
        }
        flat = [*x, rec["class"], rec["tau"], rec["value"], rec["error_estimate"], ok]
        if args.scale is not None:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always", ToleranceNotMet)
                rec["hollow_value"] = hollow_shell_potential(e, args.scale, x, cfg)
            ok = ok and not caught
            rec["converged"] = ok
            flat[len(x) + 4] = ok
            flat.append(rec["hollow_value"])
        if gravity is not None:
            rec["gravitational_potential"] = gravitational_potential(e, gravity, x, cfg)
            flat.append(rec["gravitational_potential"])
        return rec, flat, ok

    return job


def _columns(args, dim: int) -> list[str]:
    kind = args.command if args.command != "grid" else args.quantity
    coords = [f"x{i + 1}" for i in range(dim)]
    if kind == "tau":
        return coords + ["class", "tau"]
    if kind == "field":
        return coords + ["class", "tau"] + [f"g{i + 1}" for i in range(dim)] + [
            "error_estimate", "converged"]
    cols = coords + ["class", "tau", "value", "error_estimate", "converged"]
    if args.scale is not None:
        cols.append("hollow_value")
    if args.G is not None:
        cols.append("gravitational_potential")
    return cols


def _gravity(args):
    if args.G is None:
        if args.rho is not None or args.mass is not None:
            raise UsageError("--rho/--mass require --G")
        return None
    if args.rho is None and args.mass is None:
        raise UsageError("--G requires --rho or --mass")
    return GravityConfig(args.G, rho=args.rho, total_mass=args.mass)


def _run(args, out) -> int:
    for name in ("scale", "G", "rho", "mass"):
        if not hasattr(args, name):
            setattr(args, name, None)
    e = make_ellipsoid(_floats(args.axes, "axes"))
    cfg = QuadratureConfig(rel_tol=args.rel_tol, abs_tol=args.abs_tol,
                           max_subdivisions=args.max_subdivisions)

    if args.command == "demag":
        P = demag_factors(e, args.method, cfg)
        if args.format == "csv":
            _Emitter(out, "csv", ["P1", "P2", "P3", "trace"]).emit({}, [*P.factors, P.trace])
        else:
            out.write(json.dumps({"axes": list(e.semi_axes), "P": list(P.factors),
                                  "trace": P.trace}) + "\n")
        return 0 if (not P.quadrature or P.converged) else 2

    if args.command == "validate":
        if args.samples < 1000:
            raise UsageError("--samples must be >= 1000")
        checks = run_validation(e, seed=args.seed, samples=args.samples, cfg=cfg)
        emitter = _Emitter(out, args.format, ["check", "passed", "max_error", "tolerance", "cases"])
        for c in checks:
            d = c.as_dict()
            emitter.emit(d, list(d.values()))
        failed = sum(not c.passed for c in checks)
        if args.format == "json":
            out.write(json.dumps({"summary": {"axes": list(e.semi_axes), "seed": args.seed,
                                              "passed": len(checks) - failed,
                                              "failed": failed}}) + "\n")
        return 0 if failed == 0 else 1

    if args.command == "grid":
        points = parse_grid(args.grid, e.dim)
    else:
        points = [tuple(_floats(p, "point")) for p in args.point]
        if args.points_file is not None:
            points += parse_points_file(args.points_file, e.dim)
        if not points:
            raise UsageError("no points given (use --point or --points-file)")
        for p in points:
            if len(p) != e.dim:
                raise DimensionMismatch(f"point {p} has {len(p)} coordinates, ellipsoid has {e.dim}")

    gravity = _gravity(args)
    if args.scale is not None and not args.scale > 1:
        raise UsageError("--scale must exceed 1")
    job = _point_job(args, e, cfg, gravity)
    threads = _thread_count(args.threads)
    emitter = _Emitter(out, args.format, _columns(args, e.dim))
    all_ok = True
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ToleranceNotMet)
        if threads > 1 and len(points) > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = pool.map(job, points)
                for rec, flat, ok in results:
                    emitter.emit(rec, flat)
                    all_ok = all_ok and ok
        else:
            for p in points:
                rec, flat, ok = job(p)
                emitter.emit(rec, flat)
                all_ok = all_ok and ok
    return 0 if all_ok else 2


_VALUE_FLAGS = ("--point", "--grid", "--axes")


def _attach_negative_values(argv: list[str]) -> list[str]:
    """Rewrite ``--point -1,0,0`` as ``--point=-1,0,0`` so argparse accepts it."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-") \
                and argv[i + 1][1:2] in "0123456789.":
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def run(argv=None, out=None, err=None) -> int:
    """Entry point returning the exit status; output goes to ``out``."""
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = _build_parser()
    try:
        args = parser.parse_args(_attach_negative_values(list(sys.argv[1:] if argv is None else argv)))
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        return _run(args, out)
    except (UsageError, ValueError, OSError) as exc:
        err.write(f"ellipot {args.command}: error: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
