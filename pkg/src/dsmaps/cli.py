"""Command-line front end: ``dsmaps classify | region | sweep | verify``."""
from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import itertools
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .classify import classify
from .errors import ConsistencyError, DsmapsError, InputError
from .model import BirkhoffParams, WMatrix, parse_w_json, w_from_birkhoff
from .numerics import PROFILES, default_tolerance
from .region import RegionConfig, assemble_region
from .render import region_csv, region_svg
from .verify import run_verify

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CONSISTENCY = 0, 1, 2, 3

SWEEP_COLUMNS = (
    "index", "a", "b", "c", "d", "e", "f", "w",
    "positive", "cp", "decomposable", "positivity_basis", "decomposability_basis",
    "vertex", "edge", "interior", "hessian", "gate", "witness_eigenvalue", "witness_value", "error",
)
AXES = ("a", "b", "c", "d", "e")


def _floats(text: str, n: int, what: str) -> list[float]:
    parts = [p for p in text.replace(",", " ").split() if p]
    if len(parts) != n:
        raise InputError(f"{what} needs {n} numbers, got {len(parts)}")
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise InputError(f"{what}: {exc}") from None


def _tolerance(args):
    tol = PROFILES[args.profile] if args.profile else default_tolerance()
    overrides = {k: getattr(args, k) for k in ("eps_psd", "eps_eq", "eps_root") if getattr(args, k) is not None}
    return tol.with_overrides(**overrides) if overrides else tol


def _read_w(args, tol) -> WMatrix:
    given = [x for x in (args.circulant, args.birkhoff, args.matrix, args.file) if x is not None]
    if len(given) != 1:
        raise InputError("give exactly one of --circulant, --birkhoff, --matrix, --file")
    if args.circulant is not None:
        return w_from_birkhoff(BirkhoffParams(*_floats(args.circulant, 3, "--circulant")), tol)
    if args.birkhoff is not None:
        return w_from_birkhoff(BirkhoffParams(*_floats(args.birkhoff, 6, "--birkhoff")), tol)
    if args.matrix is not None:
        return WMatrix(_floats(" ".join(args.matrix), 9, "--matrix"), tol=tol)
    try:
        text = sys.stdin.read() if args.file == "-" else Path(args.file).read_text()
        data = json.loads(text)
    except OSError as exc:
        raise InputError(f"cannot read {args.file}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{args.file} is not valid JSON: {exc}") from None
    return parse_w_json(data, tol)


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror}") from None


def cmd_classify(args) -> int:
    tol = _tolerance(args)
    W = _read_w(args, tol)
    result = classify(W, search=not args.no_search, certify=not args.no_certify)
    payload = result.to_dict()
    payload["tolerance"] = dataclasses.asdict(tol)
    _write(args.output, json.dumps(payload, indent=2) + "\n")
    return EXIT_OK


def cmd_region(args) -> int:
    tol = _tolerance(args)
    for name in ("a", "b", "c"):
        v = getattr(args, name)
        if not math.isfinite(v):
            raise InputError(f"{name} must be finite")
    config = RegionConfig(arc_samples=args.arc_samples, circle_samples=args.circle_samples,
                          cp_samples=args.cp_samples, fold=args.fold)
    region = assemble_region(args.a, args.b, args.c, config, tol)
    for w in region.warnings:
        print(f"warning: {w}", file=sys.stderr)
    out = Path(args.output or f"region_{args.a:g}_{args.b:g}_{args.c:g}.svg")
    stem = out.with_suffix("") if out.suffix.lower() in (".svg", ".csv", ".json") else out
    formats = args.format or (["json"] if out.suffix.lower() == ".json" else ["svg", "csv"])
    written = []
    for fmt in formats:
        path = stem.with_suffix("." + fmt)
        text = {"svg": region_svg, "csv": region_csv,
                "json": lambda r: json.dumps(r.to_dict(), indent=1) + "\n"}[fmt](region)
        _write(str(path), text)
        written.append(str(path))
    summary = {"params": {"a": args.a, "b": args.b, "c": args.c}, "families": region.nonempty_families(),
               "degenerate": region.degenerate, "warnings": region.warnings, "written": written}
    print(json.dumps(summary))
    return EXIT_OK


def parse_axis(spec, name: str) -> list[float] | str:
    """``start:stop:num`` (inclusive linspace), a single number, a list, or ``=x`` to tie to axis x."""
    if isinstance(spec, (int, float)):
        return [float(spec)]
    if isinstance(spec, list):
        try:
            return [float(v) for v in spec]
        except (TypeError, ValueError):
            raise InputError(f"axis {name}: list entries must be numbers") from None
    text = str(spec).strip()
    if text.startswith("="):
        target = text[1:]
        if target not in AXES:
            raise InputError(f"axis {name}: cannot tie to unknown axis {target!r}")
        return target
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return [float(v) for v in text.split(",") if v.strip()]
        if len(parts) == 3:
            return _linspace(float(parts[0]), float(parts[1]), parts[2])
    except ValueError as exc:
        raise InputError(f"axis {name}: {exc}") from None
    raise InputError(f"axis {name}: expected start:stop:num, a number list, or =axis")


def _linspace(start, stop, num) -> list[float]:
    n = float(num)
    if not n.is_integer() or n < 0:
        raise InputError(f"grid size must be a nonnegative integer, got {num}")
    return [float(v) for v in np.linspace(float(start), float(stop), int(n))]


def build_grid(spec: dict) -> list[tuple[float, ...]]:
    """Grid points (a, b, c, d, e) in row-major order of the axes a, b, c, d, e; f = -d - e."""
    axes = {name: parse_axis(spec.get(name, 0.0), name) for name in AXES}
    free = [n for n in AXES if not isinstance(axes[n], str)]
    for n in AXES:
        if isinstance(axes[n], str) and isinstance(axes[axes[n]], str):
            raise InputError(f"axis {n} is tied to {axes[n]}, which is itself tied")
    points = []
    for combo in itertools.product(*(axes[n] for n in free)):
        vals = dict(zip(free, combo))
        for n in AXES:
            if isinstance(axes[n], str):
                vals[n] = vals[axes[n]]
        points.append(tuple(vals[n] for n in AXES))
    if not points:
        raise InputError("sweep grid is empty")
    return points


def sweep_point(point, tol=None, certify: bool = True) -> dict:
    a, b, c, d, e = point
    f = -(d + e) + 0.0
    row = {"a": a, "b": b, "c": c, "d": d, "e": e, "f": f}
    try:
        W = w_from_birkhoff(BirkhoffParams(a, b, c, d, e, f), tol)
        res = classify(W, search=True, certify=certify)
        pv, dv = res.positivity, res.decomposability
        row.update(
            w=W.w, positive=pv.positive.value, cp=_yn(pv.cp), decomposable=dv.decomposable.value,
            positivity_basis=pv.basis, decomposability_basis=dv.basis,
            vertex=_yn(all(pv.vertex)), edge=_yn(all(pv.edge)), interior=_yn(pv.interior),
            hessian=_yn(pv.hessian), gate=_yn(pv.gate),
            witness_eigenvalue=pv.witness_eigenvalue, witness_value=dv.witness_value,
        )
    except DsmapsError as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def _yn(flag) -> str:
    return "yes" if flag else "no"


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _sweep_chunk(args):
    points, tol, certify = args
    return [sweep_point(p, tol, certify) for p in points]


def run_sweep(points, tol=None, certify: bool = True, jobs: int = 1) -> list[dict]:
    """Evaluate every point; output order equals grid order regardless of ``jobs``."""
    if jobs <= 1:
        rows = [sweep_point(p, tol, certify) for p in points]
    else:
        size = max(1, len(points) // (jobs * 8))
        chunks = [(points[i:i + size], tol, certify) for i in range(0, len(points), size)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = [r for chunk in pool.map(_sweep_chunk, chunks) for r in chunk]
    for i, row in enumerate(rows):
        row["index"] = i
    return rows


def sweep_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in rows:
        writer.writerow([_cell(row.get(col)) for col in SWEEP_COLUMNS])
    return buf.getvalue()


def cmd_sweep(args) -> int:
    tol = _tolerance(args)
    spec = {}
    if args.grid:
        try:
            spec = json.loads(Path(args.grid).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read grid file {args.grid}: {exc}") from None
        if not isinstance(spec, dict):
            raise InputError("grid file must hold a JSON object")
        unknown = set(spec) - set(AXES) - {"f"}
        if unknown:
            raise InputError(f"unknown grid axes: {sorted(unknown)}")
        if "f" in spec:
            raise InputError("f is fixed by the gauge f = -d - e; sweep d and e instead")
    for name in AXES:
        v = getattr(args, name)
        if v is not None:
            spec[name] = v
    if not spec:
        raise InputError("sweep grid is empty: give at least one axis")
    points = build_grid(spec)
    rows = run_sweep(points, tol, certify=not args.no_certify, jobs=args.jobs)
    _write(args.output, sweep_csv(rows))
    failed = sum(1 for r in rows if r.get("error"))
    print(f"{len(rows)} points, {failed} with errors", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.counts is not None and args.counts <= 0:
        raise InputError("--counts must be positive")
    report = run_verify(seed=args.seed, counts=args.counts, adversarial=args.adversarial,
                        samples=args.samples, depth=args.depth)
    _write(args.output, json.dumps(report, indent=2) + "\n")
    return EXIT_OK if report["passed"] else EXIT_CONSISTENCY


def _add_tolerance(p):
    g = p.add_argument_group("tolerances")
    g.add_argument("--profile", choices=sorted(PROFILES), default=None,
                   help="tolerance profile (default: $DSMAPS_TOLERANCE or 'default')")
    g.add_argument("--eps-psd", type=float, default=None)
    g.add_argument("--eps-eq", type=float, default=None)
    g.add_argument("--eps-root", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dsmaps", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify a single map")
    p.add_argument("--circulant", metavar="A,B,C")
    p.add_argument("--birkhoff", metavar="A,B,C,D,E,F")
    p.add_argument("--matrix", nargs="+", metavar="W", help="9 entries, row-major")
    p.add_argument("--file", help="JSON file ('-' for stdin)")
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--no-search", action="store_true", help="skip the numeric witness search")
    p.add_argument("--no-certify", action="store_true", help="skip building the explicit split")
    _add_tolerance(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("region", help="boundary curves of the admissible (d,e,f) region")
    p.add_argument("a", type=float)
    p.add_argument("b", type=float)
    p.add_argument("c", type=float)
    p.add_argument("-o", "--output", default=None, help="output path; the suffix is replaced per format")
    p.add_argument("--format", action="append", choices=("svg", "csv", "json"))
    p.add_argument("--fold", choices=("three-way", "two-way"), default="three-way")
    p.add_argument("--arc-samples", type=int, default=201)
    p.add_argument("--circle-samples", type=int, default=601)
    p.add_argument("--cp-samples", type=int, default=601)
    _add_tolerance(p)
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("sweep", help="classify every point of a parameter grid (CSV)")
    for name in AXES:
        p.add_argument(f"--{name}", default=None, metavar="SPEC",
                       help="start:stop:num, comma list, or =axis (tie to another axis)")
    p.add_argument("--grid", help="JSON object mapping axes to specs")
    p.add_argument("-o", "--output", default=None)
    p.add_argument("-j", "--jobs", type=int, default=1)
    p.add_argument("--no-certify", action="store_true")
    _add_tolerance(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the oracle agreement suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--counts", type=int, default=None, help="cap per family (quick, partial run)")
    p.add_argument("--adversarial", action="store_true", help="sample maps at edge saturation")
    p.add_argument("--samples", type=int, default=10_000, help="rank-one probes per map")
    p.add_argument("--depth", type=int, default=200, help="simplex grid depth for max f")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConsistencyError as exc:
        print(f"consistency failure: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
