"""Command-line entry point: ``orthrange {gen,build,query,verify,bench}``.

Exit codes: 0 ok, 1 verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from .. import kernels
from ..core import ContractError, QueryBox, rank_space_reduce_array
from . import bench, datasets, formats, verify

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# structure -> (input dimension, input is rectangles)
STRUCTURES = {
    "range2d": (2, False),
    "range3d4": (3, False),
    "range3d5": (3, False),
    "range3d6": (3, False),
    "dominance": (None, False),
    "maxima": (None, False),
    "enclosure": (2, True),
    "pl_2d": (2, True),
    "linfty": (None, False),
}


class UsageError(Exception):
    pass


def _params(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--params expects key=val, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _write(text: str, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_input(path, dim, rects, fmt):
    if rects:
        arr, _ = formats.load(path, 4, fmt)
        return formats.corners_to_rects(arr)
    arr, _ = formats.load(path, dim, fmt)
    return arr


# ---------------------------------------------------------------------------
# subcommands


def cmd_gen(args) -> int:
    ds = datasets.generate(args.dist, args.n, args.dim, args.seed)
    data = formats.rects_to_corners(ds.data) if ds.is_rects else ds.data
    if not args.out:
        raise UsageError("gen needs --out")
    formats.save(args.out, data, args.format)
    return EXIT_OK


def _build(structure, data, params):
    from ..ball_inheritance import FAST_QUERY
    from ..range2d import RangeReport2D
    from ..range3d import Range3D

    if structure == "range2d":
        ranked, rmap = rank_space_reduce_array(data, np.arange(len(data)))
        s = RangeReport2D(ranked, int(params.get("B", 2)), params.get("mode", FAST_QUERY))
        return s, rmap, s.space_bits()["total"] // 8
    if structure.startswith("range3d"):
        s = Range3D(data, int(structure[-1]), float(params.get("eps", 0.5)),
                    float(params.get("c_exp", 3.0)))
        return s, None, s.space_words() * 8
    return None, None, 0


def cmd_build(args) -> int:
    dim, rects = STRUCTURES[args.structure]
    data = _load_input(args.input, dim or args.dim, rects, args.input_format)
    params = _params(args.params)
    t0 = time.perf_counter()
    _, _, space = _build(args.structure, data, params)
    summary = {"structure": args.structure, "n": len(data), "backend": kernels.name(),
               "build_time_s": round(time.perf_counter() - t0, 6), "space_bytes": int(space),
               "params": params}
    _write(json.dumps(summary) + "\n", args.out)
    return EXIT_OK


def _box_from_row(row, dim):
    lo, hi = row[:dim], row[dim:]
    return QueryBox.closed(lo, hi)


def _rank_box(rmap, box):
    (x1, y1), (x2, y2) = box.bounds()
    lo = (rmap.lower_rank(0, x1), rmap.lower_rank(1, y1))
    hi = (rmap.upper_rank(0, x2), rmap.upper_rank(1, y2))
    if lo[0] > hi[0] or lo[1] > hi[1]:
        return None
    return QueryBox.closed(lo, hi)


def cmd_query(args) -> int:
    from .. import offline

    structure = args.structure
    dim, rects = STRUCTURES[structure]
    dim = dim or args.dim
    data = _load_input(args.input, dim, rects, args.input_format)
    params = _params(args.params)
    lines = []
    if structure in ("range2d", "range3d4", "range3d5", "range3d6"):
        if not args.queries:
            raise UsageError(f"{structure} query needs --queries (boxes as lo and hi corners)")
        boxes, _ = formats.load(args.queries, 2 * dim, args.input_format)
        s, rmap, _ = _build(structure, data, params)
        for row in boxes.tolist():
            box = _box_from_row(row, dim)
            if structure == "range2d":
                rb = _rank_box(rmap, box)
                ids = sorted(p.id for p in s.report(rb)) if rb is not None else []
            else:
                sides = int(structure[-1])
                lo = list(box.lo)
                if sides < 6:
                    lo[2] = None
                if sides < 5:
                    lo[1] = None
                ids = sorted(s.report_ids(QueryBox(tuple(lo), box.hi)).tolist())
            lines.append(" ".join(map(str, ids)))
    elif structure in ("dominance", "linfty"):
        if not args.queries:
            raise UsageError(f"{structure} needs --queries")
        Q, _ = formats.load(args.queries, dim, args.input_format)
        seed = int(params.get("seed", args.seed))
        if structure == "dominance":
            for i, j in sorted(offline.offline_dominance(data, Q, seed=seed).pairs()):
                lines.append(f"{i} {j}")
        else:
            r = int(params.get("r", 0))
            lines.append(str(offline.linfty_closest_pair_decision(data, Q, r, dim, seed)).lower())
    elif structure == "maxima":
        lines.extend(str(i) for i in sorted(offline.maxima(data, dim, seed=args.seed).tolist()))
    elif structure == "enclosure":
        for a, b in sorted(offline.rectangle_enclosure(data, seed=args.seed).pairs()):
            lines.append(f"{a} {b}")
    elif structure == "pl_2d":
        if not args.queries:
            raise UsageError("pl_2d needs --queries")
        Q, _ = formats.load(args.queries, 2, args.input_format)
        lines.extend(str(v) for v in offline.offline_pl_2d(data, Q).tolist())
    _write("".join(line + "\n" for line in lines), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = verify.load_config(args.config)
    if args.modules:
        cfg.modules = tuple(args.modules.replace(",", " ").split())
        bad = [m for m in cfg.modules if m not in verify.MODULES]
        if bad:
            raise UsageError(f"unknown module {bad[0]!r}")
    if args.seed_given:
        cfg.seeds = (args.seed,)
    if args.n:
        cfg.n = args.n
    report = verify.run_verify(cfg, out=sys.stderr if args.out == "-" else sys.stdout)
    if args.out:
        _write(report.to_json() + "\n", None if args.out == "-" else args.out)
    print("PASS" if report.passed else "FAIL", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_bench(args) -> int:
    if args.config:
        with open(args.config) as fh:
            cfg = bench.parse_config(fh.read(), args.config)
    else:
        cfg = bench.BenchConfig()
    if args.structure:
        cfg.structure = tuple(args.structure.replace(",", " ").split())
    if args.n:
        cfg.n = (args.n,)
    if args.seed_given:
        cfg.seed = args.seed
    if args.dim_given:
        cfg.dim = args.dim
    bench.apply_params(cfg, _params(args.params))
    for name in cfg.structure:
        if name not in bench.STRUCTURES:
            raise UsageError(f"unknown bench structure {name!r}; have {sorted(bench.STRUCTURES)}")
    if args.out:
        with open(args.out, "w", newline="") as fh:
            bench.write_csv(bench.run_bench(cfg), fh)
    else:
        bench.write_csv(bench.run_bench(cfg), sys.stdout)
    return EXIT_OK


# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--n", type=int, default=None)
    common.add_argument("--dim", type=int, default=2)
    common.add_argument("--dist", default="uniform", choices=datasets.DISTRIBUTIONS)
    common.add_argument("--structure", default=None)
    common.add_argument("--params", nargs="*", default=[], metavar="KEY=VAL")
    common.add_argument("--format", default="text", choices=("text", "bin"))
    common.add_argument("--out", default=None)
    common.add_argument("--backend", default=None, choices=kernels.available())

    p = _Parser(prog="orthrange", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("gen", parents=[common], help="write a seeded dataset")
    for name in ("build", "query"):
        sp = sub.add_parser(name, parents=[common], help=f"{name} a structure from a point file")
        sp.add_argument("--input", required=True)
        sp.add_argument("--queries", default=None, help="query file (boxes or points)")
        sp.add_argument("--input-format", default=None, choices=("text", "bin"),
                        help="sniffed from the file when omitted")
    sv = sub.add_parser("verify", parents=[common], help="run oracle-equivalence suites")
    sv.add_argument("--config", default=None)
    sv.add_argument("--modules", default=None)
    sb = sub.add_parser("bench", parents=[common], help="write benchmark CSV")
    sb.add_argument("--config", default=None)
    return p


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.seed_given = any(a == "--seed" or a.startswith("--seed=") for a in argv)
    args.dim_given = any(a == "--dim" or a.startswith("--dim=") for a in argv)
    if args.command in ("build", "query"):
        if args.structure not in STRUCTURES:
            print(f"orthrange: --structure must be one of {sorted(STRUCTURES)}", file=sys.stderr)
            return EXIT_USAGE
    if args.command == "gen" and args.n is None:
        print("orthrange: gen needs --n", file=sys.stderr)
        return EXIT_USAGE
    handler = {"gen": cmd_gen, "build": cmd_build, "query": cmd_query,
               "verify": cmd_verify, "bench": cmd_bench}[args.command]
    try:
        if args.backend:
            kernels.set_backend(args.backend)
        return handler(args)
    except (UsageError, ContractError, FileNotFoundError) as exc:
        print(f"orthrange: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
