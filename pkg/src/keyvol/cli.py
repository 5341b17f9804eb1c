"""Command-line interface: select, compare, stats, bench.

Exit codes: 0 success, 2 usage error, 3 file/format error, 4 numerical
failure.  Reports are deterministic JSON; tabular results are also written
as CSV, with optional matplotlib figures rendered alongside.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from pathlib import Path

import numpy as np

from . import baselines, io, plots, synthetic
from .errors import FormatError, KeyvolError
from .maxvol import MaxvolParams, rect_maxvol
from .linalg import truncated_svd
from .pipeline import SelectionConfig, select

EXIT_USAGE = 2
EXIT_FORMAT = 3
EXIT_NUMERIC = 4


def _add_config_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--rank", type=int, default=8, help="SVD truncation rank")
    p.add_argument("--tol", type=float, default=0.3, help="stopping tolerance")
    p.add_argument("--min", dest="min_out", type=int, default=1,
                   help="minimum frames to keep")
    p.add_argument("--max", dest="max_out", type=int, default=64,
                   help="maximum frames to keep")
    p.add_argument("--mode", choices=("fast", "slow", "chunked"), default="fast")
    p.add_argument("--pool", type=int, default=128,
                   help="oversample pool size (slow mode)")
    p.add_argument("--chunks", type=int, default=32,
                   help="number of chunks (chunked mode)")
    p.add_argument("--tol-convention", choices=("sqrt1p", "literal"),
                   default="sqrt1p")


def _add_io_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--embeddings", required=True, help="input matrix path")
    p.add_argument("--format", choices=("binary", "csv"), default=None,
                   help="input format (default: inferred from extension)")
    p.add_argument("--out", help="report output path")
    p.add_argument("--plot", action="store_true",
                   help="render figures next to the report")


def _config(args) -> SelectionConfig:
    return SelectionConfig(
        rank=args.rank, tol=args.tol, min_out=args.min_out,
        max_out=args.max_out, mode=args.mode, pool=args.pool,
        chunks=args.chunks, tol_convention=args.tol_convention,
    )


def _figure_path(out: str, suffix: str) -> Path:
    out = Path(out)
    return out.with_name(out.stem + suffix)


def cmd_select(args) -> int:
    q = io.load_embeddings(args.embeddings, args.format)
    report = select(q, _config(args))
    if args.out:
        io.write_report(report.to_dict(), args.out, canonical=args.canonical)
        if args.plot:
            plots.plot_volume_growth(
                report.steps, _figure_path(args.out, "_volume.png"))
    for i in report.selected_indices:
        print(i)
    return 0


def cmd_compare(args) -> int:
    q = io.load_embeddings(args.embeddings, args.format)
    query = io.read_embeddings(args.query)[0] if args.query else None
    result = baselines.compare_strategies(
        q, _config(args), query=query, theta=args.theta)
    if args.out:
        io.write_report(result, args.out, canonical=args.canonical)
        _write_compare_csv(result, _figure_path(args.out, ".csv"))
        if args.plot:
            strat = result["strategies"]
            plots.plot_neighbor_cosine_hist(
                {name: m["neighbor_cosine"] for name, m in strat.items()},
                _figure_path(args.out, "_cosine.png"))
            plots.plot_selection_timeline(
                q.shape[0], {name: m["indices"] for name, m in strat.items()},
                _figure_path(args.out, "_timeline.png"))
    for name, m in result["strategies"].items():
        mean = m["mean_neighbor_cosine"]
        print(f"{name}\t{m['selected_count']}\t"
              f"{'' if mean is None else f'{mean:.4f}'}")
    return 0


def _write_compare_csv(result: dict, path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["strategy", "selected_count", "mean_neighbor_cosine",
                    "clip_score"])
        for name, m in result["strategies"].items():
            w.writerow([name, m["selected_count"],
                        m["mean_neighbor_cosine"], m.get("clip_score", "")])


def cmd_stats(args) -> int:
    q = io.load_embeddings(args.embeddings, args.format)
    indices = list(range(q.shape[0]))
    cosines = baselines.neighbor_cosine(q, indices)
    counts, edges = np.histogram(cosines, bins=args.bins, range=(-1.0, 1.0))
    result = {
        "bin_edges": [float(e) for e in edges],
        "counts": [int(c) for c in counts],
        "mean_neighbor_cosine": float(np.mean(cosines)) if cosines else None,
        "frame_count": q.shape[0],
    }
    if args.out:
        io.write_report(result, args.out)
        with open(_figure_path(args.out, ".csv"), "w", newline="",
                  encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["bin_left", "bin_right", "count"])
            for j, c in enumerate(counts):
                w.writerow([edges[j], edges[j + 1], c])
        if args.plot:
            plots.plot_neighbor_cosine_hist(
                {"input": cosines}, _figure_path(args.out, "_hist.png"))
    for j, c in enumerate(counts):
        print(f"{edges[j]:.3f}\t{edges[j + 1]:.3f}\t{c}")
    return 0


BENCH_CASES = (
    ("128x768", 128, 768, None),
    ("256x768", 256, 768, None),
    ("512x768", 512, 768, None),
    ("chunked_32x32", 1024, 768, 32),
)


def _bench_case(n: int, d: int, chunks, seed: int, repeats: int,
                cfg: SelectionConfig) -> dict:
    q = synthetic.random_stream(n, d, seed)
    svd_ms, maxvol_ms, total_ms = [], [], []
    for _ in range(repeats):
        if chunks is None:
            t0 = time.perf_counter()
            basis = truncated_svd(q, min(cfg.rank, min(n, d))).basis
            t1 = time.perf_counter()
            rect_maxvol(basis, MaxvolParams(
                tau=cfg.tau, min_rows=cfg.min_out, max_rows=cfg.max_out))
            t2 = time.perf_counter()
            svd_ms.append((t1 - t0) * 1e3)
            maxvol_ms.append((t2 - t1) * 1e3)
            total_ms.append((t2 - t0) * 1e3)
        else:
            ccfg = SelectionConfig(
                rank=cfg.rank, tol=cfg.tol, min_out=cfg.min_out,
                max_out=cfg.max_out, mode="chunked", chunks=chunks)
            t0 = time.perf_counter()
            rep = select(q, ccfg)
            t1 = time.perf_counter()
            svd_ms.append(rep.timing_ms["svd_ms"])
            maxvol_ms.append(rep.timing_ms["maxvol_ms"])
            total_ms.append((t1 - t0) * 1e3)
    return {
        "median_svd_ms": float(np.median(svd_ms)),
        "median_maxvol_ms": float(np.median(maxvol_ms)),
        "median_ms": float(np.median(total_ms)),
        "p95_ms": float(np.percentile(total_ms, 95)),
    }


def run_bench(seed: int = 0, repeats: int = 20,
              cfg: SelectionConfig | None = None) -> list[dict]:
    cfg = cfg or SelectionConfig()
    rows = []
    for case, n, d, chunks in BENCH_CASES:
        row = {"case": case, "rows": n, "cols": d}
        row.update(_bench_case(n, d, chunks, seed, repeats, cfg))
        rows.append(row)
    return rows


def cmd_bench(args) -> int:
    rows = run_bench(seed=args.seed, repeats=args.repeats)
    if args.out:
        io.write_report({"cases": rows, "repeats": args.repeats,
                         "seed": args.seed}, args.out)
        with open(_figure_path(args.out, ".csv"), "w", newline="",
                  encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(rows[0].keys())
            for row in rows:
                w.writerow(row.values())
        if args.plot:
            plots.plot_bench(rows, _figure_path(args.out, "_times.png"))
    print("case\tmedian_ms\tp95_ms\tmedian_maxvol_ms")
    for row in rows:
        print(f"{row['case']}\t{row['median_ms']:.2f}\t{row['p95_ms']:.2f}\t"
              f"{row['median_maxvol_ms']:.2f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="keyvol",
        description="Keyframe selection by maximal-volume submatrix search",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("select", help="select keyframes from an embedding matrix")
    _add_io_args(p)
    _add_config_args(p)
    p.add_argument("--canonical", action="store_true",
                   help="omit timing fields from the report")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("compare", help="compare selection strategies")
    _add_io_args(p)
    _add_config_args(p)
    p.add_argument("--query", help="single-row MXIF query embedding")
    p.add_argument("--theta", type=float, default=0.5,
                   help="similarity threshold for the scan baseline")
    p.add_argument("--canonical", action="store_true")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("stats", help="neighbor-cosine histogram of the input")
    _add_io_args(p)
    p.add_argument("--bins", type=int, default=40)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("bench", help="micro-benchmark the selection step")
    p.add_argument("--out", help="report output path")
    p.add_argument("--plot", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeats", type=int, default=20)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (FormatError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except KeyvolError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
