"""CLI: keyvol-extract extract / query."""

from __future__ import annotations

import argparse
import sys

from .encoders import DEFAULT_ENCODER
from .errors import ExtractError
from .extract import ExtractorConfig, embed_query, extract


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="keyvol-extract",
        description="Sample video frames and export embeddings as MXIF",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="video -> PREFIX.mxif + PREFIX.manifest")
    p.add_argument("--video", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--fps", type=float, help="sample at this rate")
    group.add_argument("--frames", type=int, help="sample exactly N frames")
    p.add_argument("--encoder", default=DEFAULT_ENCODER,
                   help="encoder id, or 'pixel' for the model-free encoder")
    p.add_argument("--device", default=None)
    p.add_argument("--out", required=True, help="output path prefix")
    p.set_defaults(func=_run_extract)

    p = sub.add_parser("query", help="text -> single-row MXIF embedding")
    p.add_argument("--text", required=True)
    p.add_argument("--encoder", default=DEFAULT_ENCODER)
    p.add_argument("--device", default=None)
    p.add_argument("--out", required=True, help="output MXIF path")
    p.set_defaults(func=_run_query)

    return parser


def _run_extract(args) -> int:
    cfg = ExtractorConfig(video=args.video, fps=args.fps, frames=args.frames,
                          encoder=args.encoder, device=args.device,
                          out_prefix=args.out)
    mxif_path, manifest_path = extract(cfg)
    print(mxif_path)
    print(manifest_path)
    return 0


def _run_query(args) -> int:
    cfg = ExtractorConfig(video="", frames=1, encoder=args.encoder,
                          device=args.device)
    print(embed_query(args.text, cfg, args.out))
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ExtractError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
