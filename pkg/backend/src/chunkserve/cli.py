"""Start the reference chunk-translation server."""

from __future__ import annotations

import argparse
import logging
import sys

from .adapters import GlossAdapter, load_seq2seq_adapter
from .app import create_app


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chunkserve",
        description="Reference wire-protocol server for chunk translation",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--host", default="127.0.0.1", help="bind address")
    parser.add_argument("--port", type=int, default=8000, help="bind port")
    parser.add_argument("--model", choices=["gloss", "seq2seq"], default="gloss",
                        help="model adapter to host")
    parser.add_argument("--dict", default=None, help="dictionary JSON (gloss mode)")
    parser.add_argument("--checkpoint", default=None, help="model directory (seq2seq mode)")
    parser.add_argument("--beams", type=int, default=1, help="beam size for seq2seq decoding")
    parser.add_argument("--max-batch", type=int, default=64,
                        help="largest batch handed to the model at once")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.model == "gloss":
            if not args.dict:
                raise ValueError("gloss mode needs --dict")
            adapter = GlossAdapter.from_file(args.dict)
        else:
            if not args.checkpoint:
                raise ValueError("seq2seq mode needs --checkpoint")
            adapter = load_seq2seq_adapter(args.checkpoint, beams=args.beams)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    import uvicorn

    uvicorn.run(
        create_app(adapter, max_batch=args.max_batch),
        host=args.host,
        port=args.port,
        log_level="warning",
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
