"""Command-line entry point: pyembed --questions ... --model ... --out ..."""

from __future__ import annotations

import argparse
import sys

from .encoder import EncoderConfig, EncoderError, encode_file


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # exit 1 on usage errors, not 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="pyembed",
        description="Encode questions.jsonl with a sentence-transformer and write SOCV vectors.",
    )
    p.add_argument("--questions", required=True, help="questions.jsonl input path")
    p.add_argument("--model", required=True, help="sentence-transformer name or local path")
    p.add_argument("--batch-size", type=int, default=64)
    p.add_argument("--dim", type=int, default=768, help="expected model output width")
    p.add_argument(
        "--no-normalize",
        action="store_true",
        help="store raw model outputs instead of unit-normalized vectors",
    )
    p.add_argument("--out", required=True, help="SOCV output path")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = EncoderConfig(
            model_name=args.model,
            batch_size=args.batch_size,
            dim=args.dim,
            normalize=not args.no_normalize,
        )
        count = encode_file(args.questions, cfg, args.out)
    except (EncoderError, OSError) as exc:
        print(f"pyembed: error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {count} vectors to {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
