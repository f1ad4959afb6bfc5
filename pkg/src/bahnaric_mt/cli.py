"""Command-line surface: one subcommand per pipeline stage.

Exit codes: 0 success, 1 usage error, 2 data error, 3 backend error.
All randomized subcommands take a --seed (default 0) so reruns reproduce
byte-identical outputs.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
from pathlib import Path

from . import __version__
from .augmenter import AugmentationTask, AugmentConfig, augment_dataset
from .corpus import (
    BilingualDictionary,
    CorpusFormat,
    SplitSpec,
    load_dictionary,
    load_parallel_corpus,
    save_parallel_corpus,
    split_dataset,
    tokenize,
)
from .disambiguator import (
    CooccurrenceIndex,
    DisambiguationConfig,
    TieBreak,
    build_cooccurrence_index,
)
from .errors import BackendError, DataError
from .evaluator import corpus_bleu, evaluate_files
from .pipeline import (
    BackendEndpoint,
    TranslationResources,
    mock_backend,
    remote_backend,
    translate_corpus,
)
from .segmenter import (
    Anchor,
    Chunk,
    FrequencyLexicon,
    build_frequency_lexicon,
    classify_segments,
    segment_sentence,
)


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the CLI contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"error: {message}\n")


def _infer_format(path: str, explicit: str | None) -> CorpusFormat:
    if explicit:
        return CorpusFormat(explicit)
    suffix = Path(path).suffix.lower()
    return CorpusFormat.JSONL if suffix in {".jsonl", ".json"} else CorpusFormat.TSV


def _read_sentences(path: str, fmt: str) -> list[str]:
    with io.open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if fmt == "text":
        return lines
    sentences = []
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DataError(f"invalid JSON record: {exc.msg}", line=line_no) from exc
        text = record.get("text", record.get("src"))
        if text is None:
            raise DataError("record carries neither 'text' nor 'src'", line=line_no)
        sentences.append(str(text))
    return sentences


def _read_eval_side(path: str, fmt: str) -> list[list[str]]:
    if fmt == "text":
        with io.open(path, "r", encoding="utf-8") as fh:
            return [[t.surface for t in tokenize(line)] for line in fh.read().splitlines()]
    corpus = load_parallel_corpus(path, fmt)
    return [[t.surface for t in pair.target] for pair in corpus.pairs]


def _load_resources(args) -> TranslationResources:
    dictionary = load_dictionary(args.dict) if args.dict else BilingualDictionary({})
    lexicon = FrequencyLexicon.load(args.lexicon) if args.lexicon else FrequencyLexicon({})
    if getattr(args, "cooc", None):
        index = CooccurrenceIndex.load(args.cooc)
    else:
        index = CooccurrenceIndex({}, window=args.window)
    config = DisambiguationConfig(window=args.window, tie_break=TieBreak(args.tie_break))
    return TranslationResources(dictionary, lexicon, index, config)


def _write_lines(path: str | None, lines: list[str]) -> None:
    if path:
        with io.open(path, "w", encoding="utf-8", newline="\n") as fh:
            for line in lines:
                fh.write(line + "\n")
    else:
        for line in lines:
            print(line)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _cmd_split(args) -> int:
    fmt = _infer_format(args.input, args.format)
    corpus = load_parallel_corpus(args.input, fmt)
    spec = SplitSpec(args.train_ratio, args.valid_ratio, args.test_ratio, seed=args.seed)
    train, valid, test = split_dataset(corpus, spec)
    outdir = Path(args.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    for name, part in (("train", train), ("valid", valid), ("test", test)):
        save_parallel_corpus(part, outdir / f"{name}.{fmt.value}", fmt)
    print(json.dumps({"train": len(train), "valid": len(valid), "test": len(test)}))
    return 0


def _cmd_build_lexicon(args) -> int:
    fmt = _infer_format(args.input, args.format)
    corpus = load_parallel_corpus(args.input, fmt)
    side = corpus.source_sentences() if args.side == "source" else corpus.target_sentences()
    lexicon = build_frequency_lexicon(side, max_ngram=args.max_ngram, min_count=args.min_count)
    lexicon.save(args.output)
    print(json.dumps({"entries": len(lexicon)}))
    return 0


def _cmd_build_cooc(args) -> int:
    fmt = _infer_format(args.input, args.format)
    corpus = load_parallel_corpus(args.input, fmt)
    side = corpus.target_sentences() if args.side == "target" else corpus.source_sentences()
    index = build_cooccurrence_index(side, window=args.window)
    index.save(args.output, fmt=args.output_format)
    print(json.dumps({"words": len(index.neighbors)}))
    return 0


def _cmd_segment(args) -> int:
    dictionary = load_dictionary(args.dict) if args.dict else BilingualDictionary({})
    lexicon = FrequencyLexicon.load(args.lexicon) if args.lexicon else FrequencyLexicon({})
    sentences = _read_sentences(args.input, args.format)
    out_lines = []
    for i, text in enumerate(sentences, start=1):
        units = segment_sentence(tokenize(text), lexicon, dictionary)
        segments = []
        for seg in classify_segments(units, dictionary):
            if isinstance(seg, Anchor):
                segments.append(
                    {
                        "kind": "anchor",
                        "text": seg.unit.text,
                        "candidates": [g.text for g in seg.candidates],
                    }
                )
            elif isinstance(seg, Chunk):
                segments.append({"kind": "chunk", "text": seg.text})
            else:
                segments.append({"kind": "literal", "text": seg.token.surface})
        record = {"id": str(i), "text": text, "segments": segments}
        out_lines.append(json.dumps(record, ensure_ascii=False))
    _write_lines(args.output, out_lines)
    return 0


def _parse_tasks(spec: str) -> tuple[AugmentationTask, ...]:
    tasks = []
    for name in spec.split(","):
        name = name.strip()
        if not name:
            continue
        try:
            tasks.append(AugmentationTask(name))
        except ValueError:
            valid = ", ".join(t.value for t in AugmentationTask)
            raise DataError(f"unknown task {name!r} (valid: {valid})")
    if not tasks:
        raise DataError("task list must be non-empty")
    return tuple(tasks)


def _cmd_augment(args) -> int:
    fmt = _infer_format(args.input, args.format)
    corpus = load_parallel_corpus(args.input, fmt)
    tasks = _parse_tasks(args.tasks)
    config = AugmentConfig(
        alpha=args.alpha,
        tasks=tasks,
        seed=args.seed,
        unk_symbol=args.unk,
        tag_synthetic=not args.no_tag,
    )
    dictionary = load_dictionary(args.dict) if args.dict else None
    stats: dict = {}
    augmented = augment_dataset(corpus, config, dictionary=dictionary, stats=stats)
    out_fmt = _infer_format(args.output, args.format)
    save_parallel_corpus(augmented, args.output, out_fmt)
    summary = {"input": len(corpus), "output": len(augmented), **stats}
    if args.chunk_fraction is not None:
        # Partition the augmented corpus for chunked vs complete-sentence
        # training; applying the chunking itself is the trainer's concern.
        spec = SplitSpec(args.chunk_fraction, 0.0, 1.0 - args.chunk_fraction, seed=args.seed)
        chunked, _, plain = split_dataset(augmented, spec)
        out = Path(args.output)
        chunk_path = out.with_name(out.stem + ".chunked" + out.suffix)
        plain_path = out.with_name(out.stem + ".plain" + out.suffix)
        save_parallel_corpus(chunked, chunk_path, out_fmt)
        save_parallel_corpus(plain, plain_path, out_fmt)
        summary["chunked"] = len(chunked)
        summary["plain"] = len(plain)
    print(json.dumps(summary))
    return 0


def _cmd_translate(args) -> int:
    resources = _load_resources(args)
    endpoint_url = os.environ.get("BACKEND_URL") or args.endpoint
    if args.backend == "remote":
        if not endpoint_url:
            raise DataError("remote backend needs --endpoint or BACKEND_URL")
        backend = remote_backend(
            BackendEndpoint(
                endpoint_url,
                timeout_ms=args.timeout,
                max_batch=args.batch,
                retries=args.retries,
            )
        )
    elif args.backend == "mock:identity":
        backend = mock_backend("identity")
    elif args.backend == "mock:gloss":
        backend = mock_backend("gloss", resources.dictionary)
    else:
        raise DataError(f"unknown backend {args.backend!r}")

    sentences = _read_sentences(args.input, args.format)
    results, failures = translate_corpus(sentences, resources, backend, jobs=args.jobs)

    out_lines = []
    trace_lines = []
    for i, result in enumerate(results):
        if result is None:
            out_lines.append("")
            continue
        translation, trace = result
        out_lines.append(translation)
        if args.trace:
            trace_lines.append(
                json.dumps(
                    {
                        "sentence": sentences[i],
                        "translation": translation,
                        "segments": [r.to_json() for r in trace.records],
                    },
                    ensure_ascii=False,
                )
            )
    _write_lines(args.output, out_lines)
    if args.trace:
        _write_lines(args.trace, trace_lines)
    if failures:
        for i, exc in failures:
            print(f"error: sentence {i + 1}: {exc}", file=sys.stderr)
        print(f"error: {len(failures)} of {len(sentences)} sentences failed", file=sys.stderr)
        return 3
    return 0


def _cmd_evaluate(args) -> int:
    if args.hyp_format == "text" and args.ref_format == "text":
        report = evaluate_files(args.hyp, args.ref)
    else:
        hyps = _read_eval_side(args.hyp, args.hyp_format)
        refs = _read_eval_side(args.ref, args.ref_format)
        if len(hyps) != len(refs):
            raise DataError(f"line count mismatch: {len(hyps)} vs {len(refs)}")
        report = corpus_bleu(hyps, refs)
    payload = json.dumps(report.to_json(), ensure_ascii=False)
    if args.output:
        with io.open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(payload + "\n")
    print(payload)
    return 0


def _cmd_serve_mock(args) -> int:
    from .service import run_server

    dictionary = load_dictionary(args.dict) if args.dict else None
    if args.mode == "gloss" and dictionary is None:
        raise DataError("gloss mode needs --dict")
    backend = mock_backend(args.mode, dictionary)
    run_server(backend, host=args.host, port=args.port)
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="bahnaric-mt",
        description="Bahnaric-Vietnamese translation pipeline tools",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    def add(name: str, help_text: str):
        p = sub.add_parser(name, help=help_text, formatter_class=argparse.ArgumentDefaultsHelpFormatter)
        return p

    p = add("split", "split a parallel corpus into train/valid/test")
    p.add_argument("--input", required=True, help="corpus file (TSV or JSONL)")
    p.add_argument("--format", choices=["tsv", "jsonl"], default=None, help="corpus format (default: by extension)")
    p.add_argument("--train-ratio", type=float, default=0.8, help="training fraction")
    p.add_argument("--valid-ratio", type=float, default=0.1, help="validation fraction")
    p.add_argument("--test-ratio", type=float, default=0.1, help="test fraction")
    p.add_argument("--seed", type=int, default=0, help="shuffle seed")
    p.add_argument("--output-dir", required=True, help="directory for train/valid/test files")
    p.set_defaults(func=_cmd_split)

    p = add("build-lexicon", "count frequent adjacent word groups")
    p.add_argument("--input", required=True, help="corpus file (TSV or JSONL)")
    p.add_argument("--format", choices=["tsv", "jsonl"], default=None, help="corpus format (default: by extension)")
    p.add_argument("--side", choices=["source", "target"], default="source", help="corpus side to count")
    p.add_argument("--max-ngram", type=int, default=3, help="longest word group to count")
    p.add_argument("--min-count", type=int, default=2, help="drop groups seen fewer times")
    p.add_argument("--output", required=True, help="lexicon JSON path")
    p.set_defaults(func=_cmd_build_lexicon)

    p = add("build-cooc", "build the co-occurrence index")
    p.add_argument("--input", required=True, help="corpus file (TSV or JSONL)")
    p.add_argument("--format", choices=["tsv", "jsonl"], default=None, help="corpus format (default: by extension)")
    p.add_argument("--side", choices=["source", "target"], default="target", help="corpus side to index")
    p.add_argument("--window", type=int, default=5, help="neighbor window size")
    p.add_argument("--output", required=True, help="index output path")
    p.add_argument("--output-format", choices=["json", "tsv"], default="json", help="index serialization")
    p.set_defaults(func=_cmd_build_cooc)

    p = add("segment", "segment sentences into anchors/chunks/literals")
    p.add_argument("--input", required=True, help="sentence file")
    p.add_argument("--format", choices=["text", "jsonl"], default="text")
    p.add_argument("--dict", default=None, help="bilingual dictionary JSON")
    p.add_argument("--lexicon", default=None, help="frequency lexicon JSON")
    p.add_argument("--output", default=None, help="output JSONL (default: stdout)")
    p.set_defaults(func=_cmd_segment)

    p = add("augment", "double a corpus with synthetic pairs")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=["tsv", "jsonl"], default=None, help="corpus format (default: by extension)")
    p.add_argument("--alpha", type=float, default=0.5, help="fraction of target words affected")
    p.add_argument("--tasks", default="swap,token", help="comma-separated task rotation")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--unk", default="<unk>", help="mask symbol for the token task")
    p.add_argument("--no-tag", action="store_true", help="omit <task:NAME> source markers")
    p.add_argument("--dict", default=None, help="dictionary (required by the replace task)")
    p.add_argument("--chunk-fraction", type=float, default=None, help="also partition output for chunked training")
    p.add_argument("--output", required=True)
    p.set_defaults(func=_cmd_augment)

    p = add("translate", "translate sentences end to end")
    p.add_argument("--input", required=True, help="sentence file")
    p.add_argument("--format", choices=["text", "jsonl"], default="text", help="input format")
    p.add_argument("--dict", default=None, help="bilingual dictionary JSON")
    p.add_argument("--lexicon", default=None, help="frequency lexicon JSON")
    p.add_argument("--cooc", default=None, help="co-occurrence index (JSON or TSV)")
    p.add_argument("--window", type=int, default=5, help="disambiguation window")
    p.add_argument("--tie-break", choices=["freq", "order"], default="freq", help="gloss tie-break rule")
    p.add_argument("--backend", default="mock:identity", help="mock:identity, mock:gloss, or remote")
    p.add_argument("--endpoint", default=None, help="backend base URL (BACKEND_URL overrides)")
    p.add_argument("--batch", type=int, default=32, help="max chunks per backend request")
    p.add_argument("--timeout", type=int, default=10000, help="backend timeout in milliseconds")
    p.add_argument("--retries", type=int, default=2, help="retries per failed batch")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="concurrent sentences")
    p.add_argument("--trace", default=None, help="write per-segment trace JSONL here")
    p.add_argument("--output", default=None, help="output file (default: stdout)")
    p.set_defaults(func=_cmd_translate)

    p = add("evaluate", "corpus BLEU between hypothesis and reference files")
    p.add_argument("--hyp", required=True, help="hypothesis file")
    p.add_argument("--ref", required=True, help="reference file")
    p.add_argument("--hyp-format", choices=["text", "tsv", "jsonl"], default="text", help="hypothesis format (corpus formats score the target side)")
    p.add_argument("--ref-format", choices=["text", "tsv", "jsonl"], default="text", help="reference format (corpus formats score the target side)")
    p.add_argument("--output", default=None, help="also write the JSON report here")
    p.set_defaults(func=_cmd_evaluate)

    p = add("serve-mock", "serve the wire protocol with a mock backend")
    p.add_argument("--mode", choices=["identity", "gloss"], default="identity", help="mock behavior")
    p.add_argument("--dict", default=None, help="dictionary for gloss mode")
    p.add_argument("--host", default="127.0.0.1", help="bind address")
    p.add_argument("--port", type=int, default=8000, help="bind port")
    p.set_defaults(func=_cmd_serve_mock)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "func", None):
        parser.print_help()
        return 1
    try:
        return args.func(args)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename}", file=sys.stderr)
        return 2
    except BackendError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
