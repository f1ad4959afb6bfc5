"""Corpus-level BLEU-4: clipped n-gram precisions pooled over the corpus,
geometric mean, brevity penalty, no smoothing, 0-100 scale."""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .corpus import tokenize
from .errors import DataError

MAX_ORDER = 4


@dataclass(frozen=True)
class BleuReport:
    score: float
    precisions: tuple[float, float, float, float]
    brevity_penalty: float
    hyp_length: int
    ref_length: int

    def to_json(self) -> dict:
        return {
            "bleu": self.score,
            "precisions": list(self.precisions),
            "bp": self.brevity_penalty,
            "hyp_len": self.hyp_length,
            "ref_len": self.ref_length,
        }


def _ngram_counts(sentence: Sequence[str], order: int) -> dict[tuple[str, ...], int]:
    counts: dict[tuple[str, ...], int] = {}
    for i in range(len(sentence) - order + 1):
        gram = tuple(sentence[i : i + order])
        counts[gram] = counts.get(gram, 0) + 1
    return counts


def corpus_bleu(
    hypotheses: Sequence[Sequence[str]], references: Sequence[Sequence[str]]
) -> BleuReport:
    """Pool clipped n-gram matches over the whole corpus, then score.

    This is corpus-level BLEU, not an average of per-sentence scores; any
    n-gram order with zero precision zeroes the whole score.
    """
    if len(hypotheses) != len(references):
        raise DataError(
            f"hypothesis/reference count mismatch: {len(hypotheses)} vs {len(references)}"
        )
    if not hypotheses:
        raise DataError("cannot score an empty corpus")

    matches = [0] * MAX_ORDER
    totals = [0] * MAX_ORDER
    hyp_length = 0
    ref_length = 0
    for hyp, ref in zip(hypotheses, references):
        hyp_length += len(hyp)
        ref_length += len(ref)
        for order in range(1, MAX_ORDER + 1):
            hyp_counts = _ngram_counts(hyp, order)
            ref_counts = _ngram_counts(ref, order)
            totals[order - 1] += max(len(hyp) - order + 1, 0)
            for gram, count in hyp_counts.items():
                matches[order - 1] += min(count, ref_counts.get(gram, 0))

    precisions = tuple(
        matches[k] / totals[k] if totals[k] > 0 else 0.0 for k in range(MAX_ORDER)
    )
    if hyp_length == 0:
        bp = 0.0
    elif hyp_length >= ref_length:
        bp = 1.0
    else:
        bp = math.exp(1.0 - ref_length / hyp_length)
    if all(p > 0 for p in precisions):
        score = 100.0 * bp * math.exp(sum(math.log(p) for p in precisions) / MAX_ORDER)
    else:
        score = 0.0
    return BleuReport(score, precisions, bp, hyp_length, ref_length)


def _read_lines(path: str | Path) -> list[str]:
    with io.open(path, "r", encoding="utf-8") as fh:
        return fh.read().splitlines()


def evaluate_files(hyp_path: str | Path, ref_path: str | Path) -> BleuReport:
    """Tokenize two line-aligned text files and score them as one corpus."""
    hyp_lines = _read_lines(hyp_path)
    ref_lines = _read_lines(ref_path)
    if len(hyp_lines) != len(ref_lines):
        raise DataError(
            f"line count mismatch: {len(hyp_lines)} hypothesis vs {len(ref_lines)} reference lines"
        )
    hyps = [[t.surface for t in tokenize(line)] for line in hyp_lines]
    refs = [[t.surface for t in tokenize(line)] for line in ref_lines]
    return corpus_bleu(hyps, refs)


def report_to_json(report: BleuReport) -> str:
    return json.dumps(report.to_json(), ensure_ascii=False)
