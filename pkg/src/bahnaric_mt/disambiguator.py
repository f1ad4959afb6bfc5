"""Gloss disambiguation via target-corpus co-occurrence neighborhoods.

When a source word has several dictionary glosses, we score each gloss by
the already-resolved words around it: every context word that co-occurs
with the gloss head in the target corpus contributes weight 1/distance.
Scores are exact rationals so ties are detected reliably.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .corpus import Gloss, Token, TokenKind
from .errors import DataError
from .segmenter import Anchor


class TieBreak(str, Enum):
    GLOSS_FREQUENCY = "freq"
    DICTIONARY_ORDER = "order"


@dataclass(frozen=True)
class DisambiguationConfig:
    window: int = 5
    tie_break: TieBreak = TieBreak.GLOSS_FREQUENCY

    def __post_init__(self):
        if self.window < 1:
            raise DataError("disambiguation window must be >= 1")


class CooccurrenceIndex:
    """Symmetric word -> neighbor -> count map within a fixed window."""

    def __init__(self, neighbors: dict[str, dict[str, int]], window: int):
        if window < 1:
            raise DataError("co-occurrence window must be >= 1")
        self.neighbors = neighbors
        self.window = window

    def count(self, word: str, neighbor: str) -> int:
        return self.neighbors.get(word, {}).get(neighbor, 0)

    def is_neighbor(self, word: str, neighbor: str) -> bool:
        return self.count(word, neighbor) > 0

    def to_json(self) -> dict:
        return {
            "window": self.window,
            "neighbors": {w: dict(sorted(ns.items())) for w, ns in sorted(self.neighbors.items())},
        }

    @classmethod
    def from_json(cls, data: dict) -> "CooccurrenceIndex":
        neighbors = {
            str(w): {str(n): int(c) for n, c in ns.items()}
            for w, ns in data["neighbors"].items()
        }
        return cls(neighbors, int(data["window"]))

    def save(self, path: str | Path, fmt: str = "json") -> None:
        if fmt == "json":
            with io.open(path, "w", encoding="utf-8", newline="\n") as fh:
                json.dump(self.to_json(), fh, ensure_ascii=False, indent=2)
                fh.write("\n")
        elif fmt == "tsv":
            with io.open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(f"#window\t{self.window}\n")
                for word in sorted(self.neighbors):
                    for neighbor in sorted(self.neighbors[word]):
                        fh.write(f"{word}\t{neighbor}\t{self.neighbors[word][neighbor]}\n")
        else:
            raise DataError(f"unknown index format {fmt!r}")

    @classmethod
    def load(cls, path: str | Path) -> "CooccurrenceIndex":
        path = Path(path)
        with io.open(path, "r", encoding="utf-8") as fh:
            first = fh.read(1)
            fh.seek(0)
            if first == "#":  # sorted-TSV form: "#window\tW" then word/neighbor/count rows
                window = None
                neighbors: dict[str, dict[str, int]] = {}
                for line_no, line in enumerate(fh, start=1):
                    line = line.rstrip("\n")
                    if not line:
                        continue
                    if line.startswith("#window\t"):
                        window = int(line.split("\t")[1])
                        continue
                    cols = line.split("\t")
                    if len(cols) != 3:
                        raise DataError("expected word<TAB>neighbor<TAB>count", line=line_no)
                    neighbors.setdefault(cols[0], {})[cols[1]] = int(cols[2])
                if window is None:
                    raise DataError("TSV index missing #window header")
                return cls(neighbors, window)
            return cls.from_json(json.load(fh))


def build_cooccurrence_index(
    target_corpus: Sequence[Sequence[Token]], window: int = 5
) -> CooccurrenceIndex:
    """Count neighbor pairs within the window on each target sentence.

    Punctuation and number tokens occupy positions (distances span them)
    but contribute no entries; identical surfaces never neighbor each
    other, keeping the index free of self-loops.
    """
    if window < 1:
        raise DataError("co-occurrence window must be >= 1")
    neighbors: dict[str, dict[str, int]] = {}
    for sentence in target_corpus:
        words = [(i, t.surface) for i, t in enumerate(sentence) if t.kind is TokenKind.WORD]
        for a in range(len(words)):
            i, w_i = words[a]
            for b in range(a + 1, len(words)):
                j, w_j = words[b]
                if j - i > window:
                    break
                if w_i == w_j:
                    continue
                bucket = neighbors.setdefault(w_i, {})
                bucket[w_j] = bucket.get(w_j, 0) + 1
                bucket = neighbors.setdefault(w_j, {})
                bucket[w_i] = bucket.get(w_i, 0) + 1
    return CooccurrenceIndex(neighbors, window)


def gloss_head(gloss_text: str) -> str:
    """Index lookups for a multi-token gloss use its first word."""
    return gloss_text.split()[0]


def score_candidate(
    candidate: str | Gloss,
    context: Sequence[tuple[str, int]],
    index: CooccurrenceIndex,
) -> Fraction:
    """Sum 1/d over context words that neighbor the candidate's head word."""
    text = candidate.text if isinstance(candidate, Gloss) else candidate
    head = gloss_head(text)
    total = Fraction(0)
    for word, distance in context:
        if distance < 1:
            raise DataError(f"context distance must be >= 1, got {distance}")
        if index.is_neighbor(head, word):
            total += Fraction(1, distance)
    return total


def disambiguate(
    anchor: Anchor,
    context: Sequence[tuple[str, int]],
    index: CooccurrenceIndex,
    config: DisambiguationConfig,
) -> Gloss:
    """Pick the anchor's highest-scoring gloss; break ties per the config.

    A single candidate wins without scoring. Context items beyond the
    configured window are ignored. GlossFrequency ties fall back to
    dictionary order.
    """
    candidates = anchor.candidates
    if len(candidates) == 1:
        return candidates[0]
    window_context = [(w, d) for w, d in context if d <= config.window]
    scores = [score_candidate(g, window_context, index) for g in candidates]
    best = max(scores)
    tied = [i for i, s in enumerate(scores) if s == best]
    if len(tied) > 1 and config.tie_break is TieBreak.GLOSS_FREQUENCY:
        best_freq = max(candidates[i].freq or 0 for i in tied)
        tied = [i for i in tied if (candidates[i].freq or 0) == best_freq]
    return candidates[tied[0]]
