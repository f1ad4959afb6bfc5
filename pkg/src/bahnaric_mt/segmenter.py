"""Frequency-lexicon construction and sentence segmentation.

A meaningful Bahnaric word is often several adjacent written words, so we
count frequent adjacent word groups over a corpus, then segment sentences
by a global dynamic program that prefers the most frequent merges, and
finally classify the resulting units into anchors, chunks, and literals.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Union

from .corpus import BilingualDictionary, Gloss, Token, TokenKind, classify_surface
from .errors import DataError


class FrequencyLexicon:
    """Counts of adjacent word groups (2..max_ngram words, count >= min_count)."""

    def __init__(self, entries: dict[str, int], max_ngram: int = 3, min_count: int = 2):
        if max_ngram < 2:
            raise DataError("max_ngram must be >= 2")
        if min_count < 1:
            raise DataError("min_count must be >= 1")
        for key, count in entries.items():
            parts = key.split(" ")
            if len(parts) < 2 or len(parts) > max_ngram:
                raise DataError(
                    f"lexicon key {key!r} has {len(parts)} words, expected 2..{max_ngram}"
                )
            if any(not p or classify_surface(p) is not TokenKind.WORD for p in parts):
                raise DataError(f"lexicon key {key!r} may only contain plain words")
            if count < min_count:
                raise DataError(f"lexicon count for {key!r} below min_count ({count} < {min_count})")
        self.entries = dict(entries)
        self.max_ngram = max_ngram
        self.min_count = min_count

    def __len__(self) -> int:
        return len(self.entries)

    def to_json(self) -> dict:
        return {
            "max_ngram": self.max_ngram,
            "min_count": self.min_count,
            "entries": dict(sorted(self.entries.items())),
        }

    @classmethod
    def from_json(cls, data: dict) -> "FrequencyLexicon":
        return cls(dict(data["entries"]), int(data["max_ngram"]), int(data["min_count"]))

    def save(self, path: str | Path) -> None:
        with io.open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(self.to_json(), fh, ensure_ascii=False, indent=2)
            fh.write("\n")

    @classmethod
    def load(cls, path: str | Path) -> "FrequencyLexicon":
        with io.open(path, "r", encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


def build_frequency_lexicon(
    corpus_side: Sequence[Sequence[Token]], max_ngram: int = 3, min_count: int = 2
) -> FrequencyLexicon:
    """Count every contiguous run of 2..max_ngram word tokens per sentence.

    Runs never cross punctuation or number tokens; entries below min_count
    are dropped at the end.
    """
    if max_ngram < 2:
        raise DataError("max_ngram must be >= 2")
    if min_count < 1:
        raise DataError("min_count must be >= 1")
    counts: dict[str, int] = {}
    for sentence in corpus_side:
        run: list[str] = []
        for token in list(sentence) + [None]:  # sentinel flushes the last run
            if token is not None and token.kind is TokenKind.WORD:
                run.append(token.surface)
                continue
            for start in range(len(run)):
                for width in range(2, max_ngram + 1):
                    if start + width > len(run):
                        break
                    key = " ".join(run[start : start + width])
                    counts[key] = counts.get(key, 0) + 1
            run = []
    kept = {k: c for k, c in counts.items() if c >= min_count}
    return FrequencyLexicon(kept, max_ngram=max_ngram, min_count=min_count)


@dataclass(frozen=True)
class WordUnit:
    tokens: tuple[Token, ...]
    merged: bool = False

    def __post_init__(self):
        if not self.tokens:
            raise DataError("word unit must hold at least one token")
        if self.merged and len(self.tokens) < 2:
            raise DataError("merged unit must span at least two tokens")

    @property
    def text(self) -> str:
        return " ".join(t.surface for t in self.tokens)

    @property
    def key(self) -> str:
        """Lowercased lookup key for dictionary matching."""
        return self.text.lower()


@dataclass(frozen=True)
class Anchor:
    unit: WordUnit
    candidates: tuple[Gloss, ...]

    def __post_init__(self):
        if not self.candidates:
            raise DataError(f"anchor {self.unit.text!r} has no gloss candidates")


@dataclass(frozen=True)
class Chunk:
    units: tuple[WordUnit, ...]

    def __post_init__(self):
        if not self.units:
            raise DataError("chunk must hold at least one unit")

    @property
    def text(self) -> str:
        return " ".join(u.text for u in self.units)


@dataclass(frozen=True)
class Literal:
    token: Token

    def __post_init__(self):
        if self.token.kind is TokenKind.WORD:
            raise DataError(f"literal must be punctuation or a number, got {self.token.surface!r}")


Segment = Union[Anchor, Chunk, Literal]


def segment_sentence(
    tokens: Sequence[Token],
    lexicon: FrequencyLexicon,
    dictionary: BilingualDictionary | None = None,
) -> list[WordUnit]:
    """Split a token sequence into word units, merging frequent groups.

    Among all legal segmentations (multi-token units must be lexicon keys
    or multiword dictionary headwords) this maximizes the total log count
    of merged units, with dictionary-only headwords scored at min_count.
    Ties prefer fewer units, then the leftmost-longest merge. Scores are
    compared as exact integer products, which is order-equivalent to
    summing logs but immune to float ties.
    """
    tokens = tuple(tokens)
    n = len(tokens)
    if n == 0:
        return []

    dict_multi = dictionary.multiword_headwords() if dictionary is not None else set()
    max_span = max([lexicon.max_ngram] + [len(hw.split(" ")) for hw in dict_multi])

    def span_weight(i: int, j: int) -> int | None:
        literal = " ".join(t.surface for t in tokens[i:j])
        count = lexicon.entries.get(literal)
        if count is not None:
            return count
        if literal.lower() in dict_multi:
            return lexicon.min_count
        return None

    # best[i]: (product score, unit count, unit lengths) for the suffix at i,
    # ordered by (max score, min units, lexicographically longest lengths).
    best: list[tuple[int, int, tuple[int, ...]]] = [(0, 0, ())] * (n + 1)
    best[n] = (1, 0, ())
    for i in range(n - 1, -1, -1):
        score, units, lengths = best[i + 1]
        top = (score, units + 1, (1,) + lengths)
        for width in range(2, min(max_span, n - i) + 1):
            weight = span_weight(i, i + width)
            if weight is None:
                continue
            score, units, lengths = best[i + width]
            cand = (weight * score, units + 1, (width,) + lengths)
            if (cand[0], -cand[1], cand[2]) > (top[0], -top[1], top[2]):
                top = cand
        best[i] = top

    units_out: list[WordUnit] = []
    pos = 0
    for width in best[0][2]:
        units_out.append(WordUnit(tokens[pos : pos + width], merged=width >= 2))
        pos += width
    return units_out


def classify_segments(
    units: Sequence[WordUnit], dictionary: BilingualDictionary
) -> list[Segment]:
    """Tag units as anchors (in dictionary), literals (punct/number), or chunks.

    Chunks are maximal consecutive runs of the remaining units; a run is
    broken by an anchor or a literal, so no dictionary word ever lands
    inside a chunk.
    """
    segments: list[Segment] = []
    run: list[WordUnit] = []

    def flush_run():
        if run:
            segments.append(Chunk(tuple(run)))
            run.clear()

    for unit in units:
        glosses = dictionary.lookup(unit.key)
        if glosses is not None:
            flush_run()
            segments.append(Anchor(unit, glosses))
        elif len(unit.tokens) == 1 and unit.tokens[0].kind is not TokenKind.WORD:
            flush_run()
            segments.append(Literal(unit.tokens[0]))
        else:
            run.append(unit)
    flush_run()
    return segments


def segment_tokens(segment: Segment) -> tuple[Token, ...]:
    """Flatten one segment back to its tokens, in sentence order."""
    if isinstance(segment, Anchor):
        return segment.unit.tokens
    if isinstance(segment, Chunk):
        return tuple(t for unit in segment.units for t in unit.tokens)
    return (segment.token,)
