"""Parallel-corpus data model: tokens, sentence pairs, dictionaries, splits.

Tokenization is whitespace-based with punctuation detachment and numeral
grouping; Bahnaric orthography is space-delimited, so nothing statistical
is needed here. All types are immutable after construction and safe for
concurrent reads.
"""

from __future__ import annotations

import io
import json
import math
import re
import unicodedata
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Sequence

from .errors import DataError
from .rng import SplitMix64

_NUMBER_RE = re.compile(r"[+-]?\d+(?:[.,]\d+)?")
# Atomic markup tokens such as <unk> or <task:swap>: kept whole so that
# augmented corpora survive a load/save cycle.
_TAG_RE = re.compile(r"<[A-Za-z][A-Za-z0-9_:]*>")


class TokenKind(str, Enum):
    WORD = "word"
    PUNCTUATION = "punctuation"
    NUMBER = "number"


def _is_punct_char(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def classify_surface(surface: str) -> TokenKind:
    """Token kind forced by the surface: numeral, all-punctuation, or word."""
    if _NUMBER_RE.fullmatch(surface):
        return TokenKind.NUMBER
    if all(_is_punct_char(ch) for ch in surface):
        return TokenKind.PUNCTUATION
    return TokenKind.WORD


@dataclass(frozen=True)
class Token:
    surface: str
    kind: TokenKind

    def __post_init__(self):
        if not self.surface:
            raise DataError("token surface must be non-empty")
        if any(ch.isspace() for ch in self.surface):
            raise DataError(f"token surface contains whitespace: {self.surface!r}")
        if self.kind != classify_surface(self.surface):
            raise DataError(
                f"token kind {self.kind.value!r} inconsistent with surface {self.surface!r}"
            )


def make_token(surface: str) -> Token:
    return Token(surface, classify_surface(surface))


def tokenize(text: str) -> tuple[Token, ...]:
    """Split text into word / punctuation / number tokens.

    Punctuation characters are detached one per token; maximal digit runs
    (with at most one internal '.' or ',' between digits) become number
    tokens; whole chunks shaped like <tag> stay atomic; everything else is
    a word. Re-tokenizing the space-joined output is a fixed point.
    """
    tokens: list[Token] = []
    for chunk in text.split():
        if _TAG_RE.fullmatch(chunk):
            tokens.append(Token(chunk, TokenKind.WORD))
            continue
        i = 0
        n = len(chunk)
        while i < n:
            ch = chunk[i]
            if ch.isdigit():
                j = i + 1
                seen_sep = False
                while j < n:
                    if chunk[j].isdigit():
                        j += 1
                    elif (
                        not seen_sep
                        and chunk[j] in ".,"
                        and j + 1 < n
                        and chunk[j + 1].isdigit()
                    ):
                        seen_sep = True
                        j += 2
                    else:
                        break
                tokens.append(Token(chunk[i:j], TokenKind.NUMBER))
                i = j
            elif _is_punct_char(ch):
                tokens.append(Token(ch, TokenKind.PUNCTUATION))
                i += 1
            else:
                j = i + 1
                while j < n and not chunk[j].isdigit() and not _is_punct_char(chunk[j]):
                    j += 1
                tokens.append(Token(chunk[i:j], TokenKind.WORD))
                i = j
    return tuple(tokens)


def detokenize(tokens: Sequence[Token]) -> str:
    return " ".join(t.surface for t in tokens)


@dataclass(frozen=True)
class SentencePair:
    id: str
    source: tuple[Token, ...]
    target: tuple[Token, ...]

    def __post_init__(self):
        if not self.source:
            raise DataError("empty source side", pair_id=self.id)
        if not self.target:
            raise DataError("empty target side", pair_id=self.id)


@dataclass(frozen=True)
class ParallelCorpus:
    pairs: tuple[SentencePair, ...]
    name: str = "corpus"

    def __post_init__(self):
        seen = set()
        for pair in self.pairs:
            if pair.id in seen:
                raise DataError(f"duplicate pair id {pair.id!r} in corpus {self.name!r}")
            seen.add(pair.id)

    def __len__(self) -> int:
        return len(self.pairs)

    def source_sentences(self) -> list[tuple[Token, ...]]:
        return [p.source for p in self.pairs]

    def target_sentences(self) -> list[tuple[Token, ...]]:
        return [p.target for p in self.pairs]


@dataclass(frozen=True)
class Gloss:
    text: str
    freq: int | None = None


class BilingualDictionary:
    """Ordered map from lowercase source headword to its gloss candidates."""

    def __init__(self, entries: dict[str, list[Gloss]]):
        for headword, glosses in entries.items():
            if not headword:
                raise DataError("empty dictionary headword")
            if not glosses:
                raise DataError(f"headword {headword!r} has no glosses")
        self.entries: dict[str, tuple[Gloss, ...]] = {
            hw: tuple(gs) for hw, gs in entries.items()
        }
        self._multiword = {hw for hw in self.entries if " " in hw}

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, key: str) -> bool:
        return key.lower() in self.entries

    def lookup(self, key: str) -> tuple[Gloss, ...] | None:
        return self.entries.get(key.lower())

    def multiword_headwords(self) -> set[str]:
        return set(self._multiword)

    def headwords(self) -> list[str]:
        return list(self.entries)


# ---------------------------------------------------------------------------
# File ingestion
# ---------------------------------------------------------------------------

class CorpusFormat(str, Enum):
    TSV = "tsv"
    JSONL = "jsonl"


def _pair_from_texts(pair_id: str, src_text: str, tgt_text: str, line_no: int) -> SentencePair:
    source = tokenize(src_text)
    target = tokenize(tgt_text)
    if not source or not target:
        side = "source" if not source else "target"
        raise DataError(f"empty {side} side", line=line_no, pair_id=pair_id)
    return SentencePair(pair_id, source, target)


def load_parallel_corpus(path: str | Path, fmt: CorpusFormat | str) -> ParallelCorpus:
    """Read a TSV (`id?<TAB>source<TAB>target`) or JSONL corpus file.

    The 1-based line number becomes the id when a record carries none.
    Malformed lines raise DataError naming the offending line.
    """
    fmt = CorpusFormat(fmt)
    path = Path(path)
    pairs: list[SentencePair] = []
    with io.open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            if not line.strip():
                continue
            if fmt is CorpusFormat.TSV:
                cols = line.split("\t")
                if len(cols) == 2:
                    pair_id, src_text, tgt_text = str(line_no), cols[0], cols[1]
                elif len(cols) == 3:
                    pair_id, src_text, tgt_text = cols
                else:
                    raise DataError(
                        f"expected 2 or 3 tab-separated columns, got {len(cols)}",
                        line=line_no,
                    )
            else:
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise DataError(f"invalid JSON record: {exc.msg}", line=line_no) from exc
                if not isinstance(record, dict) or "src" not in record or "tgt" not in record:
                    raise DataError("record must carry 'src' and 'tgt'", line=line_no)
                pair_id = str(record.get("id", line_no))
                src_text, tgt_text = str(record["src"]), str(record["tgt"])
            pairs.append(_pair_from_texts(pair_id, src_text, tgt_text, line_no))
    return ParallelCorpus(tuple(pairs), name=path.stem)


def save_parallel_corpus(corpus: ParallelCorpus, path: str | Path, fmt: CorpusFormat | str) -> None:
    fmt = CorpusFormat(fmt)
    with io.open(path, "w", encoding="utf-8", newline="\n") as fh:
        for pair in corpus.pairs:
            src, tgt = detokenize(pair.source), detokenize(pair.target)
            if fmt is CorpusFormat.TSV:
                fh.write(f"{pair.id}\t{src}\t{tgt}\n")
            else:
                fh.write(json.dumps({"id": pair.id, "src": src, "tgt": tgt}, ensure_ascii=False))
                fh.write("\n")


def load_dictionary(path: str | Path) -> BilingualDictionary:
    """Read a bilingual dictionary from JSON.

    Accepts either an object {headword: [gloss, ...]} or an array of
    {"bahnaric": ..., "vietnamese": [...], "freq": n?} records. Headwords
    are lowercased; duplicate headwords merge by appending unseen glosses
    in file order.
    """
    path = Path(path)
    with io.open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataError(f"invalid dictionary JSON: {exc.msg}", line=exc.lineno) from exc

    entries: dict[str, list[Gloss]] = {}

    def add(headword, glosses: list[Gloss], record_no: int):
        if not isinstance(headword, str) or not headword.strip():
            raise DataError(f"empty headword in record {record_no}")
        if not glosses:
            raise DataError(f"headword {headword!r} has empty gloss list (record {record_no})")
        key = headword.strip().lower()
        bucket = entries.setdefault(key, [])
        seen = {g.text for g in bucket}
        for gloss in glosses:
            if not gloss.text.strip():
                raise DataError(f"empty gloss under headword {headword!r} (record {record_no})")
            if gloss.text not in seen:
                bucket.append(gloss)
                seen.add(gloss.text)

    if isinstance(data, dict):
        for record_no, (headword, raw_glosses) in enumerate(data.items(), start=1):
            if not isinstance(raw_glosses, list):
                raise DataError(f"glosses for {headword!r} must be an array (record {record_no})")
            add(headword, [Gloss(str(g)) for g in raw_glosses], record_no)
    elif isinstance(data, list):
        for record_no, record in enumerate(data, start=1):
            if not isinstance(record, dict) or "bahnaric" not in record or "vietnamese" not in record:
                raise DataError(f"record {record_no} must carry 'bahnaric' and 'vietnamese'")
            raw_glosses = record["vietnamese"]
            if not isinstance(raw_glosses, list):
                raise DataError(f"'vietnamese' must be an array (record {record_no})")
            freq = record.get("freq")
            if freq is not None and (not isinstance(freq, int) or freq < 0):
                raise DataError(f"'freq' must be a non-negative integer (record {record_no})")
            add(record["bahnaric"], [Gloss(str(g), freq) for g in raw_glosses], record_no)
    else:
        raise DataError("dictionary JSON must be an object or an array of records")

    return BilingualDictionary(entries)


# ---------------------------------------------------------------------------
# Deterministic splitting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SplitSpec:
    train_ratio: float
    valid_ratio: float
    test_ratio: float
    seed: int = 0

    def __post_init__(self):
        total = self.train_ratio + self.valid_ratio + self.test_ratio
        if not math.isclose(total, 1.0, abs_tol=1e-9):
            raise DataError(f"split ratios sum to {total!r}, expected 1")
        for r in (self.train_ratio, self.valid_ratio, self.test_ratio):
            if r < 0 or r > 1:
                raise DataError(f"split ratio {r!r} outside [0, 1]")


def split_dataset(
    corpus: ParallelCorpus, spec: SplitSpec
) -> tuple[ParallelCorpus, ParallelCorpus, ParallelCorpus]:
    """Shuffle-then-cut split; deterministic given the seed, machine-independent.

    Cuts fall at floor(train*N) and floor((train+valid)*N); a 1e-9 nudge
    absorbs binary underrepresentation of ratios like 0.8.
    """
    if len(corpus) == 0:
        raise DataError("cannot split an empty corpus")
    order = list(corpus.pairs)
    SplitMix64(spec.seed).shuffle(order)
    n = len(order)
    cut1 = math.floor(spec.train_ratio * n + 1e-9)
    cut2 = math.floor((spec.train_ratio + spec.valid_ratio) * n + 1e-9)
    return (
        ParallelCorpus(tuple(order[:cut1]), name=f"{corpus.name}-train"),
        ParallelCorpus(tuple(order[cut1:cut2]), name=f"{corpus.name}-valid"),
        ParallelCorpus(tuple(order[cut2:]), name=f"{corpus.name}-test"),
    )
