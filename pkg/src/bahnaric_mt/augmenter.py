"""Training-data augmentation for low-resource translation.

Five target-noising auxiliary tasks (swap, token masking, source copy,
reverse, aligned replace) plus sentence boundary augmentation, applied
round-robin to double a corpus. Each pair draws from a stream keyed by
(seed, pair id, task name), so output is a pure function of the inputs
regardless of iteration order or worker count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .corpus import (
    BilingualDictionary,
    ParallelCorpus,
    SentencePair,
    Token,
    TokenKind,
    make_token,
)
from .errors import DataError
from .rng import SplitMix64, derive_stream


class AugmentationTask(str, Enum):
    SWAP = "swap"
    TOKEN = "token"
    SOURCE = "source"
    REVERSE = "reverse"
    REPLACE = "replace"
    SENTENCE_BOUNDARY = "sentence_boundary"


@dataclass(frozen=True)
class AugmentConfig:
    alpha: float = 0.5
    tasks: tuple[AugmentationTask, ...] = (AugmentationTask.SWAP, AugmentationTask.TOKEN)
    seed: int = 0
    unk_symbol: str = "<unk>"
    tag_synthetic: bool = True

    def __post_init__(self):
        if not 0 <= self.alpha <= 1:
            raise DataError(f"alpha must lie in [0, 1], got {self.alpha}")
        if not self.tasks:
            raise DataError("task list must be non-empty")


def affected_count(alpha: float, target_len: int) -> int:
    """n = floor(alpha * t); floor keeps alpha=0 an exact identity."""
    return math.floor(alpha * target_len)


def apply_swap(pair: SentencePair, alpha: float, rng: SplitMix64) -> SentencePair:
    """Perform floor(alpha*t) uniform transpositions on the target."""
    t = len(pair.target)
    n = affected_count(alpha, t)
    if t < 2 or n == 0:
        return pair
    target = list(pair.target)
    for _ in range(n):
        i = rng.randrange(t)
        j = rng.randrange(t - 1)
        if j >= i:
            j += 1
        target[i], target[j] = target[j], target[i]
    return SentencePair(pair.id, pair.source, tuple(target))


def apply_token_mask(pair: SentencePair, alpha: float, rng: SplitMix64, unk_symbol: str = "<unk>") -> SentencePair:
    """Replace exactly floor(alpha*t) distinct target positions with the UNK token."""
    t = len(pair.target)
    n = affected_count(alpha, t)
    if n == 0:
        return pair
    unk = make_token(unk_symbol)
    positions = set(rng.sample(range(t), n))
    target = tuple(unk if i in positions else tok for i, tok in enumerate(pair.target))
    return SentencePair(pair.id, pair.source, target)


def apply_source_copy(pair: SentencePair) -> SentencePair:
    return SentencePair(pair.id, pair.source, pair.source)


def apply_reverse(pair: SentencePair) -> SentencePair:
    return SentencePair(pair.id, pair.source, tuple(reversed(pair.target)))


def _dictionary_alignment(
    pair: SentencePair, dictionary: BilingualDictionary
) -> list[tuple[int, int]]:
    """Leftmost-unused pairing of source positions to target positions.

    Source position i aligns to target position j when the target word is
    a token of some gloss of the source word.
    """
    aligned: list[tuple[int, int]] = []
    used: set[int] = set()
    for i, src_tok in enumerate(pair.source):
        glosses = dictionary.lookup(src_tok.surface)
        if not glosses:
            continue
        gloss_words = {w for g in glosses for w in g.text.split()}
        for j, tgt_tok in enumerate(pair.target):
            if j not in used and tgt_tok.surface in gloss_words:
                aligned.append((i, j))
                used.add(j)
                break
    return aligned


def apply_replace(
    pair: SentencePair,
    alpha: float,
    dictionary: BilingualDictionary,
    rng: SplitMix64,
    stats: dict | None = None,
) -> SentencePair:
    """Substitute aligned source/target word pairs with random dictionary entries.

    The replacement entry's headword goes into the source slot and its
    first gloss into the target slot. Pairs with no dictionary-induced
    alignment pass through unchanged (counted under stats['replace_skipped']).
    """
    n = affected_count(alpha, len(pair.target))
    aligned = _dictionary_alignment(pair, dictionary)
    if n == 0 or not aligned:
        if stats is not None and n > 0:
            stats["replace_skipped"] = stats.get("replace_skipped", 0) + 1
        return pair
    chosen = rng.sample(aligned, min(n, len(aligned)))
    headwords = dictionary.headwords()
    src_repl: dict[int, tuple[Token, ...]] = {}
    tgt_repl: dict[int, tuple[Token, ...]] = {}
    for i, j in chosen:
        entry = headwords[rng.randrange(len(headwords))]
        first_gloss = dictionary.lookup(entry)[0]
        src_repl[i] = tuple(make_token(w) for w in entry.split())
        tgt_repl[j] = tuple(make_token(w) for w in first_gloss.text.split())
    source = tuple(
        tok for i, orig in enumerate(pair.source) for tok in src_repl.get(i, (orig,))
    )
    target = tuple(
        tok for j, orig in enumerate(pair.target) for tok in tgt_repl.get(j, (orig,))
    )
    return SentencePair(pair.id, source, target)


def _split_index(fraction: float, length: int) -> int:
    return min(max(math.floor(fraction * length), 1), length - 1)


def sentence_boundary_augment(
    pair_a: SentencePair, pair_b: SentencePair, rng: SplitMix64
) -> tuple[SentencePair, SentencePair]:
    """Cross-combine split halves of two adjacent sentence pairs.

    Each pair draws one split fraction used for both its sides; outputs
    conserve the per-side union token multiset. Any side shorter than two
    tokens passes both pairs through unchanged.
    """
    seqs = (pair_a.source, pair_a.target, pair_b.source, pair_b.target)
    if any(len(s) < 2 for s in seqs):
        return pair_a, pair_b
    r_a = rng.uniform_open()
    r_b = rng.uniform_open()
    i = _split_index(r_a, len(pair_a.source))
    i2 = _split_index(r_a, len(pair_a.target))
    j = _split_index(r_b, len(pair_b.source))
    j2 = _split_index(r_b, len(pair_b.target))
    first = SentencePair(
        pair_a.id,
        pair_a.source[:i] + pair_b.source[j:],
        pair_a.target[:i2] + pair_b.target[j2:],
    )
    second = SentencePair(
        pair_b.id,
        pair_b.source[:j] + pair_a.source[i:],
        pair_b.target[:j2] + pair_a.target[i2:],
    )
    return first, second


def _tagged(pair: SentencePair, task: AugmentationTask, tag: bool) -> SentencePair:
    if not tag:
        return pair
    marker = Token(f"<task:{task.value}>", TokenKind.WORD)
    return SentencePair(pair.id, (marker,) + pair.source, pair.target)


def _with_id(pair: SentencePair, new_id: str) -> SentencePair:
    return SentencePair(new_id, pair.source, pair.target)


def augment_dataset(
    corpus: ParallelCorpus,
    config: AugmentConfig,
    dictionary: BilingualDictionary | None = None,
    stats: dict | None = None,
) -> ParallelCorpus:
    """Double the corpus: originals followed by one synthetic pair each.

    Tasks rotate round-robin over the original pairs in order; sentence
    boundary consumes two adjacent originals and emits two pairs. Synthetic
    ids get a task-name suffix and (by default) a <task:NAME> source marker.
    """
    if len(corpus) == 0:
        raise DataError("cannot augment an empty corpus")
    if AugmentationTask.REPLACE in config.tasks and dictionary is None:
        raise DataError("the replace task needs a bilingual dictionary")

    needed = len(corpus)
    pairs = corpus.pairs
    synthetic: list[SentencePair] = []
    cursor = 0
    draw = 0
    while len(synthetic) < needed:
        task = config.tasks[draw % len(config.tasks)]
        draw += 1
        pair = pairs[cursor % needed]
        if task is AugmentationTask.SENTENCE_BOUNDARY:
            partner = pairs[cursor + 1] if cursor + 1 < needed else pair
            rng = derive_stream(config.seed, pair.id, task.value)
            out_a, out_b = sentence_boundary_augment(pair, partner, rng)
            out_a = _with_id(out_a, f"{pair.id}-{task.value}")
            suffix = f"{partner.id}-{task.value}" if partner is not pair else f"{pair.id}-{task.value}-2"
            out_b = _with_id(out_b, suffix)
            synthetic.append(_tagged(out_a, task, config.tag_synthetic))
            synthetic.append(_tagged(out_b, task, config.tag_synthetic))
            cursor += 2
            continue
        rng = derive_stream(config.seed, pair.id, task.value)
        if task is AugmentationTask.SWAP:
            out = apply_swap(pair, config.alpha, rng)
        elif task is AugmentationTask.TOKEN:
            out = apply_token_mask(pair, config.alpha, rng, config.unk_symbol)
        elif task is AugmentationTask.SOURCE:
            out = apply_source_copy(pair)
        elif task is AugmentationTask.REVERSE:
            out = apply_reverse(pair)
        else:
            out = apply_replace(pair, config.alpha, dictionary, rng, stats)
        out = _with_id(out, f"{pair.id}-{task.value}")
        synthetic.append(_tagged(out, task, config.tag_synthetic))
        cursor += 1

    result = pairs + tuple(synthetic[:needed])
    return ParallelCorpus(result, name=f"{corpus.name}-augmented")
