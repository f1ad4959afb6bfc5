"""Model adapters behind the translation endpoint.

The server only needs translate_batch(); the gloss adapter keeps the
default deployment free of ML dependencies, while the seq2seq adapter
loads any text-to-text checkpoint as an optional extra.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Protocol

log = logging.getLogger("chunkserve")

DEFAULT_MAX_INPUT_TOKENS = 256


class ModelAdapter(Protocol):
    name: str
    max_input_tokens: int

    def translate_batch(self, chunks: list[str]) -> list[str]:
        """One translation per chunk, order preserved."""
        ...


def truncate_chunk(chunk: str, limit: int) -> str:
    """Cap a chunk at `limit` whitespace tokens, warning when it happens."""
    words = chunk.split()
    if len(words) <= limit:
        return chunk
    log.warning("truncating chunk from %d to %d tokens", len(words), limit)
    return " ".join(words[:limit])


def load_gloss_table(path: str | Path) -> dict[str, str]:
    """Read a bilingual dictionary file down to headword -> first gloss.

    Accepts the same two JSON shapes the pipeline tooling writes: an
    object {headword: [gloss, ...]} or an array of
    {"bahnaric":..., "vietnamese": [...]} records.
    """
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    table: dict[str, str] = {}
    if isinstance(data, dict):
        items = data.items()
    elif isinstance(data, list):
        items = ((rec["bahnaric"], rec["vietnamese"]) for rec in data)
    else:
        raise ValueError("dictionary JSON must be an object or an array of records")
    for headword, glosses in items:
        if not isinstance(glosses, list) or not glosses:
            raise ValueError(f"headword {headword!r} needs a non-empty gloss array")
        key = str(headword).strip().lower()
        if key and key not in table:  # first record wins, matching merge order
            table[key] = str(glosses[0])
    return table


class GlossAdapter:
    """Word-by-word first-gloss substitution; OOV words pass through."""

    def __init__(self, table: dict[str, str], max_input_tokens: int = DEFAULT_MAX_INPUT_TOKENS):
        self.name = "gloss"
        self.max_input_tokens = max_input_tokens
        self._table = table

    @classmethod
    def from_file(cls, path: str | Path, max_input_tokens: int = DEFAULT_MAX_INPUT_TOKENS):
        return cls(load_gloss_table(path), max_input_tokens)

    def translate_batch(self, chunks: list[str]) -> list[str]:
        out = []
        for chunk in chunks:
            chunk = truncate_chunk(chunk, self.max_input_tokens)
            out.append(
                " ".join(self._table.get(word.lower(), word) for word in chunk.split())
            )
        return out


class Seq2SeqAdapter:
    """Text-to-text checkpoint served with greedy decoding by default."""

    def __init__(self, checkpoint: str | Path, beams: int = 1,
                 max_input_tokens: int = DEFAULT_MAX_INPUT_TOKENS):
        self.name = f"seq2seq:{checkpoint}"
        self.max_input_tokens = max_input_tokens
        self._beams = beams
        try:
            from transformers import AutoModelForSeq2SeqLM, AutoTokenizer
        except ImportError as exc:
            raise RuntimeError(
                "seq2seq mode needs the 'seq2seq' extra (transformers + torch)"
            ) from exc
        self._tokenizer = AutoTokenizer.from_pretrained(str(checkpoint))
        self._model = AutoModelForSeq2SeqLM.from_pretrained(str(checkpoint))
        self._model.eval()

    def translate_batch(self, chunks: list[str]) -> list[str]:
        if not chunks:
            return []
        import torch

        chunks = [truncate_chunk(c, self.max_input_tokens) for c in chunks]
        encoded = self._tokenizer(
            chunks,
            return_tensors="pt",
            padding=True,
            truncation=True,
            max_length=self.max_input_tokens,
        )
        with torch.no_grad():
            generated = self._model.generate(
                **encoded,
                num_beams=self._beams,
                do_sample=False,
                max_length=self.max_input_tokens,
            )
        return self._tokenizer.batch_decode(generated, skip_special_tokens=True)


def load_seq2seq_adapter(checkpoint: str | Path, beams: int = 1) -> Seq2SeqAdapter:
    """Load a checkpoint directory; missing or non-model paths fail startup."""
    path = Path(checkpoint)
    if not path.exists():
        raise FileNotFoundError(f"checkpoint not found: {path}")
    if path.is_dir() and not (path / "config.json").exists():
        raise RuntimeError(f"{path} does not look like a seq2seq checkpoint (no config.json)")
    return Seq2SeqAdapter(path, beams=beams)
