"""End-to-end sentence translation: segment, classify, map, reassemble.

Anchors are mapped through the dictionary (disambiguating multi-gloss ones
against already-resolved neighbors), literals pass through verbatim, and
all chunks of a sentence go to the translation backend in one batched
call. Backends are pluggable: in-process mocks or a remote server speaking
the wire protocol (POST /translate with {"chunks": [...]}).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Protocol, Sequence

import requests

from .corpus import BilingualDictionary, tokenize
from .disambiguator import (
    CooccurrenceIndex,
    DisambiguationConfig,
    disambiguate,
    score_candidate,
)
from .errors import BackendError, ProtocolError
from .segmenter import (
    Anchor,
    Chunk,
    FrequencyLexicon,
    Literal,
    Segment,
    classify_segments,
    segment_sentence,
)

CLOSING_PUNCT = {",", ".", "!", "?", ";", ":", ")", "]", "}"}
OPENING_BRACKETS = {"(", "[", "{"}


class TranslationBackend(Protocol):
    def translate_chunks(self, texts: Sequence[str]) -> list[str]:
        """Translate chunk texts; output aligns index-for-index with input."""
        ...


@dataclass(frozen=True)
class TranslationResources:
    dictionary: BilingualDictionary
    lexicon: FrequencyLexicon
    cooc_index: CooccurrenceIndex
    disamb_config: DisambiguationConfig = field(default_factory=DisambiguationConfig)


@dataclass(frozen=True)
class SegmentTraceRecord:
    kind: str  # anchor | chunk | literal
    source_text: str
    output_text: str
    method: str  # dictionary | disambiguated | literal | backend
    scores: dict[str, float] | None = None

    def to_json(self) -> dict:
        record = {
            "kind": self.kind,
            "source": self.source_text,
            "output": self.output_text,
            "method": self.method,
        }
        if self.scores is not None:
            record["scores"] = self.scores
        return record


@dataclass
class TranslationTrace:
    records: list[SegmentTraceRecord] = field(default_factory=list)

    def outputs(self) -> list[tuple[str, str]]:
        return [(r.output_text, r.kind) for r in self.records]


def assemble(trace_outputs: Sequence[tuple[str, str]]) -> str:
    """Join segment outputs with spaces, tightened around punctuation.

    No space before closing punctuation, none after opening brackets.
    """
    out: list[str] = []
    prev: str | None = None
    for text, _kind in trace_outputs:
        if not text:
            continue
        if prev is None or text in CLOSING_PUNCT or prev in OPENING_BRACKETS:
            out.append(text)
        else:
            out.append(" " + text)
        prev = text
    return "".join(out)


def _resolve_anchors(
    segments: Sequence[Segment], resources: TranslationResources
) -> dict[int, tuple[str, str, dict[str, float] | None]]:
    """Two passes over anchors: singles first, then scored multi-gloss ones.

    Returns segment index -> (output text, method, scores). Distances are
    measured in word-unit positions with literals counted; context for
    pass 2 is every pass-1 resolution inside the window.
    """
    positions: list[int] = []  # unit position of each segment's first unit
    cursor = 0
    for seg in segments:
        positions.append(cursor)
        cursor += len(seg.units) if isinstance(seg, Chunk) else 1

    resolved_context: list[tuple[int, str]] = []  # (unit position, resolved text)
    resolutions: dict[int, tuple[str, str, dict[str, float] | None]] = {}
    for idx, seg in enumerate(segments):
        if isinstance(seg, Literal):
            resolved_context.append((positions[idx], seg.token.surface))
        elif isinstance(seg, Anchor) and len(seg.candidates) == 1:
            text = seg.candidates[0].text
            resolutions[idx] = (text, "dictionary", None)
            resolved_context.append((positions[idx], text))

    window = resources.disamb_config.window
    for idx, seg in enumerate(segments):
        if not isinstance(seg, Anchor) or idx in resolutions:
            continue
        context: list[tuple[str, int]] = []
        for pos, text in resolved_context:
            distance = abs(pos - positions[idx])
            if 1 <= distance <= window:
                context.extend((word, distance) for word in text.split())
        scores = {
            g.text: float(score_candidate(g, context, resources.cooc_index))
            for g in seg.candidates
        }
        chosen = disambiguate(seg, context, resources.cooc_index, resources.disamb_config)
        resolutions[idx] = (chosen.text, "disambiguated", scores)
    return resolutions


def translate_sentence(
    text: str, resources: TranslationResources, backend: TranslationBackend
) -> tuple[str, TranslationTrace]:
    """Translate one sentence, returning the text and a per-segment trace.

    Backend failures raise BackendError carrying the untranslated chunk
    texts; anchor and literal resolutions survive in the exception's trace.
    """
    tokens = tokenize(text)
    units = segment_sentence(tokens, resources.lexicon, resources.dictionary)
    segments = classify_segments(units, resources.dictionary)
    anchor_outputs = _resolve_anchors(segments, resources)

    chunk_texts = [seg.text for seg in segments if isinstance(seg, Chunk)]
    try:
        chunk_translations = backend.translate_chunks(chunk_texts) if chunk_texts else []
    except BackendError as exc:
        partial = TranslationTrace(_trace_records(segments, anchor_outputs, None))
        raise BackendError(
            f"chunk translation failed: {exc}", chunks=chunk_texts, trace=partial
        ) from exc
    if len(chunk_translations) != len(chunk_texts):
        raise ProtocolError(
            f"backend returned {len(chunk_translations)} translations for {len(chunk_texts)} chunks",
            chunks=chunk_texts,
        )

    trace = TranslationTrace(_trace_records(segments, anchor_outputs, chunk_translations))
    return assemble(trace.outputs()), trace


def _trace_records(
    segments: Sequence[Segment],
    anchor_outputs: dict[int, tuple[str, str, dict[str, float] | None]],
    chunk_translations: Sequence[str] | None,
) -> list[SegmentTraceRecord]:
    records: list[SegmentTraceRecord] = []
    chunk_no = 0
    for idx, seg in enumerate(segments):
        if isinstance(seg, Literal):
            records.append(
                SegmentTraceRecord("literal", seg.token.surface, seg.token.surface, "literal")
            )
        elif isinstance(seg, Anchor):
            output, method, scores = anchor_outputs[idx]
            records.append(SegmentTraceRecord("anchor", seg.unit.text, output, method, scores))
        else:
            if chunk_translations is None:
                continue  # backend never answered; chunk output unknown
            records.append(
                SegmentTraceRecord("chunk", seg.text, chunk_translations[chunk_no], "backend")
            )
            chunk_no += 1
    return records


def translate_corpus(
    lines: Sequence[str],
    resources: TranslationResources,
    backend: TranslationBackend,
    jobs: int = 1,
) -> tuple[list[tuple[str, TranslationTrace] | None], list[tuple[int, BackendError]]]:
    """Translate many sentences, failing per sentence rather than per corpus.

    Returns results aligned with the input (None where a sentence failed)
    plus the list of (index, error) failures.
    """
    results: list[tuple[str, TranslationTrace] | None] = [None] * len(lines)
    failures: list[tuple[int, BackendError]] = []

    def work(i: int):
        return translate_sentence(lines[i], resources, backend)

    if jobs > 1 and len(lines) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = {i: pool.submit(work, i) for i in range(len(lines))}
        for i, fut in futures.items():
            try:
                results[i] = fut.result()
            except BackendError as exc:
                failures.append((i, exc))
    else:
        for i in range(len(lines)):
            try:
                results[i] = work(i)
            except BackendError as exc:
                failures.append((i, exc))
    return results, sorted(failures, key=lambda item: item[0])


# ---------------------------------------------------------------------------
# Backends
# ---------------------------------------------------------------------------

class MockMode(str, Enum):
    IDENTITY = "identity"
    DICTIONARY_GLOSS = "gloss"


class _IdentityBackend:
    def translate_chunks(self, texts: Sequence[str]) -> list[str]:
        return list(texts)


class _DictionaryGlossBackend:
    def __init__(self, dictionary: BilingualDictionary):
        self._dictionary = dictionary

    def translate_chunks(self, texts: Sequence[str]) -> list[str]:
        out = []
        for text in texts:
            words = []
            for word in text.split():
                glosses = self._dictionary.lookup(word)
                words.append(glosses[0].text if glosses else word)
            out.append(" ".join(words))
        return out


def mock_backend(
    mode: MockMode | str, dictionary: BilingualDictionary | None = None
) -> TranslationBackend:
    """Test doubles for the neural backend: echo, or word-by-word first gloss."""
    mode = MockMode(mode)
    if mode is MockMode.IDENTITY:
        return _IdentityBackend()
    if dictionary is None:
        raise ValueError("gloss mock needs a dictionary")
    return _DictionaryGlossBackend(dictionary)


@dataclass(frozen=True)
class BackendEndpoint:
    base_url: str
    timeout_ms: int = 10_000
    max_batch: int = 32
    retries: int = 2
    backoff_base: float = 0.2

    def __post_init__(self):
        if self.timeout_ms <= 0:
            raise ValueError("timeout must be positive")
        if self.max_batch < 1:
            raise ValueError("max_batch must be >= 1")
        if self.retries < 0:
            raise ValueError("retries must be >= 0")


class RemoteBackend:
    """Wire-protocol client: batches chunks, retries transient failures.

    POST {base_url}/translate with {"chunks": [...]} must answer 200 with
    {"translations": [...]} of equal length. Non-200 statuses and timeouts
    retry with exponential backoff; malformed bodies fail immediately.
    """

    def __init__(self, endpoint: BackendEndpoint, *, sleep: Callable[[float], None] = time.sleep):
        self.endpoint = endpoint
        self._session = requests.Session()
        self._sleep = sleep

    def translate_chunks(self, texts: Sequence[str]) -> list[str]:
        translations: list[str] = []
        for start in range(0, len(texts), self.endpoint.max_batch):
            batch = list(texts[start : start + self.endpoint.max_batch])
            translations.extend(self._translate_batch(batch))
        return translations

    def _translate_batch(self, batch: list[str]) -> list[str]:
        url = self.endpoint.base_url.rstrip("/") + "/translate"
        timeout_s = self.endpoint.timeout_ms / 1000.0
        last_error = "no attempt made"
        for attempt in range(self.endpoint.retries + 1):
            if attempt > 0:
                self._sleep(self.endpoint.backoff_base * 2 ** (attempt - 1))
            try:
                response = self._session.post(url, json={"chunks": batch}, timeout=timeout_s)
            except (requests.Timeout, requests.ConnectionError) as exc:
                last_error = f"request failed: {exc}"
                continue
            if response.status_code != 200:
                last_error = f"status {response.status_code}"
                continue
            try:
                body = response.json()
            except ValueError as exc:
                raise ProtocolError(f"invalid JSON response: {exc}", chunks=batch) from exc
            translations = body.get("translations") if isinstance(body, dict) else None
            if not isinstance(translations, list) or not all(
                isinstance(t, str) for t in translations
            ):
                raise ProtocolError("response missing 'translations' list", chunks=batch)
            if len(translations) != len(batch):
                raise ProtocolError(
                    f"length mismatch: {len(translations)} translations for {len(batch)} chunks",
                    chunks=batch,
                )
            return translations
        raise BackendError(
            f"backend unreachable after {self.endpoint.retries + 1} attempts ({last_error})",
            chunks=batch,
        )

    def health(self) -> bool:
        url = self.endpoint.base_url.rstrip("/") + "/health"
        try:
            response = self._session.get(url, timeout=self.endpoint.timeout_ms / 1000.0)
        except (requests.Timeout, requests.ConnectionError):
            return False
        return response.status_code == 200 and response.json().get("status") == "ok"


def remote_backend(endpoint: BackendEndpoint) -> RemoteBackend:
    return RemoteBackend(endpoint)
