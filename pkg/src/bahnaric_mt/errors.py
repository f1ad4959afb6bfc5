"""Exception types shared across the toolkit.

DataError maps to CLI exit code 2, BackendError (and subclasses) to exit
code 3; anything else is a usage or programming error.
"""

from __future__ import annotations


class DataError(ValueError):
    """Malformed input data (corpus line, dictionary record, bad ratios)."""

    def __init__(self, message: str, *, line: int | None = None, pair_id: str | None = None):
        parts = [message]
        if line is not None:
            parts.append(f"(line {line})")
        if pair_id is not None:
            parts.append(f"(pair {pair_id!r})")
        super().__init__(" ".join(parts))
        self.line = line
        self.pair_id = pair_id


class BackendError(RuntimeError):
    """Chunk-translation backend failed after exhausting retries.

    Carries the chunk texts that could not be translated so callers can
    report or retry them without losing anchor/literal work.
    """

    def __init__(self, message: str, *, chunks: list[str] | None = None, trace=None):
        super().__init__(message)
        self.chunks = chunks or []
        self.trace = trace


class ProtocolError(BackendError):
    """The backend answered, but not per the wire protocol. Not retriable."""
