import json
import logging

import pytest

from chunkserve.adapters import (
    GlossAdapter,
    load_gloss_table,
    load_seq2seq_adapter,
    truncate_chunk,
)
from serve_testing import PARITY_DICT


class TestGlossTable:
    def test_object_format(self, tmp_path):
        path = tmp_path / "d.json"
        path.write_text(json.dumps({"đak": ["nước", "sông"]}), encoding="utf-8")
        assert load_gloss_table(path) == {"đak": "nước"}

    def test_records_format_first_record_wins(self, tmp_path):
        records = [
            {"bahnaric": "pơm", "vietnamese": ["làm"]},
            {"bahnaric": "pơm", "vietnamese": ["chế tạo"]},
        ]
        path = tmp_path / "d.json"
        path.write_text(json.dumps(records), encoding="utf-8")
        assert load_gloss_table(path) == {"pơm": "làm"}

    def test_headwords_lowercased(self, tmp_path):
        path = tmp_path / "d.json"
        path.write_text(json.dumps({"Đak": ["nước"]}), encoding="utf-8")
        assert "đak" in load_gloss_table(path)

    def test_empty_glosses_rejected(self, tmp_path):
        path = tmp_path / "d.json"
        path.write_text(json.dumps({"đak": []}), encoding="utf-8")
        with pytest.raises(ValueError):
            load_gloss_table(path)


class TestGlossAdapter:
    def test_word_by_word_substitution(self):
        adapter = GlossAdapter.from_file(PARITY_DICT)
        assert adapter.translate_batch(["đak"]) == ["nước"]
        assert adapter.translate_batch(["đak blang"]) == ["nước blang"]

    def test_empty_batch(self):
        adapter = GlossAdapter({"a": "b"})
        assert adapter.translate_batch([]) == []

    def test_case_insensitive_lookup(self):
        adapter = GlossAdapter({"đak": "nước"})
        assert adapter.translate_batch(["ĐAK Đak"]) == ["nước nước"]

    def test_truncates_overlong_chunk(self, caplog):
        adapter = GlossAdapter({"w": "v"}, max_input_tokens=256)
        chunk = " ".join(["w"] * 300)
        with caplog.at_level(logging.WARNING, logger="chunkserve"):
            out = adapter.translate_batch([chunk])
        assert out == [" ".join(["v"] * 256)]
        assert any("truncating" in rec.message for rec in caplog.records)

    def test_truncate_helper_is_noop_under_limit(self):
        assert truncate_chunk("a b c", 256) == "a b c"


class TestSeq2SeqAdapter:
    def test_missing_checkpoint_fails_startup(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_seq2seq_adapter(tmp_path / "no-such-model")

    def test_non_model_directory_rejected(self, tmp_path):
        (tmp_path / "empty").mkdir()
        with pytest.raises(RuntimeError):
            load_seq2seq_adapter(tmp_path / "empty")

    @pytest.mark.skipif(
        not __import__("os").environ.get("CHUNKSERVE_TEST_CHECKPOINT"),
        reason="set CHUNKSERVE_TEST_CHECKPOINT to a seq2seq model directory",
    )
    def test_checkpoint_round_trip(self):
        import os

        adapter = load_seq2seq_adapter(os.environ["CHUNKSERVE_TEST_CHECKPOINT"])
        assert adapter.translate_batch([]) == []
        out = adapter.translate_batch(["one", "two", "three"])
        assert len(out) == 3
