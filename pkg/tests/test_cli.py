import json

import pytest

from bahnaric_mt.cli import build_parser, run
from mt_testing import DATA_DIR

DICT = str(DATA_DIR / "toy_dictionary.json")
CORPUS = str(DATA_DIR / "toy_corpus.tsv")


def run_ok(capsys, argv):
    code = run(argv)
    captured = capsys.readouterr()
    assert code == 0, captured.err
    return captured.out


class TestExitCodes:
    def test_usage_error_is_1(self, capsys):
        with pytest.raises(SystemExit) as err:
            run(["split", "--no-such-flag"])
        assert err.value.code == 1

    def test_missing_file_is_2(self, capsys):
        assert run(["evaluate", "--hyp", "/nonexistent/h", "--ref", "/nonexistent/r"]) == 2

    def test_data_error_is_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.tsv"
        bad.write_text("only one column\n", encoding="utf-8")
        assert run(["split", "--input", str(bad), "--output-dir", str(tmp_path)]) == 2

    def test_backend_error_is_3(self, tmp_path, capsys):
        sentences = tmp_path / "s.txt"
        sentences.write_text("blang hvư\n", encoding="utf-8")
        code = run(
            [
                "translate",
                "--input", str(sentences),
                "--backend", "remote",
                "--endpoint", "http://127.0.0.1:1",
                "--retries", "0",
                "--timeout", "300",
            ]
        )
        assert code == 3


class TestSplitCommand:
    def test_split_round_trip(self, tmp_path, capsys):
        out = run_ok(
            capsys,
            ["split", "--input", CORPUS, "--output-dir", str(tmp_path), "--seed", "3"],
        )
        sizes = json.loads(out)
        assert sizes == {"train": 24, "valid": 3, "test": 3}
        for name in ("train", "valid", "test"):
            assert (tmp_path / f"{name}.tsv").exists()

    def test_split_deterministic(self, tmp_path, capsys):
        run_ok(capsys, ["split", "--input", CORPUS, "--output-dir", str(tmp_path / "a")])
        run_ok(capsys, ["split", "--input", CORPUS, "--output-dir", str(tmp_path / "b")])
        for name in ("train", "valid", "test"):
            assert (tmp_path / "a" / f"{name}.tsv").read_bytes() == (
                tmp_path / "b" / f"{name}.tsv"
            ).read_bytes()


class TestBuildCommands:
    def test_build_lexicon(self, tmp_path, capsys):
        out_path = tmp_path / "lex.json"
        run_ok(
            capsys,
            ["build-lexicon", "--input", CORPUS, "--output", str(out_path)],
        )
        data = json.loads(out_path.read_text(encoding="utf-8"))
        assert data["entries"] == {"gô tơgŭm": 3}
        assert data["max_ngram"] == 3 and data["min_count"] == 2

    def test_build_cooc(self, tmp_path, capsys):
        out_path = tmp_path / "cooc.json"
        run_ok(capsys, ["build-cooc", "--input", CORPUS, "--output", str(out_path)])
        data = json.loads(out_path.read_text(encoding="utf-8"))
        assert data["window"] == 5
        assert data["neighbors"]["làm"] == {"nhà": 1, "tôi": 1}


class TestAugmentCommand:
    def test_doubles_corpus(self, tmp_path, capsys):
        out_path = tmp_path / "aug.tsv"
        out = run_ok(
            capsys,
            [
                "augment",
                "--input", CORPUS,
                "--alpha", "0.5",
                "--tasks", "swap,token",
                "--seed", "7",
                "--output", str(out_path),
            ],
        )
        summary = json.loads(out)
        assert summary["input"] == 30 and summary["output"] == 60
        assert len(out_path.read_text(encoding="utf-8").splitlines()) == 60

    def test_rerun_is_byte_identical(self, tmp_path, capsys):
        a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
        argv = ["augment", "--input", CORPUS, "--seed", "11", "--output"]
        run_ok(capsys, argv + [str(a)])
        run_ok(capsys, argv + [str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_chunk_fraction_partition(self, tmp_path, capsys):
        out_path = tmp_path / "aug.tsv"
        out = run_ok(
            capsys,
            [
                "augment",
                "--input", CORPUS,
                "--chunk-fraction", "0.8",
                "--output", str(out_path),
            ],
        )
        summary = json.loads(out)
        assert summary["chunked"] == 48 and summary["plain"] == 12
        chunked = (tmp_path / "aug.chunked.tsv").read_text(encoding="utf-8").splitlines()
        plain = (tmp_path / "aug.plain.tsv").read_text(encoding="utf-8").splitlines()
        assert len(chunked) == 48 and len(plain) == 12

    def test_augment_output_feeds_split(self, tmp_path, capsys):
        out_path = tmp_path / "aug.tsv"
        run_ok(capsys, ["augment", "--input", CORPUS, "--output", str(out_path)])
        out = run_ok(
            capsys, ["split", "--input", str(out_path), "--output-dir", str(tmp_path / "sp")]
        )
        assert json.loads(out) == {"train": 48, "valid": 6, "test": 6}

    def test_augment_output_feeds_evaluate(self, tmp_path, capsys):
        out_path = tmp_path / "aug.tsv"
        run_ok(capsys, ["augment", "--input", CORPUS, "--output", str(out_path)])
        out = run_ok(
            capsys,
            [
                "evaluate",
                "--hyp", str(out_path), "--hyp-format", "tsv",
                "--ref", str(out_path), "--ref-format", "tsv",
            ],
        )
        assert json.loads(out)["bleu"] == 100.0


class TestSegmentAndTranslate:
    def test_segment_emits_tagged_jsonl(self, tmp_path, capsys):
        sentences = tmp_path / "s.txt"
        sentences.write_text("hên gô tơgŭm .\n", encoding="utf-8")
        lex = tmp_path / "lex.json"
        run_ok(capsys, ["build-lexicon", "--input", CORPUS, "--output", str(lex)])
        out = run_ok(
            capsys,
            ["segment", "--input", str(sentences), "--dict", DICT, "--lexicon", str(lex)],
        )
        record = json.loads(out.splitlines()[0])
        assert record["text"] == "hên gô tơgŭm ."
        kinds = [s["kind"] for s in record["segments"]]
        assert kinds == ["anchor", "chunk", "literal"]
        assert record["segments"][0]["candidates"] == ["tôi"]

    def test_segment_output_is_valid_translate_input(self, tmp_path, capsys):
        sentences = tmp_path / "s.txt"
        sentences.write_text("hên sa đak\n12, 34\n", encoding="utf-8")
        seg_path = tmp_path / "seg.jsonl"
        run_ok(
            capsys,
            ["segment", "--input", str(sentences), "--dict", DICT, "--output", str(seg_path)],
        )
        out = run_ok(
            capsys,
            [
                "translate",
                "--input", str(seg_path),
                "--format", "jsonl",
                "--dict", DICT,
                "--backend", "mock:gloss",
            ],
        )
        assert out.splitlines() == ["tôi ăn nước", "12, 34"]

    def test_translate_literals_identity(self, tmp_path, capsys):
        sentences = tmp_path / "s.txt"
        sentences.write_text("12, 34\n(7)\n", encoding="utf-8")
        out = run_ok(
            capsys,
            ["translate", "--input", str(sentences), "--backend", "mock:identity"],
        )
        assert out.splitlines() == ["12, 34", "(7)"]

    def test_translate_canonicalizes_literal_spacing(self, tmp_path, capsys):
        sentences = tmp_path / "s.txt"
        sentences.write_text("( 7 )\n", encoding="utf-8")
        out = run_ok(
            capsys,
            ["translate", "--input", str(sentences), "--backend", "mock:identity"],
        )
        assert out.splitlines() == ["(7)"]

    def test_translate_writes_trace(self, tmp_path, capsys):
        sentences = tmp_path / "s.txt"
        sentences.write_text("hên pơm hnam\n", encoding="utf-8")
        cooc = tmp_path / "cooc.json"
        run_ok(capsys, ["build-cooc", "--input", CORPUS, "--output", str(cooc)])
        trace_path = tmp_path / "trace.jsonl"
        out = run_ok(
            capsys,
            [
                "translate",
                "--input", str(sentences),
                "--dict", DICT,
                "--cooc", str(cooc),
                "--backend", "mock:gloss",
                "--trace", str(trace_path),
            ],
        )
        assert out.splitlines() == ["tôi làm nhà"]
        trace = json.loads(trace_path.read_text(encoding="utf-8").splitlines()[0])
        assert trace["translation"] == "tôi làm nhà"
        methods = [s["method"] for s in trace["segments"]]
        assert methods == ["dictionary", "disambiguated", "dictionary"]


class TestEvaluateCommand:
    def test_identity_file_scores_100(self, tmp_path, capsys):
        path = tmp_path / "h.txt"
        path.write_text("tôi làm nhà to\n", encoding="utf-8")
        out = run_ok(capsys, ["evaluate", "--hyp", str(path), "--ref", str(path)])
        report = json.loads(out)
        assert report["bleu"] == 100.0
        assert report["bp"] == 1.0


class TestBackendUrlOverride:
    def test_env_var_beats_endpoint_flag(self, tmp_path, capsys, monkeypatch):
        from bahnaric_mt.pipeline import mock_backend
        from bahnaric_mt.service import create_app
        from mt_testing import ServerThread

        sentences = tmp_path / "s.txt"
        sentences.write_text("blang hvư\n", encoding="utf-8")
        with ServerThread(create_app(mock_backend("identity"))) as server:
            monkeypatch.setenv("BACKEND_URL", server.base_url)
            out = run_ok(
                capsys,
                [
                    "translate",
                    "--input", str(sentences),
                    "--backend", "remote",
                    "--endpoint", "http://127.0.0.1:1",  # dead; env must win
                    "--retries", "0",
                ],
            )
        assert out.splitlines() == ["blang hvư"]


class TestHelpDefaults:
    """--help must document every flag with defaults that match the modules."""

    EXPECTED = {
        "split": ["--train-ratio", "0.8", "--valid-ratio", "--test-ratio", "--seed", "0"],
        "build-lexicon": ["--max-ngram", "3", "--min-count", "2", "--side", "source"],
        "build-cooc": ["--window", "5", "--side", "target"],
        "augment": ["--alpha", "0.5", "--tasks", "swap,token", "--unk", "<unk>", "--no-tag"],
        "translate": ["--window", "5", "--tie-break", "freq", "--batch", "32",
                      "--timeout", "10000", "--retries", "2", "--jobs", "--trace"],
        "evaluate": ["--hyp-format", "--ref-format", "text"],
        "serve-mock": ["--mode", "identity", "--port", "8000", "--host", "127.0.0.1"],
    }

    @pytest.mark.parametrize("command", sorted(EXPECTED))
    def test_help_lists_flags_and_defaults(self, command, capsys):
        parser = build_parser()
        with pytest.raises(SystemExit) as err:
            parser.parse_args([command, "--help"])
        assert err.value.code == 0
        text = capsys.readouterr().out
        for needle in self.EXPECTED[command]:
            assert needle in text, f"{command} --help missing {needle!r}"
