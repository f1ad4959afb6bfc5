import random
from fractions import Fraction

import pytest

from bahnaric_mt.corpus import Gloss, make_token, tokenize
from bahnaric_mt.disambiguator import (
    CooccurrenceIndex,
    DisambiguationConfig,
    TieBreak,
    build_cooccurrence_index,
    disambiguate,
    score_candidate,
)
from bahnaric_mt.errors import DataError
from bahnaric_mt.segmenter import Anchor, WordUnit
from oracles import choose_gloss


def _anchor(*glosses):
    unit = WordUnit((make_token("x"),))
    return Anchor(unit, tuple(glosses))


def _sentences(*texts):
    return [tokenize(t) for t in texts]


class TestBuildIndex:
    def test_window_two_pairs(self):
        index = build_cooccurrence_index(_sentences("a b c"), window=2)
        assert index.neighbors["a"] == {"b": 1, "c": 1}
        assert index.neighbors["b"] == {"a": 1, "c": 1}
        assert index.neighbors["c"] == {"a": 1, "b": 1}

    def test_window_one_bound(self):
        index = build_cooccurrence_index(_sentences("a b c"), window=1)
        assert index.neighbors["a"] == {"b": 1}

    def test_empty_corpus(self):
        assert build_cooccurrence_index([], window=3).neighbors == {}

    def test_literals_occupy_positions_without_entries(self):
        index = build_cooccurrence_index(_sentences("a , b"), window=1)
        # "," sits between a and b: distance 2 exceeds the window, and the
        # comma itself contributes nothing.
        assert index.neighbors == {}
        wide = build_cooccurrence_index(_sentences("a , b"), window=2)
        assert wide.neighbors["a"] == {"b": 1}
        assert "," not in wide.neighbors

    def test_no_self_neighbors(self):
        index = build_cooccurrence_index(_sentences("a b a"), window=2)
        assert "a" not in index.neighbors.get("a", {})
        assert index.neighbors["a"]["b"] == 2
        assert index.neighbors["b"]["a"] == 2

    def test_symmetry_full_scan(self):
        rng = random.Random(11)
        vocab = ["u", "v", "w", "x", "y", "z", ",", "9"]
        corpus = [
            [make_token(rng.choice(vocab)) for _ in range(rng.randrange(1, 12))]
            for _ in range(200)
        ]
        index = build_cooccurrence_index(corpus, window=3)
        for word, neighbors in index.neighbors.items():
            for other, count in neighbors.items():
                assert index.neighbors[other][word] == count
                assert other != word
                assert count >= 1

    def test_json_round_trip(self, tmp_path):
        index = build_cooccurrence_index(_sentences("a b c", "b c d"), window=2)
        path = tmp_path / "cooc.json"
        index.save(path)
        reloaded = CooccurrenceIndex.load(path)
        assert reloaded.neighbors == index.neighbors
        assert reloaded.window == index.window

    def test_tsv_round_trip(self, tmp_path):
        index = build_cooccurrence_index(_sentences("a b c", "b c d"), window=2)
        path = tmp_path / "cooc.tsv"
        index.save(path, fmt="tsv")
        reloaded = CooccurrenceIndex.load(path)
        assert reloaded.neighbors == index.neighbors
        assert reloaded.window == index.window


class TestScoreCandidate:
    def test_empty_context(self):
        index = CooccurrenceIndex({"x": {"y": 1}}, window=5)
        assert score_candidate("x", [], index) == 0

    def test_reciprocal_distance_sum(self):
        index = CooccurrenceIndex({"cand": {"x": 1, "y": 2}}, window=5)
        score = score_candidate("cand", [("x", 1), ("y", 2)], index)
        assert score == Fraction(3, 2)

    def test_membership_miss(self):
        index = CooccurrenceIndex({"cand": {"y": 1}}, window=5)
        assert score_candidate("cand", [("x", 3)], index) == 0

    def test_multi_token_gloss_uses_head(self):
        index = CooccurrenceIndex({"chế": {"x": 1}}, window=5)
        assert score_candidate("chế tạo", [("x", 1)], index) == 1

    def test_invalid_distance(self):
        index = CooccurrenceIndex({}, window=5)
        with pytest.raises(DataError):
            score_candidate("x", [("y", 0)], index)


class TestDisambiguate:
    CONFIG = DisambiguationConfig(window=5, tie_break=TieBreak.GLOSS_FREQUENCY)

    def test_single_candidate_short_circuits(self):
        index = CooccurrenceIndex({}, window=5)
        anchor = _anchor(Gloss("duy nhất"))
        assert disambiguate(anchor, [], index, self.CONFIG).text == "duy nhất"

    def test_highest_score_wins(self):
        index = CooccurrenceIndex({"a": {"x": 1, "y": 1}, "b": {"y": 1}}, window=5)
        anchor = _anchor(Gloss("a"), Gloss("b"))
        chosen = disambiguate(anchor, [("x", 1), ("y", 2)], index, self.CONFIG)
        assert chosen.text == "a"  # 1.5 beats 0.5

    def test_zero_tie_dictionary_order(self):
        index = CooccurrenceIndex({}, window=5)
        config = DisambiguationConfig(window=5, tie_break=TieBreak.DICTIONARY_ORDER)
        anchor = _anchor(Gloss("first"), Gloss("second"), Gloss("third"))
        assert disambiguate(anchor, [("x", 1)], index, config).text == "first"

    def test_zero_tie_gloss_frequency(self):
        index = CooccurrenceIndex({}, window=5)
        anchor = _anchor(Gloss("low", 1), Gloss("high", 9), Gloss("mid", 3))
        assert disambiguate(anchor, [], index, self.CONFIG).text == "high"

    def test_frequency_tie_falls_back_to_order(self):
        index = CooccurrenceIndex({}, window=5)
        anchor = _anchor(Gloss("một", 2), Gloss("hai", 2))
        assert disambiguate(anchor, [], index, self.CONFIG).text == "một"

    def test_context_clipped_to_window(self):
        index = CooccurrenceIndex({"a": {"far": 1}, "b": {"near": 1}}, window=9)
        config = DisambiguationConfig(window=2, tie_break=TieBreak.DICTIONARY_ORDER)
        anchor = _anchor(Gloss("a"), Gloss("b"))
        # "far" sits outside the window so only b scores.
        chosen = disambiguate(anchor, [("far", 3), ("near", 2)], index, config)
        assert chosen.text == "b"

    def test_monotone_in_distance(self):
        rng = random.Random(3)
        vocab = [f"w{i}" for i in range(8)]
        for _ in range(300):
            corpus = [
                [make_token(rng.choice(vocab)) for _ in range(rng.randrange(2, 8))]
                for _ in range(10)
            ]
            index = build_cooccurrence_index(corpus, window=4)
            head = rng.choice(vocab)
            word = rng.choice(vocab)
            far = rng.randrange(2, 6)
            near = rng.randrange(1, far)
            base = [(rng.choice(vocab), rng.randrange(1, 6)) for _ in range(3)]
            low = score_candidate(head, base + [(word, far)], index)
            high = score_candidate(head, base + [(word, near)], index)
            assert high >= low

    def test_argmax_invariant_under_scaling(self):
        rng = random.Random(17)
        vocab = [f"w{i}" for i in range(10)]
        for _ in range(100):
            corpus = [
                [make_token(rng.choice(vocab)) for _ in range(rng.randrange(2, 9))]
                for _ in range(12)
            ]
            index = build_cooccurrence_index(corpus, window=3)
            glosses = tuple(
                Gloss(rng.choice(vocab), rng.randrange(0, 4)) for _ in range(rng.randrange(2, 6))
            )
            context = [(rng.choice(vocab), rng.randrange(1, 6)) for _ in range(rng.randrange(0, 7))]
            config = DisambiguationConfig(window=5, tie_break=TieBreak.GLOSS_FREQUENCY)
            anchor = _anchor(*glosses)
            baseline = disambiguate(anchor, context, index, config)
            factor = rng.choice([2, 3, 10, 1000])
            scaled = CooccurrenceIndex(
                {w: {n: c * factor for n, c in ns.items()} for w, ns in index.neighbors.items()},
                window=index.window,
            )
            assert disambiguate(anchor, context, scaled, config) is baseline

    def test_matches_brute_force_on_random_instances(self):
        rng = random.Random(99)
        vocab = [f"w{i}" for i in range(9)]
        for _ in range(500):
            corpus = [
                [make_token(rng.choice(vocab)) for _ in range(rng.randrange(2, 8))]
                for _ in range(8)
            ]
            window = rng.randrange(1, 6)
            index = build_cooccurrence_index(corpus, window=window)
            n_cands = rng.randrange(1, 6)
            glosses = tuple(
                Gloss(" ".join(rng.choice(vocab) for _ in range(rng.randrange(1, 3))),
                      rng.choice([None, 0, 1, 2, 3]))
                for _ in range(n_cands)
            )
            context = [
                (rng.choice(vocab), rng.randrange(1, 6)) for _ in range(rng.randrange(0, 7))
            ]
            tie = rng.choice([TieBreak.GLOSS_FREQUENCY, TieBreak.DICTIONARY_ORDER])
            config = DisambiguationConfig(window=window, tie_break=tie)
            got = disambiguate(_anchor(*glosses), context, index, config)
            want = choose_gloss(
                [(g.text, g.freq) for g in glosses],
                context,
                index.neighbors,
                window,
                tie.value,
            )
            assert got is glosses[want]
