import numpy as np
import pytest

from avatardm.errors import EmptyInput, LexiconError
from avatardm.sentiment import (
    RewardSignal,
    SentimentClass,
    classify,
    load_lexicon,
    score_utterance,
    to_reward,
)


def paper_class(compound):
    if compound >= 0.05:
        return SentimentClass.POSITIVE
    if compound <= -0.05:
        return SentimentClass.NEGATIVE
    return SentimentClass.NEUTRAL


class TestLexiconFormat:
    def test_loads_packaged_lexicon(self, lexicon):
        assert lexicon["great"] == pytest.approx(3.1)
        assert lexicon["no"] == pytest.approx(-1.2)

    def test_rejects_duplicates(self, tmp_path):
        path = tmp_path / "lex.txt"
        path.write_text("good\t1.0\ngood\t2.0\n", encoding="utf-8")
        with pytest.raises(LexiconError):
            load_lexicon(path)

    def test_rejects_out_of_range_valence(self, tmp_path):
        path = tmp_path / "lex.txt"
        path.write_text("good\t9.0\n", encoding="utf-8")
        with pytest.raises(LexiconError):
            load_lexicon(path)

    def test_allows_comments_and_blank_lines(self, tmp_path):
        path = tmp_path / "lex.txt"
        path.write_text("# header\n\ngood\t1.9\n", encoding="utf-8")
        assert load_lexicon(path) == {"good": 1.9}


class TestScoreUtterance:
    def test_bare_interrogative_is_fully_neutral(self, lexicon):
        score = score_utterance("What?", lexicon)
        assert score.compound == 0.0
        assert score.neu == 1.0
        assert score.neg == 0.0 and score.pos == 0.0

    def test_thats_great_is_positive_near_reference(self, lexicon):
        score = score_utterance("That's great.", lexicon)
        assert classify(score) is SentimentClass.POSITIVE
        assert score.compound == pytest.approx(0.6249, abs=0.15)

    def test_negated_rejection_is_negative(self, lexicon):
        score = score_utterance("No, i don't think so.", lexicon)
        assert classify(score) is SentimentClass.NEGATIVE
        assert score.compound < 0

    def test_negation_flips_next_scored_token(self, lexicon):
        positive = score_utterance("this is good", lexicon)
        negated = score_utterance("this is not good", lexicon)
        assert positive.compound > 0
        assert negated.compound < 0

    def test_exclamation_boost_amplifies(self, lexicon):
        plain = score_utterance("This is great", lexicon)
        excited = score_utterance("This is great!!!", lexicon)
        over = score_utterance("This is great!!!!!!", lexicon)
        assert excited.compound > plain.compound
        # The boost saturates at three marks.
        assert over.compound == excited.compound

    def test_empty_input_raises(self, lexicon):
        with pytest.raises(EmptyInput):
            score_utterance("   ", lexicon)

    def test_compound_bounded_on_random_text(self, lexicon):
        rng = np.random.default_rng(9)
        words = list(lexicon) + ["the", "book", "cart", "zzz"]
        for _ in range(300):
            text = " ".join(rng.choice(words, size=rng.integers(1, 12)))
            score = score_utterance(text, lexicon)
            assert -1.0 <= score.compound <= 1.0

    def test_unknown_token_never_changes_sign(self, lexicon):
        rng = np.random.default_rng(10)
        words = list(lexicon)
        for _ in range(200):
            text = " ".join(rng.choice(words, size=rng.integers(1, 8)))
            base = score_utterance(text, lexicon).compound
            extended = score_utterance(text + " zzzunknownzzz", lexicon).compound
            assert np.sign(base) == np.sign(extended)

    def test_proportions_sum_to_one(self, lexicon, transcript):
        for text, _ in transcript:
            score = score_utterance(text, lexicon)
            assert score.neg + score.neu + score.pos == pytest.approx(1.0, abs=0.01)


class TestClassify:
    def test_reference_compounds_classify_as_expected(self):
        score = lambda c: type("S", (), {"compound": c})()
        assert classify(score(0.6249)) is SentimentClass.POSITIVE
        assert classify(score(0.0)) is SentimentClass.NEUTRAL
        assert classify(score(-0.296)) is SentimentClass.NEGATIVE

    def test_cutoffs_are_inclusive(self):
        score = lambda c: type("S", (), {"compound": c})()
        assert classify(score(0.05)) is SentimentClass.POSITIVE
        assert classify(score(-0.05)) is SentimentClass.NEGATIVE
        assert classify(score(0.049)) is SentimentClass.NEUTRAL

    def test_monotone_in_compound(self):
        score = lambda c: type("S", (), {"compound": c})()
        order = [classify(score(c)) for c in np.linspace(-1, 1, 201)]
        assert order == sorted(order)


class TestTranscriptAgreement:
    def test_class_agreement_at_least_22_of_26(self, lexicon, transcript):
        agree = sum(
            classify(score_utterance(text, lexicon)) == paper_class(reference)
            for text, reference in transcript
        )
        assert agree >= 22

    def test_most_compounds_match_reference_exactly(self, lexicon, transcript):
        exact = sum(
            abs(score_utterance(text, lexicon).compound - reference) < 5e-5
            for text, reference in transcript
        )
        assert exact >= 20


class TestToReward:
    def test_positive_non_terminal(self):
        signal = to_reward(SentimentClass.POSITIVE, is_terminal_goal=False)
        assert signal.value == pytest.approx(0.9)
        assert signal.turn_penalty_applied

    def test_neutral_terminal(self):
        signal = to_reward(SentimentClass.NEUTRAL, is_terminal_goal=True)
        assert signal.value == pytest.approx(5.0)
        assert not signal.turn_penalty_applied

    def test_negative_non_terminal(self):
        signal = to_reward(SentimentClass.NEGATIVE, is_terminal_goal=False)
        assert signal.value == pytest.approx(-1.1)

    def test_reward_carries_class(self):
        signal = to_reward(SentimentClass.NEGATIVE, is_terminal_goal=True)
        assert isinstance(signal, RewardSignal)
        assert signal.sentiment_class is SentimentClass.NEGATIVE
        assert signal.value == pytest.approx(4.0)
