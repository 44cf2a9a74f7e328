import pytest
from hypothesis import given
from hypothesis import strategies as st

from longguide.textstat import LengthStats, length_stats, split_sentences, tokenize


class TestTokenize:
    def test_strips_edge_punctuation(self):
        assert tokenize("Hello, world!") == ["Hello", "world"]

    def test_empty_input(self):
        assert tokenize("") == []

    def test_collapses_whitespace(self):
        assert tokenize("a  b\tc") == ["a", "b", "c"]

    def test_inner_punctuation_kept(self):
        assert tokenize("don't stop-me (now)") == ["don't", "stop-me", "now"]

    def test_punctuation_only_tokens_dropped(self):
        assert tokenize("!!! ... --") == []

    @given(st.text())
    def test_idempotent_under_rejoining(self, text):
        tokens = tokenize(text)
        assert tokenize(" ".join(tokens)) == tokens


class TestSplitSentences:
    def test_three_terminals(self):
        assert split_sentences("A. B! C?") == ["A.", "B!", "C?"]

    def test_abbreviation_suppresses_split(self):
        assert split_sentences("Dr. Smith left. He returned.") == [
            "Dr. Smith left.",
            "He returned.",
        ]

    def test_fragment_counts_as_sentence(self):
        assert split_sentences("no terminal punctuation") == ["no terminal punctuation"]

    def test_terminal_run(self):
        assert split_sentences("Really?! Yes.") == ["Really?!", "Yes."]

    def test_custom_abbreviations(self):
        assert len(split_sentences("See fig. 3. Then stop.", abbreviations=("fig.",))) == 2
        assert len(split_sentences("See fig. 3. Then stop.", abbreviations=())) == 3

    def test_abbreviation_mid_text(self):
        text = "Use tools, e.g. a hammer. Then rest."
        assert split_sentences(text) == ["Use tools, e.g. a hammer.", "Then rest."]

    @given(st.text())
    def test_at_least_one_sentence_when_tokens_exist(self, text):
        if tokenize(text):
            assert len(split_sentences(text)) >= 1


class TestLengthStats:
    def test_three_sample_fixture(self):
        refs = [
            "one sentence with exactly these ten small words in here",  # 1 s, 10 w
            "First bit has some words here. Second bit has ten more words over here to go on.",  # 2 s, 17 w
            "Alpha beta gamma delta epsilon zeta eta. Theta iota kappa lambda mu nu extra. "
            "Xi omicron pi rho sigma tau upsilon phi chi omega.",  # 3 s, 24 w
        ]
        assert length_stats(refs) == LengthStats(1, 3, 2, 10, 24, 17)

    def test_singleton(self):
        stats = length_stats(["Two sentences here now. With seventeen small words total in "
                              "this reference text for the count check."])
        assert stats.min_s == stats.max_s == stats.avg_s == 2
        assert stats.min_t == stats.max_t == stats.avg_t == 17

    def test_mean_rounds_half_up(self):
        # sentence counts {1, 2} -> mean 1.5 -> 2
        stats = length_stats(["One sentence only", "Two parts. Second part."])
        assert stats.avg_s == 2

    def test_empty_list_raises(self):
        with pytest.raises(ValueError, match="empty dataset"):
            length_stats([])

    @given(st.lists(st.sampled_from(["One. Two.", "Only one here.", "A. B. C."]),
                    min_size=1, max_size=6))
    def test_bounds_order(self, refs):
        stats = length_stats(refs)
        assert stats.min_s <= stats.avg_s <= stats.max_s
        assert stats.min_t <= stats.avg_t <= stats.max_t

    def test_identical_references_collapse(self):
        stats = length_stats(["Same text. Both times."] * 4)
        assert stats.min_s == stats.avg_s == stats.max_s
        assert stats.min_t == stats.avg_t == stats.max_t
