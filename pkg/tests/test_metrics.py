import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from longguide.metrics import (
    ScoreHistogram,
    avg_js,
    bleu_1,
    js_divergence,
    pearson,
    rouge_l,
)

# independently computed before the build (scipy jensenshannon(base=2)**2)
JS_HALF_VS_THREEQ = 0.048794940695398505


def lcs_recursive(a, b):
    """Independent LCS oracle: the textbook recurrence, memoized."""
    memo = {}

    def rec(i, j):
        if i == len(a) or j == len(b):
            return 0
        if (i, j) not in memo:
            if a[i] == b[j]:
                memo[(i, j)] = 1 + rec(i + 1, j + 1)
            else:
                memo[(i, j)] = max(rec(i + 1, j), rec(i, j + 1))
        return memo[(i, j)]

    return rec(0, 0)


def bleu_oracle(candidate, reference):
    """Clipped-precision + brevity-penalty oracle using list.count."""
    if not candidate:
        return 0.0
    cand = [t.lower() for t in candidate]
    ref = [t.lower() for t in reference]
    clipped = sum(min(cand.count(tok), ref.count(tok)) for tok in set(cand))
    precision = clipped / len(cand)
    bp = 1.0 if len(cand) >= len(ref) else math.exp(1 - len(ref) / len(cand))
    return precision * bp


token_lists = st.lists(st.sampled_from(list("abcdefgh")), max_size=12)


class TestRougeL:
    def test_identity(self):
        tokens = "the cat sat".split()
        assert rouge_l(tokens, tokens) == 1.0

    def test_partial_overlap(self):
        # LCS("a b c d", "a c d e") = 3, |ref| = 4
        assert rouge_l("a b c d".split(), "a c d e".split()) == 0.75

    def test_disjoint(self):
        assert rouge_l("x y".split(), "p q r".split()) == 0.0

    def test_case_insensitive(self):
        assert rouge_l(["The", "CAT"], ["the", "cat"]) == 1.0

    def test_empty_reference_raises(self):
        with pytest.raises(ValueError, match="empty reference"):
            rouge_l(["a"], [])

    def test_reference_subsequence_of_candidate(self):
        assert rouge_l("x a y b z c".split(), "a b c".split()) == 1.0

    def test_f1_mode(self):
        # recall 3/4, precision 3/4 -> f1 3/4
        assert rouge_l("a b c d".split(), "a c d e".split(), mode="f1") == pytest.approx(
            2 * 0.75 * 0.75 / 1.5
        )

    @given(token_lists, token_lists.filter(lambda t: t))
    @settings(max_examples=200)
    def test_matches_lcs_oracle(self, cand, ref):
        assert rouge_l(cand, ref) == lcs_recursive(cand, ref) / len(ref)


class TestBleu1:
    def test_identity(self):
        tokens = "the cat sat".split()
        assert bleu_1(tokens, tokens) == 1.0

    def test_clipping(self):
        assert bleu_1("the the the".split(), "the cat".split()) == pytest.approx(1 / 3)

    def test_brevity_penalty(self):
        assert bleu_1(["a"], "a b c".split()) == pytest.approx(math.exp(-2), abs=1e-9)

    def test_empty_candidate(self):
        assert bleu_1([], ["a"]) == 0.0

    def test_empty_reference_raises(self):
        with pytest.raises(ValueError, match="empty reference"):
            bleu_1(["a"], [])

    @given(token_lists, token_lists.filter(lambda t: t))
    @settings(max_examples=200)
    def test_matches_oracle(self, cand, ref):
        assert bleu_1(cand, ref) == pytest.approx(bleu_oracle(cand, ref), abs=1e-9)


distributions = st.lists(
    st.floats(min_value=0.01, max_value=1.0), min_size=5, max_size=5
).map(lambda raw: tuple(v / sum(raw) for v in raw))


class TestJsDivergence:
    def test_identical_is_zero(self):
        p = (0.2, 0.2, 0.2, 0.2, 0.2)
        assert js_divergence(p, p) == 0.0

    def test_disjoint_support_is_one(self):
        assert js_divergence((1, 0, 0, 0, 0), (0, 1, 0, 0, 0)) == pytest.approx(1.0)

    def test_reference_value(self):
        assert js_divergence((0.5, 0.5), (0.75, 0.25)) == pytest.approx(
            JS_HALF_VS_THREEQ, abs=1e-3
        )

    def test_mismatched_supports(self):
        with pytest.raises(ValueError, match="mismatched supports"):
            js_divergence((0.5, 0.5), (1.0, 0.0, 0.0))

    def test_invalid_distribution(self):
        with pytest.raises(ValueError):
            js_divergence((0.5, 0.4), (0.5, 0.5))

    @given(distributions, distributions)
    def test_symmetry_and_range(self, p, q):
        forward = js_divergence(p, q)
        assert forward == js_divergence(q, p)
        assert 0.0 <= forward <= 1.0

    @given(distributions)
    def test_zero_iff_equal(self, p):
        assert js_divergence(p, p) <= 1e-12

    @given(distributions, distributions)
    def test_nonzero_when_different(self, p, q):
        if max(abs(a - b) for a, b in zip(p, q)) > 1e-6:
            assert js_divergence(p, q) > 1e-12


class TestScoreHistogram:
    def test_from_scores(self):
        hist = ScoreHistogram.from_scores([5, 5, 4, 3])
        assert hist.probs == (0.0, 0.0, 0.25, 0.25, 0.5)

    def test_rejects_out_of_support(self):
        with pytest.raises(ValueError, match="outside support"):
            ScoreHistogram.from_scores([6])

    def test_rejects_empty(self):
        with pytest.raises(ValueError, match="no scores"):
            ScoreHistogram.from_scores([])


class TestAvgJs:
    def test_single_zero_pair(self):
        p = (0.5, 0.5)
        assert avg_js([(p, p)]) == 0.0

    def test_mean_of_extremes(self):
        same = ((1.0, 0.0), (1.0, 0.0))
        disjoint = ((1.0, 0.0), (0.0, 1.0))
        assert avg_js([same, disjoint]) == pytest.approx(0.5)

    def test_three_pair_fixture(self):
        pairs = [
            ((0.5, 0.5), (0.5, 0.5)),
            ((1.0, 0.0), (0.0, 1.0)),
            ((0.5, 0.5), (0.75, 0.25)),
        ]
        expected = (0.0 + 1.0 + JS_HALF_VS_THREEQ) / 3
        assert avg_js(pairs) == pytest.approx(expected, abs=1e-9)

    def test_empty_raises(self):
        with pytest.raises(ValueError, match="empty list"):
            avg_js([])


class TestPearson:
    def test_perfect_positive(self):
        assert pearson([1, 2, 3], [1, 2, 3]) == pytest.approx(1.0)

    def test_perfect_negative(self):
        assert pearson([1, 2, 3], [-1, -2, -3]) == pytest.approx(-1.0)

    def test_reference_value(self):
        expected = 3 / math.sqrt(2 * (14 / 3))  # closed form
        assert pearson([1, 2, 3], [1, 2, 4]) == pytest.approx(expected, abs=1e-12)

    def test_constant_series_raises(self):
        with pytest.raises(ValueError, match="zero variance"):
            pearson([1, 1, 1], [1, 2, 3])

    def test_short_series_raises(self):
        with pytest.raises(ValueError):
            pearson([1], [2])
