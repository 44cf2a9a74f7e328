"""Reference-based scores and distribution statistics.

ROUGE-L here is recall-based (LCS over reference length) and BLEU-1 is
clipped unigram precision with the standard brevity penalty. Token matching
is case-insensitive for both. Jensen-Shannon divergence uses log base 2 so
its range is [0, 1].
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

SCORE_SUPPORT = (1, 2, 3, 4, 5)


def rouge_l(
    candidate: Sequence[str], reference: Sequence[str], mode: str = "recall"
) -> float:
    """LCS-based score of candidate against a non-empty reference.

    mode "recall" (default) returns LCS/|reference|; mode "f1" returns the
    balanced F-measure of LCS recall and precision.
    """
    if not reference:
        raise ValueError("empty reference")
    if mode not in ("recall", "f1"):
        raise ValueError(f"unknown mode: {mode}")
    cand = [t.lower() for t in candidate]
    ref = [t.lower() for t in reference]
    lcs = _lcs_length(cand, ref)
    recall = lcs / len(ref)
    if mode == "recall":
        return recall
    if not cand or lcs == 0:
        return 0.0
    precision = lcs / len(cand)
    return 2 * precision * recall / (precision + recall)


def _lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    # iterative DP, one rolling row
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        curr = [0] * (len(b) + 1)
        for j, y in enumerate(b, start=1):
            if x == y:
                curr[j] = prev[j - 1] + 1
            else:
                curr[j] = max(prev[j], curr[j - 1])
        prev = curr
    return prev[-1]


def bleu_1(candidate: Sequence[str], reference: Sequence[str]) -> float:
    """Clipped unigram precision times brevity penalty."""
    if not reference:
        raise ValueError("empty reference")
    if not candidate:
        return 0.0
    cand = [t.lower() for t in candidate]
    ref_counts = Counter(t.lower() for t in reference)
    cand_counts = Counter(cand)
    clipped = sum(min(count, ref_counts[tok]) for tok, count in cand_counts.items())
    precision = clipped / len(cand)
    brevity = math.exp(min(0.0, 1.0 - len(reference) / len(cand)))
    return precision * brevity


@dataclass(frozen=True)
class ScoreHistogram:
    """Probability distribution over the discrete judge-score support 1..5."""

    probs: tuple[float, ...]

    def __post_init__(self) -> None:
        _validate_distribution(self.probs)

    @classmethod
    def from_scores(
        cls, scores: Iterable[int], support: Sequence[int] = SCORE_SUPPORT
    ) -> "ScoreHistogram":
        """Build an add-zero histogram from integer scores on the support."""
        scores = list(scores)
        if not scores:
            raise ValueError("no scores")
        counts = Counter(scores)
        unknown = set(counts) - set(support)
        if unknown:
            raise ValueError(f"scores outside support: {sorted(unknown)}")
        total = len(scores)
        return cls(tuple(counts[s] / total for s in support))


def _validate_distribution(probs: Sequence[float]) -> None:
    if any(p < 0 for p in probs):
        raise ValueError("negative probability")
    if abs(math.fsum(probs) - 1.0) > 1e-9:
        raise ValueError("probabilities must sum to 1")


def js_divergence(
    p: "ScoreHistogram | Sequence[float]", q: "ScoreHistogram | Sequence[float]"
) -> float:
    """Base-2 Jensen-Shannon divergence between two discrete distributions."""
    pv = p.probs if isinstance(p, ScoreHistogram) else tuple(p)
    qv = q.probs if isinstance(q, ScoreHistogram) else tuple(q)
    if len(pv) != len(qv):
        raise ValueError("mismatched supports")
    _validate_distribution(pv)
    _validate_distribution(qv)
    div = 0.0
    for pi, qi in zip(pv, qv):
        mi = (pi + qi) / 2.0
        # one symmetric term per bin keeps js(p, q) == js(q, p) bit-exact
        term_p = 0.5 * pi * math.log2(pi / mi) if pi > 0 else 0.0
        term_q = 0.5 * qi * math.log2(qi / mi) if qi > 0 else 0.0
        div += term_p + term_q
    return div


def avg_js(
    pairs: Sequence[tuple["ScoreHistogram | Sequence[float]", "ScoreHistogram | Sequence[float]"]],
) -> float:
    """Arithmetic mean of js_divergence over histogram pairs."""
    if not pairs:
        raise ValueError("empty list")
    return math.fsum(js_divergence(p, q) for p, q in pairs) / len(pairs)


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Sample Pearson correlation coefficient of two equal-length series."""
    if len(xs) != len(ys):
        raise ValueError("length mismatch")
    if len(xs) < 2:
        raise ValueError("need at least 2 paired values")
    mean_x = math.fsum(xs) / len(xs)
    mean_y = math.fsum(ys) / len(ys)
    dx = [x - mean_x for x in xs]
    dy = [y - mean_y for y in ys]
    var_x = math.fsum(d * d for d in dx)
    var_y = math.fsum(d * d for d in dy)
    if var_x == 0.0 or var_y == 0.0:
        raise ValueError("zero variance")
    cov = math.fsum(a * b for a, b in zip(dx, dy))
    return cov / math.sqrt(var_x * var_y)
