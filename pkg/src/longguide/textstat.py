"""Deterministic tokenization, sentence splitting, and length statistics.

Word counts use whitespace-delimited tokens with edge punctuation stripped.
Sentence splitting is rule-based on terminal punctuation with a configurable
abbreviation list; it is intentionally simple and only needs to be consistent
within a task.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Sequence

DEFAULT_ABBREVIATIONS = ("Mr.", "Mrs.", "Dr.", "e.g.", "i.e.", "etc.")

_TERMINALS = ".!?"


def tokenize(text: str) -> list[str]:
    """Split on whitespace, strip edge punctuation, drop empty tokens."""
    tokens = []
    for raw in text.split():
        token = raw.strip(string.punctuation)
        if token:
            tokens.append(token)
    return tokens


def split_sentences(
    text: str, abbreviations: Sequence[str] = DEFAULT_ABBREVIATIONS
) -> list[str]:
    """Split on ., ! or ? followed by whitespace or end of text.

    A split is suppressed when the word ending at the terminal matches one of
    the configured abbreviations. A trailing fragment without terminal
    punctuation counts as one sentence.
    """
    abbrevs = {a.lower() for a in abbreviations}
    sentences: list[str] = []
    start = 0
    i = 0
    n = len(text)
    while i < n:
        if text[i] in _TERMINALS:
            # absorb runs like "?!" or "..."
            j = i
            while j + 1 < n and text[j + 1] in _TERMINALS:
                j += 1
            at_boundary = j + 1 >= n or text[j + 1].isspace()
            if at_boundary and not _ends_with_abbreviation(text, start, j, abbrevs):
                sentence = text[start : j + 1].strip()
                if sentence:
                    sentences.append(sentence)
                start = j + 1
            i = j + 1
        else:
            i += 1
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def _ends_with_abbreviation(
    text: str, start: int, terminal: int, abbrevs: set[str]
) -> bool:
    word_start = terminal
    while word_start > start and not text[word_start - 1].isspace():
        word_start -= 1
    word = text[word_start : terminal + 1]
    return word.lower() in abbrevs


@dataclass(frozen=True)
class LengthStats:
    """Sentence- and word-count bounds with rounded means over references."""

    min_s: int
    max_s: int
    avg_s: int
    min_t: int
    max_t: int
    avg_t: int


def length_stats(
    references: Sequence[str], abbreviations: Sequence[str] = DEFAULT_ABBREVIATIONS
) -> LengthStats:
    """Compute per-reference sentence/word counts and their min/max/mean.

    Means are rounded half-up to integers. Raises ValueError on an empty
    reference list.
    """
    if not references:
        raise ValueError("empty dataset")
    sentence_counts = [len(split_sentences(ref, abbreviations)) for ref in references]
    word_counts = [len(tokenize(ref)) for ref in references]
    return LengthStats(
        min_s=min(sentence_counts),
        max_s=max(sentence_counts),
        avg_s=_mean_half_up(sentence_counts),
        min_t=min(word_counts),
        max_t=max(word_counts),
        avg_t=_mean_half_up(word_counts),
    )


def _mean_half_up(counts: Sequence[int]) -> int:
    # exact integer arithmetic: floor(total/n + 1/2)
    total = sum(counts)
    n = len(counts)
    return (2 * total + n) // (2 * n)
