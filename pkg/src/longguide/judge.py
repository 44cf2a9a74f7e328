"""LLM-as-judge ratings and score-distribution divergence analysis."""

from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .backend import ChatBackend, ChatRequest, GenerationParams
from .errors import LongGuideError, ParseError
from .guidelines import parse_score_dict
from .metrics import ScoreHistogram, js_divergence
from .prompts import render_judge_prompt, render_scoring_prompt

log = logging.getLogger(__name__)

RATING_KEYS = ("Format", "Content", "Factuality", "Style", "Quality")

_RATINGS_BLOCK = re.compile(
    r"\[The Start of Ratings\](.*?)\[The End of Ratings\]", re.DOTALL
)
_EXPLANATION_BLOCK = re.compile(
    r"\[The Start of Explanation\](.*?)\[The End of Explanation\]", re.DOTALL
)


@dataclass
class JudgeRatings:
    format: int
    content: int
    factuality: int
    style: int
    quality: int
    explanation: str = ""

    def as_dict(self) -> dict[str, int]:
        return {
            "Format": self.format,
            "Content": self.content,
            "Factuality": self.factuality,
            "Style": self.style,
            "Quality": self.quality,
        }


def parse_judge_response(text: str) -> JudgeRatings:
    """Read the five 1-10 ratings from the delimited ratings block.

    Out-of-range ratings are clamped with a warning rather than rejected.
    """
    match = _RATINGS_BLOCK.search(text)
    if match is None:
        raise ParseError("no ratings block found")
    scores = parse_score_dict(match.group(1), RATING_KEYS)
    missing = [key for key in RATING_KEYS if key not in scores]
    if missing:
        raise ParseError(f"ratings block missing keys: {missing}")
    clamped = {}
    for key, value in scores.items():
        if not 1 <= value <= 10:
            log.warning("clamping out-of-range rating %d for %s", value, key)
            value = min(10, max(1, value))
        clamped[key] = value
    explanation_match = _EXPLANATION_BLOCK.search(text)
    explanation = explanation_match.group(1).strip() if explanation_match else ""
    return JudgeRatings(
        format=clamped["Format"],
        content=clamped["Content"],
        factuality=clamped["Factuality"],
        style=clamped["Style"],
        quality=clamped["Quality"],
        explanation=explanation,
    )


def judge_evaluate(
    user_prompt: str,
    reference: str,
    generated: str,
    judge_backend: ChatBackend,
    params: GenerationParams | None = None,
) -> JudgeRatings:
    """Rate a generated answer against its reference on five criteria."""
    params = params or GenerationParams()
    prompt = render_judge_prompt(user_prompt, reference, generated)
    request = ChatRequest(user=prompt)
    for attempt in range(2):
        response = judge_backend.complete(request, params)
        try:
            return parse_judge_response(response)
        except ParseError as exc:
            if attempt == 0:
                log.warning("judge response unparseable (%s), retrying once", exc)
            else:
                raise
    raise AssertionError("unreachable")


@dataclass
class JsReport:
    per_metric: dict[str, float]
    avg_js: float
    correlations: dict[str, float] = field(default_factory=dict)

    def to_lines(self) -> list[str]:
        lines = [f"{name},{value:.6f}" for name, value in self.per_metric.items()]
        lines.append(f"avg_js,{self.avg_js:.6f}")
        for name, value in self.correlations.items():
            lines.append(f"{name},{value:.6f}")
        return lines


def score_texts(
    rows: Sequence[Mapping[str, str]],
    text_key: str,
    metrics: Sequence[str],
    definitions: Mapping[str, str],
    task_name: str,
    judge_backend: ChatBackend,
    params: GenerationParams | None = None,
) -> dict[str, list[int]]:
    """Judge-score one side (generated or reference) of each row per metric."""
    params = params or GenerationParams()
    collected: dict[str, list[int]] = {name: [] for name in metrics}
    for row in rows:
        prompt = render_scoring_prompt(
            task_name, row["input"], row[text_key], metrics, definitions
        )
        response = judge_backend.complete(ChatRequest(user=prompt), params)
        scores = parse_score_dict(response, metrics)
        for name in metrics:
            if name in scores:
                value = min(5, max(1, scores[name]))
                if value != scores[name]:
                    log.warning("clamping out-of-range judge score for %s", name)
                collected[name].append(value)
    return collected


def analyze_js(
    rows: Sequence[Mapping[str, str]],
    metrics: Sequence[str],
    definitions: Mapping[str, str],
    task_name: str,
    judge_backend: ChatBackend,
    params: GenerationParams | None = None,
) -> JsReport:
    """Divergence between judge-score distributions of outputs vs references.

    Scores each selected metric (1-5) on both sides of every row, builds the
    per-metric histograms, and reports per-metric and mean Jensen-Shannon
    divergence.
    """
    if not metrics:
        raise LongGuideError("bundle lists no selected metrics")
    if not rows:
        raise LongGuideError("no output rows to analyze")
    generated = score_texts(rows, "output", metrics, definitions, task_name, judge_backend, params)
    reference = score_texts(rows, "reference", metrics, definitions, task_name, judge_backend, params)
    per_metric = {}
    for name in metrics:
        if not generated[name] or not reference[name]:
            raise LongGuideError(f"no judge scores collected for metric {name}")
        per_metric[name] = js_divergence(
            ScoreHistogram.from_scores(generated[name]),
            ScoreHistogram.from_scores(reference[name]),
        )
    average = math.fsum(per_metric.values()) / len(per_metric)
    return JsReport(per_metric=per_metric, avg_js=average)
