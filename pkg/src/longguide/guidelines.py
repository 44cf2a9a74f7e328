"""Self-evaluated score collection and guideline text synthesis.

Score collection judges each training reference on the selected metrics
(scale 1-5), aggregates the self-consistency draws per metric by median, and
maintains running means with the incremental update m <- m + (x - m)/(i + 1).
The output-constraint guideline is a fixed sentence template filled with
length statistics over the training references.
"""

from __future__ import annotations

import json
import logging
import math
import re
import statistics
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .backend import ChatBackend, ChatRequest, GenerationParams
from .dataset import TaskDataset
from .errors import LongGuideError, ParseError
from .prompts import (
    render_definitions_prompt,
    render_mg_prompt,
    render_scoring_prompt,
)
from .textstat import LengthStats, length_stats

log = logging.getLogger(__name__)

OCG_TEMPLATE = (
    "The {response_noun} must have from {min_s} to {max_s} sentences and from "
    "{min_t} to {max_t} words with an average of {avg_t} words and {avg_s} sentences."
)

_DICT_BLOCK = re.compile(r"\{.*?\}", re.DOTALL)
_PAIR = re.compile(r"[\"']([^\"']+)[\"']\s*:\s*(-?\d+(?:\.\d+)?)")
_BULLET_PREFIX = re.compile(r"^\s*(?:[-*•]+|\d+[.)])\s*")


@dataclass
class MetricScoreTable:
    """Per-metric running means plus the per-sample aggregated scores."""

    means: dict[str, float] = field(default_factory=dict)
    counts: dict[str, int] = field(default_factory=dict)
    per_sample: dict[str, list[float]] = field(default_factory=dict)

    def update(self, metric: str, score: float) -> None:
        count = self.counts.get(metric, 0)
        mean = self.means.get(metric, 0.0)
        self.means[metric] = mean + (score - mean) / (count + 1)
        self.counts[metric] = count + 1
        self.per_sample.setdefault(metric, []).append(score)


@dataclass
class MetricGuideline:
    text: str
    source_scores: dict[str, float] = field(default_factory=dict)


@dataclass
class OutputConstraintGuideline:
    text: str
    stats: LengthStats


def parse_score_dict(text: str, metrics: Sequence[str]) -> dict[str, int]:
    """Extract the first {...} block and read integer scores for metrics.

    Metric names match case-insensitively; extra keys are ignored. Raises
    ParseError when no block or none of the expected keys are found.
    """
    match = _DICT_BLOCK.search(text)
    if match is None:
        raise ParseError("no dictionary found")
    block = match.group(0)
    by_lower = {name.lower(): name for name in metrics}
    result: dict[str, int] = {}
    try:
        data = json.loads(block)
    except json.JSONDecodeError:
        data = {key: float(value) for key, value in _PAIR.findall(block)}
    for key, value in data.items():
        canonical = by_lower.get(str(key).strip().lower())
        if canonical is None or canonical in result:
            continue
        try:
            result[canonical] = math.floor(float(value) + 0.5)
        except (TypeError, ValueError):
            log.warning("non-numeric score for %r: %r", key, value)
    if not result:
        raise ParseError("no expected keys")
    return result


def collect_scores(
    train: TaskDataset,
    metrics: Sequence[str],
    backend: ChatBackend,
    task_name: str,
    definitions: Mapping[str, str],
    params: GenerationParams | None = None,
) -> MetricScoreTable:
    """Score every training reference on the selected metrics.

    Each sample gets params.n_samples self-consistency draws; per-metric
    values are aggregated by median. Scores outside [1, 5] are clamped with
    a warning. A sample whose draws all fail to parse is retried once and
    then skipped; if more than half the samples are skipped the whole
    collection aborts.
    """
    if not metrics:
        raise LongGuideError("scoring failed: no metrics selected")
    if not train.samples:
        raise LongGuideError("scoring failed: empty training set")
    params = params or GenerationParams(temperature=0.7, n_samples=3)
    table = MetricScoreTable()
    skipped = 0
    for sample in train.samples:
        prompt = render_scoring_prompt(
            task_name, sample.input, sample.reference, metrics, definitions
        )
        request = ChatRequest(user=prompt)
        draws = _parse_draws(backend.self_consistent_complete(request, params), metrics)
        if not draws:
            log.warning("no parseable scores for sample, retrying once")
            draws = _parse_draws(
                backend.self_consistent_complete(request, params), metrics
            )
        if not draws:
            skipped += 1
            log.warning("skipping sample: scores unparseable after retry")
            continue
        for metric in metrics:
            values = [d[metric] for d in draws if metric in d]
            if not values:
                continue
            table.update(metric, statistics.median(values))
    if skipped * 2 > len(train.samples):
        raise LongGuideError(
            f"scoring failed: {skipped} of {len(train.samples)} samples unparseable"
        )
    return table


def _parse_draws(
    responses: Sequence[str], metrics: Sequence[str]
) -> list[dict[str, int]]:
    draws = []
    for response in responses:
        try:
            scores = parse_score_dict(response, metrics)
        except ParseError:
            log.warning("dropping unparseable self-consistency draw")
            continue
        clamped = {}
        for name, value in scores.items():
            if not 1 <= value <= 5:
                log.warning("clamping out-of-range score %d for %s", value, name)
                value = min(5, max(1, value))
            clamped[name] = value
        draws.append(clamped)
    return draws


def fetch_definitions(
    metrics: Sequence[str],
    task_name: str,
    backend: ChatBackend,
    params: GenerationParams | None = None,
) -> dict[str, str]:
    """Ask the model to define each metric; parse bullet lines by name.

    A line containing a metric name starts that metric's definition;
    following lines without any name continue it. Metrics left undefined get
    a generic fallback with a warning.
    """
    if not metrics:
        raise LongGuideError("no metrics to define")
    params = params or GenerationParams()
    prompt = render_definitions_prompt(task_name, metrics)
    response = backend.complete(ChatRequest(user=prompt), params)
    definitions: dict[str, str] = {}
    current: str | None = None
    for line in response.splitlines():
        stripped = _BULLET_PREFIX.sub("", line).strip()
        if not stripped:
            continue
        matched = _match_metric(stripped, metrics)
        if matched is not None:
            definitions[matched] = _definition_text(stripped, matched)
            current = matched
        elif current is not None:
            definitions[current] = f"{definitions[current]} {stripped}".strip()
    for name in metrics:
        if not definitions.get(name):
            log.warning("no definition returned for %s, using fallback", name)
            definitions[name] = f"quality of the output with respect to {name}"
    return definitions


def _match_metric(line: str, metrics: Sequence[str]) -> str | None:
    lowered = line.lower()
    best = None
    best_pos = len(line) + 1
    for name in metrics:
        pos = lowered.find(name.lower())
        if pos != -1 and (pos < best_pos or (pos == best_pos and len(name) > len(best or ""))):
            best = name
            best_pos = pos
    return best


def _definition_text(line: str, metric: str) -> str:
    lowered = line.lower()
    pos = lowered.find(metric.lower()) + len(metric)
    rest = line[pos:].lstrip(" :*-–").strip()
    return rest if rest else line.strip()


def generate_mg(
    metrics: Sequence[str],
    scores: MetricScoreTable,
    task_name: str,
    backend: ChatBackend,
    params: GenerationParams | None = None,
) -> MetricGuideline:
    """Render the guideline-synthesis prompt and join the bullet reply lines."""
    missing = [m for m in metrics if m not in scores.means]
    if missing:
        raise LongGuideError(f"scores missing for metrics: {missing}")
    params = params or GenerationParams()
    prompt = render_mg_prompt(task_name, metrics, scores.means)
    request = ChatRequest(user=prompt)
    for attempt in range(2):
        response = backend.complete(request, params)
        lines = _guideline_lines(response)
        if lines:
            return MetricGuideline(
                text="\n".join(lines),
                source_scores={m: scores.means[m] for m in metrics},
            )
        if attempt == 0:
            log.warning("empty guideline response, retrying once")
    raise LongGuideError("guideline generation failed: unparseable response")


def mg_from_definitions(
    metrics: Sequence[str], definitions: Mapping[str, str]
) -> MetricGuideline:
    """Build a guideline from raw definitions (score collection skipped)."""
    lines = [f"{name}: {definitions[name]}" for name in metrics]
    return MetricGuideline(text="\n".join(lines), source_scores={})


def _guideline_lines(response: str) -> list[str]:
    bullets = []
    plain = []
    for line in response.splitlines():
        if not line.strip():
            continue
        if _BULLET_PREFIX.match(line) and _BULLET_PREFIX.sub("", line).strip():
            bullets.append(_BULLET_PREFIX.sub("", line).strip())
        else:
            plain.append(line.strip())
    return bullets or plain


def generate_ocg(
    train: TaskDataset, response_noun: str = "response"
) -> OutputConstraintGuideline:
    """Fill the constraint template with length statistics over references."""
    stats = length_stats(train.references)
    text = OCG_TEMPLATE.format(
        response_noun=response_noun,
        min_s=stats.min_s,
        max_s=stats.max_s,
        avg_s=stats.avg_s,
        min_t=stats.min_t,
        max_t=stats.max_t,
        avg_t=stats.avg_t,
    )
    return OutputConstraintGuideline(text=text, stats=stats)
