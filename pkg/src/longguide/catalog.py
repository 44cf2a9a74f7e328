"""The 27-metric pool and iterative metric selection.

Selection samples a seeded batch of training pairs per iteration, asks the
model for the most important metrics in Python-list format, keeps only names
present in the catalog, truncates to top_k per iteration, and unions across
iterations into an alphabetically sorted set.
"""

from __future__ import annotations

import logging
import random
import re
from dataclasses import dataclass, field
from typing import Sequence

from .backend import ChatBackend, ChatRequest, GenerationParams
from .dataset import TaskDataset
from .errors import LongGuideError, ParseError
from .prompts import render_selection_prompt

log = logging.getLogger(__name__)

# pool order follows the original catalog sources: communication basics,
# reference-based evaluation families, then the broader-coverage additions
METRIC_CATALOG = (
    "Accuracy",
    "Brevity",
    "Clarity",
    "Relevance",
    "Coherence",
    "Semantic Coverage",
    "Factuality",
    "Fluency",
    "Informativeness",
    "Consistency",
    "Engagement",
    "Specificity",
    "Correctness",
    "Understandability",
    "Diversity",
    "Completeness",
    "Conciseness",
    "Neutrality",
    "Naturalness",
    "Readability",
    "Creativity",
    "Rationalness",
    "Truthfulness",
    "Respect of Chronology",
    "Non-repetitiveness",
    "Indicativeness",
    "Resolution",
)

_BRACKETED_LIST = re.compile(r"\[(.*?)\]", re.DOTALL)


def builtin_catalog() -> list[str]:
    """The 27 built-in metric names, in source order."""
    return list(METRIC_CATALOG)


@dataclass
class SelectionConfig:
    iterations: int = 5
    batch_size: int = 5
    top_k: int = 5
    seed: int = 0

    def __post_init__(self) -> None:
        if self.iterations < 1 or self.batch_size < 1 or self.top_k < 1:
            raise ValueError("iterations, batch_size, and top_k must be >= 1")


@dataclass
class IterationLog:
    batch_indices: list[int]
    raw_responses: list[str]
    parsed: list[str]


@dataclass
class SelectedMetrics:
    metrics: list[str]
    iterations: list[IterationLog] = field(default_factory=list)


def parse_metric_list(text: str, catalog: Sequence[str] = METRIC_CATALOG) -> list[str]:
    """Extract the first bracketed list and match names against the catalog.

    Matching is case-insensitive; unknown names are dropped with a warning.
    Raises ParseError when no bracketed list is present.
    """
    match = _BRACKETED_LIST.search(text)
    if match is None:
        raise ParseError("no bracketed list found")
    by_lower = {name.lower(): name for name in catalog}
    parsed = []
    for item in match.group(1).split(","):
        name = item.strip().strip("'\"").strip()
        if not name:
            continue
        canonical = by_lower.get(name.lower())
        if canonical is None:
            log.warning("dropping unknown metric name: %r", name)
        elif canonical not in parsed:
            parsed.append(canonical)
    return parsed


def select_metrics(
    train: TaskDataset,
    cfg: SelectionConfig,
    backend: ChatBackend,
    task_name: str,
    catalog: Sequence[str] = METRIC_CATALOG,
    params: GenerationParams | None = None,
) -> SelectedMetrics:
    """Run the batched selection iterations and union the results."""
    if not train.samples:
        raise LongGuideError("selection failed: empty training set")
    params = params or GenerationParams()
    rng = random.Random(cfg.seed)
    n = len(train.samples)
    chosen: set[str] = set()
    logs: list[IterationLog] = []
    for _ in range(cfg.iterations):
        indices = rng.sample(range(n), min(cfg.batch_size, n))
        batch = [(train.samples[i].input, train.samples[i].reference) for i in indices]
        prompt = render_selection_prompt(task_name, catalog, batch, top_k=cfg.top_k)
        request = ChatRequest(user=prompt)
        raw_responses = []
        parsed: list[str] = []
        for attempt in range(2):
            response = backend.complete(request, params)
            raw_responses.append(response)
            try:
                parsed = parse_metric_list(response, catalog)
                break
            except ParseError:
                if attempt == 0:
                    log.warning("selection response unparseable, retrying once")
                else:
                    log.warning("selection iteration yielded no metrics")
        truncated = parsed[: cfg.top_k]
        chosen.update(truncated)
        logs.append(
            IterationLog(batch_indices=indices, raw_responses=raw_responses, parsed=truncated)
        )
    if not chosen:
        raise LongGuideError("selection failed: no parseable metrics in any iteration")
    return SelectedMetrics(metrics=sorted(chosen, key=str.lower), iterations=logs)
