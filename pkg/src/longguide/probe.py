"""Property-maintenance probe: do demonstrations alone transfer a property?

Builds a few-shot prompt from demonstrations that all attain a target
property value (a judge score of 5, or an exact output token count),
generates on an evaluation set, and measures how often the outputs keep the
property, alongside token- and sentence-count statistics.
"""

from __future__ import annotations

import json
import logging
import statistics
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .backend import ChatBackend, ChatRequest, GenerationParams
from .config import ProbeConfig
from .dataset import TaskDataset
from .errors import DatasetError, LongGuideError, ParseError
from .guidelines import parse_score_dict
from .prompts import (
    format_demonstrations,
    render_property_scorer_prompt,
    render_scoring_prompt,
    render_simple_guideline,
)
from .textstat import split_sentences, tokenize

log = logging.getLogger(__name__)

PROPERTY_SCORER_METRICS = (
    "Semantic Coverage",
    "Factuality",
    "Consistency",
    "Informativeness",
    "Coherence",
    "Relevance",
)


@dataclass
class DemoCandidate:
    input: str
    output: str
    scores: dict[str, int] = field(default_factory=dict)


@dataclass
class ProbeRow:
    input: str
    output: str
    tokens: int
    sentences: int
    attained: bool
    score: int | None = None


@dataclass
class ProbeReport:
    property: str
    target: str
    shots: int
    with_simple_guideline: bool
    attainment_pct: float
    nt_mean: float
    nt_std: float
    ns_mean: float
    ns_std: float
    rows: list[ProbeRow] = field(default_factory=list)

    def to_lines(self) -> list[str]:
        return [
            f"property,{self.property}",
            f"target,{self.target}",
            f"shots,{self.shots}",
            f"with_simple_guideline,{self.with_simple_guideline}",
            f"attainment_pct,{self.attainment_pct:.2f}",
            f"nt_mean,{self.nt_mean:.2f}",
            f"nt_std,{self.nt_std:.2f}",
            f"ns_mean,{self.ns_mean:.2f}",
            f"ns_std,{self.ns_std:.2f}",
        ]


def load_demo_pool(path: str | Path) -> list[DemoCandidate]:
    """Read a JSONL pool of {"input", "output"} rows with optional "scores"."""
    path = Path(path)
    if not path.exists():
        raise DatasetError(f"demo pool not found: {path}")
    pool = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DatasetError(f"line {lineno}: invalid JSON ({exc.msg})") from exc
        for fieldname in ("input", "output"):
            if fieldname not in record:
                raise DatasetError(f"line {lineno}: missing field {fieldname}")
        scores = {str(k): int(v) for k, v in (record.get("scores") or {}).items()}
        pool.append(
            DemoCandidate(input=str(record["input"]), output=str(record["output"]), scores=scores)
        )
    return pool


def run_probe(
    cfg: ProbeConfig,
    demo_pool: Sequence[DemoCandidate],
    eval_set: TaskDataset,
    gen_backend: ChatBackend,
    judge_backend: ChatBackend | None = None,
    task_name: str = "text generation",
    gen_params: GenerationParams | None = None,
) -> ProbeReport:
    """Run the probe end to end and summarize property attainment."""
    demos = _qualifying_demos(cfg, demo_pool, judge_backend, task_name)
    if len(demos) < cfg.shots:
        raise LongGuideError(
            f"insufficient demonstrations: {len(demos)} qualify, {cfg.shots} required"
        )
    demos = demos[: cfg.shots]
    gen_params = gen_params or GenerationParams(temperature=0.0)
    demo_block = format_demonstrations([(d.input, d.output) for d in demos])
    guideline = render_simple_guideline(cfg.property) if cfg.with_simple_guideline else ""
    rows = []
    for sample in eval_set.samples:
        sections = [demo_block, guideline, f"Input: {sample.input}\nOutput:"]
        prompt = "\n\n".join(s for s in sections if s)
        output = gen_backend.complete(ChatRequest(user=prompt), gen_params)
        score = None
        if cfg.token_mode():
            attained = len(tokenize(output)) == cfg.target_tokens
        else:
            if judge_backend is None:
                raise LongGuideError("judge backend required for metric properties")
            score = _judge_property(
                cfg, sample.input, output, judge_backend, task_name
            )
            attained = score == cfg.target_score
        rows.append(
            ProbeRow(
                input=sample.input,
                output=output,
                tokens=len(tokenize(output)),
                sentences=len(split_sentences(output)),
                attained=attained,
                score=score,
            )
        )
    if not rows:
        raise LongGuideError("empty evaluation set")
    token_counts = [row.tokens for row in rows]
    sentence_counts = [row.sentences for row in rows]
    return ProbeReport(
        property=cfg.property,
        target=str(cfg.target_tokens if cfg.token_mode() else cfg.target_score),
        shots=cfg.shots,
        with_simple_guideline=cfg.with_simple_guideline,
        attainment_pct=100.0 * sum(row.attained for row in rows) / len(rows),
        nt_mean=statistics.mean(token_counts),
        nt_std=statistics.pstdev(token_counts),
        ns_mean=statistics.mean(sentence_counts),
        ns_std=statistics.pstdev(sentence_counts),
        rows=rows,
    )


def _qualifying_demos(
    cfg: ProbeConfig,
    pool: Sequence[DemoCandidate],
    judge_backend: ChatBackend | None,
    task_name: str,
) -> list[DemoCandidate]:
    qualifying = []
    for demo in pool:
        if cfg.token_mode():
            ok = len(tokenize(demo.output)) == cfg.target_tokens
        elif cfg.property in demo.scores:
            ok = demo.scores[cfg.property] == cfg.target_score
        else:
            if judge_backend is None:
                raise LongGuideError("judge backend required to score demo pool")
            score = _judge_property(cfg, demo.input, demo.output, judge_backend, task_name)
            ok = score == cfg.target_score
        if ok:
            qualifying.append(demo)
    return qualifying


def _judge_property(
    cfg: ProbeConfig,
    sample_input: str,
    text: str,
    judge_backend: ChatBackend,
    task_name: str,
) -> int:
    if cfg.property in PROPERTY_SCORER_METRICS:
        prompt = render_property_scorer_prompt(sample_input, text)
        metrics: Sequence[str] = PROPERTY_SCORER_METRICS
    else:
        prompt = render_scoring_prompt(
            task_name,
            sample_input,
            text,
            [cfg.property],
            {cfg.property: f"quality of the output with respect to {cfg.property}"},
        )
        metrics = [cfg.property]
    params = GenerationParams(
        temperature=0.7 if cfg.self_consistency else 0.0,
        n_samples=3 if cfg.self_consistency else 1,
    )
    request = ChatRequest(user=prompt)
    values = []
    for response in judge_backend.self_consistent_complete(request, params):
        try:
            scores = parse_score_dict(response, metrics)
        except ParseError:
            log.warning("dropping unparseable property-score draw")
            continue
        if cfg.property in scores:
            values.append(min(5, max(1, scores[cfg.property])))
    if not values:
        raise LongGuideError(f"judge returned no scores for property {cfg.property}")
    return int(statistics.median(values))
