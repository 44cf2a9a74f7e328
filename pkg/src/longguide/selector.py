"""Prompt assembly and automatic guideline-variant selection.

Prompts are newline-joined sections in the fixed order instruction,
demonstrations, context, query, guideline; empty sections are omitted.
Selection scores all variants on the training split by mean recall ROUGE-L
and picks the argmax, breaking ties toward the variant with the least prompt
overhead (none > ocg > mg > mg-ocg).
"""

from __future__ import annotations

import datetime
import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, Sequence

from .backend import ChatBackend, ChatRequest, GenerationParams
from .catalog import IterationLog
from .dataset import TaskDataset
from .errors import LongGuideError, TransportError
from .guidelines import (
    MetricGuideline,
    MetricScoreTable,
    OutputConstraintGuideline,
)
from .metrics import rouge_l
from .textstat import LengthStats, tokenize

log = logging.getLogger(__name__)

BUNDLE_SCHEMA_VERSION = 1


class Variant(str, Enum):
    NONE = "none"
    OCG = "ocg"
    MG = "mg"
    MG_OCG = "mg-ocg"


# tie-break priority: least prompt overhead first
VARIANT_PRIORITY = (Variant.NONE, Variant.OCG, Variant.MG, Variant.MG_OCG)


@dataclass
class PromptParts:
    instruction: str
    query: str
    demonstrations: str = ""
    context: str = ""

    def __post_init__(self) -> None:
        if not self.instruction or not self.query:
            raise ValueError("instruction and query must be non-empty")


@dataclass
class GuidelineBundle:
    """The portable learned artifact: guideline texts plus provenance."""

    task_name: str
    model_name: str
    selected: Variant = Variant.NONE
    mg: MetricGuideline | None = None
    ocg: OutputConstraintGuideline | None = None
    metrics: list[str] = field(default_factory=list)
    definitions: dict[str, str] = field(default_factory=dict)
    variant_scores: dict[str, float] = field(default_factory=dict)
    selection_log: list[IterationLog] = field(default_factory=list)
    score_table: MetricScoreTable | None = None
    skip_step2: bool = False
    variants_mode: str = "full"
    created_at: str = ""
    schema_version: int = BUNDLE_SCHEMA_VERSION

    def guideline_text(self, variant: Variant) -> str:
        if variant is Variant.NONE:
            return ""
        if variant is Variant.OCG:
            if self.ocg is None:
                raise LongGuideError("bundle holds no output-constraint guideline")
            return self.ocg.text
        if variant is Variant.MG:
            if self.mg is None:
                raise LongGuideError("bundle holds no metric guideline")
            return self.mg.text
        return self.guideline_text(Variant.MG) + "\n" + self.guideline_text(Variant.OCG)

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "task_name": self.task_name,
            "model_name": self.model_name,
            "created_at": self.created_at,
            "selected": self.selected.value,
            "variants_mode": self.variants_mode,
            "skip_step2": self.skip_step2,
            "metrics": list(self.metrics),
            "definitions": dict(self.definitions),
            "mg": None
            if self.mg is None
            else {"text": self.mg.text, "source_scores": self.mg.source_scores},
            "ocg": None
            if self.ocg is None
            else {"text": self.ocg.text, "stats": vars(self.ocg.stats)},
            "variant_scores": dict(self.variant_scores),
            "selection_log": [
                {
                    "batch_indices": it.batch_indices,
                    "raw_responses": it.raw_responses,
                    "parsed": it.parsed,
                }
                for it in self.selection_log
            ],
            "score_table": None
            if self.score_table is None
            else {
                "means": self.score_table.means,
                "counts": self.score_table.counts,
                "per_sample": self.score_table.per_sample,
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")

    @classmethod
    def from_dict(cls, data: dict) -> "GuidelineBundle":
        version = data.get("schema_version")
        if version != BUNDLE_SCHEMA_VERSION:
            raise LongGuideError(f"unsupported bundle schema version: {version}")
        mg = None
        if data.get("mg") is not None:
            mg = MetricGuideline(
                text=data["mg"]["text"],
                source_scores=dict(data["mg"].get("source_scores", {})),
            )
        ocg = None
        if data.get("ocg") is not None:
            ocg = OutputConstraintGuideline(
                text=data["ocg"]["text"], stats=LengthStats(**data["ocg"]["stats"])
            )
        table = None
        if data.get("score_table") is not None:
            table = MetricScoreTable(
                means=dict(data["score_table"]["means"]),
                counts=dict(data["score_table"]["counts"]),
                per_sample={
                    k: list(v) for k, v in data["score_table"]["per_sample"].items()
                },
            )
        return cls(
            task_name=data["task_name"],
            model_name=data["model_name"],
            selected=Variant(data["selected"]),
            mg=mg,
            ocg=ocg,
            metrics=list(data.get("metrics", [])),
            definitions=dict(data.get("definitions", {})),
            variant_scores=dict(data.get("variant_scores", {})),
            selection_log=[
                IterationLog(
                    batch_indices=list(it["batch_indices"]),
                    raw_responses=list(it["raw_responses"]),
                    parsed=list(it["parsed"]),
                )
                for it in data.get("selection_log", [])
            ],
            score_table=table,
            skip_step2=bool(data.get("skip_step2", False)),
            variants_mode=data.get("variants_mode", "full"),
            created_at=data.get("created_at", ""),
        )

    @classmethod
    def load(cls, path: str | Path) -> "GuidelineBundle":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def assemble_prompt(parts: PromptParts, variant: Variant, bundle: GuidelineBundle) -> str:
    """Join the non-empty sections with newlines, guideline last."""
    guideline = bundle.guideline_text(variant)
    sections = [parts.instruction, parts.demonstrations, parts.context, parts.query, guideline]
    return "\n".join(section for section in sections if section)


def score_variant(
    variant: Variant,
    bundle: GuidelineBundle,
    train: TaskDataset,
    backend: ChatBackend,
    instruction: str,
    demonstrations: str = "",
    params: GenerationParams | None = None,
) -> float:
    """Mean recall ROUGE-L of variant-guided generations over the split."""
    if not train.samples:
        raise LongGuideError("cannot score variants on an empty split")
    params = params or GenerationParams(temperature=0.0)
    total = 0.0
    for sample in train.samples:
        parts = PromptParts(
            instruction=instruction, query=sample.input, demonstrations=demonstrations
        )
        prompt = assemble_prompt(parts, variant, bundle)
        try:
            output = backend.complete(ChatRequest(user=prompt), params)
        except TransportError as exc:
            log.warning("generation failed for one sample, scoring 0: %s", exc)
            output = ""
        total += rouge_l(tokenize(output), tokenize(sample.reference))
    return total / len(train.samples)


def select_best(
    bundle: GuidelineBundle,
    train: TaskDataset,
    backend: ChatBackend,
    instruction: str,
    demonstrations: str = "",
    params: GenerationParams | None = None,
    variants: Sequence[Variant] = VARIANT_PRIORITY,
    scorer: Callable[..., float] = score_variant,
) -> GuidelineBundle:
    """Score the requested variants and record the argmax on the bundle."""
    scores: dict[Variant, float] = {}
    for variant in variants:
        scores[variant] = scorer(
            variant, bundle, train, backend, instruction, demonstrations, params
        )
    best = None
    for variant in VARIANT_PRIORITY:
        if variant not in scores:
            continue
        if best is None or scores[variant] > scores[best]:
            best = variant
    bundle.variant_scores = {v.value: scores[v] for v in VARIANT_PRIORITY if v in scores}
    bundle.selected = best if best is not None else Variant.NONE
    return bundle


def utc_now_iso() -> str:
    return datetime.datetime.now(datetime.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
