"""End-to-end orchestration: guideline learning and guided inference.

Learning runs metric selection, definition fetching, self-evaluated score
collection, guideline synthesis, constraint derivation, and variant
selection against one backend, in that order, and returns the portable
bundle. Inference applies a bundle's selected (or overridden) variant to a
dataset.
"""

from __future__ import annotations

import logging
import random

from .backend import ChatBackend, ChatRequest, GenerationParams
from .catalog import SelectionConfig, select_metrics
from .config import RunConfig
from .dataset import TaskDataset, load_dataset
from .errors import LongGuideError, TransportError
from .guidelines import (
    collect_scores,
    fetch_definitions,
    generate_mg,
    generate_ocg,
    mg_from_definitions,
)
from .prompts import format_demonstrations
from .selector import (
    GuidelineBundle,
    PromptParts,
    Variant,
    assemble_prompt,
    select_best,
    utc_now_iso,
)

log = logging.getLogger(__name__)


def learn(config: RunConfig, backend: ChatBackend | None = None) -> GuidelineBundle:
    """Run the full guideline-learning pipeline over the train split."""
    if not config.data.train:
        raise LongGuideError("learn requires data.train in the config")
    backend = backend or config.backend.build()
    train = load_dataset(config.data.train, split="train")
    if not train.samples:
        raise LongGuideError("learn: training set is empty")
    task_name = config.task.name
    gen = config.generation
    single = GenerationParams(
        max_new_tokens=gen.max_new_tokens, top_p=gen.top_p, temperature=gen.temperature
    )
    bundle = GuidelineBundle(
        task_name=task_name,
        model_name=config.backend.model_name,
        skip_step2=config.learn.skip_step2,
        variants_mode=config.learn.variants,
        created_at=config.learn.created_at or utc_now_iso(),
    )

    if config.learn.variants == "ocg-only":
        variants = (Variant.NONE, Variant.OCG)
    elif config.learn.variants == "full":
        variants = (Variant.NONE, Variant.OCG, Variant.MG, Variant.MG_OCG)
    else:
        raise LongGuideError(f"unknown variants mode: {config.learn.variants}")

    if Variant.MG in variants:
        try:
            selection = select_metrics(
                train,
                SelectionConfig(
                    iterations=config.learn.iterations,
                    batch_size=config.learn.batch_size,
                    top_k=config.learn.top_k,
                    seed=config.learn.seed,
                ),
                backend,
                task_name,
                params=single,
            )
        except LongGuideError as exc:
            raise LongGuideError(f"step 1 (metric selection): {exc}") from exc
        bundle.metrics = selection.metrics
        bundle.selection_log = selection.iterations
        try:
            bundle.definitions = fetch_definitions(
                selection.metrics, task_name, backend, params=single
            )
        except LongGuideError as exc:
            raise LongGuideError(f"step 2 (metric definitions): {exc}") from exc
        if config.learn.skip_step2:
            bundle.mg = mg_from_definitions(selection.metrics, bundle.definitions)
        else:
            sc_params = GenerationParams(
                max_new_tokens=gen.max_new_tokens,
                top_p=gen.top_p,
                temperature=gen.sc_temperature,
                n_samples=config.learn.sc_samples,
            )
            try:
                bundle.score_table = collect_scores(
                    train,
                    selection.metrics,
                    backend,
                    task_name,
                    bundle.definitions,
                    params=sc_params,
                )
            except LongGuideError as exc:
                raise LongGuideError(f"step 2 (score collection): {exc}") from exc
            try:
                bundle.mg = generate_mg(
                    selection.metrics, bundle.score_table, task_name, backend, params=single
                )
            except LongGuideError as exc:
                raise LongGuideError(f"step 3 (metric guideline): {exc}") from exc

    try:
        bundle.ocg = generate_ocg(train, config.task.response_noun)
    except ValueError as exc:
        raise LongGuideError(f"step 4 (output constraints): {exc}") from exc

    demos = _demo_block(config)
    try:
        select_best(
            bundle,
            train,
            backend,
            instruction=config.task.instruction or task_name,
            demonstrations=demos,
            params=single,
            variants=variants,
        )
    except LongGuideError as exc:
        raise LongGuideError(f"step 5 (variant selection): {exc}") from exc
    return bundle


def infer(
    config: RunConfig,
    bundle: GuidelineBundle,
    dataset: TaskDataset,
    backend: ChatBackend | None = None,
    variant: Variant | None = None,
    demos_path: str | None = None,
    shots: int = 0,
) -> list[dict[str, str]]:
    """Generate one output per sample with the bundle's guideline variant."""
    backend = backend or config.backend.build()
    variant = variant or bundle.selected
    demos = _demo_block(config, demos_path, shots)
    gen = config.generation
    params = GenerationParams(
        max_new_tokens=gen.max_new_tokens, top_p=gen.top_p, temperature=gen.temperature
    )
    instruction = config.task.instruction or config.task.name
    rows = []
    for sample in dataset.samples:
        parts = PromptParts(instruction=instruction, query=sample.input, demonstrations=demos)
        prompt = assemble_prompt(parts, variant, bundle)
        try:
            output = backend.complete(ChatRequest(user=prompt), params)
        except TransportError as exc:
            log.warning("generation failed, recording empty output: %s", exc)
            output = ""
        rows.append({"input": sample.input, "reference": sample.reference, "output": output})
    return rows


def _demo_block(
    config: RunConfig, demos_path: str | None = None, shots: int = 0
) -> str:
    """Demonstration string from the demo file: a seeded sample of `shots`
    pairs, or the whole file when shots is 0. Empty without a demo file."""
    path = demos_path or config.data.demos
    if not path:
        return ""
    pool = load_dataset(path).samples
    if shots and shots < len(pool):
        rng = random.Random(config.learn.seed)
        pool = rng.sample(pool, shots)
    return format_demonstrations([(s.input, s.reference) for s in pool])
