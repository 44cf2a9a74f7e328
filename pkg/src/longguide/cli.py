"""Command-line interface: learn, infer, evaluate, analyze-js, probe."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import load_config
from .dataset import load_dataset, load_outputs, write_outputs
from .errors import LongGuideError
from .judge import analyze_js
from .metrics import pearson
from .pipeline import infer, learn
from .probe import load_demo_pool, run_probe
from .report import evaluate_runs
from .selector import GuidelineBundle, Variant

log = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="longguide",
        description="Learn and apply generation guidelines from a few labeled samples.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p_learn = sub.add_parser("learn", help="learn a guideline bundle from the train split")
    p_learn.add_argument("--config", required=True)
    p_learn.add_argument("--out", required=True, help="bundle JSON output path")
    p_learn.add_argument("--skip-step2", action="store_true", help="skip score collection")
    p_learn.add_argument("--variants", choices=["full", "ocg-only"], default=None)

    p_infer = sub.add_parser("infer", help="generate outputs with a learned bundle")
    p_infer.add_argument("--config", required=True)
    p_infer.add_argument("--bundle", required=True)
    p_infer.add_argument("--dataset", required=True)
    p_infer.add_argument("--out", required=True, help="outputs JSONL path")
    p_infer.add_argument("--variant", choices=[v.value for v in Variant], default=None)
    p_infer.add_argument("--demos", default=None, help="demonstrations JSONL file")
    p_infer.add_argument("--shots", type=int, default=0)

    p_eval = sub.add_parser("evaluate", help="score outputs files (one run each)")
    p_eval.add_argument("--outputs", required=True, help="comma-separated JSONL files")
    p_eval.add_argument("--report", required=True, help="CSV report path")

    p_js = sub.add_parser("analyze-js", help="judge-score divergence vs references")
    p_js.add_argument("--outputs", required=True, help="comma-separated JSONL files")
    p_js.add_argument("--bundle", required=True)
    p_js.add_argument("--report", required=True)
    p_js.add_argument("--config", required=True, help="config with the judge backend")

    p_probe = sub.add_parser("probe", help="property-maintenance probe")
    p_probe.add_argument("--config", required=True)
    p_probe.add_argument("--property", required=True)
    p_probe.add_argument("--shots", type=int, required=True)
    p_probe.add_argument("--with-guideline", action="store_true")

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s: %(message)s",
    )
    try:
        return _dispatch(args)
    except LongGuideError as exc:
        log.error("%s", exc)
        return 1


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "learn":
        config = load_config(args.config)
        if args.skip_step2:
            config.learn.skip_step2 = True
        if args.variants:
            config.learn.variants = args.variants
        bundle = learn(config)
        bundle.save(args.out)
        log.info("selected variant: %s", bundle.selected.value)
        log.info("bundle written to %s", args.out)
        return 0

    if args.command == "infer":
        config = load_config(args.config)
        bundle = GuidelineBundle.load(args.bundle)
        dataset = load_dataset(args.dataset)
        variant = Variant(args.variant) if args.variant else None
        rows = infer(
            config,
            bundle,
            dataset,
            variant=variant,
            demos_path=args.demos,
            shots=args.shots,
        )
        write_outputs(args.out, rows)
        log.info("wrote %d outputs to %s", len(rows), args.out)
        return 0

    if args.command == "evaluate":
        runs = [load_outputs(path) for path in args.outputs.split(",")]
        report = evaluate_runs(runs)
        report.to_csv(args.report)
        print(report.to_markdown())
        log.info("report written to %s", args.report)
        return 0

    if args.command == "analyze-js":
        config = load_config(args.config)
        bundle = GuidelineBundle.load(args.bundle)
        judge_backend = config.build_judge()
        paths = args.outputs.split(",")
        reports = []
        eval_rows = []
        for path in paths:
            rows = load_outputs(path)
            reports.append(
                analyze_js(
                    rows,
                    bundle.metrics,
                    bundle.definitions,
                    bundle.task_name,
                    judge_backend,
                )
            )
            eval_rows.append(rows)
        if len(reports) == 1:
            lines = reports[0].to_lines()
        else:
            lines = []
            for i, js_report in enumerate(reports, start=1):
                lines.extend(f"run{i}_{line}" for line in js_report.to_lines())
            correlations = _group_correlations(reports, eval_rows)
            lines.extend(f"{name},{value:.6f}" for name, value in correlations.items())
        Path(args.report).write_text("\n".join(lines) + "\n", encoding="utf-8")
        for line in lines:
            print(line)
        return 0

    if args.command == "probe":
        config = load_config(args.config)
        config.probe.property = args.property
        config.probe.shots = args.shots
        config.probe.with_simple_guideline = args.with_guideline
        if not config.probe.demo_pool or not config.probe.eval_set:
            raise LongGuideError("probe requires probe.demo_pool and probe.eval_set")
        judge = config.judge.build() if config.judge else None
        report = run_probe(
            config.probe,
            load_demo_pool(config.probe.demo_pool),
            load_dataset(config.probe.eval_set),
            config.backend.build(),
            judge_backend=judge,
            task_name=config.task.name,
        )
        for line in report.to_lines():
            print(line)
        return 0

    raise LongGuideError(f"unknown command: {args.command}")


def _group_correlations(reports, eval_rows) -> dict[str, float]:
    """Pearson of avg-JS against mean ROUGE-L/BLEU-1 across run groups."""
    from .report import evaluate_runs as _eval

    js_values = [r.avg_js for r in reports]
    run_reports = [_eval([rows]) for rows in eval_rows]
    correlations = {}
    for name, values in (
        ("pearson_js_rouge_l", [r.mean_rouge for r in run_reports]),
        ("pearson_js_bleu_1", [r.mean_bleu for r in run_reports]),
    ):
        try:
            correlations[name] = pearson(js_values, values)
        except ValueError as exc:
            log.warning("skipping %s: %s", name, exc)
    return correlations


if __name__ == "__main__":
    sys.exit(main())
