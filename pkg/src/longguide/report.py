"""Multi-run evaluation reports with t-distribution confidence intervals."""

from __future__ import annotations

import csv
import math
import statistics
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from scipy import stats as scipy_stats

from .errors import DatasetError
from .metrics import bleu_1, rouge_l
from .textstat import tokenize


@dataclass
class SampleScores:
    run: int
    index: int
    rouge_l: float
    bleu_1: float


@dataclass
class RunResult:
    run: int
    per_sample: list[SampleScores]
    mean_rouge: float
    mean_bleu: float


@dataclass
class EvalReport:
    runs: list[RunResult]
    mean_rouge: float
    mean_bleu: float
    ci_rouge: float | None  # 95% half-width; None for a single run
    ci_bleu: float | None
    config_snapshot: dict = field(default_factory=dict)

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(["run", "sample", "rouge_l", "bleu_1"])
            for run in self.runs:
                for row in run.per_sample:
                    writer.writerow([row.run, row.index, f"{row.rouge_l:.6f}", f"{row.bleu_1:.6f}"])
            for run in self.runs:
                writer.writerow([run.run, "mean", f"{run.mean_rouge:.6f}", f"{run.mean_bleu:.6f}"])
            writer.writerow(["all", "mean", f"{self.mean_rouge:.6f}", f"{self.mean_bleu:.6f}"])
            if self.ci_rouge is not None:
                writer.writerow(["all", "ci95", f"{self.ci_rouge:.6f}", f"{self.ci_bleu:.6f}"])

    def to_markdown(self) -> str:
        header = ["run", "ROUGE-L", "BLEU-1"]
        rows = [[str(run.run), f"{run.mean_rouge:.4f}", f"{run.mean_bleu:.4f}"] for run in self.runs]
        if self.ci_rouge is not None:
            rows.append(
                [
                    "mean",
                    f"{self.mean_rouge:.4f} +/- {self.ci_rouge:.4f}",
                    f"{self.mean_bleu:.4f} +/- {self.ci_bleu:.4f}",
                ]
            )
        else:
            rows.append(["mean", f"{self.mean_rouge:.4f}", f"{self.mean_bleu:.4f}"])
        widths = [max(len(header[i]), *(len(r[i]) for r in rows)) for i in range(3)]
        lines = [
            "| " + " | ".join(header[i].ljust(widths[i]) for i in range(3)) + " |",
            "| " + " | ".join("-" * widths[i] for i in range(3)) + " |",
        ]
        for row in rows:
            lines.append("| " + " | ".join(row[i].ljust(widths[i]) for i in range(3)) + " |")
        return "\n".join(lines)


def evaluate_runs(
    runs: Sequence[Sequence[dict[str, str]]], config_snapshot: dict | None = None
) -> EvalReport:
    """Score each run's output rows and aggregate across runs.

    Each run is a list of {"input", "reference", "output"} rows. Per-run
    aggregates are plain means; cross-run dispersion uses the two-sided 95%
    t interval with runs-1 degrees of freedom (requires at least 2 runs).
    """
    if not runs or any(not run for run in runs):
        raise DatasetError("empty outputs")
    run_results = []
    for run_index, rows in enumerate(runs, start=1):
        per_sample = []
        for i, row in enumerate(rows):
            reference = tokenize(row["reference"])
            output = tokenize(row["output"])
            per_sample.append(
                SampleScores(
                    run=run_index,
                    index=i,
                    rouge_l=rouge_l(output, reference),
                    bleu_1=bleu_1(output, reference),
                )
            )
        run_results.append(
            RunResult(
                run=run_index,
                per_sample=per_sample,
                mean_rouge=math.fsum(s.rouge_l for s in per_sample) / len(per_sample),
                mean_bleu=math.fsum(s.bleu_1 for s in per_sample) / len(per_sample),
            )
        )
    rouge_means = [r.mean_rouge for r in run_results]
    bleu_means = [r.mean_bleu for r in run_results]
    return EvalReport(
        runs=run_results,
        mean_rouge=math.fsum(rouge_means) / len(rouge_means),
        mean_bleu=math.fsum(bleu_means) / len(bleu_means),
        ci_rouge=t_ci_half_width(rouge_means),
        ci_bleu=t_ci_half_width(bleu_means),
        config_snapshot=config_snapshot or {},
    )


def t_ci_half_width(values: Sequence[float], confidence: float = 0.95) -> float | None:
    """Half-width of the two-sided t interval; None when fewer than 2 values."""
    n = len(values)
    if n < 2:
        return None
    quantile = scipy_stats.t.ppf(0.5 + confidence / 2.0, df=n - 1)
    return float(quantile * statistics.stdev(values) / math.sqrt(n))
