"""Line-delimited JSON datasets of (input, reference) pairs."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DatasetError

log = logging.getLogger(__name__)

TRAIN_CAP = 50


@dataclass(frozen=True)
class Sample:
    input: str
    reference: str


@dataclass
class TaskDataset:
    name: str
    samples: list[Sample] = field(default_factory=list)
    split: str | None = None

    def __len__(self) -> int:
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    @property
    def references(self) -> list[str]:
        return [s.reference for s in self.samples]


def load_dataset(
    path: str | Path, name: str | None = None, split: str | None = None
) -> TaskDataset:
    """Parse JSONL records {"input": ..., "output": ...}, order preserved.

    Train splits are capped at TRAIN_CAP samples (truncated with a warning).
    Malformed lines and missing fields raise DatasetError naming the line.
    """
    path = Path(path)
    if not path.exists():
        raise DatasetError(f"dataset file not found: {path}")
    samples = []
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
        samples.append(Sample(input=str(record["input"]), reference=str(record["output"])))
    if split == "train" and len(samples) > TRAIN_CAP:
        log.warning(
            "train split has %d samples; truncating to %d", len(samples), TRAIN_CAP
        )
        samples = samples[:TRAIN_CAP]
    return TaskDataset(name=name or path.stem, samples=samples, split=split)


def load_outputs(path: str | Path) -> list[dict[str, str]]:
    """Read an outputs file of {"input", "reference", "output"} rows."""
    path = Path(path)
    if not path.exists():
        raise DatasetError(f"outputs file not found: {path}")
    rows = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DatasetError(f"line {lineno}: invalid JSON ({exc.msg})") from exc
        for fieldname in ("input", "reference", "output"):
            if fieldname not in record:
                raise DatasetError(f"line {lineno}: missing field {fieldname}")
        rows.append({k: str(record[k]) for k in ("input", "reference", "output")})
    if not rows:
        raise DatasetError(f"empty outputs file: {path}")
    return rows


def write_outputs(path: str | Path, rows: list[dict[str, str]]) -> None:
    lines = [json.dumps(row, ensure_ascii=False) for row in rows]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
