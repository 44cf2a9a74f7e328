"""Guideline learning for long-form generation tasks.

From at most 50 labeled samples, the pipeline selects quality metrics,
self-evaluates them, synthesizes a metric guideline and an output-constraint
guideline, and picks the best guideline combination by validation score. The
result is a portable JSON bundle usable with any chat-completion backend.
"""

from .backend import (
    ChatBackend,
    ChatRequest,
    GenerationParams,
    HTTPBackend,
    HTTPBackendConfig,
    MockBackend,
    fingerprint,
)
from .catalog import (
    METRIC_CATALOG,
    SelectedMetrics,
    SelectionConfig,
    builtin_catalog,
    parse_metric_list,
    select_metrics,
)
from .config import ProbeConfig, RunConfig, load_config
from .dataset import Sample, TaskDataset, load_dataset, load_outputs, write_outputs
from .errors import (
    BackendError,
    DatasetError,
    LongGuideError,
    ParseError,
    ScriptUnderrunError,
    TransportError,
)
from .guidelines import (
    MetricGuideline,
    MetricScoreTable,
    OutputConstraintGuideline,
    collect_scores,
    fetch_definitions,
    generate_mg,
    generate_ocg,
    parse_score_dict,
)
from .judge import JudgeRatings, JsReport, analyze_js, judge_evaluate
from .metrics import (
    ScoreHistogram,
    avg_js,
    bleu_1,
    js_divergence,
    pearson,
    rouge_l,
)
from .pipeline import infer, learn
from .probe import ProbeReport, load_demo_pool, run_probe
from .report import EvalReport, evaluate_runs, t_ci_half_width
from .selector import (
    GuidelineBundle,
    PromptParts,
    Variant,
    assemble_prompt,
    score_variant,
    select_best,
)
from .textstat import LengthStats, length_stats, split_sentences, tokenize

__version__ = "0.1.0"
