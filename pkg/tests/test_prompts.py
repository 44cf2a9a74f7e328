from conftest import FIXTURE_MEANS, FIXTURE_METRICS, GOLDEN

from longguide.catalog import METRIC_CATALOG
from longguide.prompts import (
    format_demonstrations,
    render_definitions_prompt,
    render_judge_prompt,
    render_mg_prompt,
    render_property_scorer_prompt,
    render_scoring_prompt,
    render_selection_prompt,
    render_simple_guideline,
)

DEFINITIONS = {
    "Accuracy": "factually faithful to the dialogue",
    "Brevity": "short and to the point",
    "Clarity": "easy to understand on first read",
    "Relevance": "focused on the main topic of the conversation",
}


def golden(name):
    return (GOLDEN / name).read_text(encoding="utf-8")


class TestGoldenRenderings:
    def test_selection_prompt(self, train_dataset):
        demos = [(s.input, s.reference) for s in train_dataset.samples[:2]]
        rendered = render_selection_prompt(
            "dialogue summarization", METRIC_CATALOG, demos, top_k=5
        )
        assert rendered == golden("prompt_step1_selection.txt")

    def test_definitions_prompt(self):
        rendered = render_definitions_prompt("dialogue summarization", FIXTURE_METRICS)
        assert rendered == golden("prompt_step2_definitions.txt")

    def test_scoring_prompt(self, train_dataset):
        sample = train_dataset.samples[0]
        rendered = render_scoring_prompt(
            "dialogue summarization",
            sample.input,
            sample.reference,
            FIXTURE_METRICS,
            DEFINITIONS,
        )
        assert rendered == golden("prompt_step2_scoring.txt")

    def test_mg_prompt(self):
        rendered = render_mg_prompt(
            "dialogue summarization", FIXTURE_METRICS, FIXTURE_MEANS
        )
        assert rendered == golden("prompt_step3_mg.txt")

    def test_judge_prompt(self, train_dataset):
        sample = train_dataset.samples[0]
        rendered = render_judge_prompt(
            "Summarize the dialogue.\n" + sample.input,
            sample.reference,
            "Anna reserved a room at the Riverside for Friday.",
        )
        assert rendered == golden("prompt_judge.txt")


class TestRenderingDetails:
    def test_demonstration_format(self):
        block = format_demonstrations([("x1", "y1"), ("x2", "y2")])
        assert block == "Input: x1\nOutput: y1\n\nInput: x2\nOutput: y2"

    def test_selection_prompt_carries_full_pool(self):
        rendered = render_selection_prompt("t", METRIC_CATALOG, [("a", "b")])
        for name in METRIC_CATALOG:
            assert name in rendered

    def test_scoring_prompt_lists_each_metric_once(self):
        rendered = render_scoring_prompt("t", "in", "out", FIXTURE_METRICS, DEFINITIONS)
        assert rendered.count('"Brevity": 1-5') == 1

    def test_mg_prompt_formats_scores_2dp(self):
        rendered = render_mg_prompt("t", ["Clarity"], {"Clarity": 4.0})
        assert "{Clarity: 4.00}" in rendered

    def test_judge_prompt_fills_all_slots(self):
        rendered = render_judge_prompt("USER_P", "REF_A", "GEN_A")
        assert "{{" not in rendered
        assert "USER_P" in rendered and "REF_A" in rendered and "GEN_A" in rendered

    def test_property_scorer_prompt(self):
        rendered = render_property_scorer_prompt("the dialogue", "the summary")
        assert "Input: the dialogue" in rendered
        assert "Output: the summary" in rendered
        assert '"Semantic Coverage": 1-5' in rendered

    def test_simple_guideline(self):
        assert render_simple_guideline("Coherence") == "The output must maintain...Coherence."
