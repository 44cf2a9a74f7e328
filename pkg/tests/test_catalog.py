import pytest

from longguide.backend import MockBackend
from longguide.catalog import (
    METRIC_CATALOG,
    SelectionConfig,
    builtin_catalog,
    parse_metric_list,
    select_metrics,
)
from longguide.errors import LongGuideError, ParseError


class TestBuiltinCatalog:
    def test_has_27_metrics(self):
        assert len(builtin_catalog()) == 27

    def test_contains_proposed_names(self):
        catalog = builtin_catalog()
        assert "Respect of Chronology" in catalog
        assert "Non-repetitiveness" in catalog
        assert "Semantic Coverage" in catalog

    def test_excludes_lm_based_metrics(self):
        assert "FactScore" not in builtin_catalog()

    def test_unique_case_insensitive(self):
        lowered = [name.lower() for name in builtin_catalog()]
        assert len(set(lowered)) == 27

    def test_source_order_starts_with_communication_basics(self):
        assert builtin_catalog()[:3] == ["Accuracy", "Brevity", "Clarity"]


class TestParseMetricList:
    def test_plain_list(self):
        assert parse_metric_list("['Accuracy', 'Brevity']") == ["Accuracy", "Brevity"]

    def test_embedded_list_case_folded(self):
        text = 'Here you go: ["clarity", "fluency"] hope it helps'
        assert parse_metric_list(text) == ["Clarity", "Fluency"]

    def test_no_list_raises(self):
        with pytest.raises(ParseError):
            parse_metric_list("no list here")

    def test_unknown_names_dropped_with_warning(self, caplog):
        with caplog.at_level("WARNING"):
            assert parse_metric_list("['Clarity', 'NotAMetric']") == ["Clarity"]
        assert "NotAMetric" in caplog.text

    def test_preserves_response_order(self):
        assert parse_metric_list("['Brevity', 'Accuracy']") == ["Brevity", "Accuracy"]

    def test_deduplicates(self):
        assert parse_metric_list("['Clarity', 'clarity']") == ["Clarity"]

    def test_multiline_list(self):
        assert parse_metric_list("[\n  'Accuracy',\n  'Brevity'\n]") == [
            "Accuracy",
            "Brevity",
        ]


def run_selection(responses, train, iterations=None, seed=0):
    cfg = SelectionConfig(iterations=iterations or len(responses), seed=seed)
    backend = MockBackend(script=responses)
    return select_metrics(train, cfg, backend, "dialogue summarization"), backend


class TestSelectMetrics:
    def test_identical_iterations(self, train_dataset):
        responses = ["['Clarity', 'Accuracy', 'Brevity', 'Relevance', 'Coherence']"] * 3
        selected, _ = run_selection(responses, train_dataset)
        assert selected.metrics == ["Accuracy", "Brevity", "Clarity", "Coherence", "Relevance"]

    def test_union_and_sort(self, train_dataset):
        responses = ["['Clarity', 'Accuracy']", "['Brevity', 'Clarity']"]
        selected, _ = run_selection(responses, train_dataset)
        assert selected.metrics == ["Accuracy", "Brevity", "Clarity"]

    def test_unknown_name_dropped(self, train_dataset, caplog):
        with caplog.at_level("WARNING"):
            selected, _ = run_selection(["['Clarity', 'NotAMetric']"], train_dataset)
        assert selected.metrics == ["Clarity"]
        assert "NotAMetric" in caplog.text

    def test_truncates_to_top_k(self, train_dataset):
        response = str([name for name in METRIC_CATALOG[:8]])
        cfg = SelectionConfig(iterations=1, top_k=5)
        selected = select_metrics(
            train_dataset, cfg, MockBackend(script=[response]), "t"
        )
        assert len(selected.metrics) == 5

    def test_deterministic_given_seed(self, train_dataset):
        responses = ["['Clarity']", "['Accuracy']"]
        first, backend_a = run_selection(responses, train_dataset, seed=7)
        second, backend_b = run_selection(responses, train_dataset, seed=7)
        assert first.metrics == second.metrics
        assert [it.batch_indices for it in first.iterations] == [
            it.batch_indices for it in second.iterations
        ]
        assert [r.user for r in backend_a.requests] == [r.user for r in backend_b.requests]

    def test_retry_once_then_empty_iteration(self, train_dataset):
        responses = ["garbage", "still garbage", "['Clarity']"]
        cfg = SelectionConfig(iterations=2)
        backend = MockBackend(script=responses)
        selected = select_metrics(train_dataset, cfg, backend, "t")
        assert selected.metrics == ["Clarity"]
        assert backend.call_count == 3
        assert selected.iterations[0].parsed == []
        assert len(selected.iterations[0].raw_responses) == 2

    def test_all_iterations_empty_raises(self, train_dataset):
        with pytest.raises(LongGuideError, match="selection failed"):
            run_selection(["junk"] * 4, train_dataset, iterations=2)

    def test_output_subset_of_catalog(self, train_dataset):
        responses = ["['Clarity', 'Accuracy', 'Brevity']"] * 2
        selected, _ = run_selection(responses, train_dataset)
        assert set(selected.metrics) <= set(METRIC_CATALOG)

    def test_provenance_logged(self, train_dataset):
        selected, _ = run_selection(["['Clarity']"], train_dataset)
        log_entry = selected.iterations[0]
        assert len(log_entry.batch_indices) == 5
        assert log_entry.parsed == ["Clarity"]
        assert log_entry.raw_responses == ["['Clarity']"]
