import json
from pathlib import Path

import pytest

from longguide import MockBackend, load_config, load_dataset

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = FIXTURES / "golden"

# hand-designed medians behind the scripted scoring transcript
FIXTURE_MEDIANS = {
    "Accuracy": [4, 5, 4, 3, 4, 5, 4, 4, 5, 4],
    "Brevity": [5, 4, 5, 5, 4, 5, 5, 4, 4, 5],
    "Clarity": [4, 4, 5, 4, 4, 4, 5, 5, 4, 4],
    "Relevance": [3, 4, 4, 4, 5, 4, 3, 4, 4, 4],
}
FIXTURE_MEANS = {"Accuracy": 4.2, "Brevity": 4.6, "Clarity": 4.3, "Relevance": 3.9}
FIXTURE_METRICS = ["Accuracy", "Brevity", "Clarity", "Relevance"]
FIXTURE_OCG = (
    "The summary must have from 1 to 3 sentences and from 5 to 14 words "
    "with an average of 9 words and 2 sentences."
)


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def train_dataset():
    return load_dataset(FIXTURES / "train.jsonl", split="train")


@pytest.fixture
def run_config():
    return load_config(FIXTURES / "config.yaml")


@pytest.fixture
def learn_script():
    return json.loads((FIXTURES / "learn_script.json").read_text())


@pytest.fixture
def learn_backend(learn_script):
    return MockBackend(script=learn_script)


def echo_learn_script(script, references):
    """Variant of the learn transcript whose validation phase echoes every
    reference, so all four variants tie at 1.0."""
    head = script[: 5 + 1 + 30 + 1]
    return head + list(references) * 4
