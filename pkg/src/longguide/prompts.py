"""Versioned prompt templates and their renderers.

The templates are stable text resources; the acceptance suite pins their
rendered bytes against golden files, so edit with care. Demonstrations are
formatted as "Input: .../Output: ..." pairs separated by blank lines.
"""

from __future__ import annotations

from typing import Mapping, Sequence

PROMPT_VERSION = 1

SELECTION_TEMPLATE = """\
Select top-{top_k} metrics that are the most important from the list below to evaluate a special way of {task_name}.
{metric_pool}.

Here are some demonstrations of the task {task_name}:
{demonstrations}.

Output your list of metrics in Python list format without any explanation: [...]."""

DEFINITIONS_TEMPLATE = """\
Define the list of following metrics in details as the quality of the output expected for the {task_name} task.

{metrics}

Give me the list in bullet points."""

SCORING_TEMPLATE = """\
You are given an input and an output of a {task_name} task.

Input: {input}

Output: {output}

Your task is to evaluate the following criteria on a scale of 1-5, with 1 being worst and 5 being best.

{evaluation_format}

The definitions of the criteria are:
{metric_definitions}

Your output must be in Python dictionary format without explanation."""

MG_TEMPLATE = """\
Now you are given the following metrics: {metrics} for the {task_name} task.

Based on these scores on a scale of 5 for the quality of the output: {scores}, define the expected quality of the output for each metric in natural language. Give me the list in bullet points."""

JUDGE_TEMPLATE = """\
Please act as an impartial judge and evaluate how well an assistant's answer aligns with the reference answer and the quality of the assistant's answer. You will be given a user prompt, a reference answer and an assistant's answer. Your evaluation must consider the following criteria:

- Format consistency: ensuring the generated response matches the length and structure of the reference.

- Content completeness: evaluating whether all key points present in the reference are included in the assistant's answer.

- Factuality: checking for factual correctness of the assistant's answer.

- Style adherence: ensuring that the tone, style, and level of detail of the of the assistant's answer match the reference.

- Assistant's answer quality: assessing how well the response satisfies the user's requirements.

Begin your evaluation by providing a short explanation for each. Be as objective as possible. After providing your explanation, please rate the response on all the criterion on a scale of 1 to 10 by strictly following this format:

[The Start of Explanation]

...

[The End of Explanation]

[The Start of Ratings]

{
"Format": 1-10,
"Content": 1-10,
"Factuality": 1-10,
"Style": 1-10,
"Quality": 1-10,
}

[The End of Ratings]

[User Prompt]

{{user_prompt}}

[The Start of Reference Answer]

{{answer_ref}}

[The End of Reference Answer]

[The Start of Assistant's Answer]

{{answer_a}}

[The End of Assistant's Answer]"""

PROPERTY_SCORER_TEMPLATE = """\
You are an expert in evaluating the quality of a text generation task. You possess a nuanced understanding of various critical aspects. Brevity is paramount for you, ensuring concise expression without sacrificing essential information. Clarity is essential for comprehension, ensuring that your text is easily understood by the intended audience. Relevance ensures that the generated content aligns closely with the given context or prompt. Neutrality is crucial, maintaining an impartial tone devoid of bias. Coherence ties together ideas seamlessly, fostering a logical flow within your text. Completeness guarantees that all relevant points are addressed adequately. Specificity enhances precision, providing detailed and accurate information. Respect of chronology ensures temporal coherence, maintaining the chronological order of events. Accuracy demands factual correctness, avoiding errors or misinformation. Non-repetitiveness prevents redundancy, ensuring freshness in your expression. Indicative language aids in signaling key points or conclusions. Lastly, resolution ensures that your text concludes satisfactorily, resolving any questions or issues raised throughout.

Input: {dialogue}

Output: {generated_summary}

Your task is to evaluate the following criteria in a scale of 1-5, with 1 is worst and 5 is best.

{
    "Semantic Coverage": 1-5,
    "Factuality": 1-5,
    "Consistency": 1-5,
    "Informativeness": 1-5,
    "Coherence": 1-5,
    "Relevance": 1-5
}

The definitions of the criteria are:

Semantic Coverage (COV): The extent to which a dialogue summary captures the main ideas and topics discussed in the conversation.

Factuality (FAC): The accuracy and truthfulness of the information presented in the dialogue summary, reflecting fidelity to the original conversation.

Consistency (CON): The degree to which the summary maintains logical and contextual coherence throughout, avoiding contradictory or conflicting information.

Informativeness (INF): The richness and depth of information conveyed in the dialogue summary, including key details and relevant context.

Coherence (COH): The overall clarity and organization of the summary, ensuring smooth transitions between ideas and coherence in the narrative flow.

Relevance (REL): The pertinence of the information included in the dialogue summary to the intended purpose or topic, ensuring alignment with the user's interests or needs.

Your output must be in Python dictionary format."""

SIMPLE_GUIDELINE_TEMPLATE = "The output must maintain...{property}."


def format_demonstrations(pairs: Sequence[tuple[str, str]]) -> str:
    """Render (input, output) exemplars, blank-line separated."""
    return "\n\n".join(f"Input: {x}\nOutput: {y}" for x, y in pairs)


def render_selection_prompt(
    task_name: str,
    catalog: Sequence[str],
    demonstrations: Sequence[tuple[str, str]],
    top_k: int = 5,
) -> str:
    return SELECTION_TEMPLATE.format(
        top_k=top_k,
        task_name=task_name,
        metric_pool=str(list(catalog)),
        demonstrations=format_demonstrations(demonstrations),
    )


def render_definitions_prompt(task_name: str, metrics: Sequence[str]) -> str:
    return DEFINITIONS_TEMPLATE.format(task_name=task_name, metrics=str(list(metrics)))


def render_scoring_prompt(
    task_name: str,
    sample_input: str,
    sample_output: str,
    metrics: Sequence[str],
    definitions: Mapping[str, str],
) -> str:
    evaluation_format = (
        "{\n" + ",\n".join(f'    "{name}": 1-5' for name in metrics) + "\n}"
    )
    metric_definitions = "\n".join(
        f"{name}: {definitions.get(name, '')}".rstrip() for name in metrics
    )
    return SCORING_TEMPLATE.format(
        task_name=task_name,
        input=sample_input,
        output=sample_output,
        evaluation_format=evaluation_format,
        metric_definitions=metric_definitions,
    )


def render_mg_prompt(
    task_name: str, metrics: Sequence[str], mean_scores: Mapping[str, float]
) -> str:
    scores = "{" + ", ".join(f"{name}: {mean_scores[name]:.2f}" for name in metrics) + "}"
    return MG_TEMPLATE.format(
        metrics=str(list(metrics)), task_name=task_name, scores=scores
    )


def render_judge_prompt(user_prompt: str, answer_ref: str, answer_a: str) -> str:
    return (
        JUDGE_TEMPLATE.replace("{{user_prompt}}", user_prompt)
        .replace("{{answer_ref}}", answer_ref)
        .replace("{{answer_a}}", answer_a)
    )


def render_property_scorer_prompt(dialogue: str, generated: str) -> str:
    return PROPERTY_SCORER_TEMPLATE.replace("{dialogue}", dialogue).replace(
        "{generated_summary}", generated
    )


def render_simple_guideline(property_name: str) -> str:
    return SIMPLE_GUIDELINE_TEMPLATE.replace("{property}", property_name)
