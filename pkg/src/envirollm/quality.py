"""Response quality scoring: LLM judge first, deterministic heuristic fallback.

The judge path asks a local model to grade a response 0-100 against four
fixed criteria and parses the integer out of its reply. The heuristic path
is a pure function of the response text: four subscores (completeness,
vocabulary diversity, length appropriateness, structure), each 0-25,
rounded half-up independently and summed. Which path runs is the caller's
decision; this module only reports failures that should trigger fallback.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .clients import OllamaClient
from .errors import (
    EndpointUnreachable,
    InferenceTimeout,
    JudgeUnavailable,
    MalformedResponse,
    ModelNotFound,
    UnparseableJudgeReply,
)

METHOD_JUDGE = "judge"
METHOD_HEURISTIC = "heuristic"

DEFAULT_JUDGE_MODEL = "gemma3:1b"

JUDGE_CRITERIA = (
    "accuracy (factual correctness)",
    "completeness (coverage of key points)",
    "clarity (ease of understanding)",
    "relevance (staying on topic)",
)


@dataclass(frozen=True)
class Subscores:
    completeness: int
    diversity: int
    length: int
    structure: int

    def total(self) -> int:
        return self.completeness + self.diversity + self.length + self.structure


@dataclass(frozen=True)
class QualityScore:
    value: int
    method: str
    judge_model: str | None = None
    subscores: Subscores | None = None

    def __post_init__(self) -> None:
        if not 0 <= self.value <= 100:
            raise ValueError(f"quality value out of range: {self.value}")
        if self.method not in (METHOD_JUDGE, METHOD_HEURISTIC):
            raise ValueError(f"unknown scoring method: {self.method}")
        if (self.subscores is not None) != (self.method == METHOD_HEURISTIC):
            raise ValueError("subscores accompany heuristic scores only")
        if self.subscores is not None and self.subscores.total() != self.value:
            raise ValueError(
                f"subscores sum {self.subscores.total()} != value {self.value}"
            )


def build_judge_prompt(task_prompt: str, response: str) -> str:
    """Deterministic grading instruction embedding the four criteria and both texts."""
    if not task_prompt or not response:
        raise ValueError("task_prompt and response must be nonempty")
    criteria = "\n".join(f"- {c}" for c in JUDGE_CRITERIA)
    return (
        "You are grading the quality of an AI assistant's response to a task.\n"
        "Rate the response on a 0-100 scale based on four criteria:\n"
        f"{criteria}\n\n"
        "Task:\n"
        f"{task_prompt}\n\n"
        "Response:\n"
        f"{response}\n\n"
        "Answer with a single integer between 0 and 100 on the first line, "
        "then optionally a short justification."
    )


def parse_judge_reply(reply: str) -> int:
    """First integer in [0,100] scanning left to right; larger numbers are skipped."""
    for match in re.finditer(r"\d+", reply):
        value = int(match.group(0))
        if value <= 100:
            return value
    raise UnparseableJudgeReply(f"no integer in [0,100] in judge reply: {reply[:80]!r}")


def judge_score(
    task_prompt: str,
    response: str,
    judge_url: str,
    judge_model: str = DEFAULT_JUDGE_MODEL,
    timeout_s: float = 120.0,
) -> QualityScore:
    """Grade via the judge endpoint (temperature 0). Raises when fallback is needed."""
    client = OllamaClient(judge_url, timeout_s=timeout_s)
    prompt = build_judge_prompt(task_prompt, response)
    try:
        reply = client.generate(judge_model, prompt, temperature=0.0)
    except (EndpointUnreachable, InferenceTimeout, ModelNotFound, MalformedResponse) as exc:
        raise JudgeUnavailable(f"judge endpoint failed: {exc}") from exc
    value = parse_judge_reply(reply.text)
    return QualityScore(value=value, method=METHOD_JUDGE, judge_model=judge_model)


def _round_half_up(x: float) -> int:
    return int(x + 0.5)


def _length_subscore(word_count: int) -> float:
    if word_count <= 0:
        return 0.0
    if word_count < 50:
        return 25.0 * word_count / 50.0
    if word_count <= 2000:
        return 25.0
    if word_count >= 4000:
        return 0.0
    return 25.0 * (4000 - word_count) / 2000.0


_SENTENCE_END = re.compile(r"[.!?]+")
_BLOCK_MARKER = re.compile(r"^\s*(?:[-*+]\s|#{1,6}\s|\d+[.)]\s)", re.MULTILINE)


def _structure_features(text: str) -> int:
    present = 0
    if len(_SENTENCE_END.findall(text)) >= 2:
        present += 1
    if text.count("\n\n") >= 2:
        present += 1
    if _BLOCK_MARKER.search(text) or "```" in text:
        present += 1
    stripped = text.rstrip()
    if stripped and stripped[-1] in ".!?":
        present += 1
    return present


def heuristic_score(task_prompt: str, response: str) -> QualityScore:
    """Pure text-feature score; same inputs give the identical QualityScore."""
    words = response.split()
    word_count = len(words)
    tokens = re.findall(r"[a-z0-9]+", response.lower())

    completeness = 25.0 * min(1.0, word_count / 150.0)
    diversity = 25.0 * (len(set(tokens)) / len(tokens)) if tokens else 0.0
    length = _length_subscore(word_count)
    structure = 25.0 * _structure_features(response) / 4.0

    subscores = Subscores(
        completeness=_round_half_up(completeness),
        diversity=_round_half_up(diversity),
        length=_round_half_up(length),
        structure=_round_half_up(structure),
    )
    return QualityScore(
        value=subscores.total(), method=METHOD_HEURISTIC, subscores=subscores
    )
