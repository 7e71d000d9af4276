"""Benchmark domain types, preset prompts, and derived-metric arithmetic.

Everything here is pure: hashing, token estimation, metric derivation, and
aggregation. The network-facing orchestration lives in ``engine``.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

from .quality import QualityScore
from .quant import QuantLabel

PLATFORM_OLLAMA = "Ollama"
PLATFORM_OPENAI = "OpenAICompatible"

CATEGORIES = ("Explanation", "CodeGen", "Summarization", "LongForm", "Analysis", "Custom")


@dataclass(frozen=True)
class PromptSpec:
    id: str
    category: str
    text: str

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("prompt text must be nonempty")
        if self.category not in CATEGORIES:
            raise ValueError(f"unknown prompt category: {self.category}")


def preset_prompts() -> list[PromptSpec]:
    """The five built-in benchmark prompts, one per task category. Stable across calls."""
    return [
        PromptSpec(
            id="explanation",
            category="Explanation",
            text=(
                "Explain quantum computing in simple terms that a high school "
                "student could understand. Cover qubits, superposition, and why "
                "quantum computers could outperform classical ones on some problems."
            ),
        ),
        PromptSpec(
            id="codegen",
            category="CodeGen",
            text=(
                "Write a Python function that implements bubble sort. Include "
                "comments explaining each step and a short example of calling it."
            ),
        ),
        PromptSpec(
            id="summarization",
            category="Summarization",
            text=(
                "Summarize the core concepts of machine learning: supervised and "
                "unsupervised learning, training versus inference, and overfitting. "
                "Keep it to a few short paragraphs."
            ),
        ),
        PromptSpec(
            id="longform",
            category="LongForm",
            text=(
                "Write a detailed three-day travel itinerary for Tokyo, covering "
                "neighborhoods to visit, food to try, transportation between stops, "
                "and one day trip outside the city."
            ),
        ),
        PromptSpec(
            id="analysis",
            category="Analysis",
            text=(
                "Analyze the advantages and disadvantages of renewable energy "
                "sources compared to fossil fuels, considering cost, reliability, "
                "infrastructure, and environmental impact."
            ),
        ),
    ]


def prompt_hash(text: str) -> str:
    """SHA-256 hex of the whitespace-normalized prompt (trim + collapse runs)."""
    normalized = " ".join(text.split())
    return hashlib.sha256(normalized.encode("utf-8")).hexdigest()


def estimate_tokens(text: str) -> int:
    """Rough tokenizer-free token estimate: one token per 4 characters, rounded up."""
    return math.ceil(len(text) / 4)


def derive_metrics(energy_wh: float, tokens: int, duration_s: float) -> tuple[float, float]:
    """(tokens_per_s, wh_per_token); wh_per_token is 0 for zero-token runs."""
    if duration_s <= 0:
        raise ValueError(f"duration_s must be positive, got {duration_s}")
    if tokens < 0:
        raise ValueError(f"tokens must be nonnegative, got {tokens}")
    tokens_per_s = tokens / duration_s
    wh_per_token = energy_wh / tokens if tokens > 0 else 0.0
    return tokens_per_s, wh_per_token


def _close(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=1e-9, abs_tol=0.0)


@dataclass(frozen=True)
class BenchmarkResult:
    """One model x prompt run with its measurements and derived rates.

    ``duration_s`` is the generation time used for speed (platform-reported
    when available); ``duration_total_s`` is the request wall clock
    including model load, kept separately.
    """

    id: str
    timestamp: str
    platform: str
    endpoint_url: str
    model: str
    quantization: QuantLabel
    prompt_hash: str
    prompt_text: str
    response_text: str
    tokens: int
    tokens_estimated: bool
    duration_s: float
    duration_total_s: float
    tokens_per_s: float
    energy_wh: float
    wh_per_token: float
    quality: QualityScore

    def __post_init__(self) -> None:
        if self.tokens < 0:
            raise ValueError(f"tokens must be nonnegative, got {self.tokens}")
        if self.duration_s <= 0:
            raise ValueError(f"duration_s must be positive, got {self.duration_s}")
        if not _close(self.tokens_per_s, self.tokens / self.duration_s):
            raise ValueError(
                f"tokens_per_s {self.tokens_per_s} != tokens/duration "
                f"{self.tokens / self.duration_s}"
            )
        if self.tokens == 0:
            if self.wh_per_token != 0.0:
                raise ValueError("wh_per_token must be 0 for zero-token runs")
        elif not _close(self.wh_per_token * self.tokens, self.energy_wh):
            raise ValueError(
                f"wh_per_token*tokens {self.wh_per_token * self.tokens} "
                f"!= energy_wh {self.energy_wh}"
            )


@dataclass(frozen=True)
class ModelAggregate:
    model: str
    runs: int
    mean_energy_wh: float
    mean_tokens_per_s: float
    mean_wh_per_token: float
    mean_quality: float
    token_range: tuple[int, int]


def aggregate_results(results: list[BenchmarkResult]) -> dict[str, ModelAggregate]:
    """Per-model arithmetic means and token range, keyed in first-seen order."""
    groups: dict[str, list[BenchmarkResult]] = {}
    for result in results:
        groups.setdefault(result.model, []).append(result)
    out = {}
    for model, rows in groups.items():
        n = len(rows)
        out[model] = ModelAggregate(
            model=model,
            runs=n,
            mean_energy_wh=sum(r.energy_wh for r in rows) / n,
            mean_tokens_per_s=sum(r.tokens_per_s for r in rows) / n,
            mean_wh_per_token=sum(r.wh_per_token for r in rows) / n,
            mean_quality=sum(r.quality.value for r in rows) / n,
            token_range=(min(r.tokens for r in rows), max(r.tokens for r in rows)),
        )
    return out
