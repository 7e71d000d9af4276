"""envirollm: measure, benchmark, and optimize local LLM deployments.

Monitors inference server processes in real time, converts utilization
samples into energy estimates, benchmarks models across Ollama and
OpenAI-compatible endpoints on identical prompts with quality scoring,
persists grouped results, and serves a dashboard API for comparison.
"""

__version__ = "0.1.0"

from .bench import (
    BenchmarkResult,
    PromptSpec,
    aggregate_results,
    derive_metrics,
    preset_prompts,
    prompt_hash,
)
from .energy import PowerConfig, energy_for_window, estimate_power, integrate_energy
from .engine import EngineOptions, RunOutcome, run_benchmark_ollama, run_benchmark_openai
from .quality import QualityScore, heuristic_score, judge_score
from .quant import QuantLabel, detect_quantization
from .sampler import MetricsSnapshot, detect_llm_processes, run_monitor, sample_metrics
from .store import ResultStore

__all__ = [
    "BenchmarkResult",
    "EngineOptions",
    "MetricsSnapshot",
    "PowerConfig",
    "PromptSpec",
    "QualityScore",
    "QuantLabel",
    "ResultStore",
    "RunOutcome",
    "aggregate_results",
    "derive_metrics",
    "detect_llm_processes",
    "detect_quantization",
    "energy_for_window",
    "estimate_power",
    "heuristic_score",
    "integrate_energy",
    "judge_score",
    "preset_prompts",
    "prompt_hash",
    "run_benchmark_ollama",
    "run_benchmark_openai",
    "run_monitor",
    "sample_metrics",
    "__version__",
]
