"""Benchmark orchestration: runs model x prompt pairs and measures each one.

Pairs run strictly sequentially; concurrent inference would contaminate
each other's energy windows. For every pair the engine starts a background
sampler, issues one non-streaming generation request, closes the sampling
window one interval past completion, integrates energy over the
request-to-response window, and scores the response (judge first when
enabled, heuristic otherwise or on judge failure). One pair's failure is
recorded and the sweep continues; only an unreachable endpoint aborts the
whole run, before anything has executed.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field

from .bench import (
    PLATFORM_OLLAMA,
    PLATFORM_OPENAI,
    BenchmarkResult,
    PromptSpec,
    derive_metrics,
    estimate_tokens,
    prompt_hash,
)
from .clients import (
    DEFAULT_OLLAMA_URL,
    DEFAULT_OPENAI_URL,
    GenerationReply,
    OllamaClient,
    OpenAIClient,
)
from .energy import PowerConfig, energy_for_window
from .errors import (
    InferenceTimeout,
    JudgeUnavailable,
    MalformedResponse,
    ModelNotFound,
    UnparseableJudgeReply,
)
from .quality import DEFAULT_JUDGE_MODEL, heuristic_score, judge_score
from .quant import UNKNOWN_QUANT, QuantLabel, detect_quantization
from .sampler import MetricsSnapshot, detect_llm_processes, sample_metrics
from .telemetry import (
    Clock,
    SystemClock,
    SystemTelemetryProvider,
    TelemetryProvider,
    utc_now_iso,
)


@dataclass(frozen=True)
class EngineOptions:
    power: PowerConfig = PowerConfig()
    sample_interval_s: float = 2.0
    request_timeout_s: float = 300.0
    judge_enabled: bool = True
    judge_url: str | None = None  # None: reuse the benchmark endpoint (Ollama runs only)
    judge_model: str = DEFAULT_JUDGE_MODEL
    judge_timeout_s: float = 120.0


@dataclass(frozen=True)
class PairFailure:
    model: str
    prompt_id: str
    error: str
    detail: str


@dataclass
class RunOutcome:
    results: list[BenchmarkResult] = field(default_factory=list)
    failures: list[PairFailure] = field(default_factory=list)


class _WindowSampler:
    """Background metrics sampler bracketing one inference request.

    Takes a sample immediately at start (so the window is always inside the
    sampled span), then one per interval, then one final sample at the first
    tick at or after stop() so the trapezoid extends past the window end.
    """

    def __init__(self, provider: TelemetryProvider, clock: Clock, interval_s: float):
        self._provider = provider
        self._clock = clock
        self._interval = interval_s
        self._stop = threading.Event()
        self._thread = threading.Thread(target=self._run, daemon=True)
        self._targets: list = []
        self.snapshots: list[MetricsSnapshot] = []

    def start(self) -> None:
        self._thread.start()

    def stop_and_join(self) -> list[MetricsSnapshot]:
        self._stop.set()
        self._thread.join()
        return self.snapshots

    def _take(self) -> None:
        self.snapshots.append(
            sample_metrics(self._provider, self._targets, monotonic_s=self._clock.monotonic())
        )

    def _run(self) -> None:
        self._targets = detect_llm_processes(self._provider)
        t0 = self._clock.monotonic()
        self._take()
        i = 0
        while True:
            i += 1
            tick = t0 + i * self._interval
            stopped = self._clock.wait_until(tick, self._stop)
            if stopped:
                # Finish out the interval so the last sample lands at or
                # past the window end, then take it and quit.
                self._clock.wait_until(tick, threading.Event())
                self._take()
                return
            self._take()


def _score(prompt: PromptSpec, response: str, judge_url: str | None, options: EngineOptions):
    if options.judge_enabled and judge_url and response:
        try:
            return judge_score(
                prompt.text,
                response,
                judge_url,
                judge_model=options.judge_model,
                timeout_s=options.judge_timeout_s,
            )
        except (JudgeUnavailable, UnparseableJudgeReply):
            pass
    return heuristic_score(prompt.text, response)


def _run_pairs(
    pairs: list[tuple[str, PromptSpec]],
    generate,
    quantization_of,
    platform: str,
    endpoint_url: str,
    judge_url: str | None,
    provider: TelemetryProvider,
    clock: Clock,
    options: EngineOptions,
    on_pair=None,
) -> RunOutcome:
    outcome = RunOutcome()

    def record_failure(failure: PairFailure) -> None:
        outcome.failures.append(failure)
        if on_pair is not None:
            on_pair(None, failure)

    for model, prompt in pairs:
        sampler = _WindowSampler(provider, clock, options.sample_interval_s)
        sampler.start()
        t_send = clock.monotonic()
        try:
            reply: GenerationReply = generate(model, prompt)
        except (ModelNotFound, InferenceTimeout, MalformedResponse) as exc:
            sampler.stop_and_join()
            record_failure(
                PairFailure(
                    model=model,
                    prompt_id=prompt.id,
                    error=type(exc).__name__,
                    detail=str(exc),
                )
            )
            continue
        except BaseException:
            sampler.stop_and_join()
            raise
        t_complete = clock.monotonic()
        snapshots = sampler.stop_and_join()

        reading = energy_for_window(snapshots, (t_send, t_complete), options.power)
        wall_s = t_complete - t_send
        duration_s = reply.gen_duration_s if reply.gen_duration_s else wall_s
        if duration_s <= 0:
            record_failure(
                PairFailure(
                    model=model,
                    prompt_id=prompt.id,
                    error="NonPositiveDuration",
                    detail=f"measured duration {duration_s}",
                )
            )
            continue
        if reply.tokens is not None:
            tokens, estimated = reply.tokens, False
        else:
            tokens, estimated = estimate_tokens(reply.text), True
        tokens_per_s, wh_per_token = derive_metrics(reading.energy_wh, tokens, duration_s)
        quality = _score(prompt, reply.text, judge_url, options)
        result = BenchmarkResult(
            id=uuid.uuid4().hex,
            timestamp=utc_now_iso(),
            platform=platform,
            endpoint_url=endpoint_url,
            model=model,
            quantization=quantization_of(model),
            prompt_hash=prompt_hash(prompt.text),
            prompt_text=prompt.text,
            response_text=reply.text,
            tokens=tokens,
            tokens_estimated=estimated,
            duration_s=duration_s,
            duration_total_s=wall_s,
            tokens_per_s=tokens_per_s,
            energy_wh=reading.energy_wh,
            wh_per_token=wh_per_token,
            quality=quality,
        )
        outcome.results.append(result)
        if on_pair is not None:
            on_pair(result, None)
    return outcome


def run_benchmark_ollama(
    models: list[str],
    prompts: list[PromptSpec],
    base_url: str = DEFAULT_OLLAMA_URL,
    *,
    provider: TelemetryProvider | None = None,
    clock: Clock | None = None,
    options: EngineOptions = EngineOptions(),
    on_pair=None,
) -> RunOutcome:
    """Benchmark every model x prompt pair against an Ollama endpoint, in order.

    ``on_pair(result, failure)`` fires after each pair with exactly one of
    the two set, letting callers persist and report progress incrementally.
    """
    if not models or not prompts:
        raise ValueError("models and prompts must be nonempty")
    provider = provider if provider is not None else SystemTelemetryProvider()
    clock = clock if clock is not None else SystemClock()
    client = OllamaClient(base_url, timeout_s=options.request_timeout_s)
    client.probe()

    quant_cache: dict[str, QuantLabel] = {}

    def quantization_of(model: str) -> QuantLabel:
        if model not in quant_cache:
            label = detect_quantization(model)
            if label == UNKNOWN_QUANT:
                label = detect_quantization(model, client.quantization_metadata(model))
            quant_cache[model] = label
        return quant_cache[model]

    judge_url = options.judge_url if options.judge_url else base_url
    pairs = [(model, prompt) for model in models for prompt in prompts]
    return _run_pairs(
        pairs,
        lambda model, prompt: client.generate(model, prompt.text),
        quantization_of,
        PLATFORM_OLLAMA,
        base_url,
        judge_url,
        provider,
        clock,
        options,
        on_pair=on_pair,
    )


def run_benchmark_openai(
    base_url: str,
    model: str,
    prompts: list[PromptSpec],
    *,
    provider: TelemetryProvider | None = None,
    clock: Clock | None = None,
    options: EngineOptions = EngineOptions(),
    on_pair=None,
) -> RunOutcome:
    """Benchmark one model on an OpenAI-compatible chat-completions endpoint."""
    if not model or not prompts:
        raise ValueError("model and prompts must be nonempty")
    provider = provider if provider is not None else SystemTelemetryProvider()
    clock = clock if clock is not None else SystemClock()
    client = OpenAIClient(base_url or DEFAULT_OPENAI_URL, timeout_s=options.request_timeout_s)
    client.probe()

    pairs = [(model, prompt) for prompt in prompts]
    return _run_pairs(
        pairs,
        lambda m, prompt: client.generate(m, prompt.text),
        lambda m: detect_quantization(m),
        PLATFORM_OPENAI,
        base_url or DEFAULT_OPENAI_URL,
        options.judge_url,  # judge speaks the Ollama protocol; never the benchmark endpoint here
        provider,
        clock,
        options,
        on_pair=on_pair,
    )
