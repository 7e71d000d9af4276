"""LLM process detection and periodic resource sampling.

Detection is name-based: a case-insensitive substring table maps process
names to the serving platform. The monitor loop samples the matched
processes on a fixed cadence and re-detects periodically so servers that
start or stop mid-run are picked up without restarting the monitor.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from enum import Enum
from typing import Callable

from .errors import ProcessGone
from .telemetry import (
    Clock,
    GpuTelemetry,
    MemoryStats,
    TelemetryProvider,
    utc_now_iso,
)


class Platform(str, Enum):
    OLLAMA = "Ollama"
    LM_STUDIO = "LMStudio"
    LLAMA_CPP = "LlamaCpp"
    TEXT_GEN_WEBUI = "TextGenWebUI"
    KOBOLDCPP = "KoboldCpp"
    VLLM = "VLLM"
    UNKNOWN = "Unknown"


# Ordered: first matching token decides the platform for a given process name.
MATCH_TOKENS: tuple[tuple[str, Platform], ...] = (
    ("ollama", Platform.OLLAMA),
    ("lm studio", Platform.LM_STUDIO),
    ("lmstudio", Platform.LM_STUDIO),
    ("llama-server", Platform.LLAMA_CPP),
    ("llama.cpp", Platform.LLAMA_CPP),
    ("llama-cpp", Platform.LLAMA_CPP),
    ("text-generation", Platform.TEXT_GEN_WEBUI),
    ("textgen", Platform.TEXT_GEN_WEBUI),
    ("koboldcpp", Platform.KOBOLDCPP),
    ("vllm", Platform.VLLM),
)


@dataclass(frozen=True)
class DetectedProcess:
    pid: int
    name: str
    platform: Platform


@dataclass(frozen=True)
class ProcessSample:
    pid: int
    name: str
    platform: Platform
    cpu_percent: float
    rss_bytes: int


@dataclass(frozen=True)
class MetricsSnapshot:
    """One sampling instant: per-process readings plus system-wide context.

    ``dropped`` lists pids that were targeted but vanished between detection
    and this sample; their contribution is simply absent from the totals.
    ``monotonic_s`` positions the snapshot on the same clock used for
    benchmark windows.
    """

    timestamp: str
    monotonic_s: float
    processes: tuple[ProcessSample, ...]
    total_cpu_percent: float
    total_rss_bytes: int
    gpu: GpuTelemetry | None
    memory: MemoryStats
    logical_cores: int
    dropped: tuple[int, ...] = ()


def classify_process_name(name: str) -> Platform:
    """Map a process name to its platform; Unknown when no token matches."""
    lowered = name.lower()
    for token, platform in MATCH_TOKENS:
        if token in lowered:
            return platform
    return Platform.UNKNOWN


def detect_llm_processes(provider: TelemetryProvider) -> list[DetectedProcess]:
    """All recognized LLM server processes, sorted by pid ascending."""
    found = []
    for pid, name in provider.list_processes():
        platform = classify_process_name(name)
        if platform is not Platform.UNKNOWN:
            found.append(DetectedProcess(pid=pid, name=name, platform=platform))
    found.sort(key=lambda p: p.pid)
    return found


def sample_metrics(
    provider: TelemetryProvider,
    targets: list[DetectedProcess],
    monotonic_s: float = 0.0,
) -> MetricsSnapshot:
    """Read every target process once plus GPU/memory, tolerating vanished pids."""
    samples = []
    dropped = []
    for target in targets:
        try:
            stats = provider.process_stats(target.pid)
        except ProcessGone:
            dropped.append(target.pid)
            continue
        samples.append(
            ProcessSample(
                pid=target.pid,
                name=target.name,
                platform=target.platform,
                cpu_percent=stats.cpu_percent,
                rss_bytes=stats.rss_bytes,
            )
        )
    return MetricsSnapshot(
        timestamp=utc_now_iso(),
        monotonic_s=monotonic_s,
        processes=tuple(samples),
        total_cpu_percent=sum(s.cpu_percent for s in samples),
        total_rss_bytes=sum(s.rss_bytes for s in samples),
        gpu=provider.gpu(),
        memory=provider.memory(),
        logical_cores=provider.logical_cores(),
        dropped=tuple(dropped),
    )


@dataclass(frozen=True)
class MonitorSummary:
    samples_emitted: int
    started_at: str
    stopped_at: str


def run_monitor(
    provider: TelemetryProvider,
    on_sample: Callable[[MetricsSnapshot], None],
    *,
    clock: Clock,
    stop: threading.Event,
    interval_s: float = 2.0,
    redetect_every: int = 5,
    duration_s: float | None = None,
) -> MonitorSummary:
    """Sample on a fixed cadence until stopped or the duration elapses.

    The first sample lands one interval after start. Targets are re-detected
    before every ``redetect_every``-th sample, so a server launched mid-run
    joins the totals within K intervals.
    """
    if interval_s <= 0:
        raise ValueError("interval_s must be positive")
    if redetect_every < 1:
        raise ValueError("redetect_every must be at least 1")

    started_at = utc_now_iso()
    start = clock.monotonic()
    deadline = None if duration_s is None else start + duration_s
    targets = detect_llm_processes(provider)
    emitted = 0

    i = 0
    while True:
        i += 1
        next_tick = start + i * interval_s
        if deadline is not None and next_tick > deadline:
            break
        if clock.wait_until(next_tick, stop):
            break
        if i % redetect_every == 0:
            targets = detect_llm_processes(provider)
        on_sample(sample_metrics(provider, targets, monotonic_s=clock.monotonic()))
        emitted += 1

    return MonitorSummary(
        samples_emitted=emitted, started_at=started_at, stopped_at=utc_now_iso()
    )
