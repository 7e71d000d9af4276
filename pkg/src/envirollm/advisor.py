"""Hardware-aware model sizing: what fits in this machine's memory, and how.

The sizing rule is a community heuristic, shipped as data so users can tune
it: a quantized model takes roughly ``gb_per_billion_params`` gigabytes per
billion parameters (Q4 0.7, Q8 1.2, FP16 2.2), plus 20% overhead for KV
cache and runtime. Only 80% of currently available memory is treated as
usable. With a GPU present the binding constraint is whichever is smaller,
usable VRAM or usable RAM. These are estimates, never measurements.

Gigabytes here are decimal (1 GB = 1e9 bytes).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .telemetry import SystemTelemetryProvider, TelemetryProvider

GB = 1e9

CONFIDENCE_THRESHOLD_BASED = "threshold-based"


@dataclass(frozen=True)
class GpuInfo:
    name: str | None
    vram_total_bytes: int
    vram_free_bytes: int

    def __post_init__(self) -> None:
        if self.vram_free_bytes > self.vram_total_bytes:
            raise ValueError("free VRAM cannot exceed total VRAM")


@dataclass(frozen=True)
class HardwareProfile:
    total_ram_bytes: int
    available_ram_bytes: int
    logical_cores: int
    gpu: GpuInfo | None = None

    def __post_init__(self) -> None:
        if self.available_ram_bytes > self.total_ram_bytes:
            raise ValueError("available RAM cannot exceed total RAM")


@dataclass(frozen=True)
class Recommendation:
    max_params_billions: float
    suggested_quant: str
    rationale: str
    confidence: str = CONFIDENCE_THRESHOLD_BASED

    def __post_init__(self) -> None:
        if self.max_params_billions <= 0:
            raise ValueError("max_params_billions must be positive")


def load_sizing_table(path: str | Path | None = None) -> dict:
    """The bundled sizing table, or an override file of the same shape."""
    if path is not None:
        raw = Path(path).read_text(encoding="utf-8")
    else:
        raw = resources.files("envirollm.data").joinpath("advisor.json").read_text("utf-8")
    table = json.loads(raw)
    for key in ("usable_fraction", "overhead_factor", "gb_per_billion_params"):
        if key not in table:
            raise ValueError(f"sizing table missing key {key!r}")
    if not table["gb_per_billion_params"]:
        raise ValueError("sizing table names no quantization families")
    return table


def detect_hardware(provider: TelemetryProvider | None = None) -> HardwareProfile:
    """Profile RAM, GPU memory, and core count; gpu is absent without telemetry."""
    provider = provider if provider is not None else SystemTelemetryProvider()
    memory = provider.memory()
    gpu_reading = provider.gpu()
    gpu = None
    if gpu_reading is not None:
        gpu = GpuInfo(
            name=gpu_reading.name,
            vram_total_bytes=gpu_reading.memory_total_bytes,
            vram_free_bytes=gpu_reading.memory_total_bytes - gpu_reading.memory_used_bytes,
        )
    return HardwareProfile(
        total_ram_bytes=memory.total_bytes,
        available_ram_bytes=memory.available_bytes,
        logical_cores=provider.logical_cores(),
        gpu=gpu,
    )


def recommend(profile: HardwareProfile, table: dict | None = None) -> list[Recommendation]:
    """1-3 sizing recommendations against the binding memory constraint, largest first."""
    table = table if table is not None else load_sizing_table()
    usable_fraction = float(table["usable_fraction"])
    overhead = float(table["overhead_factor"])
    per_billion = {k: float(v) for k, v in table["gb_per_billion_params"].items()}

    usable_ram = usable_fraction * profile.available_ram_bytes / GB
    if profile.gpu is not None:
        usable_vram = usable_fraction * profile.gpu.vram_free_bytes / GB
        if usable_vram <= usable_ram:
            budget_gb, constraint = usable_vram, (
                f"GPU VRAM ({profile.gpu.vram_free_bytes / GB:.1f} GB free)"
            )
        else:
            budget_gb, constraint = usable_ram, (
                f"system RAM ({profile.available_ram_bytes / GB:.1f} GB available)"
            )
    else:
        budget_gb, constraint = usable_ram, (
            f"system RAM ({profile.available_ram_bytes / GB:.1f} GB available)"
        )

    recs = []
    for family, gb_per_b in per_billion.items():
        max_params = budget_gb / (gb_per_b * overhead)
        if max_params <= 0:
            continue
        recs.append(
            Recommendation(
                max_params_billions=max_params,
                suggested_quant=family,
                rationale=(
                    f"Up to ~{max_params:.1f}B parameters at {family} "
                    f"({gb_per_b} GB per billion + {int((overhead - 1) * 100)}% overhead), "
                    f"limited by {constraint}; usable budget {budget_gb:.1f} GB."
                ),
            )
        )
    if not recs:
        raise ValueError("no usable memory to size a model against")
    recs.sort(key=lambda r: r.max_params_billions, reverse=True)
    return recs[:3]
