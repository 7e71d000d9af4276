"""Power estimation and energy integration.

Power per snapshot is hardware-report-first: when the GPU exposes a live
power draw, that reading is trusted and only the CPU contribution is
estimated on top of it (board power excludes the rest of the platform).
Otherwise both CPU and GPU contributions are scaled from utilization
against configurable maximum-draw figures. The defaults are estimates, not
measurements, and are overridable via config file and CLI flags.

Energy over a run is the trapezoidal integral of those power readings in
watt-hours, exact for linear ramps between samples. ``energy_for_window``
clips the series to an inference window, interpolating power linearly at
the boundaries so short requests landing between two samples still
integrate to a sensible value.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import NonMonotonicSeries
from .sampler import MetricsSnapshot


@dataclass(frozen=True)
class PowerConfig:
    """Estimation constants, tunable per machine."""

    baseline_watts: float = 15.0
    cpu_max_watts: float = 65.0
    gpu_max_watts: float = 220.0

    def __post_init__(self) -> None:
        if self.baseline_watts < 0:
            raise ValueError("baseline_watts must be nonnegative")
        if self.cpu_max_watts <= 0 or self.gpu_max_watts <= 0:
            raise ValueError("cpu_max_watts and gpu_max_watts must be positive")


def estimate_power(snapshot: MetricsSnapshot, config: PowerConfig) -> float:
    """Estimated system draw in watts for one sampling instant.

    CPU share is the targets' summed cpu_percent normalized by total core
    capacity and capped at 1.0 (per-process percentages can sum past 100 on
    multicore machines).
    """
    capacity = 100.0 * max(snapshot.logical_cores, 1)
    cpu_frac = min(snapshot.total_cpu_percent, capacity) / capacity

    gpu = snapshot.gpu
    if gpu is not None and gpu.power_watts is not None:
        return gpu.power_watts + config.baseline_watts + cpu_frac * config.cpu_max_watts

    gpu_frac = (gpu.utilization_percent / 100.0) if gpu is not None else 0.0
    return (
        config.baseline_watts
        + cpu_frac * config.cpu_max_watts
        + gpu_frac * config.gpu_max_watts
    )


@dataclass(frozen=True)
class PowerSample:
    """One (monotonic seconds, watts) point on the power curve."""

    t_s: float
    watts: float

    def __post_init__(self) -> None:
        if self.watts < 0:
            raise ValueError(f"watts must be nonnegative, got {self.watts}")


@dataclass(frozen=True)
class EnergyReading:
    energy_wh: float
    duration_s: float
    mean_watts: float
    window_empty: bool = False


def _reading(energy_wh: float, duration_s: float, window_empty: bool = False) -> EnergyReading:
    mean = energy_wh * 3600.0 / duration_s if duration_s > 0 else 0.0
    return EnergyReading(
        energy_wh=energy_wh,
        duration_s=duration_s,
        mean_watts=mean,
        window_empty=window_empty,
    )


def _check_monotonic(samples: Sequence[PowerSample]) -> None:
    for prev, cur in zip(samples, samples[1:]):
        if cur.t_s <= prev.t_s:
            raise NonMonotonicSeries(
                f"power samples must be strictly increasing in time: "
                f"{prev.t_s} then {cur.t_s}"
            )


def integrate_energy(samples: Sequence[PowerSample]) -> EnergyReading:
    """Trapezoidal watt-hours over the series; fewer than 2 points is zero energy."""
    samples = list(samples)
    _check_monotonic(samples)
    if len(samples) < 2:
        return _reading(0.0, 0.0)
    joules = 0.0
    for prev, cur in zip(samples, samples[1:]):
        joules += (prev.watts + cur.watts) / 2.0 * (cur.t_s - prev.t_s)
    return _reading(joules / 3600.0, samples[-1].t_s - samples[0].t_s)


def _interpolate(samples: Sequence[PowerSample], t: float) -> float:
    for prev, cur in zip(samples, samples[1:]):
        if prev.t_s <= t <= cur.t_s:
            frac = (t - prev.t_s) / (cur.t_s - prev.t_s)
            return prev.watts + frac * (cur.watts - prev.watts)
    raise ValueError(f"time {t} outside sample span")


def clip_series(
    samples: Sequence[PowerSample], window: tuple[float, float]
) -> list[PowerSample] | None:
    """Series restricted to the window, boundary points interpolated.

    None means the window has no overlap of positive width with the sampled
    span (including the no-data case).
    """
    start, end = window
    if end < start:
        raise ValueError(f"window end {end} before start {start}")
    samples = list(samples)
    _check_monotonic(samples)
    if len(samples) < 2:
        return None
    lo = max(start, samples[0].t_s)
    hi = min(end, samples[-1].t_s)
    if hi <= lo:
        return None
    clipped = [PowerSample(lo, _interpolate(samples, lo))]
    clipped.extend(s for s in samples if lo < s.t_s < hi)
    clipped.append(PowerSample(hi, _interpolate(samples, hi)))
    return clipped


def energy_for_window(
    snapshots: Sequence[MetricsSnapshot],
    window: tuple[float, float],
    config: PowerConfig,
) -> EnergyReading:
    """Power-estimate every snapshot, clip to the window, integrate.

    A window that misses the sampled span yields 0 Wh with ``window_empty``
    set instead of failing, so a too-short inference never aborts a
    benchmark sweep.
    """
    series = [
        PowerSample(s.monotonic_s, estimate_power(s, config)) for s in snapshots
    ]
    clipped = clip_series(series, window)
    if clipped is None:
        return _reading(0.0, 0.0, window_empty=True)
    return integrate_energy(clipped)
