"""Telemetry providers: the OS-facing layer behind process detection and sampling.

Two implementations share one interface. ``SystemTelemetryProvider`` reads the
live process table through psutil and NVIDIA GPU counters through pynvml when
that library is importable and a device is present. ``MockTelemetryProvider``
replays a scripted timeline, which is what the test suite and the CLI's
``--mock-script`` mode run against.

Mock script format: one sample per line, five whitespace-separated fields::

    t_seconds  cpu_percent  rss_bytes  gpu_util  gpu_power_watts

Blank lines and ``#`` comments are ignored. A ``gpu_power_watts`` of 0 means
the GPU reports no power telemetry for that sample (utilization-based
estimation kicks in downstream).
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Protocol, runtime_checkable

import psutil

from .errors import ProcessEnumerationDenied, ProcessGone


def utc_now_iso() -> str:
    """Current UTC wall-clock time as ISO-8601 with millisecond precision."""
    now = datetime.now(timezone.utc)
    return now.strftime("%Y-%m-%dT%H:%M:%S.") + f"{now.microsecond // 1000:03d}Z"


@dataclass(frozen=True)
class ProcessStats:
    """One reading of a single process: CPU percent (may exceed 100 on multicore) and RSS."""

    cpu_percent: float
    rss_bytes: int


@dataclass(frozen=True)
class GpuTelemetry:
    """System-wide GPU counters for one sampling instant.

    ``power_watts`` is None when the device exposes no power sensor; callers
    fall back to utilization-scaled estimation in that case.
    """

    utilization_percent: float
    memory_used_bytes: int
    memory_total_bytes: int
    temperature_celsius: float
    power_watts: float | None = None
    name: str | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.utilization_percent <= 100.0:
            raise ValueError(f"gpu utilization out of range: {self.utilization_percent}")
        if self.memory_used_bytes < 0 or self.memory_total_bytes < 0:
            raise ValueError("gpu memory must be nonnegative")
        if self.memory_used_bytes > self.memory_total_bytes:
            raise ValueError(
                f"gpu memory used ({self.memory_used_bytes}) exceeds total ({self.memory_total_bytes})"
            )
        if self.power_watts is not None and self.power_watts <= 0:
            raise ValueError("gpu power, when reported, must be positive")


@dataclass(frozen=True)
class MemoryStats:
    total_bytes: int
    available_bytes: int


@runtime_checkable
class TelemetryProvider(Protocol):
    """What the sampler needs from the OS (or from a scripted stand-in)."""

    def list_processes(self) -> list[tuple[int, str]]:
        """(pid, name) for every visible process. Raises ProcessEnumerationDenied."""
        ...

    def process_stats(self, pid: int) -> ProcessStats:
        """Current CPU/RSS for one pid. Raises ProcessGone when it vanished."""
        ...

    def gpu(self) -> GpuTelemetry | None:
        """System GPU counters, or None when no telemetry is readable."""
        ...

    def memory(self) -> MemoryStats:
        ...

    def logical_cores(self) -> int:
        ...


class Clock(Protocol):
    """Injectable time source so monitor cadence is testable without sleeping."""

    def monotonic(self) -> float:
        ...

    def wait_until(self, deadline: float, stop: threading.Event) -> bool:
        """Block until ``deadline`` or until ``stop`` is set; True means cancelled."""
        ...


class SystemClock:
    """Wall-time clock backed by time.monotonic and interruptible waits."""

    def monotonic(self) -> float:
        return time.monotonic()

    def wait_until(self, deadline: float, stop: threading.Event) -> bool:
        delay = deadline - time.monotonic()
        if delay > 0:
            stop.wait(delay)
        return stop.is_set()


class FakeClock:
    """Deterministic clock: waits advance time instantly.

    ``on_advance`` hooks run after each jump, letting tests trigger events
    (new processes appearing, cancellation) at exact simulated instants.
    """

    def __init__(self, start: float = 0.0) -> None:
        self.now = start
        self.on_advance: list = []

    def monotonic(self) -> float:
        return self.now

    def advance(self, seconds: float) -> None:
        self.now += seconds
        for hook in list(self.on_advance):
            hook(self.now)

    def wait_until(self, deadline: float, stop: threading.Event) -> bool:
        if stop.is_set():
            return True
        if deadline > self.now:
            self.now = deadline
            for hook in list(self.on_advance):
                hook(self.now)
        return stop.is_set()


class SystemTelemetryProvider:
    """Live telemetry from psutil, plus pynvml GPU counters when available.

    Process CPU percentages are rates since the previous reading, so the
    provider keeps psutil.Process handles cached per pid; the first reading
    for a pid primes the window and reports 0.0.
    """

    def __init__(self, gpu_index: int = 0) -> None:
        self._procs: dict[int, psutil.Process] = {}
        self._gpu_index = gpu_index
        self._nvml = None
        self._nvml_handle = None
        self._nvml_state = "unset"  # unset | ok | failed

    def list_processes(self) -> list[tuple[int, str]]:
        try:
            table = []
            for proc in psutil.process_iter(["pid", "name"]):
                name = proc.info.get("name") or ""
                table.append((int(proc.info["pid"]), name))
            return table
        except psutil.AccessDenied as exc:
            raise ProcessEnumerationDenied("process listing refused by the OS") from exc

    def process_stats(self, pid: int) -> ProcessStats:
        try:
            proc = self._procs.get(pid)
            if proc is None:
                proc = psutil.Process(pid)
                proc.cpu_percent(interval=None)  # prime the rate window
                self._procs[pid] = proc
            cpu = proc.cpu_percent(interval=None)
            rss = proc.memory_info().rss
            return ProcessStats(cpu_percent=float(cpu), rss_bytes=int(rss))
        except (psutil.NoSuchProcess, psutil.AccessDenied, psutil.ZombieProcess) as exc:
            self._procs.pop(pid, None)
            raise ProcessGone(f"process {pid} is gone or unreadable") from exc

    def gpu(self) -> GpuTelemetry | None:
        handle = self._ensure_nvml()
        if handle is None:
            return None
        nvml = self._nvml
        try:
            util = nvml.nvmlDeviceGetUtilizationRates(handle)
            mem = nvml.nvmlDeviceGetMemoryInfo(handle)
            temp = nvml.nvmlDeviceGetTemperature(handle, nvml.NVML_TEMPERATURE_GPU)
            try:
                name = nvml.nvmlDeviceGetName(handle)
                if isinstance(name, bytes):
                    name = name.decode("utf-8", "replace")
            except Exception:
                name = None
            try:
                power = nvml.nvmlDeviceGetPowerUsage(handle) / 1000.0
                if power <= 0:
                    power = None
            except Exception:
                power = None
            return GpuTelemetry(
                utilization_percent=float(util.gpu),
                memory_used_bytes=int(mem.used),
                memory_total_bytes=int(mem.total),
                temperature_celsius=float(temp),
                power_watts=power,
                name=name,
            )
        except Exception:
            return None

    def memory(self) -> MemoryStats:
        vm = psutil.virtual_memory()
        return MemoryStats(total_bytes=int(vm.total), available_bytes=int(vm.available))

    def logical_cores(self) -> int:
        return psutil.cpu_count(logical=True) or 1

    def _ensure_nvml(self):
        if self._nvml_state == "failed":
            return None
        if self._nvml_state == "unset":
            try:
                import pynvml

                pynvml.nvmlInit()
                self._nvml = pynvml
                self._nvml_handle = pynvml.nvmlDeviceGetHandleByIndex(self._gpu_index)
                self._nvml_state = "ok"
            except Exception:
                self._nvml_state = "failed"
                return None
        return self._nvml_handle


@dataclass(frozen=True)
class _ScriptRow:
    t: float
    cpu_percent: float
    rss_bytes: int
    gpu_util: float
    gpu_power_watts: float


def _parse_script(text: str) -> list[_ScriptRow]:
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        fields = body.split()
        if len(fields) != 5:
            raise ValueError(f"script line {lineno}: expected 5 fields, got {len(fields)}")
        rows.append(
            _ScriptRow(
                t=float(fields[0]),
                cpu_percent=float(fields[1]),
                rss_bytes=int(float(fields[2])),
                gpu_util=float(fields[3]),
                gpu_power_watts=float(fields[4]),
            )
        )
    if not rows:
        raise ValueError("telemetry script is empty")
    rows.sort(key=lambda r: r.t)
    return rows


class MockTelemetryProvider:
    """Scripted provider: serves the latest script row at or before the clock's now.

    Script times are relative to the clock's value at construction, so the
    script plays back identically under a FakeClock starting at 0 and under
    the real monotonic clock (whose origin is arbitrary). Every listed
    process reports the same scripted CPU/RSS readings, which is enough to
    drive detection, sampling, and power-estimation paths deterministically.
    """

    def __init__(
        self,
        script: str,
        *,
        clock: Clock,
        processes: list[tuple[int, str]] | None = None,
        gpu_present: bool = True,
        gpu_memory_used: int = 2 * 1024**3,
        gpu_memory_total: int = 10 * 1024**3,
        gpu_temperature: float = 55.0,
        gpu_name: str = "MockGPU",
        memory_total: int = 32 * 1024**3,
        memory_available: int = 16 * 1024**3,
        cores: int = 8,
        denied: bool = False,
    ) -> None:
        self._rows = _parse_script(script)
        self._clock = clock
        self._t0 = clock.monotonic()
        self._processes: list[tuple[int, str]] = list(processes or [])
        self._gpu_present = gpu_present
        self._gpu_memory_used = gpu_memory_used
        self._gpu_memory_total = gpu_memory_total
        self._gpu_temperature = gpu_temperature
        self._gpu_name = gpu_name
        self._memory = MemoryStats(memory_total, memory_available)
        self._cores = cores
        self.denied = denied

    @classmethod
    def from_script_file(cls, path: str | Path, **kwargs) -> "MockTelemetryProvider":
        return cls(Path(path).read_text(encoding="utf-8"), **kwargs)

    def list_processes(self) -> list[tuple[int, str]]:
        if self.denied:
            raise ProcessEnumerationDenied("scripted denial")
        return list(self._processes)

    def start_process(self, pid: int, name: str) -> None:
        self._processes.append((pid, name))

    def kill(self, pid: int) -> None:
        self._processes = [(p, n) for p, n in self._processes if p != pid]

    def process_stats(self, pid: int) -> ProcessStats:
        if pid not in {p for p, _ in self._processes}:
            raise ProcessGone(f"scripted process {pid} is gone")
        row = self._current_row()
        return ProcessStats(cpu_percent=row.cpu_percent, rss_bytes=row.rss_bytes)

    def gpu(self) -> GpuTelemetry | None:
        if not self._gpu_present:
            return None
        row = self._current_row()
        power = row.gpu_power_watts if row.gpu_power_watts > 0 else None
        return GpuTelemetry(
            utilization_percent=row.gpu_util,
            memory_used_bytes=self._gpu_memory_used,
            memory_total_bytes=self._gpu_memory_total,
            temperature_celsius=self._gpu_temperature,
            power_watts=power,
            name=self._gpu_name,
        )

    def memory(self) -> MemoryStats:
        return self._memory

    def logical_cores(self) -> int:
        return self._cores

    def script_span_s(self) -> float:
        """Time of the last scripted row, relative to playback start."""
        return self._rows[-1].t

    def _current_row(self) -> _ScriptRow:
        elapsed = self._clock.monotonic() - self._t0
        current = self._rows[0]
        for row in self._rows:
            if row.t <= elapsed:
                current = row
            else:
                break
        return current
