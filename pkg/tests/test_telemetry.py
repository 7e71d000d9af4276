import re
import threading
import time

import pytest

from envirollm.telemetry import (
    FakeClock,
    GpuTelemetry,
    MockTelemetryProvider,
    SystemClock,
    utc_now_iso,
)

SCRIPT = """\
# ramp: load rises partway through
0.0 10.0 1000000000 20.0 50.0
5.0 80.0 3000000000 90.0 0
10.0 20.0 1500000000 30.0 61.5
"""


def test_utc_now_iso_shape():
    stamp = utc_now_iso()
    assert re.fullmatch(r"\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}\.\d{3}Z", stamp)


def test_fake_clock_jumps_exactly():
    clock = FakeClock()
    assert clock.monotonic() == 0.0
    cancelled = clock.wait_until(3.5, threading.Event())
    assert not cancelled
    assert clock.monotonic() == 3.5
    # a deadline in the past does not move time backwards
    clock.wait_until(1.0, threading.Event())
    assert clock.monotonic() == 3.5


def test_fake_clock_runs_hooks_on_advance():
    clock = FakeClock()
    instants = []
    clock.on_advance.append(instants.append)
    clock.advance(2.0)
    clock.wait_until(5.0, threading.Event())
    assert instants == [2.0, 5.0]


def test_fake_clock_preset_stop_cancels():
    clock = FakeClock()
    stop = threading.Event()
    stop.set()
    assert clock.wait_until(10.0, stop)
    assert clock.monotonic() == 0.0  # cancelled before advancing


def test_system_clock_stop_interrupts_wait():
    clock = SystemClock()
    stop = threading.Event()
    threading.Timer(0.05, stop.set).start()
    t0 = time.monotonic()
    cancelled = clock.wait_until(time.monotonic() + 30.0, stop)
    assert cancelled
    assert time.monotonic() - t0 < 5.0


def test_script_playback_follows_clock():
    clock = FakeClock()
    provider = MockTelemetryProvider(SCRIPT, clock=clock, processes=[(1, "ollama")])
    assert provider.process_stats(1).cpu_percent == 10.0
    clock.advance(5.0)
    assert provider.process_stats(1).cpu_percent == 80.0
    assert provider.process_stats(1).rss_bytes == 3000000000
    clock.advance(2.0)  # still inside the second row
    assert provider.process_stats(1).cpu_percent == 80.0
    clock.advance(3.0)
    assert provider.process_stats(1).cpu_percent == 20.0
    assert provider.script_span_s() == 10.0


def test_script_anchored_at_construction():
    # under a clock that does not start at zero, elapsed time still indexes the script
    clock = FakeClock(start=1000.0)
    provider = MockTelemetryProvider(SCRIPT, clock=clock, processes=[(1, "ollama")])
    assert provider.process_stats(1).cpu_percent == 10.0
    clock.advance(6.0)
    assert provider.process_stats(1).cpu_percent == 80.0


def test_script_gpu_power_zero_means_absent():
    clock = FakeClock()
    provider = MockTelemetryProvider(SCRIPT, clock=clock)
    assert provider.gpu().power_watts == 50.0
    clock.advance(5.0)
    assert provider.gpu().power_watts is None
    clock.advance(5.0)
    assert provider.gpu().power_watts == 61.5


def test_script_rows_sorted_and_comments_skipped():
    shuffled = "5.0 2 2 2 2\n# comment\n0.0 1 1 1 1\n"
    clock = FakeClock()
    provider = MockTelemetryProvider(shuffled, clock=clock, processes=[(1, "x")])
    assert provider.process_stats(1).cpu_percent == 1.0
    clock.advance(5.0)
    assert provider.process_stats(1).cpu_percent == 2.0


def test_script_requires_rows():
    with pytest.raises(ValueError):
        MockTelemetryProvider("# only a comment\n", clock=FakeClock())


def test_script_rejects_malformed_line():
    with pytest.raises(ValueError):
        MockTelemetryProvider("0.0 1 2 3\n", clock=FakeClock())


def test_no_gpu_mode():
    provider = MockTelemetryProvider(SCRIPT, clock=FakeClock(), gpu_present=False)
    assert provider.gpu() is None


def test_gpu_telemetry_validation():
    with pytest.raises(ValueError):
        GpuTelemetry(
            utilization_percent=120.0,
            memory_used_bytes=1,
            memory_total_bytes=2,
            temperature_celsius=50.0,
        )
    with pytest.raises(ValueError):
        GpuTelemetry(
            utilization_percent=50.0,
            memory_used_bytes=3,
            memory_total_bytes=2,
            temperature_celsius=50.0,
        )


def test_from_script_file(tmp_path):
    path = tmp_path / "load.txt"
    path.write_text(SCRIPT, encoding="utf-8")
    provider = MockTelemetryProvider.from_script_file(
        path, clock=FakeClock(), processes=[(1, "ollama")]
    )
    assert provider.process_stats(1).cpu_percent == 10.0
