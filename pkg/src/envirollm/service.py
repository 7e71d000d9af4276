"""HTTP API for the dashboard: live metrics, benchmarks, results, advice.

Layout:
  GET  /api/health                 liveness
  GET  /api/metrics/live           server-sent events, one JSON payload each
  GET  /api/hardware               detected RAM/GPU/core profile
  GET  /api/recommendations        model sizing advice for this machine
  GET  /api/benchmarks             stored results grouped by prompt_hash
  POST /api/benchmarks             launch a benchmark job -> 202 {job_id}
  GET  /api/benchmarks/jobs/{id}   job state and progress
  GET  /api/export.csv             full CSV export
  DELETE /api/benchmarks?scope=    reset stored results

One benchmark job at a time: a second POST while one is pending or running
gets 409, because overlapping runs would corrupt each other's energy
attribution. The live feed fans out to any number of subscribers, each with
a bounded buffer; a subscriber that stops reading is disconnected rather
than allowed to stall the monitor.
"""

from __future__ import annotations

import csv
import io
import json
import queue
import threading
import uuid
from contextlib import asynccontextmanager

import uvicorn
from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse, StreamingResponse

from . import engine
from .advisor import detect_hardware, load_sizing_table, recommend
from .bench import BenchmarkResult, PromptSpec, preset_prompts
from .energy import PowerConfig, estimate_power
from .errors import EnvirollmError
from .sampler import MetricsSnapshot, run_monitor
from .store import CSV_COLUMNS, ResultStore, result_to_csv_row
from .telemetry import Clock, SystemClock, SystemTelemetryProvider, TelemetryProvider

DEFAULT_SSE_BUFFER = 64


def result_to_json(result: BenchmarkResult) -> dict:
    """JSON object for one result; field names mirror the CSV columns."""
    return {
        "id": int(result.id) if result.id.isdigit() else result.id,
        "timestamp": result.timestamp,
        "platform": result.platform,
        "endpoint_url": result.endpoint_url,
        "model": result.model,
        "quantization_raw": result.quantization.raw,
        "quantization_family": result.quantization.family,
        "prompt_hash": result.prompt_hash,
        "prompt_text": result.prompt_text,
        "tokens": result.tokens,
        "tokens_estimated": result.tokens_estimated,
        "duration_s": result.duration_s,
        "duration_total_s": result.duration_total_s,
        "tokens_per_s": result.tokens_per_s,
        "energy_wh": result.energy_wh,
        "wh_per_token": result.wh_per_token,
        "quality_score": result.quality.value,
        "quality_method": result.quality.method,
        "judge_model": result.quality.judge_model,
        "response_text": result.response_text,
    }


def snapshot_to_json(snapshot: MetricsSnapshot, watts: float) -> dict:
    return {
        "timestamp": snapshot.timestamp,
        "monotonic_s": snapshot.monotonic_s,
        "processes": [
            {
                "pid": p.pid,
                "name": p.name,
                "platform": p.platform.value,
                "cpu_percent": p.cpu_percent,
                "rss_bytes": p.rss_bytes,
            }
            for p in snapshot.processes
        ],
        "total_cpu_percent": snapshot.total_cpu_percent,
        "total_rss_bytes": snapshot.total_rss_bytes,
        "gpu": None
        if snapshot.gpu is None
        else {
            "utilization_percent": snapshot.gpu.utilization_percent,
            "memory_used_bytes": snapshot.gpu.memory_used_bytes,
            "memory_total_bytes": snapshot.gpu.memory_total_bytes,
            "temperature_celsius": snapshot.gpu.temperature_celsius,
            "power_watts": snapshot.gpu.power_watts,
            "name": snapshot.gpu.name,
        },
        "memory": {
            "total_bytes": snapshot.memory.total_bytes,
            "available_bytes": snapshot.memory.available_bytes,
        },
        "logical_cores": snapshot.logical_cores,
        "dropped": list(snapshot.dropped),
        "estimated_watts": watts,
    }


class _Subscriber:
    def __init__(self, buffer: int):
        self.events: queue.Queue[str] = queue.Queue(maxsize=buffer)
        self.dropped = threading.Event()


class Broadcast:
    """Fan-out of serialized events to bounded per-subscriber queues."""

    def __init__(self, buffer: int = DEFAULT_SSE_BUFFER):
        self._buffer = buffer
        self._subscribers: list[_Subscriber] = []
        self._lock = threading.Lock()

    def subscribe(self) -> _Subscriber:
        sub = _Subscriber(self._buffer)
        with self._lock:
            self._subscribers.append(sub)
        return sub

    def unsubscribe(self, sub: _Subscriber) -> None:
        with self._lock:
            if sub in self._subscribers:
                self._subscribers.remove(sub)

    def publish(self, payload: str) -> None:
        with self._lock:
            subscribers = list(self._subscribers)
        for sub in subscribers:
            try:
                sub.events.put_nowait(payload)
            except queue.Full:
                sub.dropped.set()
                self.unsubscribe(sub)


class JobManager:
    """At most one benchmark job pending or running; the rest are history."""

    def __init__(self):
        self._lock = threading.Lock()
        self._jobs: dict[str, dict] = {}
        self._active: str | None = None

    def try_begin(self, total_pairs: int) -> str | None:
        """Register a new job; None when another is still pending/running."""
        with self._lock:
            if self._active is not None:
                return None
            job_id = uuid.uuid4().hex[:12]
            self._jobs[job_id] = {
                "job_id": job_id,
                "state": "pending",
                "progress": {"completed_pairs": 0, "total_pairs": total_pairs},
                "results_so_far": [],
                "error": None,
            }
            self._active = job_id
            return job_id

    def mark_running(self, job_id: str) -> None:
        with self._lock:
            self._jobs[job_id]["state"] = "running"

    def record_pair(self, job_id: str, stored_id: int | None) -> None:
        with self._lock:
            job = self._jobs[job_id]
            job["progress"]["completed_pairs"] += 1
            if stored_id is not None:
                job["results_so_far"].append(stored_id)

    def finish(self, job_id: str, error: str | None = None) -> None:
        with self._lock:
            self._jobs[job_id]["state"] = "failed" if error else "done"
            self._jobs[job_id]["error"] = error
            if self._active == job_id:
                self._active = None

    def get(self, job_id: str) -> dict | None:
        with self._lock:
            job = self._jobs.get(job_id)
            return json.loads(json.dumps(job)) if job else None

    def fail_active(self, reason: str) -> None:
        with self._lock:
            active = self._active
        if active is not None:
            self.finish(active, error=reason)


def _resolve_prompts(body: dict) -> list[PromptSpec]:
    presets = {p.id: p for p in preset_prompts()}
    prompt_ids = body.get("prompt_ids")
    custom = body.get("custom_prompts")
    if prompt_ids:
        unknown = [i for i in prompt_ids if i not in presets]
        if unknown:
            raise ValueError(
                f"unknown prompt ids {unknown}; presets are {sorted(presets)}"
            )
        return [presets[i] for i in prompt_ids]
    if custom:
        return [
            PromptSpec(id=f"custom-{n}", category="Custom", text=str(text))
            for n, text in enumerate(custom, start=1)
        ]
    return list(presets.values())


def create_app(
    store: ResultStore,
    provider: TelemetryProvider | None = None,
    *,
    clock: Clock | None = None,
    power: PowerConfig | None = None,
    monitor_interval_s: float = 2.0,
    engine_options: engine.EngineOptions | None = None,
    default_ollama_url: str | None = None,
    default_openai_url: str | None = None,
    sse_buffer: int = DEFAULT_SSE_BUFFER,
    sizing_table: dict | None = None,
) -> FastAPI:
    provider = provider if provider is not None else SystemTelemetryProvider()
    clock = clock if clock is not None else SystemClock()
    power = power if power is not None else PowerConfig()
    options = engine_options if engine_options is not None else engine.EngineOptions(power=power)

    broadcast = Broadcast(sse_buffer)
    jobs = JobManager()
    monitor_stop = threading.Event()

    def _monitor_loop() -> None:
        def on_sample(snapshot: MetricsSnapshot) -> None:
            watts = estimate_power(snapshot, power)
            broadcast.publish(json.dumps(snapshot_to_json(snapshot, watts)))

        run_monitor(
            provider,
            on_sample,
            clock=clock,
            stop=monitor_stop,
            interval_s=monitor_interval_s,
        )

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        thread = threading.Thread(target=_monitor_loop, daemon=True)
        thread.start()
        try:
            yield
        finally:
            monitor_stop.set()
            thread.join(timeout=monitor_interval_s * 2 + 5)
            jobs.fail_active("server shutdown")

    app = FastAPI(lifespan=lifespan)

    @app.get("/api/health")
    def health():
        return {"status": "ok"}

    @app.get("/api/metrics/live")
    def metrics_live():
        sub = broadcast.subscribe()

        def stream():
            try:
                while not monitor_stop.is_set():
                    if sub.dropped.is_set():
                        break
                    try:
                        payload = sub.events.get(timeout=0.25)
                    except queue.Empty:
                        continue
                    yield f"data: {payload}\n\n"
            finally:
                broadcast.unsubscribe(sub)

        return StreamingResponse(stream(), media_type="text/event-stream")

    @app.get("/api/hardware")
    def hardware():
        profile = detect_hardware(provider)
        return {
            "total_ram_bytes": profile.total_ram_bytes,
            "available_ram_bytes": profile.available_ram_bytes,
            "logical_cores": profile.logical_cores,
            "gpu": None
            if profile.gpu is None
            else {
                "name": profile.gpu.name,
                "vram_total_bytes": profile.gpu.vram_total_bytes,
                "vram_free_bytes": profile.gpu.vram_free_bytes,
            },
        }

    @app.get("/api/recommendations")
    def recommendations():
        profile = detect_hardware(provider)
        recs = recommend(profile, sizing_table)
        return [
            {
                "max_params_billions": r.max_params_billions,
                "suggested_quant": r.suggested_quant,
                "rationale": r.rationale,
                "confidence": r.confidence,
            }
            for r in recs
        ]

    @app.get("/api/benchmarks")
    def benchmarks(model: str | None = None, platform: str | None = None,
                   since: str | None = None, until: str | None = None):
        groups = store.list_grouped(model=model, platform=platform, since=since, until=until)
        return [
            {
                "prompt_hash": g.prompt_hash,
                "prompt_text": g.prompt_text,
                "results": [result_to_json(r) for r in g.results],
            }
            for g in groups
        ]

    def _run_job(job_id: str, platform: str, base_url: str, models: list[str],
                 prompts: list[PromptSpec]) -> None:
        def on_pair(result, failure):
            stored_id = store.save_result(result) if result is not None else None
            jobs.record_pair(job_id, stored_id)

        jobs.mark_running(job_id)
        try:
            if platform == "ollama":
                engine.run_benchmark_ollama(
                    models, prompts, base_url,
                    provider=provider, clock=clock, options=options, on_pair=on_pair,
                )
            else:
                for model in models:
                    engine.run_benchmark_openai(
                        base_url, model, prompts,
                        provider=provider, clock=clock, options=options, on_pair=on_pair,
                    )
        except (EnvirollmError, ValueError) as exc:
            jobs.finish(job_id, error=f"{type(exc).__name__}: {exc}")
            return
        jobs.finish(job_id)

    @app.post("/api/benchmarks")
    async def launch_benchmark(request: Request):
        try:
            body = await request.json()
        except Exception:
            return JSONResponse({"error": "body must be JSON"}, status_code=400)
        if not isinstance(body, dict):
            return JSONResponse({"error": "body must be a JSON object"}, status_code=400)

        platform = str(body.get("platform", "ollama")).lower()
        if platform not in ("ollama", "openai"):
            return JSONResponse(
                {"error": "platform must be 'ollama' or 'openai'"}, status_code=400
            )
        models = body.get("models")
        if not isinstance(models, list) or not models or not all(
            isinstance(m, str) and m for m in models
        ):
            return JSONResponse(
                {"error": "models must be a nonempty list of names"}, status_code=400
            )
        try:
            prompts = _resolve_prompts(body)
        except ValueError as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)

        if platform == "ollama":
            base_url = body.get("base_url") or default_ollama_url or engine.DEFAULT_OLLAMA_URL
        else:
            base_url = body.get("base_url") or default_openai_url or engine.DEFAULT_OPENAI_URL

        job_id = jobs.try_begin(total_pairs=len(models) * len(prompts))
        if job_id is None:
            return JSONResponse(
                {"error": "a benchmark job is already running"}, status_code=409
            )
        worker = threading.Thread(
            target=_run_job, args=(job_id, platform, base_url, models, prompts),
            daemon=True,
        )
        worker.start()
        return JSONResponse({"job_id": job_id}, status_code=202)

    @app.get("/api/benchmarks/jobs/{job_id}")
    def job_state(job_id: str):
        job = jobs.get(job_id)
        if job is None:
            return JSONResponse({"error": "no such job"}, status_code=404)
        return job

    @app.get("/api/export.csv")
    def export_csv():
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow(CSV_COLUMNS)
        for result in store.list_results():
            writer.writerow(result_to_csv_row(result))
        return Response(
            content=out.getvalue(),
            media_type="text/csv",
            headers={"Content-Disposition": "attachment; filename=envirollm-export.csv"},
        )

    @app.delete("/api/benchmarks")
    def clean(scope: str):
        try:
            deleted = store.clean(scope)
        except ValueError as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        return {"deleted": deleted}

    return app


def serve(bind: str, app: FastAPI) -> None:
    """Run the API on host:port until interrupted."""
    host, _, port_text = bind.rpartition(":")
    if not host or not port_text.isdigit():
        raise ValueError(f"bind address must be host:port, got {bind!r}")
    uvicorn.run(app, host=host, port=int(port_text), log_level="warning")
