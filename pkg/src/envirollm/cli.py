"""Command-line interface.

Subcommands: monitor, benchmark, benchmark-openai, export, clean, serve.
Exit codes: 0 success, 1 benchmark ran but produced no results, 2 IO or
permission failure, 3 endpoint unreachable, 64 usage error.

The --mock-script flag (monitor, benchmark commands, serve) swaps the OS
telemetry provider for a scripted one; see telemetry.MockTelemetryProvider
for the line format. It exists for tests and demos and never touches real
process tables.
"""

from __future__ import annotations

import argparse
import json
import sys
import threading

from .advisor import load_sizing_table
from .bench import PromptSpec, aggregate_results, preset_prompts
from .config import AppConfig, load_config
from .energy import estimate_power
from .engine import EngineOptions, RunOutcome, run_benchmark_ollama, run_benchmark_openai
from .errors import EndpointUnreachable, ProcessEnumerationDenied, StorageError
from .sampler import MetricsSnapshot, run_monitor
from .service import create_app, serve, snapshot_to_json
from .store import ResultStore
from .telemetry import (
    FakeClock,
    MockTelemetryProvider,
    SystemClock,
    SystemTelemetryProvider,
)

MOCK_PROCESSES = [(101, "ollama serve")]


class _Parser(argparse.ArgumentParser):
    """argparse that exits 64 on usage errors instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(64, f"{self.prog}: error: {message}\n")


def _load_cfg(args, **extra) -> AppConfig:
    overrides = {}
    if getattr(args, "db", None):
        overrides["db_path"] = args.db
    for key in ("baseline_watts", "cpu_max_watts", "gpu_max_watts", "judge_model", "judge_url"):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    overrides.update({k: v for k, v in extra.items() if v is not None})
    return load_config(overrides, config_path=getattr(args, "config", None))


def _provider_and_clock(args):
    if getattr(args, "mock_script", None):
        clock = FakeClock() if args.command == "monitor" else SystemClock()
        provider = MockTelemetryProvider.from_script_file(
            args.mock_script, clock=clock, processes=list(MOCK_PROCESSES)
        )
        return provider, clock
    return SystemTelemetryProvider(), SystemClock()


def _human_monitor_line(snapshot: MetricsSnapshot, watts: float) -> str:
    if not snapshot.processes:
        return "no LLM processes detected"
    names = ", ".join(f"{p.name}[{p.pid}]" for p in snapshot.processes)
    line = (
        f"{snapshot.timestamp} {names} cpu={snapshot.total_cpu_percent:.1f}% "
        f"rss={snapshot.total_rss_bytes / 1e9:.2f}GB"
    )
    if snapshot.gpu is not None:
        line += f" gpu={snapshot.gpu.utilization_percent:.0f}%"
        if snapshot.gpu.power_watts is not None:
            line += f" gpu_power={snapshot.gpu.power_watts:.1f}W"
    return line + f" est={watts:.1f}W"


def cmd_monitor(args) -> int:
    if args.interval is not None and args.interval <= 0:
        args.parser.error("--interval must be positive")
    cfg = _load_cfg(args, monitor_interval_s=args.interval)
    provider, clock = _provider_and_clock(args)
    duration = args.duration
    if duration is None and isinstance(provider, MockTelemetryProvider):
        duration = provider.script_span_s()
    power = cfg.power()

    def on_sample(snapshot: MetricsSnapshot) -> None:
        watts = estimate_power(snapshot, power)
        if args.json:
            print(json.dumps(snapshot_to_json(snapshot, watts)), flush=True)
        else:
            print(_human_monitor_line(snapshot, watts), flush=True)

    try:
        summary = run_monitor(
            provider,
            on_sample,
            clock=clock,
            stop=threading.Event(),
            interval_s=cfg.monitor_interval_s,
            duration_s=duration,
        )
    except ProcessEnumerationDenied as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        return 0
    print(f"emitted {summary.samples_emitted} samples", file=sys.stderr)
    return 0


def _resolve_prompts(args) -> list[PromptSpec]:
    presets = {p.id: p for p in preset_prompts()}
    if getattr(args, "prompt_file", None):
        lines = [
            line.strip()
            for line in open(args.prompt_file, encoding="utf-8")
            if line.strip()
        ]
        if not lines:
            args.parser.error(f"prompt file {args.prompt_file} is empty")
        return [
            PromptSpec(id=f"custom-{n}", category="Custom", text=text)
            for n, text in enumerate(lines, start=1)
        ]
    if getattr(args, "prompts", None):
        ids = [p.strip() for p in args.prompts.split(",") if p.strip()]
        unknown = [i for i in ids if i not in presets]
        if unknown:
            args.parser.error(
                f"unknown prompt ids: {', '.join(unknown)} "
                f"(presets: {', '.join(sorted(presets))})"
            )
        return [presets[i] for i in ids]
    return list(presets.values())


def _format_row(result) -> list[str]:
    prompt = result.prompt_text if len(result.prompt_text) <= 32 else result.prompt_text[:29] + "..."
    tokens = f"{result.tokens}{'*' if result.tokens_estimated else ''}"
    return [
        result.model,
        prompt,
        tokens,
        f"{result.duration_s:.2f}",
        f"{result.tokens_per_s:.1f}",
        f"{result.energy_wh:.3f}",
        f"{result.wh_per_token:.6f}",
        str(result.quality.value),
    ]


def _render_table(header: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(header[i]), *(len(r[i]) for r in rows)) for i in range(len(header))]
    def line(cells):
        return "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(cells)).rstrip()
    sep = "  ".join("-" * w for w in widths)
    return "\n".join([line(header), sep] + [line(r) for r in rows])


def _print_outcome(outcome: RunOutcome) -> None:
    if outcome.results:
        header = ["model", "prompt", "tokens", "time_s", "tok/s", "Wh", "Wh/tok", "quality"]
        print(_render_table(header, [_format_row(r) for r in outcome.results]))
        if any(r.tokens_estimated for r in outcome.results):
            print("* token count estimated from response length (no usage stats)")
        aggregates = aggregate_results(outcome.results)
        if len(aggregates) > 1 or len(outcome.results) > 1:
            print()
            agg_rows = [
                [
                    a.model,
                    str(a.runs),
                    f"{a.mean_energy_wh:.3f}",
                    f"{a.mean_tokens_per_s:.1f}",
                    f"{a.mean_wh_per_token:.6f}",
                    f"{a.mean_quality:.0f}",
                    f"{a.token_range[0]}-{a.token_range[1]}",
                ]
                for a in aggregates.values()
            ]
            print(_render_table(
                ["model", "runs", "mean_Wh", "mean_tok/s", "mean_Wh/tok", "quality", "tokens"],
                agg_rows,
            ))
    for failure in outcome.failures:
        print(
            f"FAILED {failure.model} x {failure.prompt_id}: {failure.error}: {failure.detail}",
            file=sys.stderr,
        )


def _engine_options(args, cfg: AppConfig) -> EngineOptions:
    return EngineOptions(
        power=cfg.power(),
        sample_interval_s=args.sample_interval
        if args.sample_interval is not None
        else cfg.monitor_interval_s,
        request_timeout_s=args.timeout,
        judge_enabled=cfg.judge_enabled and not args.no_judge,
        judge_url=cfg.judge_url or None,
        judge_model=cfg.judge_model,
    )


def cmd_benchmark(args) -> int:
    cfg = _load_cfg(args, ollama_url=args.url)
    models = [m.strip() for m in args.models.split(",") if m.strip()]
    if not models:
        args.parser.error("--models must name at least one model")
    prompts = _resolve_prompts(args)
    provider, clock = _provider_and_clock(args)
    try:
        outcome = run_benchmark_ollama(
            models,
            prompts,
            cfg.ollama_url,
            provider=provider,
            clock=clock,
            options=_engine_options(args, cfg),
        )
    except EndpointUnreachable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    store = ResultStore(cfg.db_path)
    for result in outcome.results:
        store.save_result(result)
    _print_outcome(outcome)
    return 0 if outcome.results else 1


def cmd_benchmark_openai(args) -> int:
    cfg = _load_cfg(args, openai_url=args.url)
    prompts = _resolve_prompts(args)
    provider, clock = _provider_and_clock(args)
    try:
        outcome = run_benchmark_openai(
            cfg.openai_url,
            args.model,
            prompts,
            provider=provider,
            clock=clock,
            options=_engine_options(args, cfg),
        )
    except EndpointUnreachable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    store = ResultStore(cfg.db_path)
    for result in outcome.results:
        store.save_result(result)
    _print_outcome(outcome)
    return 0 if outcome.results else 1


def cmd_export(args) -> int:
    cfg = _load_cfg(args)
    count = ResultStore(cfg.db_path).export_csv(args.out)
    print(f"exported {count} rows to {args.out}")
    return 0


def cmd_clean(args) -> int:
    cfg = _load_cfg(args)
    if args.all:
        scope, label = "all", "ALL stored results"
    elif args.model:
        scope, label = f"model:{args.model}", f"results for model {args.model!r}"
    else:
        scope, label = f"before:{args.before}", f"results older than {args.before}"
    if not args.yes:
        answer = input(f"Delete {label} from {cfg.db_path}? [y/N] ")
        if answer.strip().lower() not in ("y", "yes"):
            print("aborted")
            return 0
    deleted = ResultStore(cfg.db_path).clean(scope)
    print(f"deleted {deleted} results")
    return 0


def cmd_serve(args) -> int:
    cfg = _load_cfg(args, bind=args.bind)
    provider, clock = _provider_and_clock(args)
    sizing = load_sizing_table(args.advisor_config) if args.advisor_config else None
    app = create_app(
        ResultStore(cfg.db_path),
        provider,
        clock=clock,
        power=cfg.power(),
        monitor_interval_s=cfg.monitor_interval_s,
        engine_options=EngineOptions(
            power=cfg.power(),
            judge_enabled=cfg.judge_enabled,
            judge_url=cfg.judge_url or None,
            judge_model=cfg.judge_model,
        ),
        default_ollama_url=cfg.ollama_url,
        default_openai_url=cfg.openai_url,
        sizing_table=sizing,
    )
    try:
        serve(cfg.bind, app)
    except KeyboardInterrupt:
        return 0
    except OSError as exc:
        print(f"error: cannot bind {cfg.bind}: {exc}", file=sys.stderr)
        return 2
    return 0


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--db", help="database file path (default: user data directory)")
    sub.add_argument("--config", help="config file path")


def _add_power_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--baseline-watts", type=float, dest="baseline_watts")
    sub.add_argument("--cpu-max-watts", type=float, dest="cpu_max_watts")
    sub.add_argument("--gpu-max-watts", type=float, dest="gpu_max_watts")


def _add_bench_flags(sub: argparse.ArgumentParser) -> None:
    group = sub.add_mutually_exclusive_group()
    group.add_argument("--prompts", help="comma-separated preset prompt ids (default: all)")
    group.add_argument("--prompt-file", help="file with one custom prompt per line")
    sub.add_argument("--no-judge", action="store_true", help="skip the LLM judge, score heuristically")
    sub.add_argument("--judge-url", dest="judge_url", help="Ollama endpoint for the judge model")
    sub.add_argument("--judge-model", dest="judge_model")
    sub.add_argument("--timeout", type=float, default=300.0, help="per-request timeout seconds")
    sub.add_argument("--sample-interval", type=float, help="metric sampling interval seconds")
    sub.add_argument("--mock-script", help="scripted telemetry file instead of OS telemetry")


def build_parser() -> _Parser:
    parser = _Parser(
        prog="envirollm",
        description="Measure, benchmark, and optimize local LLM deployments.",
    )
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    monitor = commands.add_parser("monitor", help="watch LLM processes and estimated power")
    _add_common(monitor)
    _add_power_flags(monitor)
    monitor.add_argument("--interval", type=float, help="seconds between samples (default 2.0)")
    monitor.add_argument("--json", action="store_true", help="one JSON object per line")
    monitor.add_argument("--duration", type=float, help="stop after this many seconds")
    monitor.add_argument("--mock-script", help="scripted telemetry file instead of OS telemetry")
    monitor.set_defaults(func=cmd_monitor, parser=monitor)

    benchmark = commands.add_parser("benchmark", help="benchmark models on an Ollama endpoint")
    _add_common(benchmark)
    _add_power_flags(benchmark)
    benchmark.add_argument("--models", required=True, help="comma-separated model names")
    benchmark.add_argument("--url", help="Ollama base URL (default http://localhost:11434)")
    _add_bench_flags(benchmark)
    benchmark.set_defaults(func=cmd_benchmark, parser=benchmark)

    openai = commands.add_parser(
        "benchmark-openai", help="benchmark a model on an OpenAI-compatible endpoint"
    )
    _add_common(openai)
    _add_power_flags(openai)
    openai.add_argument("--url", required=True, help="endpoint base URL (e.g. http://localhost:1234/v1)")
    openai.add_argument("--model", required=True, help="model name to request")
    _add_bench_flags(openai)
    openai.set_defaults(func=cmd_benchmark_openai, parser=openai)

    export = commands.add_parser("export", help="export stored results to CSV")
    _add_common(export)
    export.add_argument("--out", default="envirollm-export.csv", help="destination CSV path")
    export.set_defaults(func=cmd_export, parser=export)

    clean = commands.add_parser("clean", help="delete stored results")
    _add_common(clean)
    which = clean.add_mutually_exclusive_group(required=True)
    which.add_argument("--all", action="store_true", help="delete everything")
    which.add_argument("--model", help="delete one model's results")
    which.add_argument("--before", help="delete results older than an ISO timestamp")
    clean.add_argument("--yes", action="store_true", help="skip confirmation")
    clean.set_defaults(func=cmd_clean, parser=clean)

    serve_cmd = commands.add_parser("serve", help="run the dashboard HTTP API")
    _add_common(serve_cmd)
    _add_power_flags(serve_cmd)
    serve_cmd.add_argument("--bind", help="host:port (default 127.0.0.1:8090)")
    serve_cmd.add_argument("--advisor-config", help="override the bundled sizing table")
    serve_cmd.add_argument("--mock-script", help="scripted telemetry file instead of OS telemetry")
    serve_cmd.set_defaults(func=cmd_serve, parser=serve_cmd)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except StorageError as exc:
        where = f" ({exc.path})" if exc.path else ""
        print(f"error: {exc}{where}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
