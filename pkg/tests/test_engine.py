import pytest

from envirollm.bench import estimate_tokens, preset_prompts, prompt_hash
from envirollm.engine import EngineOptions, run_benchmark_ollama, run_benchmark_openai
from envirollm.errors import EndpointUnreachable
from envirollm.telemetry import MockTelemetryProvider, SystemClock

from fixtures import CONSTANT_SCRIPT
from mock_servers import JUDGE_KEY, MockOllamaServer, MockOpenAIServer

PROMPTS = preset_prompts()[:2]  # explanation, codegen

GOOD_FIXTURES = {
    JUDGE_KEY: {"response_text": "88", "completion_tokens": 3},
    "quantum computing": {
        "response_text": "Qubits hold superpositions until measured.",
        "completion_tokens": 40,
        "artificial_delay_ms": 80,
    },
    "bubble sort": {
        "response_text": "def bubble(xs):\n    return sorted(xs)  # close enough",
        "completion_tokens": 55,
        "artificial_delay_ms": 80,
    },
}


def make_provider():
    clock = SystemClock()
    provider = MockTelemetryProvider(
        CONSTANT_SCRIPT, clock=clock, processes=[(101, "ollama serve")]
    )
    return provider, clock


def fast_options(**overrides):
    defaults = dict(sample_interval_s=0.05, request_timeout_s=10.0)
    defaults.update(overrides)
    return EngineOptions(**defaults)


def test_ollama_sweep_happy_path():
    provider, clock = make_provider()
    with MockOllamaServer(
        fixtures=GOOD_FIXTURES, quant_levels={"gemma3:1b": "Q4_0"}
    ) as server:
        outcome = run_benchmark_ollama(
            ["gemma3:1b"],
            PROMPTS,
            server.base_url,
            provider=provider,
            clock=clock,
            options=fast_options(),
        )
        show_calls = [b for m, p, b in server.requests if p == "/api/show"]

    assert outcome.failures == []
    assert len(outcome.results) == 2
    for result, prompt in zip(outcome.results, PROMPTS):
        assert result.platform == "Ollama"
        assert result.model == "gemma3:1b"
        assert result.prompt_hash == prompt_hash(prompt.text)
        assert result.prompt_text == prompt.text
        assert not result.tokens_estimated
        assert result.duration_s == pytest.approx(0.080)  # platform-reported
        assert result.duration_total_s > 0
        assert result.tokens_per_s == pytest.approx(result.tokens / result.duration_s)
        assert result.energy_wh > 0
        assert result.wh_per_token == pytest.approx(result.energy_wh / result.tokens)
        assert result.quality.method == "judge"
        assert result.quality.value == 88
        assert result.quantization.family == "Q4"  # via /api/show metadata
    assert [r.tokens for r in outcome.results] == [40, 55]
    assert len(show_calls) == 1  # quantization cached per model


def test_ollama_on_pair_callback_order():
    provider, clock = make_provider()
    calls = []
    with MockOllamaServer(fixtures=GOOD_FIXTURES) as server:
        outcome = run_benchmark_ollama(
            ["gemma3:1b"],
            PROMPTS,
            server.base_url,
            provider=provider,
            clock=clock,
            options=fast_options(judge_enabled=False),
            on_pair=lambda result, failure: calls.append((result, failure)),
        )
    assert [r for r, f in calls] == outcome.results
    assert all(f is None for r, f in calls)


def test_ollama_pair_failure_continues_sweep():
    provider, clock = make_provider()
    with MockOllamaServer(fixtures=GOOD_FIXTURES) as server:
        outcome = run_benchmark_ollama(
            ["missing-model", "gemma3:1b"],
            [PROMPTS[0]],
            server.base_url,
            provider=provider,
            clock=clock,
            options=fast_options(judge_enabled=False),
        )
    assert len(outcome.failures) == 1
    failure = outcome.failures[0]
    assert failure.model == "missing-model"
    assert failure.prompt_id == "explanation"
    assert failure.error == "ModelNotFound"
    assert len(outcome.results) == 1
    assert outcome.results[0].model == "gemma3:1b"


def test_ollama_timeout_recorded_per_pair():
    provider, clock = make_provider()
    fixtures = {
        "quantum computing": {"response_text": "slow", "artificial_delay_ms": 1500},
        "bubble sort": {"response_text": "fast code", "completion_tokens": 9},
    }
    with MockOllamaServer(fixtures=fixtures) as server:
        outcome = run_benchmark_ollama(
            ["gemma3:1b"],
            PROMPTS,
            server.base_url,
            provider=provider,
            clock=clock,
            options=fast_options(request_timeout_s=0.3, judge_enabled=False),
        )
    assert [f.error for f in outcome.failures] == ["InferenceTimeout"]
    assert [r.prompt_text for r in outcome.results] == [PROMPTS[1].text]


def test_ollama_malformed_reply_recorded():
    provider, clock = make_provider()
    fixtures = {"": {"response_text": "x", "malformed": True}}
    with MockOllamaServer(fixtures=fixtures) as server:
        outcome = run_benchmark_ollama(
            ["gemma3:1b"],
            [PROMPTS[0]],
            server.base_url,
            provider=provider,
            clock=clock,
            options=fast_options(judge_enabled=False),
        )
    assert [f.error for f in outcome.failures] == ["MalformedResponse"]
    assert outcome.results == []


def test_ollama_unreachable_probe_aborts():
    provider, clock = make_provider()
    with MockOllamaServer(fail_probe=True) as server:
        with pytest.raises(EndpointUnreachable):
            run_benchmark_ollama(
                ["gemma3:1b"],
                PROMPTS,
                server.base_url,
                provider=provider,
                clock=clock,
                options=fast_options(),
            )
        paths = [p for m, p, b in server.requests]
    assert paths == ["/api/tags"]  # nothing ran


def test_judge_fallback_to_heuristic():
    provider, clock = make_provider()
    fixtures = dict(GOOD_FIXTURES)
    fixtures[JUDGE_KEY] = {"response_text": "wonderful, truly"}  # unparseable
    with MockOllamaServer(fixtures=fixtures) as server:
        outcome = run_benchmark_ollama(
            ["gemma3:1b"],
            [PROMPTS[0]],
            server.base_url,
            provider=provider,
            clock=clock,
            options=fast_options(),
        )
    quality = outcome.results[0].quality
    assert quality.method == "heuristic"
    assert quality.subscores is not None
    assert quality.subscores.total() == quality.value


def test_judge_disabled_scores_heuristically():
    provider, clock = make_provider()
    with MockOllamaServer(fixtures=GOOD_FIXTURES) as server:
        outcome = run_benchmark_ollama(
            ["gemma3:1b"],
            [PROMPTS[0]],
            server.base_url,
            provider=provider,
            clock=clock,
            options=fast_options(judge_enabled=False),
        )
        judge_posts = [
            b for m, p, b in server.requests
            if p == "/api/generate" and JUDGE_KEY in (b.get("prompt") or "")
        ]
    assert judge_posts == []
    assert outcome.results[0].quality.method == "heuristic"


def test_openai_sweep_with_estimated_tokens():
    provider, clock = make_provider()
    fixtures = {
        "quantum computing": {
            "response_text": "Counted reply.",
            "completion_tokens": 31,
            "artificial_delay_ms": 60,
        },
        "bubble sort": {
            "response_text": "An uncounted reply about sorting things in Python.",
            "omit_usage": True,
            "artificial_delay_ms": 60,
        },
    }
    with MockOpenAIServer(models=("gemma-3-1b",), fixtures=fixtures) as server:
        outcome = run_benchmark_openai(
            server.base_url,
            "gemma-3-1b",
            PROMPTS,
            provider=provider,
            clock=clock,
            options=fast_options(),
        )
    assert outcome.failures == []
    counted, estimated = outcome.results
    assert counted.platform == "OpenAICompatible"
    assert counted.tokens == 31
    assert not counted.tokens_estimated
    assert estimated.tokens_estimated
    assert estimated.tokens == estimate_tokens(estimated.response_text)
    # no platform timing on this API: speed timing falls back to wall clock
    assert counted.duration_s == counted.duration_total_s
    assert counted.quantization.family == "Unknown"
    # judge never points at the benchmark endpoint; with no judge_url it's heuristic
    assert {r.quality.method for r in outcome.results} == {"heuristic"}


def test_openai_with_separate_judge_endpoint():
    provider, clock = make_provider()
    judge_fixtures = {JUDGE_KEY: {"response_text": "Score: 91"}}
    openai_fixtures = {"": {"response_text": "Fine answer.", "completion_tokens": 12}}
    with MockOllamaServer(fixtures=judge_fixtures) as judge_server:
        with MockOpenAIServer(fixtures=openai_fixtures) as server:
            outcome = run_benchmark_openai(
                server.base_url,
                "gemma-3-1b",
                [PROMPTS[0]],
                provider=provider,
                clock=clock,
                options=fast_options(judge_url=judge_server.base_url),
            )
    assert outcome.results[0].quality.method == "judge"
    assert outcome.results[0].quality.value == 91


def test_engine_rejects_empty_input():
    provider, clock = make_provider()
    with pytest.raises(ValueError):
        run_benchmark_ollama([], PROMPTS, provider=provider, clock=clock)
    with pytest.raises(ValueError):
        run_benchmark_ollama(["m"], [], provider=provider, clock=clock)
    with pytest.raises(ValueError):
        run_benchmark_openai("http://localhost:1234", "", PROMPTS,
                             provider=provider, clock=clock)
