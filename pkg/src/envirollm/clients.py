"""HTTP adapters for the two supported inference endpoint families.

Both adapters are non-streaming and blocking: one request, one parsed
reply. Platform-reported statistics are surfaced when present (token counts
and, for Ollama, generation timings in nanoseconds converted to seconds) so
the benchmark engine can prefer them over wall clock. Network failures map
onto the package's error taxonomy rather than leaking requests exceptions.
"""

from __future__ import annotations

from dataclasses import dataclass

import requests

from .errors import (
    EndpointUnreachable,
    InferenceTimeout,
    MalformedResponse,
    ModelNotFound,
)

DEFAULT_OLLAMA_URL = "http://localhost:11434"
DEFAULT_OPENAI_URL = "http://localhost:1234/v1"
DEFAULT_TIMEOUT_S = 300.0


@dataclass(frozen=True)
class GenerationReply:
    """One completed generation, with whatever statistics the platform reported."""

    text: str
    tokens: int | None = None
    gen_duration_s: float | None = None
    total_duration_s: float | None = None


def _post_json(url: str, payload: dict, timeout_s: float) -> requests.Response:
    try:
        return requests.post(url, json=payload, timeout=timeout_s)
    except requests.exceptions.Timeout as exc:
        raise InferenceTimeout(f"no reply from {url} within {timeout_s:g}s") from exc
    except requests.exceptions.RequestException as exc:
        raise EndpointUnreachable(f"cannot reach {url}: {exc}") from exc


def _body_json(resp: requests.Response) -> dict:
    try:
        body = resp.json()
    except ValueError as exc:
        raise MalformedResponse(f"non-JSON reply from {resp.url}") from exc
    if not isinstance(body, dict):
        raise MalformedResponse(f"unexpected reply shape from {resp.url}")
    return body


class OllamaClient:
    """Adapter for the Ollama REST API (generate, model info, liveness)."""

    def __init__(self, base_url: str = DEFAULT_OLLAMA_URL, timeout_s: float = DEFAULT_TIMEOUT_S):
        self.base_url = base_url.rstrip("/")
        self.timeout_s = timeout_s

    def probe(self) -> None:
        """Raise EndpointUnreachable unless the endpoint answers its tag listing."""
        url = f"{self.base_url}/api/tags"
        try:
            resp = requests.get(url, timeout=min(self.timeout_s, 10.0))
        except requests.exceptions.RequestException as exc:
            raise EndpointUnreachable(f"cannot reach {url}: {exc}") from exc
        if resp.status_code >= 500:
            raise EndpointUnreachable(f"{url} answered {resp.status_code}")

    def generate(self, model: str, prompt: str, temperature: float | None = None) -> GenerationReply:
        payload: dict = {"model": model, "prompt": prompt, "stream": False}
        if temperature is not None:
            payload["options"] = {"temperature": temperature}
        resp = _post_json(f"{self.base_url}/api/generate", payload, self.timeout_s)
        if resp.status_code == 404:
            raise ModelNotFound(f"model {model!r} not found at {self.base_url}")
        if resp.status_code != 200:
            raise MalformedResponse(
                f"{self.base_url}/api/generate answered {resp.status_code}"
            )
        body = _body_json(resp)
        if "response" not in body:
            raise MalformedResponse("generate reply carries no response text")
        eval_count = body.get("eval_count")
        eval_ns = body.get("eval_duration")
        total_ns = body.get("total_duration")
        return GenerationReply(
            text=str(body["response"]),
            tokens=int(eval_count) if eval_count is not None else None,
            gen_duration_s=float(eval_ns) / 1e9 if eval_ns else None,
            total_duration_s=float(total_ns) / 1e9 if total_ns else None,
        )

    def quantization_metadata(self, model: str) -> str | None:
        """The model-info quantization level string, or None when unavailable."""
        try:
            resp = _post_json(
                f"{self.base_url}/api/show",
                {"name": model, "model": model},
                min(self.timeout_s, 30.0),
            )
        except (EndpointUnreachable, InferenceTimeout):
            return None
        if resp.status_code != 200:
            return None
        try:
            details = _body_json(resp).get("details") or {}
        except MalformedResponse:
            return None
        level = details.get("quantization_level")
        return str(level) if level else None


class OpenAIClient:
    """Adapter for OpenAI-compatible chat-completions endpoints (LM Studio et al.)."""

    def __init__(self, base_url: str = DEFAULT_OPENAI_URL, timeout_s: float = DEFAULT_TIMEOUT_S):
        base = base_url.rstrip("/")
        # Callers pass either the server root or a base that already ends in /v1.
        self.api_base = base if base.endswith("/v1") else base + "/v1"
        self.timeout_s = timeout_s

    def probe(self) -> None:
        url = f"{self.api_base}/models"
        try:
            resp = requests.get(url, timeout=min(self.timeout_s, 10.0))
        except requests.exceptions.RequestException as exc:
            raise EndpointUnreachable(f"cannot reach {url}: {exc}") from exc
        if resp.status_code >= 500:
            raise EndpointUnreachable(f"{url} answered {resp.status_code}")

    def generate(self, model: str, prompt: str, temperature: float | None = None) -> GenerationReply:
        payload: dict = {
            "model": model,
            "messages": [{"role": "user", "content": prompt}],
            "stream": False,
        }
        if temperature is not None:
            payload["temperature"] = temperature
        resp = _post_json(f"{self.api_base}/chat/completions", payload, self.timeout_s)
        if resp.status_code == 404:
            raise ModelNotFound(f"model {model!r} not found at {self.api_base}")
        if resp.status_code != 200:
            raise MalformedResponse(
                f"{self.api_base}/chat/completions answered {resp.status_code}"
            )
        body = _body_json(resp)
        content = None
        choices = body.get("choices")
        if isinstance(choices, list) and choices:
            message = choices[0].get("message") or {}
            content = message.get("content")
        usage = body.get("usage") if isinstance(body.get("usage"), dict) else None
        if content is None and usage is None:
            raise MalformedResponse("completion reply lacks both content and usage")
        completion_tokens = (usage or {}).get("completion_tokens")
        return GenerationReply(
            text=str(content) if content is not None else "",
            tokens=int(completion_tokens) if completion_tokens is not None else None,
        )
