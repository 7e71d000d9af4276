"""Quantization detection from model names and platform metadata.

Names carry quant tokens in a handful of conventional shapes (``Q4_K_M``,
``int8``, ``fp16``, ``4bit``). Matching is case-insensitive and the
rightmost token wins, because quant suffixes trail the model name. When the
name is clean, platform metadata (for Ollama, the quantization_level field
of the model-info response) gets the same treatment; otherwise Unknown.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

_QUANT_RE = re.compile(
    r"q([2-8])(?:_[k0-9_ms]+)?|int([48])|fp(16|32)|f16|([48])bit",
    re.IGNORECASE,
)

FAMILIES = ("Q2", "Q3", "Q4", "Q5", "Q6", "Q8", "FP16", "FP32", "INT4", "INT8", "Unknown")


@dataclass(frozen=True)
class QuantLabel:
    raw: str
    family: str

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown quantization family: {self.family}")


UNKNOWN_QUANT = QuantLabel(raw="", family="Unknown")


def _family_of(match: re.Match) -> str:
    q_digit, int_bits, fp_bits, bit_bits = match.group(1, 2, 3, 4)
    if q_digit is not None:
        family = f"Q{q_digit}"
        # q7 matches the pattern but no Q7 scheme exists in the wild.
        return family if family in FAMILIES else "Unknown"
    if int_bits is not None:
        return f"INT{int_bits}"
    if fp_bits is not None:
        return f"FP{fp_bits}"
    if match.group(0).lower() == "f16":
        return "FP16"
    return f"INT{bit_bits}"


def _scan(text: str) -> QuantLabel | None:
    last = None
    for match in _QUANT_RE.finditer(text):
        last = match
    if last is None:
        return None
    return QuantLabel(raw=last.group(0), family=_family_of(last))


def detect_quantization(model_name: str, platform_metadata: str | None = None) -> QuantLabel:
    """Quantization label for a model: name first, then metadata, else Unknown."""
    if not model_name:
        raise ValueError("model_name must be nonempty")
    label = _scan(model_name)
    if label is None and platform_metadata:
        label = _scan(platform_metadata)
    return label if label is not None else UNKNOWN_QUANT
