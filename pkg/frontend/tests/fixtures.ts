import type {
  HardwareInfo,
  MetricsEvent,
  Recommendation,
  ResultGroup,
  ResultRow,
} from "../src/types.js";

// Per-run reference numbers: five prompts, three models each. Same corpus
// the backend test suite uses, so both halves agree on what "correct"
// rendering of a known dataset looks like.

const PROMPTS: Array<[string, string]> = [
  ["explanation", "Explain quantum computing to a high school student"],
  ["codegen", "Write a Python function that implements bubble sort"],
  ["summarization", "Summarize the key ideas behind machine learning"],
  ["longform", "Plan a three-day itinerary for a first visit to Tokyo"],
  ["analysis", "Compare renewable and fossil energy sources"],
];

type Run = [model: string, platform: string, energyWh: number, tokPerS: number, quality: number, tokens: number];

const RUNS: Record<string, Run[]> = {
  explanation: [
    ["gemma-3-1b", "OpenAICompatible", 0.41, 110.3, 95, 725],
    ["gemma3:1b", "Ollama", 0.457, 121.9, 75, 784],
    ["gemma-3n-e4b", "OpenAICompatible", 1.115, 43.2, 75, 657],
  ],
  codegen: [
    ["gemma-3-1b", "OpenAICompatible", 0.348, 178.2, 95, 877],
    ["gemma3:1b", "Ollama", 0.419, 186.8, 95, 1149],
    ["gemma-3n-e4b", "OpenAICompatible", 2.141, 43.5, 95, 1183],
  ],
  summarization: [
    ["gemma-3-1b", "OpenAICompatible", 0.087, 141.1, 95, 167],
    ["gemma3:1b", "Ollama", 0.113, 124.2, 95, 196],
    ["gemma-3n-e4b", "OpenAICompatible", 0.371, 39.8, 95, 199],
  ],
  longform: [
    ["gemma-3-1b", "OpenAICompatible", 0.493, 197.6, 75, 1393],
    ["gemma3:1b", "Ollama", 0.52, 193.7, 75, 1356],
    ["gemma-3n-e4b", "OpenAICompatible", 3.83, 42.3, 95, 2057],
  ],
  analysis: [
    ["gemma-3-1b", "OpenAICompatible", 0.45, 172.7, 75, 961],
    ["gemma3:1b", "Ollama", 0.51, 189.1, 95, 1302],
    ["gemma-3n-e4b", "OpenAICompatible", 2.257, 42.6, 75, 1319],
  ],
};

export function referenceGroups(): ResultGroup[] {
  let id = 1;
  return PROMPTS.map(([taskId, text], promptIndex) => {
    const results: ResultRow[] = RUNS[taskId].map(([model, platform, energyWh, tokPerS, quality, tokens], runIndex) => {
      const duration = tokens / tokPerS;
      return {
        id: id++,
        timestamp: `2025-07-01T12:${String(promptIndex * 3 + runIndex).padStart(2, "0")}:00.000Z`,
        platform,
        endpoint_url: platform === "Ollama" ? "http://localhost:11434" : "http://localhost:1234/v1",
        model,
        quantization_raw: platform === "Ollama" ? "Q4_0" : "Q4",
        quantization_family: "Q4",
        prompt_hash: `hash-${taskId}`,
        prompt_text: text,
        tokens,
        tokens_estimated: false,
        duration_s: duration,
        duration_total_s: duration + 0.25,
        tokens_per_s: tokPerS,
        energy_wh: energyWh,
        wh_per_token: energyWh / tokens,
        quality_score: quality,
        quality_method: "judge",
        judge_model: "gemma3:1b",
        response_text: `reference response ${model} ${taskId}`,
      };
    });
    return { prompt_hash: `hash-${taskId}`, prompt_text: text, results };
  });
}

export function makeEvent(index: number, overrides: Partial<MetricsEvent> = {}): MetricsEvent {
  return {
    timestamp: `2025-07-01T12:00:${String(index).padStart(2, "0")}.000Z`,
    monotonic_s: (index + 1) * 2,
    processes: [
      { pid: 101, name: "ollama serve", platform: "Ollama", cpu_percent: 40, rss_bytes: 2_147_483_648 },
    ],
    total_cpu_percent: 40 + index,
    total_rss_bytes: 2_147_483_648,
    gpu: {
      utilization_percent: 55,
      memory_used_bytes: 2_147_483_648,
      memory_total_bytes: 10_737_418_240,
      temperature_celsius: 55,
      power_watts: 90 + index,
      name: "MockGPU",
    },
    memory: { total_bytes: 34_359_738_368, available_bytes: 17_179_869_184 },
    logical_cores: 8,
    dropped: [],
    estimated_watts: 108.25 + index,
    ...overrides,
  };
}

export const HARDWARE_WITH_GPU: HardwareInfo = {
  total_ram_bytes: 32_000_000_000,
  available_ram_bytes: 16_000_000_000,
  logical_cores: 8,
  gpu: { name: "MockGPU", vram_total_bytes: 10_000_000_000, vram_free_bytes: 8_000_000_000 },
};

export const HARDWARE_CPU_ONLY: HardwareInfo = {
  total_ram_bytes: 32_000_000_000,
  available_ram_bytes: 16_000_000_000,
  logical_cores: 8,
  gpu: null,
};

export const RECOMMENDATIONS: Recommendation[] = [
  {
    max_params_billions: 7.6,
    suggested_quant: "Q4",
    rationale:
      "Up to ~7.6B parameters at Q4 (0.7 GB per billion + 20% overhead), limited by GPU VRAM (8.0 GB free); usable budget 6.4 GB.",
    confidence: "high",
  },
  {
    max_params_billions: 4.4,
    suggested_quant: "Q8",
    rationale:
      "Up to ~4.4B parameters at Q8 (1.2 GB per billion + 20% overhead), limited by GPU VRAM (8.0 GB free); usable budget 6.4 GB.",
    confidence: "high",
  },
  {
    max_params_billions: 2.7,
    suggested_quant: "FP16",
    rationale:
      "Up to ~2.7B parameters at FP16 (2.0 GB per billion + 20% overhead), limited by GPU VRAM (8.0 GB free); usable budget 6.4 GB.",
    confidence: "medium",
  },
];
