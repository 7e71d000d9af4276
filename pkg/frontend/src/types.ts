// Payload shapes of the envirollm service API. The dashboard keeps no
// state that cannot be rebuilt from these plus unsaved form drafts.

export type ProcessSample = {
  pid: number;
  name: string;
  platform: string;
  cpu_percent: number;
  rss_bytes: number;
};

export type GpuTelemetry = {
  utilization_percent: number;
  memory_used_bytes: number;
  memory_total_bytes: number;
  temperature_celsius: number;
  power_watts: number | null;
  name: string;
};

export type MetricsEvent = {
  timestamp: string;
  monotonic_s: number;
  processes: ProcessSample[];
  total_cpu_percent: number;
  total_rss_bytes: number;
  gpu: GpuTelemetry | null;
  memory: { total_bytes: number; available_bytes: number };
  logical_cores: number;
  dropped: number[];
  estimated_watts: number;
};

export type ResultRow = {
  id: number;
  timestamp: string;
  platform: string;
  endpoint_url: string;
  model: string;
  quantization_raw: string;
  quantization_family: string;
  prompt_hash: string;
  prompt_text: string;
  tokens: number;
  tokens_estimated: boolean;
  duration_s: number;
  duration_total_s: number;
  tokens_per_s: number;
  energy_wh: number;
  wh_per_token: number;
  quality_score: number;
  quality_method: string;
  judge_model: string | null;
  response_text: string;
};

export type ResultGroup = {
  prompt_hash: string;
  prompt_text: string;
  results: ResultRow[];
};

export type JobProgress = { completed_pairs: number; total_pairs: number };

export type Job = {
  job_id: string;
  state: "pending" | "running" | "done" | "failed";
  progress: JobProgress;
  results_so_far: number[];
  error: string | null;
};

export type HardwareInfo = {
  total_ram_bytes: number;
  available_ram_bytes: number;
  logical_cores: number;
  gpu: { name: string; vram_total_bytes: number; vram_free_bytes: number } | null;
};

export type Recommendation = {
  max_params_billions: number;
  suggested_quant: string;
  rationale: string;
  confidence: string;
};

export type BenchmarkRequest = {
  platform: "ollama" | "openai";
  models: string[];
  base_url?: string;
  prompt_ids?: string[];
  custom_prompts?: string[];
};
