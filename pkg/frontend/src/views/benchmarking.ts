import type { ApiClient } from "../api.js";
import { ApiError } from "../api.js";
import type { BenchmarkTab, DashboardState, StateStore } from "../state.js";
import type { BenchmarkRequest, Job } from "../types.js";
import { formatSeconds, formatTokensPerS, formatWh, formatWhPerToken } from "../format.js";

export const PRESET_PROMPT_IDS = [
  "explanation",
  "codegen",
  "summarization",
  "longform",
  "analysis",
];

const TABS: BenchmarkTab[] = ["Ollama", "LMStudio", "CustomAPI"];

export type Delay = (ms: number) => Promise<void>;

function httpUrl(value: string): boolean {
  try {
    const url = new URL(value);
    return url.protocol === "http:" || url.protocol === "https:";
  } catch {
    return false;
  }
}

/** Form -> request body, or an error string that blocks the submit. */
export function buildRequest(state: DashboardState): BenchmarkRequest | string {
  const { benchmarkingTab, drafts } = state;
  const prompts: Pick<BenchmarkRequest, "prompt_ids" | "custom_prompts"> = drafts.customPrompt.trim()
    ? { custom_prompts: [drafts.customPrompt.trim()] }
    : { prompt_ids: drafts.promptIds.length ? drafts.promptIds : PRESET_PROMPT_IDS };

  if (benchmarkingTab === "Ollama") {
    const models = drafts.models
      .split(",")
      .map((m) => m.trim())
      .filter(Boolean);
    if (!models.length) return "Enter at least one model name.";
    return { platform: "ollama", models, ...prompts };
  }

  const model = drafts.customModel.trim();
  if (!model) return "Enter the model name the endpoint serves.";
  const baseUrl = drafts.baseUrl.trim();
  if (benchmarkingTab === "CustomAPI") {
    if (!httpUrl(baseUrl)) return "Enter a valid http(s) endpoint URL.";
    return { platform: "openai", models: [model], base_url: baseUrl, ...prompts };
  }
  // LMStudio tab: the conventional local endpoint unless overridden
  const request: BenchmarkRequest = { platform: "openai", models: [model], ...prompts };
  if (baseUrl) {
    if (!httpUrl(baseUrl)) return "Enter a valid http(s) endpoint URL.";
    request.base_url = baseUrl;
  }
  return request;
}

/**
 * Launches jobs and polls their state into the store. The delay function is
 * injected; tests resolve it immediately to step through a whole job.
 */
export class BenchmarkController {
  private api: ApiClient;
  private store: StateStore;
  private delay: Delay;
  private pollMs: number;

  constructor(
    api: ApiClient,
    store: StateStore,
    delay: Delay = (ms) => new Promise((resolve) => setTimeout(resolve, ms)),
    pollMs = 1000,
  ) {
    this.api = api;
    this.store = store;
    this.delay = delay;
    this.pollMs = pollMs;
  }

  async launch(): Promise<void> {
    const request = buildRequest(this.store.get());
    if (typeof request === "string") {
      this.store.setBanner(request);
      return;
    }
    this.store.setBanner(null);
    let jobId: string;
    try {
      jobId = (await this.api.launchBenchmark(request)).job_id;
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        // the form keeps its draft; the running job is untouched
        this.store.setBanner(error.message);
      } else {
        this.store.setBanner(`Launch failed: ${(error as Error).message}`);
      }
      return;
    }
    this.store.setJob(null);
    this.store.setJobResults([]);
    await this.track(jobId);
  }

  async track(jobId: string): Promise<Job> {
    for (;;) {
      const job = await this.api.job(jobId);
      this.store.setJob(job);
      await this.syncRows(job);
      if (job.state === "done" || job.state === "failed") return job;
      await this.delay(this.pollMs);
    }
  }

  /* Completed pairs surface as stored ids on the job; the rows themselves
     come from the grouped-results endpoint, keeping this a pure API client. */
  private async syncRows(job: Job): Promise<void> {
    if (!job.results_so_far.length) return;
    const wanted = new Set(job.results_so_far);
    const groups = await this.api.groups();
    const rows = groups
      .flatMap((group) => group.results)
      .filter((row) => wanted.has(row.id))
      .sort(
        (a, b) => job.results_so_far.indexOf(a.id) - job.results_so_far.indexOf(b.id),
      );
    this.store.setJobResults(rows);
  }
}

function tabBar(state: DashboardState): string {
  return `<nav class="tabs">${TABS.map(
    (tab) =>
      `<button type="button" data-tab="${tab}" ${
        tab === state.benchmarkingTab ? 'class="active"' : ""
      }>${tab}</button>`,
  ).join("")}</nav>`;
}

function formFields(state: DashboardState): string {
  const { benchmarkingTab, drafts } = state;
  const promptBoxes = PRESET_PROMPT_IDS.map(
    (id) =>
      `<label><input type="checkbox" name="prompt" value="${id}" ${
        drafts.promptIds.includes(id) ? "checked" : ""
      }> ${id}</label>`,
  ).join("");
  const endpointFields =
    benchmarkingTab === "Ollama"
      ? `<label>Models (comma-separated)
           <input name="models" data-field="models" value="${drafts.models}" placeholder="gemma3:1b,llama3.2:3b">
         </label>`
      : `<label>Endpoint URL
           <input name="base_url" data-field="base_url" value="${drafts.baseUrl}" placeholder="http://localhost:1234/v1">
         </label>
         <label>Model
           <input name="model" data-field="model" value="${drafts.customModel}" placeholder="gemma-3-1b">
         </label>`;
  return `
    <form data-form="benchmark">
      ${endpointFields}
      <fieldset><legend>Preset prompts (default: all)</legend>${promptBoxes}</fieldset>
      <label>Or a single custom prompt
        <textarea name="custom_prompt" data-field="custom_prompt">${drafts.customPrompt}</textarea>
      </label>
      <button type="submit" data-action="launch">Run benchmark</button>
    </form>`;
}

function progressBlock(state: DashboardState): string {
  const job = state.activeJob;
  if (!job) return "";
  const { completed_pairs, total_pairs } = job.progress;
  const status =
    job.state === "failed" ? ` <span class="error">failed: ${job.error ?? ""}</span>` : "";
  return `
    <div class="job" data-job="${job.job_id}" data-state="${job.state}">
      <span data-progress>${completed_pairs}/${total_pairs}</span> pairs complete${status}
    </div>`;
}

function resultsTable(state: DashboardState): string {
  if (!state.jobResults.length) return "";
  const rows = state.jobResults
    .map(
      (r) => `
      <tr data-result-id="${r.id}">
        <td>${r.model}</td>
        <td>${r.prompt_text.length > 40 ? `${r.prompt_text.slice(0, 37)}...` : r.prompt_text}</td>
        <td data-value="${r.tokens}">${r.tokens}${r.tokens_estimated ? "*" : ""}</td>
        <td data-value="${r.duration_s}">${formatSeconds(r.duration_s)}</td>
        <td data-value="${r.tokens_per_s}">${formatTokensPerS(r.tokens_per_s)}</td>
        <td data-value="${r.energy_wh}">${formatWh(r.energy_wh)}</td>
        <td data-value="${r.wh_per_token}">${formatWhPerToken(r.wh_per_token)}</td>
        <td data-value="${r.quality_score}">${r.quality_score}</td>
      </tr>`,
    )
    .join("");
  return `
    <table class="results">
      <thead><tr><th>model</th><th>prompt</th><th>tokens</th><th>time_s</th><th>tok/s</th><th>Wh</th><th>Wh/tok</th><th>quality</th></tr></thead>
      <tbody>${rows}</tbody>
    </table>`;
}

export function renderBenchmarking(container: HTMLElement, state: DashboardState): void {
  const banner = state.banner
    ? `<div class="banner error" data-banner="benchmark">${state.banner}</div>`
    : "";
  container.innerHTML = `
    ${tabBar(state)}
    ${banner}
    ${formFields(state)}
    ${progressBlock(state)}
    ${resultsTable(state)}`;
}

/** Wire form inputs back into drafts and the submit to the controller. */
export function bindBenchmarking(
  container: HTMLElement,
  store: StateStore,
  controller: BenchmarkController,
): void {
  container.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const tab = target.getAttribute("data-tab");
    if (tab) store.setTab(tab as BenchmarkTab);
  });
  container.addEventListener("input", (event) => {
    const target = event.target as HTMLInputElement;
    switch (target.getAttribute("data-field")) {
      case "models":
        store.updateDrafts({ models: target.value });
        break;
      case "base_url":
        store.updateDrafts({ baseUrl: target.value });
        break;
      case "model":
        store.updateDrafts({ customModel: target.value });
        break;
      case "custom_prompt":
        store.updateDrafts({ customPrompt: target.value });
        break;
    }
    if (target.name === "prompt") {
      const checked = Array.from(
        container.querySelectorAll<HTMLInputElement>('input[name="prompt"]'),
      )
        .filter((box) => box.checked)
        .map((box) => box.value);
      store.updateDrafts({ promptIds: checked });
    }
  });
  container.addEventListener("submit", (event) => {
    event.preventDefault();
    void controller.launch();
  });
}
