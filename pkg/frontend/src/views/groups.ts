import type { ResultGroup, ResultRow } from "../types.js";
import {
  formatTimestamp,
  formatTokensPerS,
  formatWh,
  formatWhPerToken,
} from "../format.js";

// One card per prompt group; inside a card, one bar per result for each of
// the four comparison metrics. Raw values ride on data attributes.

type Metric = {
  key: string;
  label: string;
  value: (r: ResultRow) => number;
  format: (v: number) => string;
};

const METRICS: Metric[] = [
  { key: "energy_wh", label: "Energy (Wh)", value: (r) => r.energy_wh, format: formatWh },
  {
    key: "tokens_per_s",
    label: "Speed (tok/s)",
    value: (r) => r.tokens_per_s,
    format: formatTokensPerS,
  },
  {
    key: "wh_per_token",
    label: "Wh/token",
    value: (r) => r.wh_per_token,
    format: formatWhPerToken,
  },
  { key: "quality", label: "Quality", value: (r) => r.quality_score, format: (v) => `${v}` },
];

function metricBlock(group: ResultGroup, metric: Metric): string {
  const max = Math.max(1e-9, ...group.results.map(metric.value));
  const bars = group.results
    .map((r) => {
      const value = metric.value(r);
      const width = Math.max(1, Math.round((value / max) * 100));
      return `
        <div class="metric-row" data-metric="${metric.key}" data-result-id="${r.id}" data-value="${value}">
          <span class="model">${r.model}</span>
          <div class="bar" style="width:${width}%"></div>
          <span class="value">${metric.format(value)}</span>
        </div>`;
    })
    .join("");
  return `<div class="metric" data-metric-block="${metric.key}"><h4>${metric.label}</h4>${bars}</div>`;
}

function card(group: ResultGroup): string {
  const runs = group.results
    .map(
      (r) =>
        `<li data-run-id="${r.id}" data-timestamp="${r.timestamp}">` +
        `${r.model} (${r.platform}${r.quantization_family !== "Unknown" ? `, ${r.quantization_family}` : ""}) ` +
        `<time>${formatTimestamp(r.timestamp)}</time>` +
        `${r.tokens_estimated ? ' <span class="muted">tokens estimated</span>' : ""}</li>`,
    )
    .join("");
  return `
    <article class="card" data-group="${group.prompt_hash}">
      <h3 title="${group.prompt_hash}">${group.prompt_text}</h3>
      <ul class="runs">${runs}</ul>
      ${METRICS.map((m) => metricBlock(group, m)).join("")}
    </article>`;
}

export function renderGroups(container: HTMLElement, groups: ResultGroup[]): void {
  if (!groups.length) {
    container.innerHTML =
      `<p class="empty" data-empty="groups">No benchmark results yet. ` +
      `Run one from the Benchmarking view to compare models here.</p>`;
    return;
  }
  container.innerHTML = groups.map(card).join("");
}

export function renderGroupsError(container: HTMLElement, message: string): void {
  container.innerHTML = `
    <div class="banner error" data-banner="groups">${message}</div>
    <button type="button" data-action="retry-groups">Retry</button>`;
}
