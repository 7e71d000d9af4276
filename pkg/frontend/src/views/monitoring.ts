import type { DashboardState } from "../state.js";
import { formatGb, formatPercent, formatWatts } from "../format.js";

// Charts are plain DOM bars: one element per event per series, raw values
// in data attributes, height as a percentage of the series maximum. That
// keeps them testable and avoids a chart dependency for four sparklines.

type Series = {
  key: string;
  label: string;
  value: (e: DashboardState["liveBuffer"][number]) => number;
  format: (v: number) => string;
};

const SERIES: Series[] = [
  { key: "cpu", label: "CPU", value: (e) => e.total_cpu_percent, format: formatPercent },
  { key: "rss", label: "Memory", value: (e) => e.total_rss_bytes, format: formatGb },
  {
    key: "gpu",
    label: "GPU util",
    value: (e) => (e.gpu ? e.gpu.utilization_percent : 0),
    format: formatPercent,
  },
  { key: "watts", label: "Est. power", value: (e) => e.estimated_watts, format: formatWatts },
];

function chart(state: DashboardState, series: Series): string {
  const events = state.liveBuffer;
  const max = Math.max(1e-9, ...events.map(series.value));
  const bars = events
    .map((event, i) => {
      const value = series.value(event);
      const height = Math.max(1, Math.round((value / max) * 100));
      return `<div class="bar" data-point="${i}" data-series="${series.key}" ` +
        `data-value="${value}" data-monotonic-s="${event.monotonic_s}" ` +
        `style="height:${height}%"></div>`;
    })
    .join("");
  const latest = events.length ? series.format(series.value(events[events.length - 1])) : "--";
  return `
    <section class="chart" data-chart="${series.key}">
      <header><span>${series.label}</span><strong data-latest="${series.key}">${latest}</strong></header>
      <div class="bars">${bars}</div>
    </section>`;
}

function processList(state: DashboardState): string {
  const events = state.liveBuffer;
  if (!events.length) return `<p class="empty" data-empty="monitoring">Waiting for metrics...</p>`;
  const latest = events[events.length - 1];
  const rows = latest.processes
    .map(
      (p) =>
        `<li data-pid="${p.pid}">${p.name} <span class="muted">pid ${p.pid}, ` +
        `${formatPercent(p.cpu_percent)}, ${formatGb(p.rss_bytes)}</span></li>`,
    )
    .join("");
  return `<ul class="processes">${rows || "<li>no LLM processes detected</li>"}</ul>`;
}

export function renderMonitoring(container: HTMLElement, state: DashboardState): void {
  const banner = state.feedConnected
    ? ""
    : `<div class="banner warn" data-banner="feed">Live feed lost; reconnecting...</div>`;
  container.innerHTML = `
    ${banner}
    ${processList(state)}
    <div class="charts">${SERIES.map((s) => chart(state, s)).join("")}</div>`;
}
