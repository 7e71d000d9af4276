import type { Job, MetricsEvent, ResultRow } from "./types.js";

export type View = "Monitoring" | "Optimization" | "Benchmarking";
export type BenchmarkTab = "Ollama" | "LMStudio" | "CustomAPI";

export const LIVE_BUFFER_LIMIT = 300; // 10 min of history at the 2s cadence

export type FormDrafts = {
  models: string;
  baseUrl: string;
  customModel: string;
  promptIds: string[];
  customPrompt: string;
};

export type DashboardState = {
  activeView: View;
  benchmarkingTab: BenchmarkTab;
  liveBuffer: MetricsEvent[];
  feedConnected: boolean;
  drafts: FormDrafts;
  activeJob: Job | null;
  jobResults: ResultRow[];
  banner: string | null;
};

export function initialState(): DashboardState {
  return {
    activeView: "Monitoring",
    benchmarkingTab: "Ollama",
    liveBuffer: [],
    feedConnected: false,
    drafts: {
      models: "",
      baseUrl: "",
      customModel: "",
      promptIds: [],
      customPrompt: "",
    },
    activeJob: null,
    jobResults: [],
    banner: null,
  };
}

type Listener = (state: DashboardState) => void;

/**
 * The one mutable state container. Every mutation goes through a method
 * here and notifies subscribers synchronously; views re-render from the
 * state they are handed and never keep their own copies.
 */
export class StateStore {
  private state: DashboardState = initialState();
  private listeners: Listener[] = [];

  get(): DashboardState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private notify(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  setView(view: View): void {
    this.state = { ...this.state, activeView: view };
    this.notify();
  }

  setTab(tab: BenchmarkTab): void {
    this.state = { ...this.state, benchmarkingTab: tab };
    this.notify();
  }

  pushMetric(event: MetricsEvent): void {
    const buffer = [...this.state.liveBuffer, event];
    // ring bound: drop the oldest, keep the newest LIVE_BUFFER_LIMIT
    if (buffer.length > LIVE_BUFFER_LIMIT) buffer.splice(0, buffer.length - LIVE_BUFFER_LIMIT);
    this.state = { ...this.state, liveBuffer: buffer };
    this.notify();
  }

  setFeedConnected(connected: boolean): void {
    if (this.state.feedConnected === connected) return;
    this.state = { ...this.state, feedConnected: connected };
    this.notify();
  }

  /* Drafts are read at submit time; no view renders from them mid-edit, so
     this mutation is silent. Notifying here would re-render the form on
     every keystroke and steal focus from the input. */
  updateDrafts(drafts: Partial<FormDrafts>): void {
    this.state = { ...this.state, drafts: { ...this.state.drafts, ...drafts } };
  }

  setJob(job: Job | null): void {
    this.state = { ...this.state, activeJob: job };
    this.notify();
  }

  setJobResults(rows: ResultRow[]): void {
    this.state = { ...this.state, jobResults: rows };
    this.notify();
  }

  setBanner(message: string | null): void {
    this.state = { ...this.state, banner: message };
    this.notify();
  }
}
