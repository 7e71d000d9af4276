import type { MetricsEvent } from "./types.js";
import type { StateStore } from "./state.js";

// The live feed is the only push channel. EventSource and the timer are
// injected so tests can emit events and drive reconnects deterministically.

export type EventSourceLike = {
  onmessage: ((event: { data: string }) => void) | null;
  onerror: ((event: unknown) => void) | null;
  onopen: ((event: unknown) => void) | null;
  close(): void;
};

export type EventSourceFactory = (url: string) => EventSourceLike;
export type Scheduler = (fn: () => void, delayMs: number) => void;

export const RECONNECT_BASE_MS = 1000;
export const RECONNECT_MAX_MS = 15000;

export class MetricsFeed {
  private url: string;
  private store: StateStore;
  private makeSource: EventSourceFactory;
  private schedule: Scheduler;
  private source: EventSourceLike | null = null;
  private attempt = 0;
  private stopped = false;

  constructor(
    url: string,
    store: StateStore,
    // a real EventSource satisfies the subset of the interface used here
    makeSource: EventSourceFactory = (u) => new EventSource(u) as EventSourceLike,
    schedule: Scheduler = (fn, ms) => {
      setTimeout(fn, ms);
    },
  ) {
    this.url = url;
    this.store = store;
    this.makeSource = makeSource;
    this.schedule = schedule;
  }

  start(): void {
    this.stopped = false;
    this.connect();
  }

  stop(): void {
    this.stopped = true;
    if (this.source) {
      this.source.close();
      this.source = null;
    }
  }

  private connect(): void {
    if (this.stopped) return;
    const source = this.makeSource(this.url);
    this.source = source;
    source.onopen = () => {
      this.attempt = 0;
      this.store.setFeedConnected(true);
    };
    source.onmessage = (event) => {
      this.attempt = 0;
      this.store.setFeedConnected(true);
      this.store.pushMetric(JSON.parse(event.data) as MetricsEvent);
    };
    source.onerror = () => {
      source.close();
      if (this.source === source) this.source = null;
      this.store.setFeedConnected(false);
      if (this.stopped) return;
      // exponential backoff, capped; banner shows while disconnected
      const delay = Math.min(RECONNECT_BASE_MS * 2 ** this.attempt, RECONNECT_MAX_MS);
      this.attempt += 1;
      this.schedule(() => this.connect(), delay);
    };
  }
}
