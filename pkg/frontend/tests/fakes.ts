import type { FetchLike } from "../src/api.js";
import type { EventSourceLike } from "../src/stream.js";

type CannedResponse = { status: number; body: unknown };

function toResponse(canned: CannedResponse): Response {
  return {
    ok: canned.status >= 200 && canned.status < 300,
    status: canned.status,
    json: async () => canned.body,
  } as unknown as Response;
}

/**
 * Scripted fetch stand-in. Routes are keyed "METHOD /path" (query string
 * ignored); a route holds a queue of responses consumed one per call, the
 * last one repeating. Every call is recorded for assertions.
 */
export class FakeApi {
  calls: Array<{ method: string; url: string; body?: unknown }> = [];
  private routes = new Map<string, CannedResponse[]>();

  on(method: string, path: string, ...responses: CannedResponse[]): this {
    this.routes.set(`${method} ${path}`, responses);
    return this;
  }

  json(method: string, path: string, body: unknown): this {
    return this.on(method, path, { status: 200, body });
  }

  readonly fetch: FetchLike = async (url, init) => {
    const method = init?.method ?? "GET";
    const path = url.split("?")[0];
    this.calls.push({
      method,
      url,
      body: init?.body ? JSON.parse(init.body as string) : undefined,
    });
    const queue = this.routes.get(`${method} ${path}`);
    if (!queue || !queue.length) {
      return toResponse({ status: 404, body: { error: `no route for ${method} ${path}` } });
    }
    const canned = queue.length > 1 ? queue.shift()! : queue[0];
    return toResponse(canned);
  };
}

export class FakeEventSource implements EventSourceLike {
  onmessage: ((event: { data: string }) => void) | null = null;
  onerror: ((event: unknown) => void) | null = null;
  onopen: ((event: unknown) => void) | null = null;
  closed = false;

  constructor(public url: string) {}

  open(): void {
    this.onopen?.({});
  }

  emit(payload: unknown): void {
    this.onmessage?.({ data: JSON.stringify(payload) });
  }

  fail(): void {
    this.onerror?.({});
  }

  close(): void {
    this.closed = true;
  }
}

export function sourceFactory() {
  const created: FakeEventSource[] = [];
  return {
    created,
    make: (url: string) => {
      const source = new FakeEventSource(url);
      created.push(source);
      return source;
    },
  };
}

/** Captures scheduled callbacks so tests fire reconnects by hand. */
export function manualScheduler() {
  const pending: Array<{ fn: () => void; delayMs: number }> = [];
  return {
    pending,
    schedule: (fn: () => void, delayMs: number) => {
      pending.push({ fn, delayMs });
    },
    runNext: () => {
      const next = pending.shift();
      if (!next) throw new Error("nothing scheduled");
      next.fn();
      return next.delayMs;
    },
  };
}

/** Immediate delay: polling loops complete without real waiting. */
export const instantDelay = async (_ms: number): Promise<void> => {};

/** Hand-stepped delay: the poll loop pauses until the test calls step(). */
export function manualDelay() {
  const waiting: Array<() => void> = [];
  return {
    waiting,
    delay: (_ms: number) =>
      new Promise<void>((resolve) => {
        waiting.push(resolve);
      }),
    step: () => {
      const next = waiting.shift();
      if (!next) throw new Error("nothing waiting on the delay");
      next();
    },
  };
}
