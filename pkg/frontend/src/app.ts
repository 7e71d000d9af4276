import { ApiClient } from "./api.js";
import { StateStore, type View } from "./state.js";
import { MetricsFeed, type EventSourceFactory, type Scheduler } from "./stream.js";
import type { ResultGroup } from "./types.js";
import {
  BenchmarkController,
  bindBenchmarking,
  renderBenchmarking,
  type Delay,
} from "./views/benchmarking.js";
import { renderGroups, renderGroupsError } from "./views/groups.js";
import { renderMonitoring } from "./views/monitoring.js";
import { renderOptimization, renderOptimizationError } from "./views/optimization.js";

const VIEWS: View[] = ["Monitoring", "Optimization", "Benchmarking"];

// Transport and timing seams for the composition root; production callers
// pass nothing and get EventSource/setTimeout.
export type AppOptions = {
  makeSource?: EventSourceFactory;
  schedule?: Scheduler;
  delay?: Delay;
  pollMs?: number;
};

export function startApp(root: HTMLElement, api = new ApiClient(), options: AppOptions = {}): void {
  const store = new StateStore();
  const controller = new BenchmarkController(api, store, options.delay, options.pollMs);
  let groupsCache: ResultGroup[] = [];
  let groupsError: string | null = null;

  root.innerHTML = `
    <header class="topbar">
      <h1>envirollm</h1>
      <nav>${VIEWS.map((v) => `<button type="button" data-view="${v}">${v}</button>`).join("")}</nav>
    </header>
    <main id="view"></main>`;
  const main = root.querySelector<HTMLElement>("#view")!;

  root.querySelector("nav")!.addEventListener("click", (event) => {
    const view = (event.target as HTMLElement).getAttribute("data-view");
    if (view) store.setView(view as View);
  });
  bindBenchmarking(main, store, controller);

  const renderGroupsHost = () => {
    const host = main.querySelector<HTMLElement>("#groups");
    if (!host) return;
    if (groupsError) renderGroupsError(host, groupsError);
    else renderGroups(host, groupsCache);
  };

  const refreshGroups = () => {
    api
      .groups()
      .then((groups) => {
        groupsCache = groups;
        groupsError = null;
        renderGroupsHost();
      })
      .catch((error: Error) => {
        groupsError = `Could not load results: ${error.message}`;
        renderGroupsHost();
      });
  };

  const refreshOptimization = () => {
    Promise.all([api.hardware(), api.recommendations()])
      .then(([hardware, recommendations]) => {
        if (store.get().activeView === "Optimization") {
          renderOptimization(main, hardware, recommendations);
        }
      })
      .catch((error: Error) => {
        if (store.get().activeView === "Optimization") {
          renderOptimizationError(main, `Could not load hardware info: ${error.message}`);
        }
      });
  };

  main.addEventListener("click", (event) => {
    const action = (event.target as HTMLElement).getAttribute("data-action");
    if (action === "retry-groups") refreshGroups();
    if (action === "retry-optimization") refreshOptimization();
  });

  let lastView: View | null = null;
  let lastJobState: string | null = null;
  store.subscribe((state) => {
    switch (state.activeView) {
      case "Monitoring":
        renderMonitoring(main, state);
        break;
      case "Optimization":
        if (lastView !== "Optimization") {
          main.innerHTML = `<p class="empty">Loading hardware profile...</p>`;
          refreshOptimization();
        }
        break;
      case "Benchmarking": {
        renderBenchmarking(main, state);
        const groupsHost = document.createElement("section");
        groupsHost.id = "groups";
        main.appendChild(groupsHost);
        renderGroupsHost();
        if (lastView !== "Benchmarking") refreshGroups();
        break;
      }
    }
    // a finished job means new stored rows: refresh the comparison cards
    const jobState = state.activeJob?.state ?? null;
    if (jobState === "done" && lastJobState !== "done") refreshGroups();
    lastJobState = jobState;
    lastView = state.activeView;
  });

  const feed = new MetricsFeed(api.metricsStreamUrl(), store, options.makeSource, options.schedule);
  feed.start();
  store.setView("Monitoring");
}
