import type { HardwareInfo, Recommendation } from "../types.js";
import { formatGb } from "../format.js";

export function renderOptimization(
  container: HTMLElement,
  hardware: HardwareInfo,
  recommendations: Recommendation[],
): void {
  const gpu = hardware.gpu;
  const gpuLine = gpu
    ? `<li data-hw="gpu">${gpu.name}: ${formatGb(gpu.vram_free_bytes)} free of ${formatGb(gpu.vram_total_bytes)} VRAM</li>`
    : `<li data-hw="gpu-none">No dedicated GPU detected; sizing is based on system RAM.</li>`;
  const recs = recommendations.length
    ? recommendations
        .map(
          (r, i) => `
      <li class="rec" data-rec="${i}" data-quant="${r.suggested_quant}" data-max-params="${r.max_params_billions}">
        <strong>${r.suggested_quant}</strong>: up to ~${r.max_params_billions.toFixed(1)}B parameters
        <span class="confidence">(${r.confidence} confidence)</span>
        <p class="rationale">${r.rationale}</p>
      </li>`,
        )
        .join("")
    : `<li class="empty" data-empty="recommendations">No recommendations available for this hardware profile.</li>`;
  container.innerHTML = `
    <section class="hardware">
      <h3>This machine</h3>
      <ul>
        <li data-hw="ram">RAM: ${formatGb(hardware.available_ram_bytes)} available of ${formatGb(hardware.total_ram_bytes)}</li>
        <li data-hw="cores">Logical cores: ${hardware.logical_cores}</li>
        ${gpuLine}
      </ul>
    </section>
    <section class="recommendations">
      <h3>Model sizing</h3>
      <ol>${recs}</ol>
    </section>`;
}

export function renderOptimizationError(container: HTMLElement, message: string): void {
  container.innerHTML = `
    <div class="banner error" data-banner="optimization">${message}</div>
    <button type="button" data-action="retry-optimization">Retry</button>`;
}
