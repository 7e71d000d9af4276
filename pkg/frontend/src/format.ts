// Display rounding mirrors the CLI table so numbers agree across surfaces:
// Wh at 3 decimals, Wh/token at 6, speed at 1, durations at 2.

export function formatWh(wh: number): string {
  return wh.toFixed(3);
}

export function formatWhPerToken(whPerToken: number): string {
  return whPerToken.toFixed(6);
}

export function formatTokensPerS(tps: number): string {
  return tps.toFixed(1);
}

export function formatSeconds(s: number): string {
  return s.toFixed(2);
}

export function formatPercent(p: number): string {
  return `${p.toFixed(1)}%`;
}

export function formatGb(bytes: number): string {
  return `${(bytes / 1e9).toFixed(1)} GB`;
}

export function formatWatts(w: number): string {
  return `${w.toFixed(1)} W`;
}

/* ISO timestamps from the API are UTC with millisecond precision; drop the
   milliseconds for display but keep the full value in data attributes. */
export function formatTimestamp(iso: string): string {
  return iso.replace(/\.\d{3}Z$/, "Z").replace("T", " ");
}
