/**
 * Minimal deterministic SVG building blocks: fixed fonts, fixed precision
 * number formatting, no timestamps or randomness anywhere.
 */

export const FONT = "font-family=\"Helvetica, Arial, sans-serif\"";

export function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

/** Fixed-precision coordinate: avoids 17-digit float noise in the output. */
export function fmt(x: number): string {
  const r = x.toFixed(2);
  return r === "-0.00" ? "0.00" : r;
}

/** Tick label with magnitude-aware precision. */
export function label(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1000) return v.toFixed(0);
  if (a >= 10) return String(Number(v.toFixed(1)));
  if (a >= 0.01) return String(Number(v.toFixed(3)));
  return v.toExponential(1);
}

export function niceTicks(min: number, max: number, count: number): number[] {
  const range = max - min || 1;
  const rough = range / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rough)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => s >= rough) ?? rough;
  const start = Math.ceil(min / step) * step;
  const ticks: number[] = [];
  for (let v = start; v <= max + step * 1e-9; v += step) ticks.push(v);
  return ticks;
}

export interface Scale {
  (value: number): number;
  domain: [number, number];
}

export function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const span = d1 - d0 || 1;
  const fn = ((value: number) => r0 + ((value - d0) / span) * (r1 - r0)) as Scale;
  fn.domain = [d0, d1];
  return fn;
}

export function polyline(xs: number[], ys: number[], attrs: string): string {
  const pts: string[] = [];
  for (let i = 0; i < xs.length; i++) pts.push(`${fmt(xs[i])},${fmt(ys[i])}`);
  return `<polyline points="${pts.join(" ")}" fill="none" ${attrs}/>`;
}

export function line(x1: number, y1: number, x2: number, y2: number, attrs: string): string {
  return `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" ${attrs}/>`;
}

export function text(x: number, y: number, content: string, attrs: string): string {
  return `<text x="${fmt(x)}" y="${fmt(y)}" ${FONT} ${attrs}>${esc(content)}</text>`;
}

export function document(width: number, height: number, body: string[]): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
    `<rect width="${width}" height="${height}" fill="white"/>`,
    ...body,
    "</svg>",
    "",
  ].join("\n");
}

/** Bottom time axis with ticks and labels. */
export function timeAxis(x: Scale, y: number, x0: number, x1: number): string[] {
  const out: string[] = [line(x0, y, x1, y, 'stroke="#333" stroke-width="1"')];
  for (const t of niceTicks(x.domain[0], x.domain[1], 8)) {
    const px = x(t);
    out.push(line(px, y, px, y + 4, 'stroke="#333" stroke-width="1"'));
    out.push(text(px, y + 16, label(t), 'font-size="11" text-anchor="middle" fill="#333"'));
  }
  return out;
}
