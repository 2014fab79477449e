/**
 * The three figure kinds. Every chart draws purely from the loaded run
 * files; nothing is recomputed from model equations.
 */

import {
  RunDir,
  FigvizError,
  voltageChannels,
  trainByChannel,
} from "./rundir.js";
import {
  Scale,
  document as svgDocument,
  fmt,
  label,
  line,
  linearScale,
  niceTicks,
  polyline,
  text,
  timeAxis,
} from "./svg.js";

export type FigureKind = "trace" | "raster" | "entrainment-panel";

export interface FigureRequest {
  kind: FigureKind;
  runDirs: string[];
  outPath: string;
}

const WIDTH = 960;
const MARGIN_LEFT = 70;
const MARGIN_RIGHT = 24;
const PLOT_W = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;

const PALETTE = ["#1f6feb", "#d1242f", "#1a7f37", "#9a6700", "#8250df", "#cf222e", "#0969da"];

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!(lo < hi)) {
    lo -= 1;
    hi += 1;
  }
  return [lo, hi];
}

/**
 * Min-max decimation: one (min, max) pair per pixel column, so million-row
 * traces render as compact polylines without losing spike extremes.
 */
function decimate(times: number[], values: number[], x: Scale): { xs: number[]; ys: number[] } {
  if (times.length <= 2 * PLOT_W) {
    return { xs: times.map((t) => x(t)), ys: values.slice() };
  }
  const xs: number[] = [];
  const ys: number[] = [];
  let col = -1;
  let lo = 0;
  let hi = 0;
  let loIdx = 0;
  for (let i = 0; i < times.length; i++) {
    const c = Math.floor(x(times[i]));
    if (c !== col) {
      if (col >= 0) {
        xs.push(col, col);
        if (loIdx <= i - 1) ys.push(lo, hi);
        else ys.push(hi, lo);
      }
      col = c;
      lo = hi = values[i];
      loIdx = i;
    } else {
      if (values[i] < lo) {
        lo = values[i];
        loIdx = i;
      }
      if (values[i] > hi) hi = values[i];
    }
  }
  xs.push(col, col);
  ys.push(lo, hi);
  return { xs, ys };
}

function panelTitle(run: RunDir): string {
  const name = run.summary && typeof run.summary["scenario"] === "string"
    ? (run.summary["scenario"] as string)
    : run.name;
  const seed = run.summary && typeof run.summary["seed"] === "number"
    ? ` (seed ${run.summary["seed"]})`
    : "";
  return `${name}${seed}`;
}

// ---------------------------------------------------------------------------
// trace: stacked voltage panels
// ---------------------------------------------------------------------------

const TRACE_PANEL_H = 110;
const PANEL_GAP = 14;
const HEADER_H = 34;
const AXIS_H = 30;

function renderTraceGroup(run: RunDir, yTop: number, body: string[]): number {
  const channels = voltageChannels(run.trace);
  if (channels.length === 0) {
    throw new FigvizError(`${run.dir}: trace.csv has no voltage channels`);
  }
  const [t0, t1] = extent(run.trace.times);
  const x = linearScale(t0, t1, MARGIN_LEFT, MARGIN_LEFT + PLOT_W);
  body.push(text(MARGIN_LEFT, yTop + 16, panelTitle(run), 'font-size="14" font-weight="bold" fill="#111"'));
  let y = yTop + HEADER_H;
  channels.forEach((name, idx) => {
    const values = run.trace.channels.get(name)!;
    const [lo, hi] = extent(values);
    const yScale = linearScale(lo, hi, y + TRACE_PANEL_H - 8, y + 6);
    body.push(
      `<rect x="${MARGIN_LEFT}" y="${fmt(y)}" width="${PLOT_W}" height="${TRACE_PANEL_H}" fill="none" stroke="#ddd"/>`,
    );
    for (const tick of niceTicks(lo, hi, 3)) {
      const py = yScale(tick);
      body.push(line(MARGIN_LEFT - 3, py, MARGIN_LEFT, py, 'stroke="#333" stroke-width="1"'));
      body.push(text(MARGIN_LEFT - 6, py + 3.5, label(tick), 'font-size="10" text-anchor="end" fill="#333"'));
    }
    const { xs, ys } = decimate(run.trace.times, values, x);
    body.push(polyline(xs, ys.map((v) => yScale(v)), `stroke="${PALETTE[idx % PALETTE.length]}" stroke-width="1"`));
    body.push(text(MARGIN_LEFT + 6, y + 14, name, 'font-size="11" fill="#555"'));
    y += TRACE_PANEL_H + 6;
  });
  body.push(...timeAxis(x, y, MARGIN_LEFT, MARGIN_LEFT + PLOT_W));
  body.push(text(MARGIN_LEFT + PLOT_W / 2, y + 28, "time", 'font-size="11" text-anchor="middle" fill="#333"'));
  return y + AXIS_H + PANEL_GAP - yTop;
}

// ---------------------------------------------------------------------------
// raster: one row per neuron, event ticks + low-alpha voltage underlay
// ---------------------------------------------------------------------------

const RASTER_ROW_H = 46;

function renderRasterGroup(run: RunDir, yTop: number, body: string[]): number {
  const channels = voltageChannels(run.trace);
  if (channels.length === 0) {
    throw new FigvizError(`${run.dir}: trace.csv has no voltage channels`);
  }
  const [t0, t1] = extent(run.trace.times);
  const x = linearScale(t0, t1, MARGIN_LEFT, MARGIN_LEFT + PLOT_W);
  body.push(text(MARGIN_LEFT, yTop + 16, panelTitle(run), 'font-size="14" font-weight="bold" fill="#111"'));
  let y = yTop + HEADER_H;
  channels.forEach((name, idx) => {
    const color = PALETTE[idx % PALETTE.length];
    const values = run.trace.channels.get(name)!;
    const [lo, hi] = extent(values);
    const yScale = linearScale(lo, hi, y + RASTER_ROW_H - 4, y + 4);
    body.push(
      `<rect x="${MARGIN_LEFT}" y="${fmt(y)}" width="${PLOT_W}" height="${RASTER_ROW_H}" fill="${idx % 2 ? "#fafafa" : "#ffffff"}" stroke="#eee"/>`,
    );
    const { xs, ys } = decimate(run.trace.times, values, x);
    body.push(
      polyline(xs, ys.map((v) => yScale(v)), `stroke="${color}" stroke-width="0.8" opacity="0.25"`),
    );
    for (const t of trainByChannel(run.events, name)) {
      const px = x(t);
      body.push(line(px, y + 3, px, y + RASTER_ROW_H - 3, `stroke="${color}" stroke-width="1.4"`));
    }
    body.push(text(MARGIN_LEFT - 8, y + RASTER_ROW_H / 2 + 4, name, 'font-size="12" text-anchor="end" fill="#333"'));
    y += RASTER_ROW_H;
  });
  body.push(...timeAxis(x, y, MARGIN_LEFT, MARGIN_LEFT + PLOT_W));
  body.push(text(MARGIN_LEFT + PLOT_W / 2, y + 28, "time", 'font-size="11" text-anchor="middle" fill="#333"'));
  return y + AXIS_H + PANEL_GAP - yTop;
}

// ---------------------------------------------------------------------------
// entrainment-panel: reference vs monitored events, plus the bias current
// ---------------------------------------------------------------------------

const EVENT_ROW_H = 40;
const CURRENT_H = 150;

function monitorChannel(run: RunDir): string {
  const channels = voltageChannels(run.trace);
  return channels.length ? channels[0] : "v1";
}

function renderEntrainmentGroup(run: RunDir, yTop: number, body: string[]): number {
  const refTimes = trainByChannel(run.events, "uref");
  const monitor = monitorChannel(run);
  const monitorTimes = trainByChannel(run.events, monitor);
  const [t0, t1] = extent(run.trace.times);
  const x = linearScale(t0, t1, MARGIN_LEFT, MARGIN_LEFT + PLOT_W);
  body.push(text(MARGIN_LEFT, yTop + 16, panelTitle(run), 'font-size="14" font-weight="bold" fill="#111"'));
  let y = yTop + HEADER_H;
  const rows: Array<[string, number[], string]> = [
    ["reference", refTimes, "#555"],
    [monitor, monitorTimes, PALETTE[0]],
  ];
  for (const [name, times, color] of rows) {
    body.push(
      `<rect x="${MARGIN_LEFT}" y="${fmt(y)}" width="${PLOT_W}" height="${EVENT_ROW_H}" fill="none" stroke="#eee"/>`,
    );
    for (const t of times) {
      const px = x(t);
      body.push(line(px, y + 4, px, y + EVENT_ROW_H - 4, `stroke="${color}" stroke-width="1.2"`));
    }
    body.push(text(MARGIN_LEFT - 8, y + EVENT_ROW_H / 2 + 4, name, 'font-size="12" text-anchor="end" fill="#333"'));
    y += EVENT_ROW_H;
  }
  y += 8;
  const iapply = run.trace.channels.get("ctrl_iapply");
  if (iapply) {
    const [lo, hi] = extent(iapply);
    const yScale = linearScale(lo, hi, y + CURRENT_H - 8, y + 8);
    body.push(
      `<rect x="${MARGIN_LEFT}" y="${fmt(y)}" width="${PLOT_W}" height="${CURRENT_H}" fill="none" stroke="#ddd"/>`,
    );
    for (const tick of niceTicks(lo, hi, 4)) {
      const py = yScale(tick);
      body.push(line(MARGIN_LEFT - 3, py, MARGIN_LEFT, py, 'stroke="#333" stroke-width="1"'));
      body.push(text(MARGIN_LEFT - 6, py + 3.5, label(tick), 'font-size="10" text-anchor="end" fill="#333"'));
    }
    const { xs, ys } = decimate(run.trace.times, iapply, x);
    body.push(polyline(xs, ys.map((v) => yScale(v)), 'stroke="#1a7f37" stroke-width="1.3"'));
    body.push(text(MARGIN_LEFT + 6, y + 16, "applied bias current", 'font-size="11" fill="#1a7f37"'));
    y += CURRENT_H;
  } else {
    body.push(text(MARGIN_LEFT, y + 14, "no controller current channel in this run", 'font-size="11" fill="#888"'));
    y += 24;
  }
  body.push(...timeAxis(x, y, MARGIN_LEFT, MARGIN_LEFT + PLOT_W));
  body.push(text(MARGIN_LEFT + PLOT_W / 2, y + 28, "time", 'font-size="11" text-anchor="middle" fill="#333"'));
  return y + AXIS_H + PANEL_GAP - yTop;
}

// ---------------------------------------------------------------------------
// Entry
// ---------------------------------------------------------------------------

const GROUP_HEIGHT_PROBES: Record<FigureKind, (run: RunDir) => number> = {
  trace: (run) => HEADER_H + voltageChannels(run.trace).length * (TRACE_PANEL_H + 6) + AXIS_H + PANEL_GAP,
  raster: (run) => HEADER_H + voltageChannels(run.trace).length * RASTER_ROW_H + AXIS_H + PANEL_GAP,
  "entrainment-panel": (run) =>
    HEADER_H + 2 * EVENT_ROW_H + 8 + (run.trace.channels.has("ctrl_iapply") ? CURRENT_H : 24) + AXIS_H + PANEL_GAP,
};

const RENDERERS: Record<FigureKind, (run: RunDir, yTop: number, body: string[]) => number> = {
  trace: renderTraceGroup,
  raster: renderRasterGroup,
  "entrainment-panel": renderEntrainmentGroup,
};

export function renderFigure(kind: FigureKind, runs: RunDir[]): string {
  if (runs.length === 0) {
    throw new FigvizError("at least one run directory is required");
  }
  const height = 10 + runs.reduce((acc, run) => acc + GROUP_HEIGHT_PROBES[kind](run), 0);
  const body: string[] = [];
  let y = 10;
  for (const run of runs) {
    y += RENDERERS[kind](run, y, body);
  }
  return svgDocument(WIDTH, height, body);
}
