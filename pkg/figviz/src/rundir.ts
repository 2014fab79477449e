/**
 * Reading and validating the files of a simulator run directory.
 *
 * figviz never recomputes dynamics: everything it draws comes from
 * trace.csv, events.json, and (optionally) summary.json.
 */

import { readFileSync } from "fs";
import path from "path";

export class FigvizError extends Error {}

export interface TraceData {
  times: number[];
  channels: Map<string, number[]>;
}

export interface EventTrainData {
  channel: string;
  times: number[];
}

export interface EventsData {
  threshold: number;
  trains: EventTrainData[];
}

export interface RunDir {
  dir: string;
  name: string;
  trace: TraceData;
  events: EventsData;
  summary: Record<string, unknown> | null;
}

// ---------------------------------------------------------------------------
// trace.csv
// ---------------------------------------------------------------------------

export function parseTraceCsv(text: string, source: string): TraceData {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length < 2) {
    throw new FigvizError(`${source}: trace has no data rows`);
  }
  const header = lines[0].split(",");
  if (header[0] !== "t" || header.length < 2) {
    throw new FigvizError(`${source}: malformed trace header ${JSON.stringify(lines[0])}`);
  }
  const times: number[] = [];
  const columns: number[][] = header.slice(1).map(() => []);
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== header.length) {
      throw new FigvizError(`${source}: row ${i + 1} has ${cells.length} cells, expected ${header.length}`);
    }
    for (let c = 0; c < cells.length; c++) {
      const value = Number(cells[c]);
      if (!Number.isFinite(value)) {
        throw new FigvizError(`${source}: row ${i + 1}, column ${header[c]}: not a number (${cells[c]})`);
      }
      if (c === 0) times.push(value);
      else columns[c - 1].push(value);
    }
  }
  const channels = new Map<string, number[]>();
  header.slice(1).forEach((name, i) => channels.set(name, columns[i]));
  return { times, channels };
}

// ---------------------------------------------------------------------------
// events.json
// ---------------------------------------------------------------------------

function parseEvents(text: string, source: string): EventsData {
  let doc: unknown;
  try {
    doc = JSON.parse(text);
  } catch (err) {
    throw new FigvizError(`${source}: not valid JSON (${(err as Error).message})`);
  }
  const obj = doc as { threshold?: unknown; trains?: unknown };
  if (typeof obj.threshold !== "number" || !Array.isArray(obj.trains)) {
    throw new FigvizError(`${source}: expected {threshold, trains[]}`);
  }
  const trains: EventTrainData[] = obj.trains.map((raw, i) => {
    const t = raw as { channel?: unknown; times?: unknown };
    if (typeof t.channel !== "string" || !Array.isArray(t.times)) {
      throw new FigvizError(`${source}: train ${i} must have {channel, times[]}`);
    }
    const times = t.times.map((x) => {
      if (typeof x !== "number" || !Number.isFinite(x)) {
        throw new FigvizError(`${source}: train ${t.channel} has a non-numeric time`);
      }
      return x;
    });
    return { channel: t.channel, times };
  });
  return { threshold: obj.threshold, trains };
}

// ---------------------------------------------------------------------------
// Directory loader
// ---------------------------------------------------------------------------

function readText(dir: string, file: string, required: boolean): string | null {
  const full = path.join(dir, file);
  try {
    return readFileSync(full, "utf-8");
  } catch {
    if (required) throw new FigvizError(`missing input file: ${full}`);
    return null;
  }
}

export function loadRunDir(dir: string): RunDir {
  const traceText = readText(dir, "trace.csv", true)!;
  const eventsText = readText(dir, "events.json", true)!;
  const summaryText = readText(dir, "summary.json", false);
  let summary: Record<string, unknown> | null = null;
  if (summaryText !== null) {
    try {
      summary = JSON.parse(summaryText) as Record<string, unknown>;
    } catch (err) {
      throw new FigvizError(`${path.join(dir, "summary.json")}: not valid JSON (${(err as Error).message})`);
    }
  }
  return {
    dir,
    name: path.basename(path.resolve(dir)),
    trace: parseTraceCsv(traceText, path.join(dir, "trace.csv")),
    events: parseEvents(eventsText, path.join(dir, "events.json")),
    summary,
  };
}

/** Voltage channels in neuron order (v1, v2, ...). */
export function voltageChannels(trace: TraceData): string[] {
  return [...trace.channels.keys()]
    .filter((n) => /^v\d+$/.test(n))
    .sort((a, b) => Number(a.slice(1)) - Number(b.slice(1)));
}

export function trainByChannel(events: EventsData, channel: string): number[] {
  const train = events.trains.find((t) => t.channel === channel);
  return train ? train.times : [];
}
