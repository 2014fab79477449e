/**
 * Hand-written miniature run directories. None of these files came from the
 * simulator, which is exactly the point: figviz must render purely from the
 * file contents.
 */

import { mkdtempSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import path from "path";

function csvRow(values: number[]): string {
  return values.map((v) => v.toPrecision(9)).join(",");
}

export function makeRunDir(
  name: string,
  header: string[],
  rows: number[][],
  trains: Array<{ channel: string; times: number[] }>,
  summary: Record<string, unknown> | null = null,
): string {
  const dir = mkdtempSync(path.join(tmpdir(), `figviz-${name}-`));
  const lines = [["t", ...header].join(",")];
  for (const row of rows) lines.push(csvRow(row));
  writeFileSync(path.join(dir, "trace.csv"), lines.join("\n") + "\n");
  writeFileSync(
    path.join(dir, "events.json"),
    JSON.stringify({ threshold: -40.0, trains }, null, 2),
  );
  if (summary) {
    writeFileSync(path.join(dir, "summary.json"), JSON.stringify(summary, null, 2));
  }
  return dir;
}

/** Spike-ish bump helper for plausible voltage rows. */
function bump(t: number, center: number): number {
  return -65 + 100 * Math.exp(-((t - center) ** 2) / 2);
}

export function fig1Fixture(): string {
  const rows: number[][] = [];
  for (let k = 0; k <= 120; k++) {
    const t = k * 2.5;
    rows.push([t, t >= 100 && t < 150 ? -72 : bump(t, 155)]);
  }
  return makeRunDir(
    "fig1",
    ["v1"],
    rows,
    [{ channel: "v1", times: [154.3] }],
    { scenario: "fig1_rebound", seed: 1 },
  );
}

export function fig2Fixture(): string {
  const rows: number[][] = [];
  for (let k = 0; k <= 200; k++) {
    const t = k * 1.0;
    rows.push([t, bump(t % 40, 10), bump((t + 20) % 40, 10)]);
  }
  return makeRunDir(
    "fig2",
    ["v1", "v2"],
    rows,
    [
      { channel: "v1", times: [9.5, 49.5, 89.5, 129.5, 169.5] },
      { channel: "v2", times: [29.5, 69.5, 109.5, 149.5, 189.5] },
    ],
    { scenario: "fig2_hco", seed: 1 },
  );
}

export function fig4Fixture(): string {
  const rows: number[][] = [];
  for (let k = 0; k <= 250; k++) {
    const t = k * 1.0;
    const row = [t];
    for (let n = 0; n < 5; n++) row.push(bump((t + 50 - 10 * n) % 50, 10));
    rows.push(row);
  }
  const trains = [];
  for (let n = 0; n < 5; n++) {
    const times: number[] = [];
    for (let s = 0; s < 5; s++) times.push(10 * n + 50 * s + 9.5);
    trains.push({ channel: `v${n + 1}`, times: times.filter((t) => t <= 250) });
  }
  return makeRunDir("fig4", ["v1", "v2", "v3", "v4", "v5"], rows, trains, {
    scenario: "fig4_ring_hh",
    seed: 1,
  });
}

export function fig5Fixture(withController = true): string {
  const header = ["v1", "v2", "v3", "v4", "v5"];
  if (withController) header.push("ctrl_e", "ctrl_iapply");
  header.push("uref");
  const rows: number[][] = [];
  for (let k = 0; k <= 300; k++) {
    const t = k * 1.0;
    const row = [t];
    for (let n = 0; n < 5; n++) row.push(bump((t + 45 - 9 * n) % 45, 9));
    if (withController) {
      row.push(0.004 * Math.exp(-t / 120));
      row.push(-0.4 * (1 - Math.exp(-t / 90)));
    }
    row.push(t % 48 < 2 ? 0 : -65);
    rows.push(row);
  }
  const trains = [];
  for (let n = 0; n < 5; n++) {
    const times: number[] = [];
    for (let s = 0; s < 7; s++) times.push(9 * n + 45 * s + 8.5);
    trains.push({ channel: `v${n + 1}`, times: times.filter((t) => t <= 300) });
  }
  const ref: number[] = [];
  for (let s = 0; s * 48 <= 300; s++) ref.push(48 * s);
  trains.push({ channel: "uref", times: ref });
  return makeRunDir("fig5", header, rows, trains, {
    scenario: withController ? "fig5c_adaptive" : "fig5b_entrained",
    seed: 2,
  });
}

export function emptyEventsFixture(): string {
  const rows: number[][] = [];
  for (let k = 0; k <= 50; k++) rows.push([k * 1.0, -65, -64.5]);
  return makeRunDir("quiet", ["v1", "v2"], rows, [
    { channel: "v1", times: [] },
    { channel: "v2", times: [] },
  ]);
}

export function corruptedCsvFixture(): string {
  const dir = fig2Fixture();
  const bad = "t,v1,v2\n0,-65,-65\n1,not_a_number,-65\n";
  writeFileSync(path.join(dir, "trace.csv"), bad);
  return dir;
}
