/** SVG map and sparkline builders.
 *
 * Pure plotting transforms over solution documents: pick the coordinate
 * columns, scale to pixels, collapse duplicate-profile groups (membership
 * comes from the document's diagnostics), and emit deterministic SVG text.
 */

import { PlotKind } from "./state.js";
import { SolutionDocument } from "./types.js";

const SIZE = 460;
const PAD = 40;
const ROW_COLOR = "#1f77b4";
const COL_COLOR = "#d62728";
const SUP_COLOR = "#7f7f7f";

interface Glyph {
  x: number;
  y: number;
  label: string;
  members: string[];
  axis: "row" | "col" | "sup-row" | "sup-col";
  mass: number;
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function coordinates(doc: SolutionDocument, kind: PlotKind): {
  rows: number[][];
  cols: number[][];
} {
  switch (kind) {
    case "asymmetric_row":
      return { rows: doc.f, cols: doc.gamma };
    case "asymmetric_col":
      return { rows: doc.phi, cols: doc.g };
    default:
      return { rows: doc.f, cols: doc.g };
  }
}

/** Representative index per duplicate-profile position: the first member of
 * each group carries the glyph, later members are skipped. */
function groupLeaders(
  labels: string[],
  groups: { label: string; members: string[] }[] | undefined,
): Map<string, string[]> {
  const leaders = new Map<string, string[]>(labels.map((l) => [l, [l]]));
  for (const group of groups ?? []) {
    leaders.set(group.label, group.members);
    for (const member of group.members) {
      if (member !== group.label) leaders.delete(member);
    }
  }
  return leaders;
}

function pick(coords: number[][] | number[], index: number, dims: [number, number]): [number, number] {
  const vec = Array.isArray(coords[0])
    ? (coords as number[][])[index]
    : (coords as number[]);
  return [vec[dims[0] - 1] ?? 0, vec[dims[1] - 1] ?? 0];
}

export interface MapOptions {
  kind?: PlotKind;
  dims?: [number, number];
  scaleByMass?: boolean;
  highlight?: { axis: "row" | "col"; label: string } | null;
}

export function buildMap(doc: SolutionDocument, options: MapOptions = {}): string {
  const kind = options.kind ?? "symmetric";
  const dims = options.dims ?? ([1, 2] as [number, number]);
  const { rows, cols } = coordinates(doc, kind);
  const glyphs: Glyph[] = [];

  const rowLeaders = groupLeaders(doc.labels.rows, doc.diagnostics?.profile_groups.rows);
  doc.labels.rows.forEach((label, i) => {
    const members = rowLeaders.get(label);
    if (!members) return;
    const [x, y] = pick(rows, i, dims);
    glyphs.push({ x, y, label, members, axis: "row", mass: doc.masses.rows[i] });
  });
  const colLeaders = groupLeaders(doc.labels.cols, doc.diagnostics?.profile_groups.cols);
  doc.labels.cols.forEach((label, j) => {
    const members = colLeaders.get(label);
    if (!members) return;
    const [x, y] = pick(cols, j, dims);
    glyphs.push({ x, y, label, members, axis: "col", mass: doc.masses.cols[j] });
  });
  if (doc.supplementary) {
    for (const [label, vec] of Object.entries(doc.supplementary.row_coords)) {
      const [x, y] = pick(vec, 0, dims);
      glyphs.push({ x, y, label, members: [label], axis: "sup-row", mass: 0 });
    }
    for (const [label, vec] of Object.entries(doc.supplementary.col_coords)) {
      const [x, y] = pick(vec, 0, dims);
      glyphs.push({ x, y, label, members: [label], axis: "sup-col", mass: 0 });
    }
  }

  let lo = 0;
  let hi = 0;
  for (const glyph of glyphs) {
    lo = Math.min(lo, glyph.x, glyph.y);
    hi = Math.max(hi, glyph.x, glyph.y);
  }
  const span = hi - lo || 1;
  const pad = 0.08 * span;
  const scale = (SIZE - 2 * PAD) / (span + 2 * pad);
  const sx = (v: number) => PAD + (v - lo + pad) * scale;
  const sy = (v: number) => SIZE - PAD - (v - lo + pad) * scale;
  const fmt = (v: number) => v.toFixed(2);
  const share = (dim: number) =>
    doc.inertia_proportions[dim - 1] === undefined
      ? "0.0"
      : doc.inertia_proportions[dim - 1].toFixed(1);

  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${SIZE} ${SIZE}" ` +
      `class="ca-map" font-family="system-ui, sans-serif">`,
    `<rect width="${SIZE}" height="${SIZE}" fill="white"/>`,
    `<line x1="${PAD}" y1="${fmt(sy(0))}" x2="${SIZE - PAD}" y2="${fmt(sy(0))}" stroke="#ccc"/>`,
    `<line x1="${fmt(sx(0))}" y1="${PAD}" x2="${fmt(sx(0))}" y2="${SIZE - PAD}" stroke="#ccc"/>`,
    `<text x="${SIZE / 2}" y="${SIZE - 8}" text-anchor="middle" font-size="12">` +
      `Dim ${dims[0]} (${share(dims[0])}%)</text>`,
    `<text x="12" y="${SIZE / 2}" text-anchor="middle" font-size="12" ` +
      `transform="rotate(-90 12 ${SIZE / 2})">Dim ${dims[1]} (${share(dims[1])}%)</text>`,
  ];

  for (const glyph of glyphs) {
    const px = sx(glyph.x);
    const py = sy(glyph.y);
    const sup = glyph.axis.startsWith("sup");
    const color = sup ? SUP_COLOR : glyph.axis === "row" ? ROW_COLOR : COL_COLOR;
    const hl =
      options.highlight &&
      glyph.axis.endsWith(options.highlight.axis) &&
      glyph.members.includes(options.highlight.label);
    const radius = options.scaleByMass ? 2 + 14 * Math.sqrt(glyph.mass) : 3.2;
    const title = `<title>${esc(glyph.members.join(", "))}</title>`;
    const common =
      `data-axis="${glyph.axis}" data-label="${esc(glyph.label)}" ` +
      `fill="${color}"${sup ? ' fill-opacity="0.55"' : ""}` +
      `${hl ? ' stroke="#111" stroke-width="2"' : ""}`;
    if (glyph.axis.endsWith("row")) {
      parts.push(
        `<circle cx="${fmt(px)}" cy="${fmt(py)}" r="${fmt(radius)}" ${common}>${title}</circle>`,
      );
    } else {
      const r = radius;
      parts.push(
        `<rect x="${fmt(px - r)}" y="${fmt(py - r)}" width="${fmt(2 * r)}" ` +
          `height="${fmt(2 * r)}" ${common}>${title}</rect>`,
      );
    }
    parts.push(
      `<text x="${fmt(px + radius + 2)}" y="${fmt(py - radius - 1)}" ` +
        `font-size="10" fill="${color}">${esc(glyph.label)}</text>`,
    );
  }
  parts.push("</svg>");
  return parts.join("\n");
}

/** Tiny log-scale sparkline of the iteration's max-change trace. */
export function buildSparkline(trace: number[], width = 160, height = 36): string {
  if (!trace.length) return "";
  const logs = trace.map((v) => Math.log10(Math.max(v, 1e-16)));
  const lo = Math.min(...logs);
  const hi = Math.max(...logs);
  const span = hi - lo || 1;
  const step = trace.length > 1 ? width / (trace.length - 1) : 0;
  const points = logs
    .map((v, i) => `${(i * step).toFixed(1)},${(height - ((v - lo) / span) * height).toFixed(1)}`)
    .join(" ");
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" class="sparkline">` +
    `<polyline points="${points}" fill="none" stroke="#1f77b4" stroke-width="1.5"/></svg>`
  );
}
