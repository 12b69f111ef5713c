/** HTML fragment builders for the side panels (pure string templating). */

import { dimShareText } from "./state.js";
import { Banner, Selection } from "./state.js";
import { CellFlag, SolutionDocument } from "./types.js";

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function renderBanners(banners: Banner[]): string {
  return banners
    .map(
      (banner, i) =>
        `<div class="banner ${banner.kind}">` +
        `<strong>${esc(banner.title)}</strong> ${esc(banner.detail)}` +
        `<button class="dismiss" data-banner="${i}">&times;</button></div>`,
    )
    .join("");
}

export function renderSummary(doc: SolutionDocument, heading: string): string {
  const sigma = doc.sigma
    .slice(0, 4)
    .map((v, k) => `${v.toFixed(3)} (${dimShareText(doc, k + 1)}%)`)
    .join(", ");
  let extra = "";
  if (doc.reconstitution) {
    const rec = doc.reconstitution;
    const cells = rec.cells
      .map((c) => `(${esc(c.row)}, ${esc(c.col)}) &rarr; ${c.value.toFixed(4)}`)
      .join("; ");
    extra =
      `<div class="recon-info">order ${rec.order_used}` +
      (rec.fallback_applied ? " (fallback)" : "") +
      `, ${rec.iterations_used} iterations; ${cells}</div>`;
  }
  if (doc.supplementary) {
    const sup = doc.supplementary;
    extra =
      `<div class="recon-info">supplementary rows [${sup.sup_rows.map(esc).join(", ")}]` +
      ` cols [${sup.sup_cols.map(esc).join(", ")}];` +
      ` reduced ${sup.reduced_shape[0]}&times;${sup.reduced_shape[1]}</div>`;
  }
  return `<h3>${esc(heading)}</h3><div class="sigma">&sigma;: ${sigma}</div>${extra}`;
}

/** Ranked diagnostics with the current selection's cells highlighted. */
export function renderReport(
  doc: SolutionDocument,
  selection: Selection | null,
  flagged: CellFlag[],
): string {
  const diag = doc.diagnostics;
  if (!diag) return "<p>No diagnostics in this document.</p>";
  const dims = Object.keys(diag.row_points).map(Number).sort((a, b) => a - b);
  const pointRows = (axis: "row" | "col") =>
    dims
      .map((dim) => {
        const recs = (axis === "row" ? diag.row_points : diag.col_points)[String(dim)] ?? [];
        return recs
          .slice(0, 3)
          .map((rec) => {
            const selected =
              selection && selection.axis === axis && selection.label === rec.label;
            return (
              `<tr class="point${rec.flagged ? " over" : ""}${selected ? " selected" : ""}"` +
              ` data-axis="${axis}" data-label="${esc(rec.label)}">` +
              `<td>${dim}</td><td>${esc(rec.label)}</td>` +
              `<td>${rec.contribution_pct.toFixed(1)}%</td></tr>`
            );
          })
          .join("");
      })
      .join("");

  const isFlagged = (row: string, col: string) =>
    flagged.some((f) => f.row === row && f.col === col);
  const touchesSelection = (rowMembers: string[], colMembers: string[]) =>
    selection !== null &&
    (selection.axis === "row"
      ? rowMembers.includes(selection.label)
      : colMembers.includes(selection.label));

  const cellRows = diag.grouped_cells
    .map((cell) => {
      const hl = touchesSelection(cell.row_members, cell.col_members);
      const rows = cell.row_members;
      const cols = cell.col_members;
      const buttons = rows
        .flatMap((r) =>
          cols.map((c) => {
            const on = isFlagged(r, c);
            return (
              `<button class="flag${on ? " on" : ""}" data-row="${esc(r)}"` +
              ` data-col="${esc(c)}">${on ? "unflag" : "flag"} ${esc(r)}:${esc(c)}</button>`
            );
          }),
        )
        .join(" ");
      return (
        `<tr class="cell${cell.flagged ? " over" : ""}${hl ? " selected" : ""}">` +
        `<td>${esc(rows.join("/"))}</td><td>${esc(cols.join("/"))}</td>` +
        `<td>${cell.share_pct.toFixed(1)}%</td><td>${buttons}</td></tr>`
      );
    })
    .join("");

  return (
    `<h3>Points by dimension contribution</h3>` +
    `<table class="points"><thead><tr><th>dim</th><th>row</th><th>contrib</th></tr></thead>` +
    `<tbody>${pointRows("row")}</tbody></table>` +
    `<table class="points"><thead><tr><th>dim</th><th>column</th><th>contrib</th></tr></thead>` +
    `<tbody>${pointRows("col")}</tbody></table>` +
    `<h3>Cells by share of total inertia</h3>` +
    `<table class="cells"><thead><tr><th>row</th><th>column</th><th>share</th><th></th></tr>` +
    `</thead><tbody>${cellRows}</tbody></table>`
  );
}

export function renderFlagList(flagged: CellFlag[]): string {
  if (!flagged.length) return "<em>no cells flagged</em>";
  return flagged
    .map(
      (f) =>
        `<span class="chip">${esc(f.row)}:${esc(f.col)}` +
        `<button class="unflag" data-row="${esc(f.row)}" data-col="${esc(f.col)}">&times;</button></span>`,
    )
    .join(" ");
}
