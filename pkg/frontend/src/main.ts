/** DOM wiring for the flag-and-rerun workflow. */

import { ServiceClient } from "./api.js";
import { buildMap, buildSparkline } from "./plot.js";
import { renderBanners, renderFlagList, renderReport, renderSummary } from "./panels.js";
import { AppStore, PlotKind, Mode } from "./state.js";

const store = new AppStore(new ServiceClient(""));

const el = (id: string) => document.getElementById(id) as HTMLElement;

function download(name: string, text: string, type: string): void {
  const url = URL.createObjectURL(new Blob([text], { type }));
  const a = document.createElement("a");
  a.href = url;
  a.download = name;
  a.click();
  URL.revokeObjectURL(url);
}

function render(): void {
  const s = store.state;
  el("banners").innerHTML = renderBanners(s.banners);
  el("run").toggleAttribute("disabled", s.busy || !s.sessionId);
  el("busy").textContent = s.busy ? "computing..." : "";
  el("flags").innerHTML = renderFlagList(s.flagged);

  const mapOptions = {
    kind: s.plotKind,
    dims: s.dims,
    scaleByMass: s.scaleByMass,
    highlight: s.selection,
  };
  if (s.original) {
    el("original-map").innerHTML = buildMap(s.original.doc, mapOptions);
    el("original-summary").innerHTML = renderSummary(s.original.doc, "Original");
    el("report").innerHTML = renderReport(s.original.doc, s.selection, s.flagged);
  }
  if (s.adjusted) {
    el("adjusted-map").innerHTML = buildMap(s.adjusted.doc, mapOptions);
    el("adjusted-summary").innerHTML = renderSummary(s.adjusted.doc, "Adjusted");
    const trace = s.adjusted.doc.reconstitution?.trace ?? [];
    el("trace").innerHTML = trace.length
      ? `<span>max change per iteration</span>${buildSparkline(trace)}`
      : "";
  } else {
    el("adjusted-map").innerHTML = "";
    el("adjusted-summary").innerHTML = "";
    el("trace").innerHTML = "";
  }
}

function wire(): void {
  store.subscribe(render);

  (el("csv-file") as HTMLInputElement).addEventListener("change", async (ev) => {
    const input = ev.target as HTMLInputElement;
    const file = input.files?.[0];
    if (file) void store.upload(await file.text());
  });

  el("order").addEventListener("change", (ev) => {
    store.setOrder(Number((ev.target as HTMLSelectElement).value));
  });
  el("policy").addEventListener("change", (ev) => {
    store.setNegativePolicy((ev.target as HTMLSelectElement).value);
  });
  el("mode").addEventListener("change", (ev) => {
    store.setMode((ev.target as HTMLSelectElement).value as Mode);
  });
  el("plot-kind").addEventListener("change", (ev) => {
    store.setPlotKind((ev.target as HTMLSelectElement).value as PlotKind);
  });
  el("dims").addEventListener("change", (ev) => {
    const [a, b] = (ev.target as HTMLSelectElement).value.split(",").map(Number);
    store.setDims(a, b);
  });
  el("mass-scale").addEventListener("change", (ev) => {
    store.setScaleByMass((ev.target as HTMLInputElement).checked);
  });
  el("run").addEventListener("click", () => void store.run());

  el("export-json").addEventListener("click", () => {
    const raw = store.exportJson(store.state.adjusted ? "adjusted" : "original");
    if (raw) download("solution.json", raw, "application/json");
  });
  el("export-svg").addEventListener("click", () => {
    const s = store.state;
    const held = s.adjusted ?? s.original;
    if (!held) return;
    const svg = buildMap(held.doc, {
      kind: s.plotKind,
      dims: s.dims,
      scaleByMass: s.scaleByMass,
    });
    download("map.svg", svg, "image/svg+xml");
  });

  document.body.addEventListener("click", (ev) => {
    const target = ev.target as HTMLElement;
    const dismiss = target.closest<HTMLElement>(".dismiss");
    if (dismiss) {
      store.dismissBanner(Number(dismiss.dataset.banner));
      return;
    }
    const flagBtn = target.closest<HTMLElement>("button.flag");
    if (flagBtn) {
      const { row, col } = flagBtn.dataset;
      if (row && col) {
        if (store.state.flagged.some((f) => f.row === row && f.col === col)) {
          store.unflagCell(row, col);
        } else {
          store.flagCell(row, col);
        }
      }
      return;
    }
    const unflag = target.closest<HTMLElement>("button.unflag");
    if (unflag && unflag.dataset.row && unflag.dataset.col) {
      store.unflagCell(unflag.dataset.row, unflag.dataset.col);
      return;
    }
    // clicking a map glyph or report point row selects that point
    const glyph = target.closest<Element>("[data-axis][data-label]");
    if (glyph) {
      const axis = glyph.getAttribute("data-axis")!.replace("sup-", "") as "row" | "col";
      const label = glyph.getAttribute("data-label")!;
      const current = store.state.selection;
      store.selectPoint(
        current && current.axis === axis && current.label === label
          ? null
          : { axis, label },
      );
    }
  });

  render();
}

wire();
