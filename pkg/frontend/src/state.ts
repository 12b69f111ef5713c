/** Workflow state machine, independent of the DOM.
 *
 * Holds the original and adjusted solution documents side by side, the
 * flagged cell set, and view options. All numbers shown anywhere come from
 * the service documents; exports reuse the exact response bytes. At most one
 * computation request is in flight at a time.
 */

import { ServiceClient } from "./api.js";
import { CellFlag, RawDocument, ServiceError } from "./types.js";

export type Mode = "reconstitution" | "supplementary";
export type PlotKind = "symmetric" | "asymmetric_row" | "asymmetric_col";

export interface Banner {
  kind: "error" | "advisory";
  title: string;
  detail: string;
}

export interface Selection {
  axis: "row" | "col";
  label: string;
}

export interface AppState {
  sessionId: string | null;
  original: RawDocument | null;
  adjusted: RawDocument | null;
  flagged: CellFlag[];
  order: number;
  negativePolicy: string;
  mode: Mode;
  plotKind: PlotKind;
  dims: [number, number];
  scaleByMass: boolean;
  selection: Selection | null;
  banners: Banner[];
  busy: boolean;
}

const INITIAL: AppState = {
  sessionId: null,
  original: null,
  adjusted: null,
  flagged: [],
  order: 2,
  negativePolicy: "fallback_to_order_0",
  mode: "reconstitution",
  plotKind: "symmetric",
  dims: [1, 2],
  scaleByMass: false,
  selection: null,
  banners: [],
  busy: false,
};

const sameCell = (a: CellFlag, b: CellFlag) => a.row === b.row && a.col === b.col;

export class AppStore {
  state: AppState = { ...INITIAL };
  private syncedFlags: CellFlag[] = [];
  private listeners: (() => void)[] = [];

  constructor(private readonly client: ServiceClient) {}

  subscribe(listener: () => void): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener();
  }

  private patch(changes: Partial<AppState>): void {
    this.state = { ...this.state, ...changes };
    this.emit();
  }

  /** Serialize computation requests: returns false when one is running. */
  private async compute(work: () => Promise<void>): Promise<boolean> {
    if (this.state.busy) return false;
    this.patch({ busy: true });
    try {
      await work();
    } catch (err) {
      this.pushError(err);
    } finally {
      this.patch({ busy: false });
    }
    return true;
  }

  private pushError(err: unknown): void {
    const banner: Banner =
      err instanceof ServiceError
        ? {
            kind: "error",
            title: err.payload.error,
            detail: JSON.stringify(err.payload),
          }
        : { kind: "error", title: "Error", detail: String(err) };
    this.patch({ banners: [...this.state.banners, banner] });
  }

  dismissBanner(index: number): void {
    this.patch({ banners: this.state.banners.filter((_, i) => i !== index) });
  }

  async upload(csv: string): Promise<boolean> {
    return this.compute(async () => {
      const { sessionId } = await this.client.createSession(csv);
      const original = await this.client.getSolution(sessionId);
      this.syncedFlags = [];
      this.patch({
        sessionId,
        original,
        adjusted: null,
        flagged: [],
        selection: null,
        banners: [],
      });
    });
  }

  flagCell(row: string, col: string): void {
    const flag = { row, col };
    if (this.state.flagged.some((f) => sameCell(f, flag))) return;
    this.patch({ flagged: [...this.state.flagged, flag] });
  }

  unflagCell(row: string, col: string): void {
    this.patch({
      flagged: this.state.flagged.filter((f) => !sameCell(f, { row, col })),
    });
  }

  clearFlags(): void {
    this.patch({ flagged: [] });
  }

  setOrder(order: number): void {
    this.patch({ order });
  }

  setNegativePolicy(policy: string): void {
    this.patch({ negativePolicy: policy });
  }

  setMode(mode: Mode): void {
    this.patch({ mode });
  }

  setPlotKind(kind: PlotKind): void {
    this.patch({ plotKind: kind });
  }

  setDims(a: number, b: number): void {
    this.patch({ dims: [a, b] });
  }

  setScaleByMass(on: boolean): void {
    this.patch({ scaleByMass: on });
  }

  selectPoint(selection: Selection | null): void {
    this.patch({ selection });
  }

  /** Run the active outlier treatment on the current flags. */
  async run(): Promise<boolean> {
    const { sessionId, mode } = this.state;
    if (!sessionId) return false;
    return this.compute(async () => {
      let adjusted: RawDocument;
      if (mode === "reconstitution") {
        const add = this.state.flagged.filter(
          (f) => !this.syncedFlags.some((s) => sameCell(s, f)),
        );
        const remove = this.syncedFlags.filter(
          (s) => !this.state.flagged.some((f) => sameCell(f, s)),
        );
        if (add.length || remove.length) {
          this.syncedFlags = await this.client.updateCells(sessionId, add, remove);
        }
        adjusted = await this.client.reconstitute(
          sessionId,
          this.state.order,
          this.state.negativePolicy,
        );
        const advisories = adjusted.doc.reconstitution?.advisories ?? [];
        if (advisories.length) {
          this.patch({
            banners: [
              ...this.state.banners,
              ...advisories.map((detail) => ({
                kind: "advisory" as const,
                title: "Reconstitution advisory",
                detail,
              })),
            ],
          });
        }
      } else {
        const supRows = [...new Set(this.state.flagged.map((f) => f.row))];
        const supCols = [...new Set(this.state.flagged.map((f) => f.col))];
        adjusted = await this.client.supplementary(sessionId, supRows, supCols);
      }
      this.patch({ adjusted });
    });
  }

  /** Exact bytes of the chosen document, as received from the service. */
  exportJson(which: "original" | "adjusted"): string | null {
    const held = which === "original" ? this.state.original : this.state.adjusted;
    return held ? held.raw : null;
  }
}

/** Share of one 1-based dimension as displayed, e.g. "15.8" (the service
 * already rounds to one decimal). */
export function dimShareText(doc: { inertia_proportions: number[] }, dim: number): string {
  const value = doc.inertia_proportions[dim - 1];
  return value === undefined ? "-" : value.toFixed(1);
}
