/** Thin typed client for the session service. */

import {
  CellFlag,
  RawDocument,
  ServiceError,
  ServiceErrorPayload,
  SolutionDocument,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ServiceClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<string> {
    const resp = await this.fetchImpl(this.base + path, init);
    const text = await resp.text();
    if (!resp.ok) {
      let payload: ServiceErrorPayload;
      try {
        payload = JSON.parse(text) as ServiceErrorPayload;
      } catch {
        payload = { error: `HTTP ${resp.status}`, detail: text.slice(0, 400) };
      }
      throw new ServiceError(resp.status, payload);
    }
    return text;
  }

  async createSession(csv: string): Promise<{ sessionId: string }> {
    const text = await this.request("/session", {
      method: "POST",
      headers: { "content-type": "text/csv" },
      body: csv,
    });
    const body = JSON.parse(text) as { session_id: string };
    return { sessionId: body.session_id };
  }

  async getSolution(sessionId: string): Promise<RawDocument> {
    const raw = await this.request(`/session/${sessionId}/solution`);
    return { doc: JSON.parse(raw) as SolutionDocument, raw };
  }

  async updateCells(
    sessionId: string,
    add: CellFlag[],
    remove: CellFlag[],
  ): Promise<CellFlag[]> {
    const raw = await this.request(`/session/${sessionId}/cells`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ add, remove }),
    });
    return (JSON.parse(raw) as { cells: CellFlag[] }).cells;
  }

  async reconstitute(
    sessionId: string,
    order: number,
    negativePolicy: string,
  ): Promise<RawDocument> {
    const raw = await this.request(`/session/${sessionId}/reconstitute`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ order, negative_policy: negativePolicy }),
    });
    return { doc: JSON.parse(raw) as SolutionDocument, raw };
  }

  async supplementary(
    sessionId: string,
    supRows: string[],
    supCols: string[],
  ): Promise<RawDocument> {
    const raw = await this.request(`/session/${sessionId}/supplementary`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ sup_rows: supRows, sup_cols: supCols }),
    });
    return { doc: JSON.parse(raw) as SolutionDocument, raw };
  }

  async deleteSession(sessionId: string): Promise<void> {
    await this.request(`/session/${sessionId}`, { method: "DELETE" });
  }
}
