/** Shapes of the service's JSON documents. The UI never computes analysis
 * numbers itself; everything displayed is read from these documents. */

export interface PointDiag {
  label: string;
  members: string[];
  mass: number;
  distance: number;
  contribution_pct: number;
  flagged: boolean;
}

export interface CellDiag {
  row: string;
  col: string;
  row_members: string[];
  col_members: string[];
  share_pct: number;
  flagged: boolean;
}

export interface GroupDiag {
  label: string;
  members: string[];
  mass: number;
  distance: number;
  contributions_pct: number[];
  flagged_dims: number[];
}

export interface Diagnostics {
  top_n: number;
  point_threshold_pct: number;
  cell_threshold_pct: number;
  row_points: Record<string, PointDiag[]>;
  col_points: Record<string, PointDiag[]>;
  cells: CellDiag[];
  grouped_cells: CellDiag[];
  profile_groups: { rows: GroupDiag[]; cols: GroupDiag[] };
}

export interface ReconstitutionBlock {
  cells: { row: string; col: string; value: number }[];
  order: number;
  order_used: number;
  converged: boolean;
  iterations_used: number;
  trace: number[];
  fallback_applied: boolean;
  advisories: string[];
}

export interface SupplementaryBlock {
  sup_rows: string[];
  sup_cols: string[];
  row_coords: Record<string, number[]>;
  col_coords: Record<string, number[]>;
  reduced_shape: [number, number];
}

export interface SolutionDocument {
  schema: number;
  labels: { rows: string[]; cols: string[] };
  masses: { rows: number[]; cols: number[] };
  sigma: number[];
  inertia_proportions: number[];
  total_inertia: number;
  rank: number;
  phi: number[][];
  gamma: number[][];
  f: number[][];
  g: number[][];
  diagnostics?: Diagnostics;
  reconstitution?: ReconstitutionBlock;
  supplementary?: SupplementaryBlock;
}

/** A parsed document plus the exact response text it came from; exports must
 * reuse the raw text so they stay byte-identical to the service response. */
export interface RawDocument {
  doc: SolutionDocument;
  raw: string;
}

export interface ServiceErrorPayload {
  error: string;
  detail: string;
  [key: string]: unknown;
}

export class ServiceError extends Error {
  constructor(public status: number, public payload: ServiceErrorPayload) {
    super(`${payload.error}: ${payload.detail}`);
  }
}

export interface CellFlag {
  row: string;
  col: string;
}
