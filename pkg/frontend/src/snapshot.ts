/**
 * Parsers for the simulator's on-disk formats: snapshot files (CSV with a
 * fixed header, one row per grid node) and the run manifest (JSON).
 *
 * The envelope magnitude shown in figures is always recomputed from the
 * re/im columns; `absConsistencyGap` measures how far the file's own
 * abs_u column deviates, which callers surface as a warning beyond 1e-12.
 */

export const SNAPSHOT_HEADER = "x, re_u, im_u, abs_u, v, w";

export interface SnapshotData {
  x: number[];
  reU: number[];
  imU: number[];
  absU: number[];
  v: number[];
  w: number[];
}

export interface ManifestSnapshot {
  file: string;
  requested_t: number;
  actual_t: number;
  step: number;
}

export interface Manifest {
  format: string;
  version: string;
  termination: string;
  dt: number;
  steps: number;
  snapshots: ManifestSnapshot[];
  config: Record<string, unknown>;
}

// ---------------------------------------------------------------------------
// snapshot files
// ---------------------------------------------------------------------------

export function parseSnapshot(text: string): SnapshotData {
  const lines = text.trim().split("\n");
  if (lines.length < 2) {
    throw new Error("snapshot file has no data rows");
  }
  const header = lines[0].trim();
  if (header !== SNAPSHOT_HEADER) {
    throw new Error(
      `snapshot header mismatch: expected "${SNAPSHOT_HEADER}", got "${header}"`,
    );
  }

  const n = lines.length - 1;
  const data: SnapshotData = {
    x: new Array<number>(n),
    reU: new Array<number>(n),
    imU: new Array<number>(n),
    absU: new Array<number>(n),
    v: new Array<number>(n),
    w: new Array<number>(n),
  };
  for (let i = 0; i < n; i++) {
    const parts = lines[i + 1].split(",");
    if (parts.length !== 6) {
      throw new Error(`snapshot row ${i + 1} has ${parts.length} columns, expected 6`);
    }
    const nums = parts.map(Number);
    if (nums.some((value) => Number.isNaN(value))) {
      throw new Error(`snapshot row ${i + 1} contains a non-numeric entry`);
    }
    [data.x[i], data.reU[i], data.imU[i], data.absU[i], data.v[i], data.w[i]] = nums;
  }
  return data;
}

/** Largest |hypot(re_u, im_u) - abs_u| over the nodes. */
export function absConsistencyGap(snap: SnapshotData): number {
  let worst = 0;
  for (let i = 0; i < snap.x.length; i++) {
    const gap = Math.abs(Math.hypot(snap.reU[i], snap.imU[i]) - snap.absU[i]);
    if (gap > worst) worst = gap;
  }
  return worst;
}

/**
 * All snapshots of one figure must live on one grid: same length and
 * identical x columns.  Throws on mismatch.
 */
export function assertSharedGrid(snaps: SnapshotData[]): void {
  if (snaps.length === 0) return;
  const ref = snaps[0].x;
  for (let s = 1; s < snaps.length; s++) {
    const x = snaps[s].x;
    if (x.length !== ref.length) {
      throw new Error(
        `snapshot ${s} has ${x.length} nodes, expected ${ref.length}`,
      );
    }
    for (let i = 0; i < ref.length; i++) {
      if (x[i] !== ref[i]) {
        throw new Error(
          `snapshot ${s} x column deviates at node ${i}: ${x[i]} vs ${ref[i]}`,
        );
      }
    }
  }
}

// ---------------------------------------------------------------------------
// manifest
// ---------------------------------------------------------------------------

export function parseManifest(text: string): Manifest {
  const raw = JSON.parse(text) as Partial<Manifest>;
  if (raw.format !== "viscowave-run-manifest") {
    throw new Error(`not a run manifest (format = ${String(raw.format)})`);
  }
  if (!Array.isArray(raw.snapshots) || raw.snapshots.length === 0) {
    throw new Error("manifest lists no snapshots");
  }
  for (const entry of raw.snapshots) {
    if (typeof entry.file !== "string" || typeof entry.actual_t !== "number") {
      throw new Error("manifest snapshot entries need 'file' and 'actual_t'");
    }
  }
  return raw as Manifest;
}
