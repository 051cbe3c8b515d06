/**
 * Reader for the solver's binary field snapshots.
 *
 * Layout: one UTF-8 header line of space-separated `key:value` pairs
 * terminated by '\n', then row-major float64 little-endian values of an
 * N_lat x M_lon grid.  Required keys: field, units, grid, J, N_lat, M_lon,
 * time_s.  Unknown keys are preserved in the metadata map.
 */

import { readFileSync } from "node:fs";

export interface Snapshot {
  meta: Record<string, string>;
  field: string;
  units: string;
  nLat: number;
  mLon: number;
  timeS: number;
  /** values[row * mLon + col], row 0 at the north pole side */
  values: Float64Array;
}

export function parseSnapshot(buf: Buffer): Snapshot {
  const nl = buf.indexOf(0x0a);
  if (nl < 0) {
    throw new Error("snapshot has no header line");
  }
  const header = buf.subarray(0, nl).toString("utf-8").trim();
  const meta: Record<string, string> = {};
  for (const tok of header.split(/\s+/)) {
    const i = tok.indexOf(":");
    if (i <= 0) {
      throw new Error(`malformed snapshot header token '${tok}'`);
    }
    meta[tok.slice(0, i)] = tok.slice(i + 1);
  }
  for (const key of ["field", "units", "grid", "J", "N_lat", "M_lon", "time_s"]) {
    if (!(key in meta)) {
      throw new Error(`snapshot header missing '${key}'`);
    }
  }
  const nLat = Number(meta["N_lat"]);
  const mLon = Number(meta["M_lon"]);
  const timeS = Number(meta["time_s"]);
  if (!Number.isInteger(nLat) || !Number.isInteger(mLon) || !Number.isFinite(timeS)) {
    throw new Error("snapshot header has non-numeric dimensions");
  }
  const payload = buf.subarray(nl + 1);
  if (payload.byteLength !== nLat * mLon * 8) {
    throw new Error(
      `snapshot payload is ${payload.byteLength} bytes, expected ${nLat * mLon * 8}`,
    );
  }
  // copy to guarantee alignment for the Float64Array view
  const aligned = new ArrayBuffer(payload.byteLength);
  new Uint8Array(aligned).set(payload);
  return {
    meta,
    field: meta["field"],
    units: meta["units"],
    nLat,
    mLon,
    timeS,
    values: new Float64Array(aligned),
  };
}

export function readSnapshot(path: string): Snapshot {
  return parseSnapshot(readFileSync(path));
}
