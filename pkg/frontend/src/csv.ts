// CSV ingestion for the two primary schemas. The renderer never recomputes
// physics: everything drawn comes straight out of these files.

import * as fs from 'fs';

export const SWEEP_HEADER = ['variant', 'M', 'lambda', 'zeta', 'J0tau', 'Qbar', 'B'];
export const SIM_HEADER = [
  'variant', 'M', 'epsilon', 'zeta', 'deviation', 'bound',
  'bound_minus_deviation', 'ok',
];

export interface SweepRow {
  variant: 'generators' | 'group' | 'strong';
  m: number;
  lambda: number;
  zeta: number;
  j0tau: number;
  qbar: number;
  b: number;
}

export interface SimRow {
  variant: string;
  m: number;
  epsilon: string;
  zeta: number;
  deviation: number;
  bound: number | null;
}

export class DataError extends Error {}

function splitCsv(text: string): string[][] {
  // the emitting side never quotes fields, so plain splitting is exact
  return text
    .split('\n')
    .filter((line) => line.length > 0)
    .map((line) => line.split(','));
}

function checkHeader(got: string[], want: string[], path: string): void {
  if (got.length !== want.length || got.some((c, i) => c !== want[i])) {
    throw new DataError(
      `${path}: expected header ${want.join(',')}, got ${got.join(',')}`,
    );
  }
}

function num(field: string, where: string): number {
  const value = Number(field);
  if (!Number.isFinite(value)) {
    throw new DataError(`${where}: not a finite number: ${field}`);
  }
  return value;
}

export function readSweepCsv(path: string): SweepRow[] {
  const lines = splitCsv(fs.readFileSync(path, 'utf8'));
  if (lines.length === 0) throw new DataError(`${path}: empty file`);
  checkHeader(lines[0], SWEEP_HEADER, path);
  const body = lines.slice(1);
  if (body.length === 0) throw new DataError(`${path}: no data rows`);
  return body.map((row, i) => {
    const where = `${path}:${i + 2}`;
    const variant = row[0];
    if (variant !== 'generators' && variant !== 'group' && variant !== 'strong') {
      throw new DataError(`${where}: unknown variant ${variant}`);
    }
    return {
      variant,
      m: num(row[1], where),
      lambda: num(row[2], where),
      zeta: num(row[3], where),
      j0tau: num(row[4], where),
      qbar: num(row[5], where),
      b: num(row[6], where),
    };
  });
}

export function readSimCsv(path: string): SimRow[] {
  const lines = splitCsv(fs.readFileSync(path, 'utf8'));
  if (lines.length === 0) throw new DataError(`${path}: empty file`);
  checkHeader(lines[0], SIM_HEADER, path);
  const body = lines.slice(1);
  if (body.length === 0) throw new DataError(`${path}: no data rows`);
  return body.map((row, i) => {
    const where = `${path}:${i + 2}`;
    return {
      variant: row[0],
      m: num(row[1], where),
      epsilon: row[2],
      zeta: num(row[3], where),
      deviation: num(row[4], where),
      bound: row[5] === '' ? null : num(row[5], where),
    };
  });
}

/**
 * The surface sanity gate: at every (M, axis) grid point the three variants
 * must satisfy B_generators >= B_group >= B_strong (slack 1e-12). Sweep CSVs
 * violating this are refused outright.
 */
export function assertSurfaceOrdering(rows: SweepRow[], axis: 'lambda' | 'zeta'): void {
  const byPoint = new Map<string, Partial<Record<SweepRow['variant'], number>>>();
  for (const row of rows) {
    const key = `${row.m}|${axis === 'lambda' ? row.lambda : row.zeta}`;
    const entry = byPoint.get(key) ?? {};
    entry[row.variant] = row.b;
    byPoint.set(key, entry);
  }
  for (const [key, entry] of byPoint) {
    const { generators, group, strong } = entry;
    if (generators === undefined || group === undefined || strong === undefined) {
      throw new DataError(`grid point ${key}: missing a variant row`);
    }
    if (generators < group - 1e-12 || group < strong - 1e-12) {
      throw new DataError(
        `surface ordering violated at (M|${axis}) = ${key}: ` +
          `generators=${generators} group=${group} strong=${strong}`,
      );
    }
  }
}
