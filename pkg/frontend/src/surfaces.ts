// Three-layer bound surfaces over (M, lambda) or (M, zeta), drawn with a
// fixed oblique projection and painter's-algorithm depth sorting.

import { assertSurfaceOrdering, DataError, readSweepCsv, SweepRow } from './csv';
import { circle, fmt, HEIGHT, polygon, svgDocument, text, VARIANT_COLORS, WIDTH } from './svg';

export interface SurfaceSpec {
  csvPath: string;
  axis: 'lambda' | 'zeta';
  outPath: string;
  /** floor for the log10 z-scale; B values at or below it sit on the floor */
  zFloor: number;
  /** fixed viewing angle (radians) of the oblique projection */
  azimuth: number;
  elevation: number;
}

export function defaultSurfaceSpec(csvPath: string, axis: 'lambda' | 'zeta', outPath: string): SurfaceSpec {
  return { csvPath, axis, outPath, zFloor: 1e-6, azimuth: 0.62, elevation: 0.48 };
}

interface Grid {
  ms: number[];
  ys: number[];
  // z[variant][mi][yi] after log scaling to [0, 1]
  z: Record<string, number[][]>;
  zMinLog: number;
  zMaxLog: number;
}

function buildGrid(rows: SweepRow[], axis: 'lambda' | 'zeta', zFloor: number): Grid {
  const ms = [...new Set(rows.map((r) => r.m))].sort((a, b) => a - b);
  const ys = [...new Set(rows.map((r) => (axis === 'lambda' ? r.lambda : r.zeta)))].sort(
    (a, b) => a - b,
  );
  if (ms.length < 2 || ys.length < 2) {
    throw new DataError(
      `need at least a 2x2 grid to draw surfaces, got ${ms.length}x${ys.length}`,
    );
  }
  const mIndex = new Map(ms.map((v, i) => [v, i]));
  const yIndex = new Map(ys.map((v, i) => [v, i]));
  const logs: Record<string, number[][]> = {};
  for (const variant of ['generators', 'group', 'strong']) {
    logs[variant] = ms.map(() => ys.map(() => Number.NaN));
  }
  let zMinLog = Infinity;
  let zMaxLog = -Infinity;
  for (const row of rows) {
    const mi = mIndex.get(row.m)!;
    const yi = yIndex.get(axis === 'lambda' ? row.lambda : row.zeta)!;
    const logB = Math.log10(Math.max(row.b, zFloor));
    logs[row.variant][mi][yi] = logB;
    zMinLog = Math.min(zMinLog, logB);
    zMaxLog = Math.max(zMaxLog, logB);
  }
  for (const variant of Object.keys(logs)) {
    for (const col of logs[variant]) {
      if (col.some((v) => Number.isNaN(v))) {
        throw new DataError(`variant ${variant}: incomplete grid`);
      }
    }
  }
  const span = zMaxLog - zMinLog || 1;
  for (const variant of Object.keys(logs)) {
    logs[variant] = logs[variant].map((col) => col.map((v) => (v - zMinLog) / span));
  }
  return { ms, ys, z: logs, zMinLog, zMaxLog };
}

function project(spec: SurfaceSpec, u: number, v: number, w: number): [number, number] {
  // oblique projection of the unit cube onto the fixed canvas
  const ca = Math.cos(spec.azimuth);
  const sa = Math.sin(spec.azimuth);
  const x3 = u - 0.5;
  const y3 = v - 0.5;
  const px = x3 * ca + y3 * sa;
  const py = (y3 * ca - x3 * sa) * Math.sin(spec.elevation) - w * Math.cos(spec.elevation);
  const scaleX = WIDTH * 0.44;
  const scaleY = HEIGHT * 0.52;
  return [WIDTH * 0.5 + px * scaleX, HEIGHT * 0.52 + py * scaleY * 0.62];
}

function depth(spec: SurfaceSpec, u: number, v: number): number {
  // larger = nearer to the viewer for the fixed angle
  return u * Math.sin(spec.azimuth) - v * Math.cos(spec.azimuth);
}

export function renderSurfaces(spec: SurfaceSpec): string {
  const rows = readSweepCsv(spec.csvPath);
  assertSurfaceOrdering(rows, spec.axis);
  const grid = buildGrid(rows, spec.axis, spec.zFloor);
  const { ms, ys, z } = grid;

  interface Quad {
    depth: number;
    svg: string;
  }
  const quads: Quad[] = [];
  for (const variant of ['generators', 'group', 'strong']) {
    const color = VARIANT_COLORS[variant];
    for (let mi = 0; mi + 1 < ms.length; mi++) {
      for (let yi = 0; yi + 1 < ys.length; yi++) {
        const u0 = mi / (ms.length - 1);
        const u1 = (mi + 1) / (ms.length - 1);
        const v0 = yi / (ys.length - 1);
        const v1 = (yi + 1) / (ys.length - 1);
        const corners: Array<[number, number]> = [
          project(spec, u0, v0, z[variant][mi][yi]),
          project(spec, u1, v0, z[variant][mi + 1][yi]),
          project(spec, u1, v1, z[variant][mi + 1][yi + 1]),
          project(spec, u0, v1, z[variant][mi][yi + 1]),
        ];
        quads.push({
          depth: depth(spec, (u0 + u1) / 2, (v0 + v1) / 2),
          svg: polygon(corners, color, color, 0.55),
        });
      }
    }
  }
  quads.sort((a, b) => a.depth - b.depth || (a.svg < b.svg ? -1 : 1));

  const axisLabel = spec.axis === 'lambda' ? 'lambda = J1/J0' : 'zeta';
  const body: string[] = [];
  body.push(text(WIDTH / 2, 28, `bound surfaces over (M, ${spec.axis})`, 16, 'middle'));
  body.push(...quads.map((q) => q.svg));
  // axis annotations at the projected cube corners
  const mLabel = project(spec, 0.5, -0.08, 0);
  body.push(text(mLabel[0], mLabel[1] + 130, `M: ${ms[0]} .. ${ms[ms.length - 1]}`, 13, 'middle'));
  const yLabel = project(spec, -0.12, 0.5, 0);
  body.push(
    text(yLabel[0] - 40, yLabel[1] + 120, `${axisLabel}: ${ys[0]} .. ${ys[ys.length - 1]}`, 13, 'middle'),
  );
  body.push(
    text(30, 60, `B (log10 scale, floor ${spec.zFloor}): ${fmt(grid.zMinLog)} .. ${fmt(grid.zMaxLog)}`, 12),
  );
  // legend
  const legend: Array<[string, string]> = [
    ['generators', 'generators-only protocol (upper)'],
    ['group', 'full stabilizer-group protocol (middle)'],
    ['strong', 'strong-measurement limit (lower)'],
  ];
  legend.forEach(([variant, label], i) => {
    const y = 90 + 22 * i;
    body.push(circle(40, y - 4, 6, VARIANT_COLORS[variant]));
    body.push(text(54, y, label, 13));
  });
  return svgDocument(body);
}
