// Log-log deviation and bound versus M, one curve pair per (variant, epsilon).

import { DataError, readSimCsv, SimRow } from './csv';
import { circle, HEIGHT, line, polyline, svgDocument, text, VARIANT_COLORS, WIDTH } from './svg';

export interface ConvergenceSpec {
  csvPath: string;
  outPath: string;
}

const MARGIN = { left: 80, right: 30, top: 50, bottom: 60 };

interface Series {
  key: string;
  variant: string;
  points: Array<{ m: number; deviation: number; bound: number | null }>;
}

function collectSeries(rows: SimRow[]): Series[] {
  const byKey = new Map<string, Series>();
  for (const row of rows) {
    const key = `${row.variant} eps=${row.epsilon}`;
    const entry = byKey.get(key) ?? { key, variant: row.variant, points: [] };
    entry.points.push({ m: row.m, deviation: row.deviation, bound: row.bound });
    byKey.set(key, entry);
  }
  const series = [...byKey.values()];
  for (const s of series) s.points.sort((a, b) => a.m - b.m);
  return series.sort((a, b) => (a.key < b.key ? -1 : 1));
}

export function renderConvergence(spec: ConvergenceSpec): string {
  const rows = readSimCsv(spec.csvPath);
  const series = collectSeries(rows);
  if (series.length === 0) throw new DataError('no series to plot');

  const ms = [...new Set(rows.map((r) => r.m))].sort((a, b) => a - b);
  const values = rows
    .flatMap((r) => [r.deviation, r.bound ?? Number.NaN])
    .filter((v) => Number.isFinite(v) && v > 0);
  if (values.length === 0) throw new DataError('no positive values to plot');
  const floor = 1e-16;
  const yMin = Math.log10(Math.max(Math.min(...values), floor));
  const yMax = Math.log10(Math.max(...values));
  const xMin = Math.log10(ms[0]);
  const xMax = Math.log10(ms[ms.length - 1]);
  const singleM = ms.length < 2;

  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const px = (m: number): number =>
    singleM
      ? MARGIN.left + plotW / 2
      : MARGIN.left + ((Math.log10(m) - xMin) / (xMax - xMin)) * plotW;
  const py = (v: number): number => {
    const logV = Math.log10(Math.max(v, floor));
    const span = yMax - yMin || 1;
    return MARGIN.top + (1 - (logV - yMin) / span) * plotH;
  };

  const body: string[] = [];
  body.push(text(WIDTH / 2, 28, 'deviation and bound vs M (log-log)', 16, 'middle'));
  // frame and axis labels
  body.push(line(MARGIN.left, MARGIN.top, MARGIN.left, HEIGHT - MARGIN.bottom, '#333'));
  body.push(
    line(MARGIN.left, HEIGHT - MARGIN.bottom, WIDTH - MARGIN.right, HEIGHT - MARGIN.bottom, '#333'),
  );
  body.push(text(WIDTH / 2, HEIGHT - 20, 'M (number of measurement rounds)', 13, 'middle'));
  body.push(text(20, MARGIN.top - 14, 'trace distance', 13));
  for (const m of ms) {
    body.push(line(px(m), HEIGHT - MARGIN.bottom, px(m), HEIGHT - MARGIN.bottom + 5, '#333'));
    body.push(text(px(m), HEIGHT - MARGIN.bottom + 20, String(m), 11, 'middle'));
  }
  const decades = Math.max(1, Math.round(yMax - yMin));
  for (let d = 0; d <= decades; d++) {
    const logV = yMin + ((yMax - yMin) * d) / decades;
    const y = py(10 ** logV);
    body.push(line(MARGIN.left - 5, y, MARGIN.left, y, '#333'));
    body.push(text(MARGIN.left - 10, y + 4, `1e${logV.toFixed(1)}`, 10, 'end'));
  }

  series.forEach((s, i) => {
    const color = VARIANT_COLORS[s.variant] ?? '#555';
    const devPoints = s.points.map((p): [number, number] => [px(p.m), py(p.deviation)]);
    const boundPoints = s.points
      .filter((p) => p.bound !== null)
      .map((p): [number, number] => [px(p.m), py(p.bound as number)]);
    if (singleM) {
      // scatter fallback: a single M cannot make a line
      for (const [x, y] of devPoints) body.push(circle(x, y, 4, color));
      for (const [x, y] of boundPoints) body.push(circle(x, y, 3, '#888'));
    } else {
      body.push(polyline(devPoints, color, 1.6));
      if (boundPoints.length >= 2) body.push(polyline(boundPoints, color, 1.2, '5,4'));
    }
    const y = MARGIN.top + 16 + 16 * i;
    body.push(line(WIDTH - 260, y - 4, WIDTH - 236, y - 4, color, 1.6));
    body.push(text(WIDTH - 230, y, `${s.key} (dashed: bound)`, 11));
  });
  return svgDocument(body);
}
