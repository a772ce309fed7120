// Minimal deterministic SVG assembly: fixed canvas, fixed precision, no
// timestamps or generator metadata, so identical inputs give identical bytes.

export const WIDTH = 900;
export const HEIGHT = 640;

export function fmt(v: number): string {
  return v.toFixed(2);
}

export function svgDocument(body: string[]): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
    ...body,
    '</svg>',
  ].join('\n');
}

export function polygon(points: Array<[number, number]>, fill: string, stroke: string, opacity: number): string {
  const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(' ');
  return `<polygon points="${pts}" fill="${fill}" stroke="${stroke}" stroke-width="0.4" fill-opacity="${opacity}"/>`;
}

export function polyline(points: Array<[number, number]>, stroke: string, width: number, dash?: string): string {
  const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(' ');
  const dashAttr = dash ? ` stroke-dasharray="${dash}"` : '';
  return `<polyline points="${pts}" fill="none" stroke="${stroke}" stroke-width="${width}"${dashAttr}/>`;
}

export function circle(x: number, y: number, r: number, fill: string): string {
  return `<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${r}" fill="${fill}"/>`;
}

export function line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1): string {
  return `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" stroke="${stroke}" stroke-width="${width}"/>`;
}

export function text(x: number, y: number, content: string, size = 13, anchor = 'start'): string {
  return `<text x="${fmt(x)}" y="${fmt(y)}" font-family="Helvetica, Arial, sans-serif" font-size="${size}" text-anchor="${anchor}">${content}</text>`;
}

export const VARIANT_COLORS: Record<string, string> = {
  generators: '#c0392b',
  group: '#2471a3',
  strong: '#1e8449',
};
