// CLI: render a primary CSV to an SVG figure.
//
//   node dist/render.js --csv <path> --panel surface-left|surface-right|convergence --out <path>
//
// Exit codes: 0 rendered, 1 data error (including surface-ordering
// violations), 2 usage error.

import * as fs from 'fs';
import * as path from 'path';

import { renderConvergence } from './convergence';
import { DataError } from './csv';
import { defaultSurfaceSpec, renderSurfaces } from './surfaces';

export type Panel = 'surface-left' | 'surface-right' | 'convergence';

export interface FigureSpec {
  csvPath: string;
  panel: Panel;
  outPath: string;
}

export function parseArgs(argv: string[]): FigureSpec {
  const opts = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (!flag.startsWith('--') || value === undefined) {
      throw new UsageError(`malformed arguments near ${flag}`);
    }
    opts.set(flag.slice(2), value);
  }
  const csvPath = opts.get('csv');
  const panel = opts.get('panel');
  const outPath = opts.get('out');
  if (!csvPath || !panel || !outPath) {
    throw new UsageError('required: --csv <path> --panel <kind> --out <path>');
  }
  if (panel !== 'surface-left' && panel !== 'surface-right' && panel !== 'convergence') {
    throw new UsageError(`unknown panel ${panel}`);
  }
  return { csvPath, panel, outPath };
}

export class UsageError extends Error {}

export function renderFigure(spec: FigureSpec): string {
  switch (spec.panel) {
    case 'surface-left':
      return renderSurfaces(defaultSurfaceSpec(spec.csvPath, 'lambda', spec.outPath));
    case 'surface-right':
      return renderSurfaces(defaultSurfaceSpec(spec.csvPath, 'zeta', spec.outPath));
    case 'convergence':
      return renderConvergence({ csvPath: spec.csvPath, outPath: spec.outPath });
  }
}

export function main(argv: string[]): number {
  let spec: FigureSpec;
  try {
    spec = parseArgs(argv);
  } catch (err) {
    if (err instanceof UsageError) {
      console.error(`usage error: ${err.message}`);
      return 2;
    }
    throw err;
  }
  try {
    const svg = renderFigure(spec);
    fs.mkdirSync(path.dirname(path.resolve(spec.outPath)), { recursive: true });
    fs.writeFileSync(spec.outPath, svg + '\n');
    console.log(`wrote ${spec.outPath}`);
    return 0;
  } catch (err) {
    if (err instanceof DataError) {
      console.error(`refused: ${err.message}`);
      return 1;
    }
    throw err;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
