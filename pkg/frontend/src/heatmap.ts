/**
 * Transition-matrix heatmap: rows and columns in node order, cell
 * darkness monotone in probability. Hover reveals the exact weight;
 * clicking a cell opens the row node's location in the canvas.
 */

import type { MatrixPayload } from './api';

export interface HeatmapCell {
  row: number;
  column: number;
  from: string;
  to: string;
  p: number;
}

export interface HeatmapGeometry {
  originX: number;
  originY: number;
  cell: number;
}

export function heatmapGeometry(matrix: MatrixPayload, size: number): HeatmapGeometry {
  const n = matrix.order.length;
  const margin = 34;
  const cell = Math.max(3, Math.floor((size - margin - 4) / Math.max(1, n)));
  return { originX: margin, originY: margin, cell };
}

export function cellAt(
  matrix: MatrixPayload,
  geometry: HeatmapGeometry,
  x: number,
  y: number,
): HeatmapCell | null {
  const n = matrix.order.length;
  const column = Math.floor((x - geometry.originX) / geometry.cell);
  const row = Math.floor((y - geometry.originY) / geometry.cell);
  if (row < 0 || column < 0 || row >= n || column >= n) return null;
  return {
    row,
    column,
    from: matrix.order[row],
    to: matrix.order[column],
    p: matrix.rows[row][column],
  };
}

export function renderHeatmap(
  ctx: CanvasRenderingContext2D,
  matrix: MatrixPayload | null,
  size: number,
  hovered: HeatmapCell | null = null,
): void {
  ctx.fillStyle = '#ffffff';
  ctx.fillRect(0, 0, size, size);
  ctx.strokeStyle = '#d8d4cc';
  ctx.strokeRect(0.5, 0.5, size - 1, size - 1);
  if (!matrix) return;

  const n = matrix.order.length;
  const { originX, originY, cell } = heatmapGeometry(matrix, size);

  for (let i = 0; i < n; i += 1) {
    for (let j = 0; j < n; j += 1) {
      const p = matrix.rows[i][j];
      // darkness monotone in probability: 0 -> white, 1 -> near black
      const shade = Math.round(250 - 235 * p);
      ctx.fillStyle = `rgb(${shade}, ${shade}, ${shade})`;
      ctx.fillRect(originX + j * cell, originY + i * cell, cell - 1, cell - 1);
    }
  }

  if (hovered) {
    ctx.strokeStyle = '#ff7f0e';
    ctx.lineWidth = 2;
    ctx.strokeRect(
      originX + hovered.column * cell - 1,
      originY + hovered.row * cell - 1,
      cell + 1,
      cell + 1,
    );
  }

  ctx.fillStyle = '#44403a';
  ctx.font = '10px system-ui, sans-serif';
  const step = Math.max(1, Math.ceil(n / Math.floor((size - originX) / 26)));
  for (let i = 0; i < n; i += step) {
    ctx.textAlign = 'right';
    ctx.fillText(matrix.order[i], originX - 4, originY + i * cell + cell * 0.7);
    ctx.save();
    ctx.translate(originX + i * cell + cell * 0.7, originY - 4);
    ctx.rotate(-Math.PI / 4);
    ctx.textAlign = 'left';
    ctx.fillText(matrix.order[i], 0, 0);
    ctx.restore();
  }
}
