/**
 * Distribution of Recurring Visits: one bar per step t = 1..100, heights
 * exactly the probabilities the service sent (no client-side math).
 */

export interface ChartLabels {
  start: string;
  target: string;
}

export function renderChart(
  ctx: CanvasRenderingContext2D,
  series: number[] | null,
  labels: ChartLabels | null,
  width: number,
  height: number,
  cursor: number | null = null,
): void {
  ctx.fillStyle = '#ffffff';
  ctx.fillRect(0, 0, width, height);
  ctx.strokeStyle = '#d8d4cc';
  ctx.strokeRect(0.5, 0.5, width - 1, height - 1);

  if (!series || series.length === 0) {
    ctx.fillStyle = '#8a857b';
    ctx.font = '12px system-ui, sans-serif';
    ctx.textAlign = 'center';
    ctx.fillText('select a memory node to see recurring visits', width / 2, height / 2);
    return;
  }

  const top = 18;
  const bottom = height - 16;
  const plotHeight = bottom - top;
  const barWidth = (width - 12) / series.length;
  const peak = Math.max(...series, 1e-12);

  ctx.fillStyle = '#5778a4';
  series.forEach((p, i) => {
    const h = (p / peak) * plotHeight;
    ctx.fillRect(6 + i * barWidth, bottom - h, Math.max(1, barWidth - 1), h);
  });

  if (cursor !== null && cursor >= 1 && cursor <= series.length) {
    ctx.strokeStyle = '#ff7f0e';
    ctx.lineWidth = 1.5;
    const x = 6 + (cursor - 0.5) * barWidth;
    ctx.beginPath();
    ctx.moveTo(x, top - 4);
    ctx.lineTo(x, bottom);
    ctx.stroke();
  }

  ctx.fillStyle = '#44403a';
  ctx.font = '11px system-ui, sans-serif';
  ctx.textAlign = 'left';
  if (labels) {
    const title =
      labels.start === labels.target
        ? `return to ${labels.start}`
        : `${labels.start} → ${labels.target}`;
    ctx.fillText(title, 6, 12);
  }
  ctx.textAlign = 'right';
  ctx.fillText(`peak ${peak.toFixed(3)}`, width - 6, 12);
  ctx.textAlign = 'left';
  ctx.fillText('t = 1', 6, height - 4);
  ctx.textAlign = 'right';
  ctx.fillText(`t = ${series.length}`, width - 6, height - 4);
}
