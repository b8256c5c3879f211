/** Canvas 2D rendering of a built scene. Pure drawing, no state. */

import type { CanvasScene, Point, SceneEdge, SceneElement } from './scene';

const BACKGROUND = '#fafaf7';
const EDGE_COLOR = '#37352f';
const AGENT_COLOR = '#ff7f0e';
const HALO_COLOR = '#2f6fde';

export interface Viewport {
  offsetX: number;
  offsetY: number;
  scale: number;
}

export function fitViewport(scene: CanvasScene, width: number, height: number): Viewport {
  if (scene.elements.length === 0) return { offsetX: 0, offsetY: 0, scale: 1 };
  const xs = scene.elements.map((el) => el.x);
  const ys = scene.elements.map((el) => el.y);
  const minX = Math.min(...xs) - 90;
  const maxX = Math.max(...xs) + 90;
  const minY = Math.min(...ys) - 90;
  const maxY = Math.max(...ys) + 90;
  const scale = Math.min(width / (maxX - minX), height / (maxY - minY), 2.0);
  return {
    offsetX: width / 2 - ((minX + maxX) / 2) * scale,
    offsetY: height / 2 - ((minY + maxY) / 2) * scale,
    scale,
  };
}

export function toScreen(view: Viewport, p: Point): Point {
  return { x: view.offsetX + p.x * view.scale, y: view.offsetY + p.y * view.scale };
}

export function toWorld(view: Viewport, p: Point): Point {
  return { x: (p.x - view.offsetX) / view.scale, y: (p.y - view.offsetY) / view.scale };
}

function mixToWhite(hex: string, amount: number): string {
  const r = parseInt(hex.slice(1, 3), 16);
  const g = parseInt(hex.slice(3, 5), 16);
  const b = parseInt(hex.slice(5, 7), 16);
  const mix = (c: number) => Math.round(c + (255 - c) * amount);
  return `rgb(${mix(r)}, ${mix(g)}, ${mix(b)})`;
}

function drawArrowhead(ctx: CanvasRenderingContext2D, from: Point, to: Point, size: number): void {
  const angle = Math.atan2(to.y - from.y, to.x - from.x);
  ctx.beginPath();
  ctx.moveTo(to.x, to.y);
  ctx.lineTo(to.x - size * Math.cos(angle - 0.42), to.y - size * Math.sin(angle - 0.42));
  ctx.lineTo(to.x - size * Math.cos(angle + 0.42), to.y - size * Math.sin(angle + 0.42));
  ctx.closePath();
  ctx.fill();
}

function drawEdge(ctx: CanvasRenderingContext2D, view: Viewport, edge: SceneEdge): void {
  ctx.globalAlpha = edge.alpha;
  ctx.strokeStyle = EDGE_COLOR;
  ctx.fillStyle = EDGE_COLOR;
  ctx.lineWidth = Math.max(0.6, edge.thickness * view.scale * 0.5);

  const from = toScreen(view, edge.from);
  const to = toScreen(view, edge.to);

  if (edge.selfLoop) {
    const r = 16 * view.scale;
    ctx.beginPath();
    ctx.arc(from.x + r, from.y - r, r, 0.6 * Math.PI, 0.45 * Math.PI, false);
    ctx.stroke();
    ctx.globalAlpha = 1;
    return;
  }

  // slight curvature keeps opposite edges distinguishable
  const mx = (from.x + to.x) / 2;
  const my = (from.y + to.y) / 2;
  const dx = to.x - from.x;
  const dy = to.y - from.y;
  const len = Math.hypot(dx, dy) || 1;
  const cx = mx - (dy / len) * 14 * view.scale;
  const cy = my + (dx / len) * 14 * view.scale;

  ctx.beginPath();
  ctx.moveTo(from.x, from.y);
  ctx.quadraticCurveTo(cx, cy, to.x, to.y);
  ctx.stroke();
  drawArrowhead(ctx, { x: cx, y: cy }, to, Math.max(5, edge.thickness * view.scale));
  ctx.globalAlpha = 1;
}

function drawElement(ctx: CanvasRenderingContext2D, view: Viewport, el: SceneElement): void {
  const center = toScreen(view, { x: el.x, y: el.y });
  const radius = el.radius * view.scale;

  if (el.halo) {
    ctx.beginPath();
    ctx.arc(center.x, center.y, radius + 7 * view.scale, 0, 2 * Math.PI);
    ctx.strokeStyle = HALO_COLOR;
    ctx.lineWidth = 3.5 * view.scale;
    ctx.globalAlpha = 0.9;
    ctx.stroke();
    ctx.globalAlpha = 1;
  }

  ctx.beginPath();
  ctx.arc(center.x, center.y, radius, 0, 2 * Math.PI);
  if (el.open) {
    ctx.strokeStyle = el.color;
    ctx.setLineDash([6 * view.scale, 5 * view.scale]);
    ctx.lineWidth = 2 * view.scale;
    ctx.globalAlpha = 0.8;
    ctx.stroke();
    ctx.setLineDash([]);
    ctx.globalAlpha = 1;
  } else {
    ctx.fillStyle =
      el.fillLuminance !== null ? mixToWhite(el.color, el.fillLuminance) : el.color;
    ctx.globalAlpha = el.shrunken ? 0.55 : 1;
    ctx.fill();
    ctx.strokeStyle = el.color;
    ctx.lineWidth = 1.5 * view.scale;
    ctx.stroke();
    ctx.globalAlpha = 1;
    for (const petal of el.petals) {
      const p = toScreen(view, petal);
      ctx.beginPath();
      ctx.arc(p.x, p.y, 4 * view.scale, 0, 2 * Math.PI);
      ctx.fillStyle = '#ffffff';
      ctx.fill();
      ctx.strokeStyle = '#44403a';
      ctx.lineWidth = 1 * view.scale;
      ctx.stroke();
    }
  }

  ctx.fillStyle = '#1f1e1b';
  ctx.font = `${Math.max(10, 11 * view.scale)}px system-ui, sans-serif`;
  ctx.textAlign = 'center';
  const labelY = center.y + radius + 13 * view.scale;
  ctx.fillText(el.label, center.x, labelY);
  if (el.massLabel) {
    ctx.fillStyle = '#514d45';
    ctx.fillText(el.massLabel, center.x, labelY + 12 * view.scale);
  }
}

export function renderScene(
  ctx: CanvasRenderingContext2D,
  scene: CanvasScene,
  view: Viewport,
  width: number,
  height: number,
): void {
  ctx.fillStyle = BACKGROUND;
  ctx.fillRect(0, 0, width, height);

  for (const edge of scene.edges) drawEdge(ctx, view, edge);
  for (const el of scene.elements.filter((e) => e.open)) drawElement(ctx, view, el);
  for (const el of scene.elements.filter((e) => !e.open)) drawElement(ctx, view, el);

  ctx.fillStyle = AGENT_COLOR;
  ctx.globalAlpha = 0.85;
  for (const dot of scene.agentDots) {
    const p = toScreen(view, dot);
    ctx.beginPath();
    ctx.arc(p.x, p.y, Math.max(1.6, 2.2 * view.scale), 0, 2 * Math.PI);
    ctx.fill();
  }
  ctx.globalAlpha = 1;
}

/** Hit test in world coordinates, smallest element wins. */
export function pickElement(scene: CanvasScene, world: Point): SceneElement | null {
  let best: SceneElement | null = null;
  for (const el of scene.elements) {
    const distance = Math.hypot(world.x - el.x, world.y - el.y);
    const within = el.open ? distance <= el.radius : distance <= Math.max(el.radius, 12);
    if (within && (best === null || el.radius < best.radius)) {
      best = el;
    }
  }
  return best;
}
