/** DOM wiring: one store, three canvases, a handful of controls. */

import type { DisplayMode, Rule } from './api';
import { SessionClient } from './api';
import { renderChart } from './chart';
import { cellAt, heatmapGeometry, renderHeatmap, type HeatmapCell } from './heatmap';
import { fitViewport, pickElement, renderScene, toWorld } from './render';
import { SessionStore } from './store';

const SERVICE_URL =
  new URLSearchParams(window.location.search).get('service') ?? 'http://127.0.0.1:8000';

const store = new SessionStore(new SessionClient(SERVICE_URL));

const canvas = document.getElementById('graph') as HTMLCanvasElement;
const chartCanvas = document.getElementById('chart') as HTMLCanvasElement;
const heatmapCanvas = document.getElementById('heatmap') as HTMLCanvasElement;
const fileInput = document.getElementById('file') as HTMLInputElement;
const sampleSelect = document.getElementById('sample') as HTMLSelectElement;
const thresholdSlider = document.getElementById('threshold') as HTMLInputElement;
const thresholdValue = document.getElementById('threshold-value') as HTMLSpanElement;
const ruleSelect = document.getElementById('rule') as HTMLSelectElement;
const modeToggle = document.getElementById('mode') as HTMLInputElement;
const spawnButton = document.getElementById('spawn') as HTMLButtonElement;
const singleToggle = document.getElementById('single-agent') as HTMLInputElement;
const cursorSlider = document.getElementById('cursor') as HTMLInputElement;
const cursorValue = document.getElementById('cursor-value') as HTMLSpanElement;
const playButton = document.getElementById('play') as HTMLButtonElement;
const layoutButton = document.getElementById('relayout') as HTMLButtonElement;
const statusLine = document.getElementById('status') as HTMLDivElement;
const hoverInfo = document.getElementById('hover-info') as HTMLDivElement;

let hoveredCell: HeatmapCell | null = null;
let playing = false;
let lastRendered = -1;

store.onError = (error) => {
  const message = error instanceof Error ? error.message : String(error);
  statusLine.textContent = `error: ${message}`;
  statusLine.classList.add('error');
  setTimeout(() => statusLine.classList.remove('error'), 2500);
};

function syncControls(): void {
  const view = store.graph?.view;
  if (!view) return;
  // the slider always shows the last service-acknowledged threshold
  thresholdSlider.value = String(view.threshold);
  thresholdValue.textContent = `${(view.threshold * 100).toFixed(1)} %`;
  ruleSelect.value = view.rule;
  modeToggle.checked = view.display_mode === 'path_preference';
  if (store.agents) {
    cursorSlider.max = String(store.agents.horizon);
    cursorSlider.value = String(store.agents.cursor);
    cursorValue.textContent = `t = ${store.agents.cursor}`;
  }
  statusLine.textContent =
    `${store.name} | rev ${store.revision}` +
    (store.warnings.length ? ` | ${store.warnings.join('; ')}` : '');
}

function draw(): void {
  if (store.dirty === lastRendered) return;
  lastRendered = store.dirty;
  syncControls();

  const scene = store.scene();
  const ctx = canvas.getContext('2d')!;
  if (scene) {
    const view = fitViewport(scene, canvas.width, canvas.height);
    renderScene(ctx, scene, view, canvas.width, canvas.height);
    canvas.dataset.viewport = JSON.stringify(view);
  } else {
    ctx.fillStyle = '#fafaf7';
    ctx.fillRect(0, 0, canvas.width, canvas.height);
  }

  const selected = store.selected;
  const target = store.hoverTarget ?? (selected?.kind === 'node' ? selected.id : null);
  renderChart(
    chartCanvas.getContext('2d')!,
    store.chartSeries(),
    selected?.kind === 'node' && target ? { start: selected.id, target } : null,
    chartCanvas.width,
    chartCanvas.height,
    store.agents?.cursor ?? null,
  );

  renderHeatmap(heatmapCanvas.getContext('2d')!, store.matrix, heatmapCanvas.width, hoveredCell);
}

function frame(): void {
  draw();
  requestAnimationFrame(frame);
}

function currentViewport() {
  return canvas.dataset.viewport ? JSON.parse(canvas.dataset.viewport) : null;
}

// -- canvas interactions ----------------------------------------------------

canvas.addEventListener('click', (event) => {
  const scene = store.scene();
  const viewport = currentViewport();
  if (!scene || !viewport) return;
  const rect = canvas.getBoundingClientRect();
  const world = toWorld(viewport, {
    x: event.clientX - rect.left,
    y: event.clientY - rect.top,
  });
  const hit = pickElement(scene, world);
  if (!hit) {
    void store.select(null);
    return;
  }
  if (hit.kind === 'location' && (event.shiftKey || !hit.open)) {
    // closed locations open on click; shift-click closes an open one
    void store.toggleLocation(hit.id);
    return;
  }
  void store.select({ kind: hit.kind, id: hit.id });
});

canvas.addEventListener('mousemove', (event) => {
  const scene = store.scene();
  const viewport = currentViewport();
  if (!scene || !viewport) return;
  const rect = canvas.getBoundingClientRect();
  const world = toWorld(viewport, {
    x: event.clientX - rect.left,
    y: event.clientY - rect.top,
  });
  const hit = pickElement(scene, world);
  hoverInfo.textContent = hit ? `${hit.kind} ${hit.label}${hit.massLabel ? ` - ${hit.massLabel}` : ''}` : '';
  const hoverNode = hit && hit.kind === 'node' ? hit.id : null;
  if (hoverNode !== store.hoverTarget) void store.hover(hoverNode);
});

// -- controls ---------------------------------------------------------------

sampleSelect.addEventListener('change', async () => {
  if (!sampleSelect.value) return;
  const response = await fetch(sampleSelect.value);
  await store.load(await response.json());
  await store.layoutConverge();
});

fileInput.addEventListener('change', async () => {
  const file = fileInput.files?.[0];
  if (!file) return;
  await store.load(JSON.parse(await file.text()));
  await store.layoutConverge();
});

thresholdSlider.addEventListener('input', () => {
  thresholdValue.textContent = `${(Number(thresholdSlider.value) * 100).toFixed(1)} %`;
  store.setThresholdDebounced(Number(thresholdSlider.value));
});

ruleSelect.addEventListener('change', () => void store.setRule(ruleSelect.value as Rule));

modeToggle.addEventListener('change', () => {
  const mode: DisplayMode = modeToggle.checked ? 'path_preference' : 'strategy';
  void store.setMode(mode);
});

spawnButton.addEventListener('click', () => {
  const selected = store.selected;
  if (selected?.kind === 'node') {
    void store.spawnAgents(selected.id);
  } else {
    statusLine.textContent = 'select a memory node first, then release agents';
  }
});

singleToggle.addEventListener('change', () => store.toggleSingleAgent());

cursorSlider.addEventListener('input', () => void store.setCursor(Number(cursorSlider.value)));

layoutButton.addEventListener('click', () => void store.layoutConverge());

playButton.addEventListener('click', () => {
  playing = !playing;
  playButton.textContent = playing ? 'pause' : 'play';
});

setInterval(() => {
  if (!playing || !store.agents) return;
  if (store.agents.cursor >= store.agents.horizon) {
    playing = false;
    playButton.textContent = 'play';
    return;
  }
  void store.stepCursor(1);
}, 280);

window.addEventListener('keydown', (event) => {
  if (event.target instanceof HTMLInputElement || event.target instanceof HTMLSelectElement) {
    return;
  }
  if (event.code === 'Space') {
    event.preventDefault();
    playButton.click();
  } else if (event.code === 'ArrowRight') {
    void store.stepCursor(1);
  } else if (event.code === 'ArrowLeft') {
    void store.stepCursor(-1);
  }
});

heatmapCanvas.addEventListener('mousemove', (event) => {
  if (!store.matrix) return;
  const rect = heatmapCanvas.getBoundingClientRect();
  const geometry = heatmapGeometry(store.matrix, heatmapCanvas.width);
  hoveredCell = cellAt(
    store.matrix,
    geometry,
    event.clientX - rect.left,
    event.clientY - rect.top,
  );
  hoverInfo.textContent = hoveredCell
    ? `${hoveredCell.from} → ${hoveredCell.to}: p = ${hoveredCell.p}`
    : '';
  lastRendered = -1; // force a redraw for the hover rectangle
});

heatmapCanvas.addEventListener('click', () => {
  if (!hoveredCell || !store.graph) return;
  const node = store.graph.nodes.find((n) => n.id === hoveredCell!.from);
  const location = node && store.graph.locations.find((l) => l.id === node.location);
  if (location && !location.open) void store.toggleLocation(location.id);
});

frame();
