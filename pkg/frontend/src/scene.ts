/**
 * Pure scene construction: service payloads in, drawable scene out.
 *
 * No chain math happens here. Geometry (petal spacing, agent dot
 * clusters) and styling (weight-monotone thickness and luminance,
 * shrinking of abandoned elements) are the UI's own; every probability,
 * mass and loop flag comes verbatim from the service.
 */

import type { ElementRefDto, GraphPayload, OccupancyPayload } from './api';
import { locationColor } from './palette';

export const R_CLOSED = 20;
export const R_OPEN = 60;
export const R_NODE = 9;
export const SHRINK_FACTOR = 0.45;
export const FADE_FACTOR = 0.12;

export interface Point {
  x: number;
  y: number;
}

export interface SceneElement {
  kind: 'location' | 'node';
  id: string;
  label: string;
  x: number;
  y: number;
  radius: number;
  color: string;
  open: boolean;
  shrunken: boolean;
  halo: boolean;
  /** evenly spaced member dots on a closed location's perimeter */
  petals: Point[];
  /** stationary share in path-preference mode, e.g. "66.7 %" */
  massLabel: string | null;
  /** fill lightening toward white, 0 = full color, 1 = white */
  fillLuminance: number | null;
}

export interface SceneEdge {
  from: Point;
  to: Point;
  selfLoop: boolean;
  thickness: number;
  alpha: number;
  faded: boolean;
}

export interface CanvasScene {
  revision: number;
  name: string;
  elements: SceneElement[];
  edges: SceneEdge[];
  agentDots: Point[];
  occupancyTotal: number | null;
}

export interface SceneOptions {
  selected?: ElementRefDto | null;
  occupancy?: OccupancyPayload | null;
}

/** Strictly increasing map from weight (>= 0) into [0, 1). */
function saturate(weight: number, softness: number): number {
  return weight / (weight + softness);
}

export function edgeThickness(weight: number): number {
  return 1.5 + 13 * saturate(weight, 1.0);
}

export function edgeAlpha(weight: number): number {
  return 0.25 + 0.75 * saturate(weight, 0.25);
}

export function petalPoints(center: Point, count: number, radius: number): Point[] {
  const points: Point[] = [];
  for (let k = 0; k < count; k += 1) {
    const angle = -Math.PI / 2 + (2 * Math.PI * k) / count;
    points.push({
      x: center.x + radius * Math.cos(angle),
      y: center.y + radius * Math.sin(angle),
    });
  }
  return points;
}

/** Deterministic golden-angle cluster for occupancy dots. */
export function agentCluster(center: Point, count: number): Point[] {
  const dots: Point[] = [];
  const golden = 2.399963229728653;
  for (let k = 0; k < count; k += 1) {
    const r = 2.5 + 1.7 * Math.sqrt(k);
    const angle = k * golden;
    dots.push({ x: center.x + r * Math.cos(angle), y: center.y + r * Math.sin(angle) });
  }
  return dots;
}

function refKey(ref: ElementRefDto): string {
  return `${ref.kind}:${ref.id}`;
}

function massLabelFor(mass: number | undefined): string | null {
  if (mass === undefined) return null;
  return `${(mass * 100).toFixed(1)} %`;
}

export function buildScene(graph: GraphPayload, options: SceneOptions = {}): CanvasScene {
  const selectedKey = options.selected ? refKey(options.selected) : null;
  const abandoned = new Set(graph.abandoned.map(refKey));
  const pathPreference = graph.view.display_mode === 'path_preference';

  const locationIndex = new Map(graph.locations.map((loc, i) => [loc.id, i]));
  const nodeById = new Map(graph.nodes.map((node) => [node.id, node]));

  const elements: SceneElement[] = [];
  const elementPosition = new Map<string, Point>();

  for (const location of graph.locations) {
    const center = { x: location.position[0], y: location.position[1] };
    const key = `location:${location.id}`;
    const color = locationColor(locationIndex.get(location.id) ?? 0);
    if (location.open) {
      // open boundary ring; members are separate elements
      elements.push({
        kind: 'location',
        id: location.id,
        label: location.label,
        x: center.x,
        y: center.y,
        radius: R_OPEN,
        color,
        open: true,
        shrunken: false,
        halo: selectedKey === key,
        petals: [],
        massLabel: null,
        fillLuminance: null,
      });
      elementPosition.set(key, center);
      continue;
    }
    const isAbandoned = abandoned.has(key);
    const mass = pathPreference ? graph.element_mass[key] : undefined;
    const radius = isAbandoned ? R_CLOSED * SHRINK_FACTOR : R_CLOSED;
    elements.push({
      kind: 'location',
      id: location.id,
      label: location.label,
      x: center.x,
      y: center.y,
      radius,
      color,
      open: false,
      shrunken: isAbandoned,
      halo: selectedKey === key,
      petals: petalPoints(center, location.members.length, radius),
      massLabel: massLabelFor(mass),
      fillLuminance: pathPreference && mass !== undefined ? 1 - Math.min(1, mass) : null,
    });
    elementPosition.set(key, center);
  }

  for (const location of graph.locations) {
    if (!location.open) continue;
    const color = locationColor(locationIndex.get(location.id) ?? 0);
    for (const memberId of location.members) {
      const node = nodeById.get(memberId);
      if (!node) continue;
      const key = `node:${node.id}`;
      const isAbandoned = abandoned.has(key);
      const mass = pathPreference ? graph.element_mass[key] : undefined;
      const center = { x: node.position[0], y: node.position[1] };
      elements.push({
        kind: 'node',
        id: node.id,
        label: node.id,
        x: center.x,
        y: center.y,
        radius: isAbandoned ? R_NODE * SHRINK_FACTOR : R_NODE,
        color,
        open: false,
        shrunken: isAbandoned,
        halo: selectedKey === key,
        petals: [],
        massLabel: massLabelFor(mass),
        fillLuminance: pathPreference && mass !== undefined ? 1 - Math.min(1, mass) : null,
      });
      elementPosition.set(key, center);
    }
  }

  const edges: SceneEdge[] = graph.edges.map((edge) => {
    const from = elementPosition.get(refKey(edge.source)) ?? { x: 0, y: 0 };
    const to = elementPosition.get(refKey(edge.target)) ?? { x: 0, y: 0 };
    const touchesAbandoned =
      abandoned.has(refKey(edge.source)) || abandoned.has(refKey(edge.target));
    const faded = !edge.surviving || touchesAbandoned;
    const weight = Math.max(0, edge.display_weight);
    return {
      from,
      to,
      selfLoop: refKey(edge.source) === refKey(edge.target),
      thickness: edgeThickness(weight),
      alpha: edgeAlpha(weight) * (faded ? FADE_FACTOR : 1),
      faded,
    };
  });

  const agentDots: Point[] = [];
  let occupancyTotal: number | null = null;
  if (options.occupancy) {
    occupancyTotal = options.occupancy.total;
    const sortedNodes = Object.keys(options.occupancy.counts).sort();
    for (const nodeId of sortedNodes) {
      const count = options.occupancy.counts[nodeId];
      const node = nodeById.get(nodeId);
      if (!node) continue;
      const ownKey = `node:${nodeId}`;
      const center =
        elementPosition.get(ownKey) ?? elementPosition.get(`location:${node.location}`);
      if (!center) continue;
      agentDots.push(...agentCluster(center, count));
    }
  }

  return {
    revision: graph.revision,
    name: graph.name,
    elements,
    edges,
    agentDots,
    occupancyTotal,
  };
}
