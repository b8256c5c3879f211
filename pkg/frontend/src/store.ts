/**
 * Session state machine.
 *
 * All mutations funnel through one queue per store so the service sees
 * them in order; every response names a revision, and any graph snapshot
 * older than the latest acknowledged revision is discarded instead of
 * rendered. Slider traffic is debounced but always settles on the final
 * value.
 */

import type {
  DisplayMode,
  DistributionPayload,
  ElementRefDto,
  GraphPayload,
  MatrixPayload,
  OccupancyPayload,
  Rule,
  SpawnResponse,
} from './api';
import { SessionClient } from './api';
import { buildScene, type CanvasScene } from './scene';

export const SLIDER_DEBOUNCE_MS = 50;
export const CHART_HORIZON = 100;

export interface AgentState {
  start: string;
  count: number;
  horizon: number;
  seed: number;
  cursor: number;
  singleAgent: string[] | null;
  showSingle: boolean;
}

export class SessionStore {
  sessionId: string | null = null;
  revision = 0;
  name = '';
  warnings: string[] = [];
  stationaryAvailable = false;

  graph: GraphPayload | null = null;
  matrix: MatrixPayload | null = null;
  distribution: DistributionPayload | null = null;
  occupancy: OccupancyPayload | null = null;
  agents: AgentState | null = null;

  selected: ElementRefDto | null = null;
  hoverTarget: string | null = null;

  /** bumped whenever renderable state changed; the render loop polls it */
  dirty = 0;

  private queue: Promise<unknown> = Promise.resolve();
  private sliderTimer: ReturnType<typeof setTimeout> | null = null;
  private pendingThreshold: number | null = null;

  constructor(private readonly client: SessionClient) {}

  onError: (error: unknown) => void = () => {};

  private touch(): void {
    this.dirty += 1;
  }

  /** Serialize mutations; surface failures through onError, keep the queue alive. */
  private enqueue<T>(task: () => Promise<T>): Promise<T | undefined> {
    const next = this.queue.then(task).catch((error) => {
      this.onError(error);
      return undefined;
    });
    this.queue = next;
    return next as Promise<T | undefined>;
  }

  /** Wait until every queued request and pending slider value settled. */
  async idle(): Promise<void> {
    for (;;) {
      this.flushSlider();
      const tail = this.queue;
      await tail;
      if (tail === this.queue && this.pendingThreshold === null) return;
    }
  }

  private acceptRevision(revision: number): void {
    if (revision > this.revision) this.revision = revision;
  }

  private applyGraph(graph: GraphPayload): void {
    // discard snapshots that raced with a newer mutation
    if (graph.revision < this.revision) return;
    this.acceptRevision(graph.revision);
    this.graph = graph;
    this.touch();
  }

  async load(strategy: unknown, layoutSeed?: number): Promise<void> {
    await this.enqueue(async () => {
      const created = await this.client.createSession(strategy, layoutSeed);
      this.sessionId = created.session_id;
      this.revision = created.revision;
      this.name = created.name;
      this.warnings = created.warnings;
      this.stationaryAvailable = created.stationary_available;
      this.graph = null;
      this.matrix = null;
      this.distribution = null;
      this.occupancy = null;
      this.agents = null;
      this.selected = null;
      this.hoverTarget = null;
      this.applyGraph(await this.client.getGraph(created.session_id));
      this.matrix = await this.client.getMatrix(created.session_id);
      this.touch();
    });
  }

  private requireSession(): string {
    if (!this.sessionId) throw new Error('no strategy loaded');
    return this.sessionId;
  }

  refreshGraph(): Promise<unknown> {
    return this.enqueue(async () => {
      this.applyGraph(await this.client.getGraph(this.requireSession()));
    });
  }

  /** Immediate threshold set (the debounced slider path calls this). */
  setThreshold(value: number): Promise<unknown> {
    return this.enqueue(async () => {
      const id = this.requireSession();
      const response = await this.client.setThreshold(id, value);
      this.acceptRevision(response.revision);
      this.applyGraph(await this.client.getGraph(id));
    });
  }

  /** Debounced slider input; guaranteed to settle on the last value. */
  setThresholdDebounced(value: number): void {
    this.pendingThreshold = value;
    if (this.sliderTimer !== null) clearTimeout(this.sliderTimer);
    this.sliderTimer = setTimeout(() => this.flushSlider(), SLIDER_DEBOUNCE_MS);
  }

  flushSlider(): void {
    if (this.sliderTimer !== null) {
      clearTimeout(this.sliderTimer);
      this.sliderTimer = null;
    }
    if (this.pendingThreshold !== null) {
      const value = this.pendingThreshold;
      this.pendingThreshold = null;
      void this.setThreshold(value);
    }
  }

  toggleLocation(locationId: string): Promise<unknown> {
    return this.enqueue(async () => {
      const id = this.requireSession();
      const response = await this.client.toggleLocation(id, locationId);
      this.acceptRevision(response.revision);
      this.applyGraph(await this.client.getGraph(id));
    });
  }

  setRule(rule: Rule): Promise<unknown> {
    return this.enqueue(async () => {
      const id = this.requireSession();
      const response = await this.client.setRule(id, rule);
      this.acceptRevision(response.revision);
      this.applyGraph(await this.client.getGraph(id));
    });
  }

  setMode(mode: DisplayMode): Promise<unknown> {
    return this.enqueue(async () => {
      const id = this.requireSession();
      const response = await this.client.setMode(id, mode);
      this.acceptRevision(response.revision);
      this.applyGraph(await this.client.getGraph(id));
    });
  }

  /** Select an element; node selections fetch the recurring-visits chart. */
  select(ref: ElementRefDto | null): Promise<unknown> {
    return this.enqueue(async () => {
      this.selected = ref;
      this.hoverTarget = null;
      this.distribution = null;
      if (ref && ref.kind === 'node') {
        this.distribution = await this.client.getDistribution(
          this.requireSession(),
          ref.id,
          ref.id,
          CHART_HORIZON,
        );
      }
      this.touch();
    });
  }

  /** Retarget the chart while hovering another node (null restores self). */
  hover(nodeId: string | null): Promise<unknown> {
    return this.enqueue(async () => {
      this.hoverTarget = nodeId;
      const selected = this.selected;
      if (!selected || selected.kind !== 'node') return;
      this.distribution = await this.client.getDistribution(
        this.requireSession(),
        selected.id,
        nodeId ?? selected.id,
        CHART_HORIZON,
      );
      this.touch();
    });
  }

  spawnAgents(start: string, count = 400, horizon = 100, seed?: number): Promise<unknown> {
    return this.enqueue(async () => {
      const id = this.requireSession();
      const body: { start: string; count: number; horizon: number; seed?: number } = {
        start,
        count,
        horizon,
      };
      if (seed !== undefined) body.seed = seed;
      const spawned: SpawnResponse = await this.client.spawnAgents(id, body);
      this.acceptRevision(spawned.revision);
      const meta = await this.client.getAgents(id);
      this.agents = {
        start: spawned.start,
        count: spawned.count,
        horizon: spawned.horizon,
        seed: spawned.seed,
        cursor: spawned.cursor,
        singleAgent: meta.single_agent ?? null,
        showSingle: false,
      };
      this.occupancy = await this.client.getOccupancy(id, spawned.cursor);
      this.touch();
    });
  }

  setCursor(t: number): Promise<unknown> {
    return this.enqueue(async () => {
      if (!this.agents) return;
      const id = this.requireSession();
      const clamped = Math.max(0, Math.min(this.agents.horizon, Math.round(t)));
      const response = await this.client.setCursor(id, clamped);
      this.acceptRevision(response.revision);
      this.agents.cursor = response.cursor;
      this.occupancy = await this.client.getOccupancy(id, response.cursor);
      this.touch();
    });
  }

  stepCursor(delta: number): Promise<unknown> {
    return this.setCursor((this.agents?.cursor ?? 0) + delta);
  }

  toggleSingleAgent(): void {
    if (this.agents) {
      this.agents.showSingle = !this.agents.showSingle;
      this.touch();
    }
  }

  layoutStep(iterations: number): Promise<unknown> {
    return this.enqueue(async () => {
      const id = this.requireSession();
      const response = await this.client.layoutStep(id, { iterations });
      this.acceptRevision(response.revision);
      this.applyGraph(await this.client.getGraph(id));
    });
  }

  layoutConverge(): Promise<unknown> {
    return this.enqueue(async () => {
      const id = this.requireSession();
      const response = await this.client.layoutStep(id, { converge: true });
      this.acceptRevision(response.revision);
      this.applyGraph(await this.client.getGraph(id));
    });
  }

  /** Occupancy restricted to the replayed single agent's position. */
  private singleAgentOccupancy(): OccupancyPayload | null {
    if (!this.agents?.showSingle || !this.agents.singleAgent || !this.occupancy) {
      return this.occupancy;
    }
    const position = this.agents.singleAgent[this.agents.cursor];
    return { t: this.occupancy.t, counts: { [position]: 1 }, total: 1 };
  }

  scene(): CanvasScene | null {
    if (!this.graph) return null;
    return buildScene(this.graph, {
      selected: this.selected,
      occupancy: this.singleAgentOccupancy(),
    });
  }

  /** Bar heights for the recurring-visits chart: exactly what the service sent. */
  chartSeries(): number[] | null {
    return this.distribution?.series ?? null;
  }
}
