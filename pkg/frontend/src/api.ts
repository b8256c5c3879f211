/**
 * Typed client for the patrolkit session service.
 *
 * Thin by design: the UI never recomputes chain math, it only renders
 * what these payloads carry. Field names mirror docs/API.md and are
 * frozen by the backend contract tests.
 */

export type ElementKind = 'location' | 'node';
export type Rule = 'sum' | 'max' | 'average';
export type DisplayMode = 'strategy' | 'path_preference';

export interface ElementRefDto {
  kind: ElementKind;
  id: string;
}

export interface ViewDto {
  open_locations: string[];
  rule: Rule;
  threshold: number;
  display_mode: DisplayMode;
}

export interface LocationDto {
  id: string;
  label: string;
  open: boolean;
  position: [number, number];
  members: string[];
  mass: number | null;
  on_loop: boolean | null;
}

export interface NodeDto {
  id: string;
  location: string;
  position: [number, number];
  mass: number | null;
  on_loop: boolean | null;
}

export interface EdgeDto {
  source: ElementRefDto;
  target: ElementRefDto;
  weight: number;
  display_weight: number;
  flow: number | null;
  rel_flow: number | null;
  internal: boolean;
  surviving: boolean;
}

export interface GraphPayload {
  revision: number;
  name: string;
  stationary_available: boolean;
  view: ViewDto;
  element_mass: Record<string, number>;
  locations: LocationDto[];
  nodes: NodeDto[];
  edges: EdgeDto[];
  abandoned: ElementRefDto[];
}

export interface CreateSessionResponse {
  session_id: string;
  revision: number;
  name: string;
  warnings: string[];
  layout_seed: number;
  stationary_available: boolean;
}

export interface DistributionPayload {
  start: string;
  horizon: number;
  order: string[];
  rows: number[][];
  target?: string;
  series?: number[];
}

export interface MatrixPayload {
  order: string[];
  rows: number[][];
}

export interface SpawnResponse {
  revision: number;
  start: string;
  count: number;
  horizon: number;
  seed: number;
  cursor: number;
}

export interface AgentsPayload {
  spawned: boolean;
  start?: string;
  count?: number;
  horizon?: number;
  seed?: number;
  cursor?: number;
  single_agent?: string[];
}

export interface OccupancyPayload {
  t: number;
  counts: Record<string, number>;
  total: number;
}

export interface LayoutStepResponse {
  revision: number;
  iteration: number;
  converged: boolean | null;
  positions: { kind: ElementKind; id: string; x: number; y: number }[];
}

export interface ServiceErrorBody {
  error: { code: string; message: string };
}

export class ServiceError extends Error {
  constructor(
    readonly code: string,
    message: string,
    readonly status: number,
  ) {
    super(message);
  }
}

async function parseResponse<T>(response: Response): Promise<T> {
  const body = await response.json();
  if (!response.ok) {
    const err = (body as ServiceErrorBody).error;
    throw new ServiceError(err?.code ?? 'unknown', err?.message ?? 'request failed', response.status);
  }
  return body as T;
}

export class SessionClient {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    const response = await fetch(this.url(path), {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body),
    });
    return parseResponse<T>(response);
  }

  private async get<T>(path: string, params?: Record<string, string>): Promise<T> {
    const query = params ? `?${new URLSearchParams(params)}` : '';
    const response = await fetch(this.url(`${path}${query}`));
    return parseResponse<T>(response);
  }

  createSession(strategy: unknown, layoutSeed?: number): Promise<CreateSessionResponse> {
    const body: Record<string, unknown> = { strategy };
    if (layoutSeed !== undefined) body.layout_seed = layoutSeed;
    return this.post('/session', body);
  }

  getGraph(sessionId: string): Promise<GraphPayload> {
    return this.get(`/session/${sessionId}/graph`);
  }

  setThreshold(sessionId: string, value: number): Promise<{ revision: number; threshold: number }> {
    return this.post(`/session/${sessionId}/threshold`, { value });
  }

  toggleLocation(
    sessionId: string,
    locationId: string,
  ): Promise<{ revision: number; location: string; open: boolean }> {
    return this.post(`/session/${sessionId}/location/${encodeURIComponent(locationId)}/toggle`, {});
  }

  setRule(sessionId: string, rule: Rule): Promise<{ revision: number; rule: Rule }> {
    return this.post(`/session/${sessionId}/rule`, { rule });
  }

  setMode(sessionId: string, mode: DisplayMode): Promise<{ revision: number; display_mode: DisplayMode }> {
    return this.post(`/session/${sessionId}/mode`, { mode });
  }

  getDistribution(
    sessionId: string,
    start: string,
    target?: string,
    horizon = 100,
  ): Promise<DistributionPayload> {
    const params: Record<string, string> = { start, horizon: String(horizon) };
    if (target !== undefined) params.target = target;
    return this.get(`/session/${sessionId}/distribution`, params);
  }

  getMatrix(sessionId: string): Promise<MatrixPayload> {
    return this.get(`/session/${sessionId}/matrix`);
  }

  spawnAgents(
    sessionId: string,
    options: { start: string; count?: number; horizon?: number; seed?: number },
  ): Promise<SpawnResponse> {
    return this.post(`/session/${sessionId}/agents`, options);
  }

  setCursor(sessionId: string, cursor: number): Promise<{ revision: number; cursor: number }> {
    return this.post(`/session/${sessionId}/agents`, { cursor });
  }

  getAgents(sessionId: string): Promise<AgentsPayload> {
    return this.get(`/session/${sessionId}/agents`);
  }

  getOccupancy(sessionId: string, t?: number): Promise<OccupancyPayload> {
    const params = t === undefined ? undefined : { t: String(t) };
    return this.get(`/session/${sessionId}/agents/occupancy`, params);
  }

  layoutStep(
    sessionId: string,
    body: { iterations?: number } | { converge: true; tol?: number; max_iter?: number },
  ): Promise<LayoutStepResponse> {
    return this.post(`/session/${sessionId}/layout/step`, body);
  }
}
