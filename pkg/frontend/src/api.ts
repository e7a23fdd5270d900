// Typed client for the galaxyatlas HTTP service. The UI talks to the world
// exclusively through these calls; the only configuration is the base URL.

export interface UniverseParams {
  world_seed: string;
  density: number;
  galaxy_count: number;
  systems_per_galaxy: number;
}

export interface NodeRecord {
  node_id: string;
  display_name: string;
  sector: string;
  node_type: string;
  risk: string;
  resources: number;
  position: [number, number];
}

export interface SystemLayout {
  system_id: string;
  label: string;
  position: [number, number];
  nodes: NodeRecord[];
  lanes: { a: string; b: string; cost: number }[];
}

export interface GalaxyLayout {
  index: number;
  label: string;
  position: [number, number];
  systems: SystemLayout[];
}

export interface UniverseLayout {
  params: UniverseParams;
  galaxies: GalaxyLayout[];
}

export interface AdjacentEntry {
  node_id: string;
  cost: number;
  display_name: string;
}

export interface NodeDetail {
  node: NodeRecord;
  adjacent: AdjacentEntry[];
  params: UniverseParams;
}

export type WireDocument = { $schema: string; $v: number } & Record<string, unknown>;

export interface BriefResult {
  node_id: string;
  plugin: string;
  tier_used: string;
  retries: number;
  document: WireDocument;
}

export interface VoyagerView {
  session_id: string;
  location: string;
  fuel: number;
  credits: number;
  route: string[];
}

export interface ActionResponse {
  session_id: string;
  tick: number;
  voyager: VoyagerView;
  params: UniverseParams;
  action: Record<string, unknown>;
  brief_ref?: { node_id: string; url: string };
}

export interface ApiError {
  code: string;
  message: string;
  details: Record<string, unknown>;
}

export interface FieldSpecWire {
  name: string;
  kind: string;
  required: boolean;
  values?: string[];
  minimum?: number;
  maximum?: number;
  element?: FieldSpecWire;
  max_length?: number;
}

export interface PluginEntry {
  name: string;
  schema: { name: string; version: number; fields: FieldSpecWire[] };
}

export class RequestFailed extends Error {
  constructor(
    public status: number,
    public error: ApiError,
  ) {
    super(`${error.code}: ${error.message}`);
  }
}

// Generation knobs a user can change from the UI. Serialized into every
// read request so the server stays stateless about what we are browsing.
export interface GenKnobs {
  worldSeed?: string;
  density?: number;
  galaxyCount?: number;
  systemsPerGalaxy?: number;
}

export function knobsToQuery(knobs: GenKnobs): URLSearchParams {
  const query = new URLSearchParams();
  if (knobs.worldSeed !== undefined) query.set("world_seed", knobs.worldSeed);
  if (knobs.density !== undefined) query.set("density", String(knobs.density));
  if (knobs.galaxyCount !== undefined) query.set("galaxy_count", String(knobs.galaxyCount));
  if (knobs.systemsPerGalaxy !== undefined)
    query.set("systems_per_galaxy", String(knobs.systemsPerGalaxy));
  return query;
}

export function knobsFromParams(params: UniverseParams): GenKnobs {
  return {
    worldSeed: params.world_seed,
    density: params.density,
    galaxyCount: params.galaxy_count,
    systemsPerGalaxy: params.systems_per_galaxy,
  };
}

async function parseError(resp: Response): Promise<RequestFailed> {
  let body: ApiError;
  try {
    body = (await resp.json()) as ApiError;
  } catch {
    body = { code: `Http${resp.status}`, message: resp.statusText, details: {} };
  }
  return new RequestFailed(resp.status, body);
}

export interface BriefStreamHandlers {
  onStatus?: (state: string) => void;
  onChunk?: (field: string, delta: string) => void;
  onDone: (result: { tier_used: string; retries: number; document: WireDocument }) => void;
}

export class AtlasClient {
  constructor(public baseUrl: string) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
  }

  private url(path: string, query?: URLSearchParams): string {
    const qs = query && [...query.keys()].length > 0 ? `?${query.toString()}` : "";
    return `${this.baseUrl}${path}${qs}`;
  }

  private async get<T>(path: string, query?: URLSearchParams): Promise<T> {
    const resp = await fetch(this.url(path, query));
    if (!resp.ok) throw await parseError(resp);
    return (await resp.json()) as T;
  }

  fetchUniverse(knobs: GenKnobs = {}): Promise<UniverseLayout> {
    return this.get<UniverseLayout>("/api/universe", knobsToQuery(knobs));
  }

  fetchNode(nodeId: string, knobs: GenKnobs = {}): Promise<NodeDetail> {
    return this.get<NodeDetail>(`/api/node/${nodeId}`, knobsToQuery(knobs));
  }

  fetchPlugins(): Promise<{ plugins: PluginEntry[] }> {
    return this.get<{ plugins: PluginEntry[] }>("/api/plugins");
  }

  fetchBrief(nodeId: string, knobs: GenKnobs = {}, plugin?: string): Promise<BriefResult> {
    const query = knobsToQuery(knobs);
    if (plugin) query.set("plugin", plugin);
    return this.get<BriefResult>(`/api/node/${nodeId}/brief`, query);
  }

  // Reads the server-sent event stream for a brief. Resolves once the done
  // event arrives; a transport break mid-stream rejects so the caller can
  // fall back to the plain fetch.
  async streamBrief(
    nodeId: string,
    knobs: GenKnobs,
    handlers: BriefStreamHandlers,
    plugin?: string,
  ): Promise<void> {
    const query = knobsToQuery(knobs);
    query.set("stream", "1");
    if (plugin) query.set("plugin", plugin);
    const resp = await fetch(this.url(`/api/node/${nodeId}/brief`, query));
    if (!resp.ok) throw await parseError(resp);
    if (!resp.body) throw new Error("response has no body stream");

    const reader = resp.body.getReader();
    const decoder = new TextDecoder();
    let buffer = "";
    let sawDone = false;
    while (true) {
      const { done, value } = await reader.read();
      if (done) break;
      buffer += decoder.decode(value, { stream: true });
      let split;
      while ((split = buffer.indexOf("\n\n")) >= 0) {
        const block = buffer.slice(0, split);
        buffer = buffer.slice(split + 2);
        const lines = block.split("\n");
        const eventLine = lines.find((l) => l.startsWith("event: "));
        const dataLine = lines.find((l) => l.startsWith("data: "));
        if (!eventLine || !dataLine) continue;
        const event = eventLine.slice(7).trim();
        const data = JSON.parse(dataLine.slice(6));
        if (event === "status") handlers.onStatus?.(data.state);
        else if (event === "chunk") handlers.onChunk?.(data.field, data.delta);
        else if (event === "done") {
          sawDone = true;
          handlers.onDone(data);
        }
      }
    }
    if (!sawDone) throw new Error("brief stream ended before the done event");
  }

  async postAction(
    sessionId: string,
    action: Record<string, unknown>,
  ): Promise<ActionResponse> {
    const resp = await fetch(this.url(`/api/voyager/${sessionId}/action`), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(action),
    });
    if (!resp.ok) throw await parseError(resp);
    return (await resp.json()) as ActionResponse;
  }
}
