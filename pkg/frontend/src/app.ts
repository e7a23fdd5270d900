// Application wiring: owns the client, the store, and the DOM regions,
// and enforces the two client-side concurrency rules (one in-flight brief
// per node, actions serialized per session).

import { AtlasClient, knobsFromParams, RequestFailed } from "./api.js";
import type { GenKnobs, NodeDetail } from "./api.js";
import { countRenderedNodes, renderMap } from "./map.js";
import {
  renderBriefPanel,
  renderControls,
  renderNodePanel,
  renderToasts,
  renderVoyager,
} from "./panels.js";
import {
  briefChunk,
  briefFailed,
  briefShown,
  briefSyncing,
  dismissToast,
  initialState,
  Store,
  withActionResult,
  withKnobs,
  withLayout,
  withLayoutError,
  withSelection,
  withToast,
} from "./state.js";
import type { ViewState } from "./state.js";

export interface AppRegions {
  controls: HTMLElement;
  map: HTMLElement;
  nodePanel: HTMLElement;
  briefPanel: HTMLElement;
  voyagerPanel: HTMLElement;
  toasts: HTMLElement;
}

const SEED_MODULUS = 2n ** 64n;

export class App {
  readonly client: AtlasClient;
  readonly store: Store;
  readonly sessionId: string;
  private regions: AppRegions;
  private detail: NodeDetail | null = null;
  private briefsInFlight = new Map<string, Promise<void>>();
  private actionChain: Promise<void> = Promise.resolve();

  constructor(baseUrl: string, regions: AppRegions, sessionId?: string) {
    this.client = new AtlasClient(baseUrl);
    this.store = new Store(initialState());
    this.regions = regions;
    this.sessionId = sessionId ?? `voyager-${Math.random().toString(36).slice(2, 10)}`;
    this.store.subscribe(() => this.render());
  }

  get state(): ViewState {
    return this.store.state;
  }

  async boot(): Promise<void> {
    await this.refreshUniverse();
  }

  async refreshUniverse(): Promise<void> {
    try {
      const layout = await this.client.fetchUniverse(this.state.knobs);
      // mirror the server's authoritative parameter set
      this.store.apply((s) => withKnobs(withLayout(s, layout), knobsFromParams(layout.params)));
    } catch (err) {
      const message = err instanceof Error ? err.message : String(err);
      this.store.apply((s) => withLayoutError(s, message));
    }
  }

  async setDensity(value: number): Promise<void> {
    this.store.apply((s) => withKnobs(s, { ...s.knobs, density: value }));
    await this.refreshUniverse();
  }

  async reseed(): Promise<void> {
    const current = this.state.knobs.worldSeed ?? this.state.layout?.params.world_seed ?? "0";
    const next = ((BigInt(current) + 1n) % SEED_MODULUS).toString();
    this.store.apply((s) => withKnobs(s, { ...s.knobs, worldSeed: next }));
    await this.refreshUniverse();
  }

  async selectNode(nodeId: string): Promise<void> {
    this.store.apply((s) => withSelection(s, nodeId));
    try {
      this.detail = await this.client.fetchNode(nodeId, this.state.knobs);
    } catch (err) {
      this.detail = null;
      const code = err instanceof RequestFailed ? err.error.code : "FetchFailed";
      this.store.apply((s) => withToast(s, code, `could not load node ${nodeId}`));
      return;
    }
    this.render();
    await this.showBrief(nodeId);
  }

  // One in-flight brief request per node; a second request for the same
  // node while the first runs just joins it.
  showBrief(nodeId: string): Promise<void> {
    const existing = this.briefsInFlight.get(nodeId);
    if (existing) return existing;
    const run = this.runBrief(nodeId).finally(() => this.briefsInFlight.delete(nodeId));
    this.briefsInFlight.set(nodeId, run);
    return run;
  }

  private async runBrief(nodeId: string): Promise<void> {
    this.store.apply((s) => briefSyncing(s, nodeId));
    try {
      await this.client.streamBrief(nodeId, this.state.knobs, {
        onChunk: (field, delta) => this.store.apply((s) => briefChunk(s, field, delta)),
        onDone: ({ tier_used, document }) =>
          this.store.apply((s) => briefShown(s, nodeId, document, tier_used)),
      });
      return;
    } catch (err) {
      if (err instanceof RequestFailed) {
        this.store.apply((s) => briefFailed(s, nodeId, err.error.code));
        return;
      }
      // stream broke mid-flight; fall back to the plain fetch
    }
    try {
      const result = await this.client.fetchBrief(nodeId, this.state.knobs);
      this.store.apply((s) => briefShown(s, nodeId, result.document, result.tier_used));
    } catch (err) {
      const code = err instanceof RequestFailed ? err.error.code : "FetchFailed";
      this.store.apply((s) => briefFailed(s, nodeId, code));
    }
  }

  // Actions are serialized client-side so the UI cannot race itself into
  // 409s; each action settles before the next is posted.
  act(action: Record<string, unknown>): Promise<void> {
    const run = this.actionChain.then(async () => {
      try {
        const response = await this.client.postAction(this.sessionId, action);
        this.store.apply((s) => withActionResult(s, response));
      } catch (err) {
        if (err instanceof RequestFailed) {
          // domain rejection: surface the code, never touch local physics
          this.store.apply((s) => withToast(s, err.error.code, err.error.message));
        } else {
          const message = err instanceof Error ? err.message : String(err);
          this.store.apply((s) => withToast(s, "TransportError", message));
        }
      }
    });
    this.actionChain = run;
    return run;
  }

  travel(targetId: string): Promise<void> {
    return this.act({ kind: "travel", target: targetId });
  }

  scan(): Promise<void> {
    return this.act({ kind: "scan" });
  }

  render(): void {
    const state = this.state;
    renderControls(this.regions.controls, state.knobs.density ?? state.layout?.params.density ?? 1.0, state.layoutError, {
      onDensity: (value) => void this.setDensity(value),
      onReseed: () => void this.reseed(),
      onRetry: () => void this.refreshUniverse(),
    });
    if (state.layout) {
      renderMap(this.regions.map, state.layout, state.selectedNode, {
        onSelect: (nodeId) => void this.selectNode(nodeId),
      });
    }
    renderNodePanel(this.regions.nodePanel, this.detail, state.voyager, {
      onTravel: (target) => void this.travel(target),
      onBrief: (nodeId) => void this.showBrief(nodeId),
    });
    renderBriefPanel(this.regions.briefPanel, state.brief);
    renderVoyager(this.regions.voyagerPanel, state.voyager);
    renderToasts(this.regions.toasts, state.toasts, (id) =>
      this.store.apply((s) => dismissToast(s, id)),
    );
  }

  renderedNodeCount(): number {
    return countRenderedNodes(this.regions.map);
  }
}
