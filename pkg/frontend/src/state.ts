// View state and its pure transitions. The store never computes physics:
// fuel, route, and node attributes only ever arrive inside server
// responses, and briefs carry the tier the server says produced them.

import type {
  ActionResponse,
  GenKnobs,
  UniverseLayout,
  VoyagerView,
  WireDocument,
} from "./api.js";

export type BriefStatus = "idle" | "syncing" | "shown" | "failed";

export interface BriefView {
  status: BriefStatus;
  nodeId: string | null;
  document: WireDocument | null;
  partial: Record<string, string>;
  tierBadge: string | null;
  errorCode: string | null;
}

export interface Toast {
  id: number;
  code: string;
  message: string;
}

export interface ViewState {
  knobs: GenKnobs;
  layout: UniverseLayout | null;
  layoutError: string | null;
  selectedNode: string | null;
  brief: BriefView;
  voyager: VoyagerView | null;
  toasts: Toast[];
}

export function initialState(knobs: GenKnobs = {}): ViewState {
  return {
    knobs,
    layout: null,
    layoutError: null,
    selectedNode: null,
    brief: { status: "idle", nodeId: null, document: null, partial: {}, tierBadge: null, errorCode: null },
    voyager: null,
    toasts: [],
  };
}

let toastCounter = 0;

export function withLayout(state: ViewState, layout: UniverseLayout): ViewState {
  // a fresh layout invalidates the node selection unless it survived
  const survivors = new Set<string>();
  for (const galaxy of layout.galaxies)
    for (const system of galaxy.systems)
      for (const node of system.nodes) survivors.add(node.node_id);
  const selected = state.selectedNode && survivors.has(state.selectedNode) ? state.selectedNode : null;
  return { ...state, layout, layoutError: null, selectedNode: selected };
}

export function withLayoutError(state: ViewState, message: string): ViewState {
  return { ...state, layoutError: message };
}

export function withKnobs(state: ViewState, knobs: GenKnobs): ViewState {
  return { ...state, knobs };
}

export function withSelection(state: ViewState, nodeId: string | null): ViewState {
  return { ...state, selectedNode: nodeId };
}

export function briefSyncing(state: ViewState, nodeId: string): ViewState {
  return {
    ...state,
    brief: { status: "syncing", nodeId, document: null, partial: {}, tierBadge: null, errorCode: null },
  };
}

export function briefChunk(state: ViewState, field: string, delta: string): ViewState {
  if (state.brief.status !== "syncing") return state;
  const partial = { ...state.brief.partial, [field]: (state.brief.partial[field] ?? "") + delta };
  return { ...state, brief: { ...state.brief, partial } };
}

export function briefShown(
  state: ViewState,
  nodeId: string,
  document: WireDocument,
  tierUsed: string,
): ViewState {
  return {
    ...state,
    brief: { status: "shown", nodeId, document, partial: {}, tierBadge: tierUsed, errorCode: null },
  };
}

export function briefFailed(state: ViewState, nodeId: string, code: string): ViewState {
  return {
    ...state,
    brief: { status: "failed", nodeId, document: null, partial: {}, tierBadge: null, errorCode: code },
  };
}

// Every physics value on screen comes through here, from a server response.
export function withActionResult(state: ViewState, response: ActionResponse): ViewState {
  return { ...state, voyager: response.voyager };
}

export function withToast(state: ViewState, code: string, message: string): ViewState {
  const toast = { id: ++toastCounter, code, message };
  return { ...state, toasts: [...state.toasts, toast] };
}

export function dismissToast(state: ViewState, id: number): ViewState {
  return { ...state, toasts: state.toasts.filter((t) => t.id !== id) };
}

export type Listener = (state: ViewState) => void;

export class Store {
  private listeners: Listener[] = [];

  constructor(public state: ViewState) {}

  apply(update: (state: ViewState) => ViewState): ViewState {
    this.state = update(this.state);
    for (const listener of this.listeners) listener(this.state);
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }
}
