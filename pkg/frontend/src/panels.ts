// DOM panels around the map: node detail, brief cards, voyager HUD,
// toasts, and the universe controls. Plain DOM, no framework.

import type { AdjacentEntry, NodeDetail, VoyagerView, WireDocument } from "./api.js";
import type { BriefView, Toast } from "./state.js";

function el(doc: Document, tag: string, className?: string, text?: string): HTMLElement {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export interface NodePanelHandlers {
  onTravel: (targetId: string) => void;
  onBrief: (nodeId: string) => void;
}

export function renderNodePanel(
  container: HTMLElement,
  detail: NodeDetail | null,
  voyager: VoyagerView | null,
  handlers: NodePanelHandlers,
): void {
  const doc = container.ownerDocument;
  container.textContent = "";
  if (!detail) {
    container.appendChild(el(doc, "p", "hint", "Select a node on the map."));
    return;
  }
  const node = detail.node;
  container.appendChild(el(doc, "h2", "node-name", node.display_name));
  container.appendChild(
    el(doc, "p", "node-meta", `${node.sector} · ${node.node_type} · risk ${node.risk} · resources ${node.resources}`),
  );

  const briefButton = el(doc, "button", "brief-button", "Request brief") as HTMLButtonElement;
  briefButton.addEventListener("click", () => handlers.onBrief(node.node_id));
  container.appendChild(briefButton);

  const laneList = el(doc, "ul", "lanes");
  const adjacentIds = new Set(detail.adjacent.map((a) => a.node_id));
  for (const lane of detail.adjacent) {
    const item = el(doc, "li", "lane-entry");
    item.appendChild(el(doc, "span", undefined, `${lane.display_name} (cost ${lane.cost})`));
    item.appendChild(travelButton(doc, lane, voyager, handlers));
    laneList.appendChild(item);
  }
  container.appendChild(laneList);

  // advisory pre-check only: the button to travel to the selected node is
  // disabled unless a lane connects it to the voyager's location. The
  // server remains the authority when the button is somehow clicked.
  if (voyager && voyager.location !== node.node_id) {
    const direct = el(doc, "button", "travel-selected", `Travel here`) as HTMLButtonElement;
    direct.setAttribute("data-target", node.node_id);
    const reachable = voyagerCanReach(voyager, node.node_id, adjacentIds);
    direct.disabled = !reachable;
    direct.addEventListener("click", () => handlers.onTravel(node.node_id));
    container.appendChild(direct);
  }
}

function voyagerCanReach(voyager: VoyagerView, nodeId: string, adjacentToNode: Set<string>): boolean {
  // lanes are symmetric, so "voyager's location appears in the node's lane
  // list" mirrors the server-side adjacency rule
  return adjacentToNode.has(voyager.location);
}

function travelButton(
  doc: Document,
  lane: AdjacentEntry,
  voyager: VoyagerView | null,
  handlers: NodePanelHandlers,
): HTMLButtonElement {
  const button = el(doc, "button", "travel-button", "Travel") as HTMLButtonElement;
  button.setAttribute("data-target", lane.node_id);
  button.addEventListener("click", () => handlers.onTravel(lane.node_id));
  return button;
}

export function renderBriefPanel(container: HTMLElement, brief: BriefView): void {
  const doc = container.ownerDocument;
  container.textContent = "";
  container.setAttribute("data-status", brief.status);

  if (brief.status === "idle") {
    container.appendChild(el(doc, "p", "hint", "No brief requested yet."));
    return;
  }
  if (brief.status === "syncing") {
    const indicator = el(doc, "div", "syncing-indicator", "Syncing with the relay…");
    indicator.setAttribute("data-role", "syncing");
    container.appendChild(indicator);
    // partial text accumulates under the indicator while the stream runs
    for (const [field, text] of Object.entries(brief.partial)) {
      const card = el(doc, "div", "brief-card partial");
      card.setAttribute("data-field", field);
      card.appendChild(el(doc, "h3", "card-title", field));
      card.appendChild(el(doc, "p", "card-body", text));
      container.appendChild(card);
    }
    return;
  }
  if (brief.status === "failed") {
    const banner = el(doc, "div", "error-card", `Brief unavailable: ${brief.errorCode}`);
    banner.setAttribute("data-role", "brief-error");
    container.appendChild(banner);
    return;
  }

  const badge = el(doc, "span", `tier-badge tier-${brief.tierBadge}`, brief.tierBadge ?? "");
  badge.setAttribute("data-role", "tier-badge");
  container.appendChild(badge);

  const document_ = brief.document;
  if (!document_) return;
  for (const [field, value] of Object.entries(document_)) {
    if (field === "$schema" || field === "$v") continue;
    const card = el(doc, "div", "brief-card");
    card.setAttribute("data-field", field);
    card.appendChild(el(doc, "h3", "card-title", field.replace(/_/g, " ")));
    if (Array.isArray(value)) {
      const list = el(doc, "ul", "card-list");
      for (const entry of value) list.appendChild(el(doc, "li", undefined, String(entry)));
      card.appendChild(list);
    } else {
      card.appendChild(el(doc, "p", "card-body", String(value)));
    }
    container.appendChild(card);
  }
}

export function renderVoyager(container: HTMLElement, voyager: VoyagerView | null): void {
  const doc = container.ownerDocument;
  container.textContent = "";
  if (!voyager) {
    container.appendChild(el(doc, "p", "hint", "No actions taken yet."));
    return;
  }
  const fuel = el(doc, "div", "fuel", `Fuel: ${voyager.fuel}`);
  fuel.setAttribute("data-role", "fuel");
  fuel.setAttribute("data-fuel", String(voyager.fuel));
  container.appendChild(fuel);
  container.appendChild(el(doc, "div", "credits", `Credits: ${voyager.credits}`));

  const thread = el(doc, "ol", "route-thread");
  thread.setAttribute("data-role", "route");
  for (const stop of voyager.route) thread.appendChild(el(doc, "li", "route-stop", stop));
  container.appendChild(thread);
}

export function renderToasts(
  container: HTMLElement,
  toasts: Toast[],
  onDismiss: (id: number) => void,
): void {
  const doc = container.ownerDocument;
  container.textContent = "";
  for (const toast of toasts) {
    const box = el(doc, "div", "toast", `${toast.code}: ${toast.message}`);
    box.setAttribute("data-code", toast.code);
    box.addEventListener("click", () => onDismiss(toast.id));
    container.appendChild(box);
  }
}

export interface ControlHandlers {
  onDensity: (value: number) => void;
  onReseed: () => void;
  onRetry: () => void;
}

export function renderControls(
  container: HTMLElement,
  density: number,
  layoutError: string | null,
  handlers: ControlHandlers,
): void {
  const doc = container.ownerDocument;
  container.textContent = "";

  if (layoutError) {
    const banner = el(doc, "div", "error-banner", `Could not load the universe: ${layoutError} `);
    banner.setAttribute("data-role", "layout-error");
    const retry = el(doc, "button", "retry-button", "Retry") as HTMLButtonElement;
    retry.addEventListener("click", () => handlers.onRetry());
    banner.appendChild(retry);
    container.appendChild(banner);
  }

  const label = el(doc, "label", "density-label", `Density ${density.toFixed(2)} `);
  const slider = el(doc, "input", "density-slider") as HTMLInputElement;
  slider.type = "range";
  slider.min = "0.2";
  slider.max = "3.0";
  slider.step = "0.1";
  slider.value = String(density);
  slider.setAttribute("data-role", "density");
  slider.addEventListener("change", () => handlers.onDensity(Number(slider.value)));
  label.appendChild(slider);
  container.appendChild(label);

  const reseed = el(doc, "button", "reseed-button", "Reseed universe") as HTMLButtonElement;
  reseed.setAttribute("data-role", "reseed");
  reseed.addEventListener("click", () => handlers.onReseed());
  container.appendChild(reseed);
}
