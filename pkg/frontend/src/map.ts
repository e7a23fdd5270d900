// 2D galaxy map rendered as SVG. Positions come straight from the layout;
// the map never invents geometry beyond scaling into its viewport.

import type { UniverseLayout } from "./api.js";

const VIEW = 900;
const GALAXY_CELL = 280;

export interface MapHandlers {
  onSelect: (nodeId: string) => void;
}

interface Placed {
  id: string;
  x: number;
  y: number;
}

function svgEl<K extends keyof SVGElementTagNameMap>(
  doc: Document,
  tag: K,
  attrs: Record<string, string>,
): SVGElementTagNameMap[K] {
  const el = doc.createElementNS("http://www.w3.org/2000/svg", tag);
  for (const [key, value] of Object.entries(attrs)) el.setAttribute(key, value);
  return el;
}

export function renderMap(
  container: HTMLElement,
  layout: UniverseLayout,
  selected: string | null,
  handlers: MapHandlers,
): void {
  const doc = container.ownerDocument;
  container.textContent = "";
  const svg = svgEl(doc, "svg", {
    viewBox: `0 0 ${VIEW} ${VIEW}`,
    width: "100%",
    "data-role": "map",
  });

  // galaxies tile a simple grid; systems and nodes scale into each cell
  const columns = Math.ceil(Math.sqrt(layout.galaxies.length));
  layout.galaxies.forEach((galaxy, index) => {
    const cellX = (index % columns) * GALAXY_CELL + 20;
    const cellY = Math.floor(index / columns) * GALAXY_CELL + 20;
    const group = svgEl(doc, "g", { "data-galaxy": String(galaxy.index) });

    const label = svgEl(doc, "text", {
      x: String(cellX),
      y: String(cellY - 4),
      class: "galaxy-label",
    });
    label.textContent = galaxy.label;
    group.appendChild(label);

    // collect node positions first so lanes can connect them
    const placed = new Map<string, Placed>();
    let maxCoord = 1;
    for (const system of galaxy.systems)
      for (const node of system.nodes)
        maxCoord = Math.max(maxCoord, node.position[0], node.position[1]);
    const scale = (GALAXY_CELL - 50) / maxCoord;

    for (const system of galaxy.systems) {
      for (const node of system.nodes) {
        placed.set(node.node_id, {
          id: node.node_id,
          x: cellX + node.position[0] * scale,
          y: cellY + node.position[1] * scale,
        });
      }
    }

    for (const system of galaxy.systems) {
      for (const lane of system.lanes) {
        const a = placed.get(lane.a);
        const b = placed.get(lane.b);
        if (!a || !b) continue;
        group.appendChild(
          svgEl(doc, "line", {
            x1: String(a.x),
            y1: String(a.y),
            x2: String(b.x),
            y2: String(b.y),
            class: "lane",
            "data-cost": String(lane.cost),
          }),
        );
      }
    }

    for (const system of galaxy.systems) {
      for (const node of system.nodes) {
        const spot = placed.get(node.node_id)!;
        const circle = svgEl(doc, "circle", {
          cx: String(spot.x),
          cy: String(spot.y),
          r: node.node_id === selected ? "7" : "5",
          class: `node risk-${node.risk}${node.node_id === selected ? " selected" : ""}`,
          "data-node-id": node.node_id,
        });
        const title = svgEl(doc, "title", {});
        title.textContent = `${node.display_name} (${node.node_type})`;
        circle.appendChild(title);
        circle.addEventListener("click", () => handlers.onSelect(node.node_id));
        group.appendChild(circle);
      }
    }
    svg.appendChild(group);
  });

  container.appendChild(svg);
}

export function countRenderedNodes(container: HTMLElement): number {
  return container.querySelectorAll("circle.node").length;
}

export function renderedNodeIds(container: HTMLElement): string[] {
  return [...container.querySelectorAll("circle.node")].map(
    (el) => el.getAttribute("data-node-id") ?? "",
  );
}
