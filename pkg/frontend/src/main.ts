// Entry point for the browser build. The base URL comes from the page
// (data-api-base on <body>) and defaults to same-origin.

import { App } from "./app.js";
import type { AppRegions } from "./app.js";

function region(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id} in the page`);
  return el;
}

export function start(): App {
  const base = document.body.dataset.apiBase ?? "";
  const regions: AppRegions = {
    controls: region("controls"),
    map: region("map"),
    nodePanel: region("node-panel"),
    briefPanel: region("brief-panel"),
    voyagerPanel: region("voyager-panel"),
    toasts: region("toasts"),
  };
  const app = new App(base, regions);
  void app.boot();
  return app;
}

if (typeof document !== "undefined" && document.readyState !== "loading") {
  start();
} else if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", () => start());
}
