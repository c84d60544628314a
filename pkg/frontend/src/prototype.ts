// Renders the device picture with hotspot inputs and live display elements.
//
// The panel computes no model logic: every rendered value is copied verbatim
// from the most recent service state (indicators compare the bound value
// with a constant, nothing more).

import { SessionClient } from "./client.js";
import { DisplayWidget, Rect, SessionState, WidgetConfig } from "./types.js";

export function validateConfig(config: WidgetConfig, state: SessionState): string[] {
  const problems: string[] = [];
  const { width, height } = config.imageSize;
  const inBounds = (r: Rect) =>
    r.x >= 0 && r.y >= 0 && r.w > 0 && r.h > 0 && r.x + r.w <= width && r.y + r.h <= height;
  for (const w of [...config.inputs, ...config.displays]) {
    if (!inBounds(w.rect)) {
      problems.push(`widget '${w.id}': rectangle lies outside the ${width}x${height} image`);
    }
  }
  const known = new Set(["mode", "display", ...Object.keys(state.variables)]);
  for (const d of config.displays) {
    if (!known.has(d.binding)) {
      problems.push(`display '${d.id}': unknown binding '${d.binding}'`);
    }
  }
  const ids = [...config.inputs, ...config.displays].map((w) => w.id);
  for (const id of ids.filter((x, i) => ids.indexOf(x) !== i)) {
    problems.push(`duplicate widget id '${id}'`);
  }
  return problems;
}

function boundValue(state: SessionState, binding: string): string {
  if (binding === "mode") {
    return state.mode;
  }
  if (binding === "display") {
    return state.display;
  }
  return state.variables[binding] ?? "";
}

export class Prototype {
  readonly root: HTMLElement;
  private displays = new Map<string, { el: HTMLElement; widget: DisplayWidget }>();
  updates = 0;

  constructor(
    container: HTMLElement,
    readonly config: WidgetConfig,
    readonly client: SessionClient,
    imageUrl: string,
  ) {
    this.root = container.ownerDocument.createElement("div");
    this.root.className = "prototype";
    container.appendChild(this.root);

    const doc = container.ownerDocument;
    const img = doc.createElement("img");
    img.src = imageUrl;
    img.alt = "device panel";
    img.className = "panel-image";
    this.root.appendChild(img);

    const pct = (v: number, total: number) => `${(100 * v) / total}%`;
    const { width, height } = config.imageSize;
    const place = (el: HTMLElement, r: Rect) => {
      el.style.left = pct(r.x, width);
      el.style.top = pct(r.y, height);
      el.style.width = pct(r.w, width);
      el.style.height = pct(r.h, height);
    };

    for (const input of config.inputs) {
      const button = doc.createElement("button");
      button.id = input.id;
      button.className = "hotspot";
      button.title = input.label;
      button.setAttribute("aria-label", input.label);
      place(button, input.rect);
      button.addEventListener("click", () => void this.press(input.id));
      this.root.appendChild(button);
    }
    for (const display of config.displays) {
      const el = doc.createElement("div");
      el.id = display.id;
      el.className = `display display-${display.format}`;
      place(el, display.rect);
      this.root.appendChild(el);
      this.displays.set(display.id, { el, widget: display });
    }
    client.onState((state) => this.update(state));
  }

  async press(widgetId: string): Promise<void> {
    const input = this.config.inputs.find((w) => w.id === widgetId);
    if (!input) {
      throw new Error(`no input widget '${widgetId}'`);
    }
    const button = this.root.querySelector<HTMLElement>(`#${widgetId}`);
    try {
      const result = await this.client.send(input.event);
      if (!result.accepted && button) {
        // ignored events flash the widget; displays stay as they are
        button.classList.add("flash");
        setTimeout(() => button.classList.remove("flash"), 300);
      }
    } catch (err) {
      this.toast(String(err));
    }
  }

  update(state: SessionState): void {
    this.updates += 1;
    for (const { el, widget } of this.displays.values()) {
      const value = boundValue(state, widget.binding);
      if (widget.format === "indicator") {
        el.textContent = widget.label ?? widget.binding;
        el.classList.toggle("lit", value === widget.when);
      } else {
        el.textContent = value;
      }
    }
  }

  toast(message: string): void {
    const doc = this.root.ownerDocument;
    const note = doc.createElement("div");
    note.className = "toast";
    note.textContent = message;
    this.root.appendChild(note);
    setTimeout(() => note.remove(), 4000);
  }
}

export function banner(container: HTMLElement, problems: string[]): HTMLElement {
  const el = container.ownerDocument.createElement("div");
  el.className = "banner";
  el.textContent = `prototype validation failed: ${problems.join("; ")}`;
  container.appendChild(el);
  return el;
}
