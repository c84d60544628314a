// Bootstrap: fetch the widget config, open a session, mount the prototype.
//
// Query parameters:
//   ?config=fcu.widgets.json   config path under the service's /files mount
//   ?base=http://host:port     service base URL (defaults to same origin)

import { SessionClient } from "./client.js";
import { banner, Prototype, validateConfig } from "./prototype.js";
import { WidgetConfig } from "./types.js";

async function boot(): Promise<void> {
  const container = document.getElementById("app");
  if (!container) {
    throw new Error("missing #app container");
  }
  const params = new URLSearchParams(window.location.search);
  const base = params.get("base") ?? window.location.origin;
  const configPath = params.get("config") ?? "fcu.widgets.json";

  try {
    const r = await fetch(`${base}/files/${configPath}`);
    if (!r.ok) {
      throw new Error(`cannot load ${configPath}: ${r.status}`);
    }
    const config = (await r.json()) as WidgetConfig;
    const client = new SessionClient(base);
    const state = await client.createSession(config.model);
    const problems = validateConfig(config, state);
    if (problems.length > 0) {
      banner(container, problems);
      return;
    }
    const imageUrl = `${base}/files/${config.image}`;
    const prototype = new Prototype(container, config, client, imageUrl);
    prototype.update(state);
    client.connectStream();
    window.addEventListener("beforeunload", () => void client.close());
  } catch (err) {
    banner(container, [String(err)]);
  }
}

void boot();
