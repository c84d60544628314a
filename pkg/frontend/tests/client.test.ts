// SessionClient REST handling against a mocked fetch.

import { afterEach, describe, expect, it, vi } from "vitest";

import { SessionClient } from "../src/client.js";
import { SessionState } from "../src/types.js";

const STATE: SessionState = {
  mode: "QNH",
  variables: { units: "hPa", display: "990.00", pre_edit: "990.00", entry: "" },
  display: "990 hPa",
  enabled: ["stdClick", "unitClick", "digit9"],
};

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("SessionClient", () => {
  it("creates a session and remembers its id", async () => {
    const calls: string[] = [];
    vi.stubGlobal("fetch", async (url: string) => {
      calls.push(String(url));
      return jsonResponse({ id: "abc123", state: STATE });
    });
    const client = new SessionClient("http://svc");
    const state = await client.createSession("fcu.hmi");
    expect(client.sessionId).toBe("abc123");
    expect(state.display).toBe("990 hPa");
    expect(calls).toEqual(["http://svc/sessions"]);
  });

  it("forwards the state of every accepted event to listeners", async () => {
    vi.stubGlobal("fetch", async (url: string, init?: RequestInit) => {
      if (String(url).endsWith("/events")) {
        expect(JSON.parse(String(init?.body))).toEqual({ event: "qnhClick" });
        return jsonResponse({ accepted: true, fired: "mode_to_qnh", state: STATE });
      }
      return jsonResponse({ id: "s1", state: STATE });
    });
    const client = new SessionClient("http://svc");
    await client.createSession("fcu.hmi");
    const seen: string[] = [];
    client.onState((s) => seen.push(s.display));
    const result = await client.send("qnhClick");
    expect(result.accepted).toBe(true);
    expect(seen).toEqual(["990 hPa"]);
  });

  it("raises on rejected events", async () => {
    vi.stubGlobal("fetch", async (url: string) => {
      if (String(url).endsWith("/events")) {
        return jsonResponse({ detail: [{ message: "unknown event 'zap'" }] }, 400);
      }
      return jsonResponse({ id: "s1", state: STATE });
    });
    const client = new SessionClient("http://svc");
    await client.createSession("fcu.hmi");
    await expect(client.send("zap")).rejects.toThrow(/event rejected: 400/);
  });

  it("polling forwards only changed states", async () => {
    vi.useFakeTimers();
    let display = "990 hPa";
    vi.stubGlobal("fetch", async (url: string) => {
      if (String(url).endsWith("/state")) {
        return jsonResponse({ ...STATE, display });
      }
      return jsonResponse({ id: "s1", state: STATE });
    });
    vi.stubGlobal("WebSocket", undefined);
    const client = new SessionClient("http://svc");
    await client.createSession("fcu.hmi");
    const seen: string[] = [];
    client.onState((s) => seen.push(s.display));
    client.connectStream(50);
    await vi.advanceTimersByTimeAsync(120);   // two polls, same state
    display = "1013 hPa";
    await vi.advanceTimersByTimeAsync(120);   // changed state arrives once
    client.stopStream();
    vi.useRealTimers();
    expect(seen).toEqual(["990 hPa", "1013 hPa"]);
  });
});
