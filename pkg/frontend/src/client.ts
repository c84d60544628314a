// Session client: REST calls plus a state stream.
//
// The stream uses the service WebSocket when the environment provides one
// and falls back to polling GET /state otherwise; in both cases every POSTed
// event also forwards the state from the response, so displays always show
// service state verbatim.

import { EventResult, SessionState } from "./types.js";

export type StateListener = (state: SessionState) => void;

export class SessionClient {
  private listeners: StateListener[] = [];
  private ws: WebSocket | null = null;
  private pollTimer: ReturnType<typeof setInterval> | null = null;
  private lastSerialized = "";
  sessionId = "";

  constructor(readonly baseUrl: string) {}

  onState(listener: StateListener): void {
    this.listeners.push(listener);
  }

  private push(state: SessionState): void {
    this.lastSerialized = JSON.stringify(state);
    for (const listener of this.listeners) {
      listener(state);
    }
  }

  async createSession(model: string): Promise<SessionState> {
    const r = await fetch(`${this.baseUrl}/sessions`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ model }),
    });
    if (!r.ok) {
      throw new Error(`session creation failed: ${r.status} ${await r.text()}`);
    }
    const body = await r.json();
    this.sessionId = body.id;
    return body.state as SessionState;
  }

  async state(): Promise<SessionState> {
    const r = await fetch(`${this.baseUrl}/sessions/${this.sessionId}/state`);
    if (!r.ok) {
      throw new Error(`state fetch failed: ${r.status}`);
    }
    return (await r.json()) as SessionState;
  }

  async send(event: string): Promise<EventResult> {
    const r = await fetch(`${this.baseUrl}/sessions/${this.sessionId}/events`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ event }),
    });
    if (!r.ok) {
      throw new Error(`event rejected: ${r.status} ${await r.text()}`);
    }
    const result = (await r.json()) as EventResult;
    this.push(result.state);
    return result;
  }

  async close(): Promise<void> {
    this.stopStream();
    if (this.sessionId) {
      await fetch(`${this.baseUrl}/sessions/${this.sessionId}`, { method: "DELETE" });
    }
  }

  // --- streaming ---

  connectStream(pollMs = 250): void {
    const WS = (globalThis as { WebSocket?: typeof WebSocket }).WebSocket;
    if (WS) {
      const wsUrl = this.baseUrl.replace(/^http/, "ws")
        + `/sessions/${this.sessionId}/stream`;
      try {
        this.ws = new WS(wsUrl);
        this.ws.onmessage = (msg) => this.push(JSON.parse(msg.data as string));
        this.ws.onerror = () => this.startPolling(pollMs);
        return;
      } catch {
        this.ws = null;
      }
    }
    this.startPolling(pollMs);
  }

  private startPolling(pollMs: number): void {
    if (this.pollTimer !== null) {
      return;
    }
    this.pollTimer = setInterval(async () => {
      try {
        const state = await this.state();
        // only forward actual changes so listeners see one update per state
        if (JSON.stringify(state) !== this.lastSerialized) {
          this.push(state);
        }
      } catch {
        // transient failures surface through the next user action
      }
    }, pollMs);
  }

  stopStream(): void {
    if (this.ws) {
      this.ws.close();
      this.ws = null;
    }
    if (this.pollTimer !== null) {
      clearInterval(this.pollTimer);
      this.pollTimer = null;
    }
  }
}
