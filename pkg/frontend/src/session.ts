// Connection state machine: hello handshake, reconnect backoff, stale-drop.

import {
  FrameMessage,
  HelloMessage,
  PROTO_VERSION,
  ProtocolError,
  ServerMessage,
  TelemetryMessage,
  parseServerMessage,
} from "./protocol.js";

export type ConnectionState =
  | "connecting"
  | "connected"
  | "reconnecting"
  | "failed"; // terminal, e.g. protocol version mismatch

// the subset of the browser WebSocket API the session uses
export interface SocketLike {
  onopen: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
  send(data: string): void;
  close(): void;
}

export interface SessionHooks {
  onState?: (state: ConnectionState, detail?: string) => void;
  onHello?: (hello: HelloMessage) => void;
  onFrame?: (frame: FrameMessage) => void;
  onTelemetry?: (telemetry: TelemetryMessage) => void;
  onServerError?: (code: string, message: string) => void;
}

export const RECONNECT_BASE_MS = 500;
export const RECONNECT_MAX_MS = 8000;

export class Session {
  state: ConnectionState = "connecting";
  lastSeq = -1;

  private ws: SocketLike | null = null;
  private gotHello = false;
  private attempts = 0;
  private closedByUs = false;

  constructor(
    private url: string,
    private hooks: SessionHooks,
    private makeSocket: (url: string) => SocketLike = (u) =>
      new WebSocket(u) as unknown as SocketLike,
    private schedule: (fn: () => void, ms: number) => void = (fn, ms) => {
      setTimeout(fn, ms);
    },
  ) {}

  connect(): void {
    this.setState(this.attempts === 0 ? "connecting" : "reconnecting");
    this.gotHello = false;
    const ws = this.makeSocket(this.url);
    this.ws = ws;
    ws.onopen = () => {
      this.attempts = 0;
    };
    ws.onmessage = (ev) => this.handleRaw(String(ev.data));
    ws.onclose = () => {
      if (this.ws !== ws) {
        return; // superseded socket
      }
      this.ws = null;
      if (this.closedByUs || this.state === "failed") {
        return;
      }
      this.scheduleReconnect();
    };
  }

  close(): void {
    this.closedByUs = true;
    this.ws?.close();
    this.ws = null;
  }

  send(payload: string): boolean {
    if (this.state !== "connected" || this.ws === null) {
      return false;
    }
    this.ws.send(payload);
    return true;
  }

  backoffMs(): number {
    return Math.min(RECONNECT_MAX_MS, RECONNECT_BASE_MS * 2 ** this.attempts);
  }

  private scheduleReconnect(): void {
    const wait = this.backoffMs();
    this.attempts += 1;
    this.setState("reconnecting", `retrying in ${wait} ms`);
    this.schedule(() => {
      if (!this.closedByUs && this.state !== "failed") {
        this.connect();
      }
    }, wait);
  }

  private setState(state: ConnectionState, detail?: string): void {
    this.state = state;
    this.hooks.onState?.(state, detail);
  }

  private handleRaw(raw: string): void {
    let msg: ServerMessage;
    try {
      msg = parseServerMessage(raw);
    } catch (err) {
      if (err instanceof ProtocolError) {
        this.hooks.onServerError?.("bad_server_message", err.message);
        return;
      }
      throw err;
    }
    if (!this.gotHello) {
      if (msg.type === "error") {
        // refused before hello (e.g. busy): surface and retry later
        this.hooks.onServerError?.(msg.code, msg.message);
        return;
      }
      if (msg.type !== "hello") {
        this.hooks.onServerError?.("bad_server_message", "expected hello first");
        return;
      }
      if (msg.proto_version !== PROTO_VERSION) {
        // terminal: a newer protocol is not something a retry can fix
        this.setState("failed", `protocol version ${msg.proto_version} unsupported`);
        this.closedByUs = true;
        this.ws?.close();
        return;
      }
      this.gotHello = true;
      this.setState("connected");
      this.hooks.onHello?.(msg);
      return;
    }
    switch (msg.type) {
      case "frame":
        if (msg.seq < this.lastSeq) {
          return; // never show an older frame than the one on screen
        }
        this.lastSeq = msg.seq;
        this.hooks.onFrame?.(msg);
        break;
      case "telemetry":
        if (msg.seq < this.lastSeq) {
          return;
        }
        this.hooks.onTelemetry?.(msg);
        break;
      case "error":
        this.hooks.onServerError?.(msg.code, msg.message);
        break;
      case "hello":
        break; // duplicate hello after handshake: ignore
    }
  }
}
