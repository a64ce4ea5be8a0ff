// Wire protocol spoken with the telemetry service: one JSON object per
// WebSocket text frame, proto_version 1.

export const PROTO_VERSION = 1;

export interface HelloMessage {
  type: "hello";
  proto_version: number;
  frame_width: number;
  frame_height: number;
}

export interface FrameMessage {
  type: "frame";
  seq: number;
  width: number;
  height: number;
  encoding: "gray8_b64";
  data: string;
}

export interface BBox {
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface TelemetryMessage {
  type: "telemetry";
  seq: number;
  pan: number;
  tilt: number;
  errorx: number;
  errory: number;
  fps: number;
  track: "ok" | "lost" | "idle";
  bbox?: BBox;
}

export interface ErrorMessage {
  type: "error";
  code: string;
  message: string;
}

export type ServerMessage =
  | HelloMessage
  | FrameMessage
  | TelemetryMessage
  | ErrorMessage;

export class ProtocolError extends Error {}

function isRecord(v: unknown): v is Record<string, unknown> {
  return typeof v === "object" && v !== null;
}

function requireNumber(msg: Record<string, unknown>, key: string): number {
  const v = msg[key];
  if (typeof v !== "number" || !Number.isFinite(v)) {
    throw new ProtocolError(`field ${key} must be a finite number`);
  }
  return v;
}

/** Parse and validate one server message; throws ProtocolError on junk. */
export function parseServerMessage(raw: string): ServerMessage {
  let parsed: unknown;
  try {
    parsed = JSON.parse(raw);
  } catch {
    throw new ProtocolError("message is not valid JSON");
  }
  if (!isRecord(parsed) || typeof parsed.type !== "string") {
    throw new ProtocolError("message must be an object with a type field");
  }
  switch (parsed.type) {
    case "hello":
      return {
        type: "hello",
        proto_version: requireNumber(parsed, "proto_version"),
        frame_width: requireNumber(parsed, "frame_width"),
        frame_height: requireNumber(parsed, "frame_height"),
      };
    case "frame": {
      if (parsed.encoding !== "gray8_b64") {
        throw new ProtocolError(`unsupported frame encoding ${parsed.encoding}`);
      }
      if (typeof parsed.data !== "string") {
        throw new ProtocolError("frame data must be a base64 string");
      }
      return {
        type: "frame",
        seq: requireNumber(parsed, "seq"),
        width: requireNumber(parsed, "width"),
        height: requireNumber(parsed, "height"),
        encoding: "gray8_b64",
        data: parsed.data,
      };
    }
    case "telemetry": {
      const track = parsed.track;
      if (track !== "ok" && track !== "lost" && track !== "idle") {
        throw new ProtocolError(`unknown track state ${track}`);
      }
      const msg: TelemetryMessage = {
        type: "telemetry",
        seq: requireNumber(parsed, "seq"),
        pan: requireNumber(parsed, "pan"),
        tilt: requireNumber(parsed, "tilt"),
        errorx: requireNumber(parsed, "errorx"),
        errory: requireNumber(parsed, "errory"),
        fps: requireNumber(parsed, "fps"),
        track,
      };
      if (isRecord(parsed.bbox)) {
        const b = parsed.bbox as Record<string, unknown>;
        msg.bbox = {
          x: requireNumber(b, "x"),
          y: requireNumber(b, "y"),
          w: requireNumber(b, "w"),
          h: requireNumber(b, "h"),
        };
      }
      return msg;
    }
    case "error": {
      if (typeof parsed.code !== "string" || typeof parsed.message !== "string") {
        throw new ProtocolError("error message needs code and message strings");
      }
      return { type: "error", code: parsed.code, message: parsed.message };
    }
    default:
      throw new ProtocolError(`unknown message type ${parsed.type}`);
  }
}

export function selectRoiCommand(box: BBox): string {
  return JSON.stringify({ type: "select_roi", x: box.x, y: box.y, w: box.w, h: box.h });
}

export function steerCommand(vx: number, vy: number): string {
  return JSON.stringify({ type: "steer", vx, vy });
}

export function simpleCommand(
  type: "pause" | "resume" | "reset" | "stop",
): string {
  return JSON.stringify({ type });
}

export function setModeCommand(mode: "faithful" | "corrected"): string {
  return JSON.stringify({ type: "set_mode", mode });
}
