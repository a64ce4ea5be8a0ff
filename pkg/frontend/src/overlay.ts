// Overlay drawing. Everything rendered here comes from telemetry the
// service sent; the console never recomputes boxes or rates client-side.

import type { BBox, TelemetryMessage } from "./protocol.js";

// structural subset of CanvasRenderingContext2D so tests can pass a fake
export interface OverlayContext {
  strokeStyle: string | CanvasGradient | CanvasPattern;
  fillStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  font: string;
  strokeRect(x: number, y: number, w: number, h: number): void;
  fillText(text: string, x: number, y: number): void;
}

export const TRACK_COLORS: Record<string, string> = {
  ok: "#2b6fff",
  lost: "#ff3b30",
  idle: "#999999",
};

export function drawOverlays(ctx: OverlayContext, telemetry: TelemetryMessage): void {
  if (telemetry.bbox) {
    ctx.strokeStyle = TRACK_COLORS[telemetry.track] ?? TRACK_COLORS.idle;
    ctx.lineWidth = 2;
    const b = telemetry.bbox;
    ctx.strokeRect(b.x, b.y, b.w, b.h);
  }
  ctx.fillStyle = "#ff78c8";
  ctx.font = "16px monospace";
  ctx.fillText(`${Math.trunc(telemetry.fps)} FPS`, 30, 30);
}

/** One-line status readout; pure formatting of telemetry fields. */
export function statusLine(telemetry: TelemetryMessage): string {
  return (
    `pan ${telemetry.pan.toFixed(1)}  tilt ${telemetry.tilt.toFixed(1)}  ` +
    `errx ${telemetry.errorx.toFixed(1)}  erry ${telemetry.errory.toFixed(1)}  ` +
    `fps ${telemetry.fps.toFixed(1)}  track ${telemetry.track}`
  );
}

/** The box drawn while a drag awaits confirmation from telemetry. */
export function drawPendingBox(ctx: OverlayContext, box: BBox): void {
  ctx.strokeStyle = "#ffd60a";
  ctx.lineWidth = 1;
  ctx.strokeRect(box.x, box.y, box.w, box.h);
}
