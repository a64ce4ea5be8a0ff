// Browser entry point: wires the session, canvas, mouse and keyboard.

import { FrameDecoder } from "./decode.js";
import { drawOverlays, drawPendingBox, statusLine } from "./overlay.js";
import {
  BBox,
  FrameMessage,
  TelemetryMessage,
  selectRoiCommand,
  setModeCommand,
  simpleCommand,
  steerCommand,
} from "./protocol.js";
import { clipToFrame, normalizeDrag } from "./roi.js";
import { Session } from "./session.js";
import { SteerInput } from "./steer.js";

const canvas = document.getElementById("view") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const banner = document.getElementById("banner")!;
const status = document.getElementById("status")!;
const toast = document.getElementById("toast")!;
const urlInput = document.getElementById("url") as HTMLInputElement;

const decoder = new FrameDecoder();
let session: Session | null = null;
let frameData: ImageData | null = null;
let latestFrame: FrameMessage | null = null;
let latestTelemetry: TelemetryMessage | null = null;
let pendingRoi: BBox | null = null;
let dragStart: { x: number; y: number } | null = null;
const steer = new SteerInput();

function showToast(text: string): void {
  toast.textContent = text;
  toast.classList.add("visible");
  setTimeout(() => toast.classList.remove("visible"), 2500);
}

function render(): void {
  if (frameData !== null && latestFrame !== null) {
    ctx.putImageData(frameData, 0, 0);
  }
  if (latestTelemetry !== null) {
    drawOverlays(ctx, latestTelemetry);
    status.textContent = statusLine(latestTelemetry);
  }
  if (pendingRoi !== null) {
    drawPendingBox(ctx, pendingRoi);
  }
  requestAnimationFrame(render);
}
requestAnimationFrame(render);

function canvasScale(): number {
  return canvas.clientWidth > 0 ? canvas.clientWidth / canvas.width : 1;
}

function connect(): void {
  session?.close();
  latestFrame = latestTelemetry = null;
  session = new Session(urlInput.value, {
    onState: (state, detail) => {
      banner.textContent = detail ? `${state}: ${detail}` : state;
      banner.className = state;
    },
    onHello: (hello) => {
      canvas.width = hello.frame_width;
      canvas.height = hello.frame_height;
      frameData = null;
    },
    onFrame: (frame) => {
      latestFrame = frame;
      const gray = decoder.decodeBase64(frame.data, frame.width, frame.height);
      const rgba = decoder.toRgba(gray);
      if (frameData === null || frameData.width !== frame.width) {
        frameData = new ImageData(frame.width, frame.height);
      }
      frameData.data.set(rgba);
    },
    onTelemetry: (telemetry) => {
      latestTelemetry = telemetry;
      if (pendingRoi !== null && telemetry.track === "ok") {
        pendingRoi = null; // confirmed: the service now echoes the box
      }
    },
    onServerError: (code, message) => {
      if (code === "roi_rejected") {
        pendingRoi = null;
      }
      showToast(`${code}: ${message}`);
    },
  });
  session.connect();
}

document.getElementById("connect")!.addEventListener("click", connect);

canvas.addEventListener("mousedown", (ev) => {
  const rect = canvas.getBoundingClientRect();
  dragStart = { x: ev.clientX - rect.left, y: ev.clientY - rect.top };
});

canvas.addEventListener("mouseup", (ev) => {
  if (dragStart === null) {
    return;
  }
  const rect = canvas.getBoundingClientRect();
  const box = normalizeDrag(
    dragStart.x,
    dragStart.y,
    ev.clientX - rect.left,
    ev.clientY - rect.top,
    canvasScale(),
  );
  dragStart = null;
  if (box === null) {
    showToast("drag a larger box (at least 4x4 px)");
    return;
  }
  const clipped = clipToFrame(box, canvas.width, canvas.height);
  if (clipped === null) {
    showToast("selection is outside the frame");
    return;
  }
  if (session?.send(selectRoiCommand(clipped))) {
    pendingRoi = clipped;
  }
});

window.addEventListener("keydown", (ev) => {
  if (ev.key.startsWith("Arrow")) {
    steer.keyDown(ev.key);
    ev.preventDefault();
  }
});
window.addEventListener("keyup", (ev) => {
  if (ev.key.startsWith("Arrow")) {
    steer.keyUp(ev.key);
    ev.preventDefault();
  }
});
window.addEventListener("blur", () => steer.releaseAll());

setInterval(() => {
  const cmd = steer.poll();
  if (cmd !== null) {
    session?.send(steerCommand(cmd.vx, cmd.vy));
  }
}, 50);

for (const kind of ["pause", "resume", "reset", "stop"] as const) {
  document.getElementById(kind)!.addEventListener("click", () => {
    session?.send(simpleCommand(kind));
  });
}
(document.getElementById("mode") as HTMLSelectElement).addEventListener(
  "change",
  (ev) => {
    const mode = (ev.target as HTMLSelectElement).value;
    if (mode === "faithful" || mode === "corrected") {
      session?.send(setModeCommand(mode));
    }
  },
);
