"""Live session server: streams frames and telemetry, accepts operator commands.

One scenario runs per server. A single client connects over a WebSocket,
receives a hello, then a frame/telemetry pair per loop step (same seq, frame
first, no gaps). Commands arrive as one-line JSON messages and are applied
only at step boundaries. Malformed input produces an error message and the
session survives; a second concurrent client is refused with "busy".
"""

from __future__ import annotations

import asyncio
import base64
import json
import logging
import time

from .runtime import ScenarioSpec, SimLoop
from .tracker import BBox

log = logging.getLogger(__name__)

PROTO_VERSION = 1
PAUSED_KEEPALIVE_HZ = 1.0

COMMAND_TYPES = ("select_roi", "steer", "pause", "resume", "reset", "set_mode", "stop")


def hello_message(spec: ScenarioSpec) -> dict:
    return {"type": "hello", "proto_version": PROTO_VERSION,
            "frame_width": spec.camera.frame_width,
            "frame_height": spec.camera.frame_height}


def frame_message(frame, seq: int) -> dict:
    return {"type": "frame", "seq": seq, "width": frame.width,
            "height": frame.height, "encoding": "gray8_b64",
            "data": base64.b64encode(frame.pixels.tobytes()).decode("ascii")}


def telemetry_message(record, seq: int, bbox: BBox | None) -> dict:
    msg = {"type": "telemetry", "seq": seq, "pan": record.pan, "tilt": record.tilt,
           "errorx": record.errorx, "errory": record.errory, "fps": record.fps,
           "track": record.status}
    if bbox is not None:
        msg["bbox"] = {"x": bbox.x, "y": bbox.y, "w": bbox.w, "h": bbox.h}
    return msg


def error_message(code: str, message: str) -> dict:
    return {"type": "error", "code": code, "message": message}


def parse_command(raw) -> dict:
    """Validate one client message; raises ValueError with a reason."""
    try:
        msg = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ValueError(f"not valid JSON: {exc}") from exc
    if not isinstance(msg, dict) or "type" not in msg:
        raise ValueError("message must be an object with a type field")
    kind = msg["type"]
    if kind not in COMMAND_TYPES:
        raise ValueError(f"unknown command type {kind!r}")
    if kind == "select_roi":
        try:
            msg = {"type": kind, "bbox": BBox(int(msg["x"]), int(msg["y"]),
                                              int(msg["w"]), int(msg["h"]))}
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"select_roi needs integer x, y, w, h: {exc}") from exc
    elif kind == "steer":
        try:
            msg = {"type": kind, "v": (float(msg["vx"]), float(msg["vy"]))}
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"steer needs numeric vx, vy: {exc}") from exc
    elif kind == "set_mode":
        if msg.get("mode") not in ("faithful", "corrected"):
            raise ValueError("set_mode needs mode faithful or corrected")
    return msg


class SessionServer:
    """Owns the loop task and the (single) client connection."""

    def __init__(self, spec: ScenarioSpec):
        self.spec = spec
        self.loop = SimLoop(spec)
        self.client = None
        self._claimed = False
        self.commands: asyncio.Queue = asyncio.Queue()
        self.stopped = asyncio.Event()
        self.paused = False
        self.out_seq = 0
        self.last_pair: tuple[dict, dict] | None = None
        self.pending_roi: BBox | None = None

    async def _send(self, msg: dict) -> None:
        if self.client is not None:
            try:
                await self.client.send(json.dumps(msg))
            except Exception:
                pass  # reader side notices the drop and detaches the client

    async def handle_client(self, ws) -> None:
        if self._claimed:
            await ws.send(json.dumps(error_message("busy", "another client is connected")))
            await ws.close()
            return
        self._claimed = True  # synchronous claim: no await before this point
        log.info("client connected: %s", getattr(ws, "remote_address", "?"))
        try:
            await ws.send(json.dumps(hello_message(self.spec)))
            self.client = ws  # broadcasts may start only after the hello
            async for raw in ws:
                try:
                    self.commands.put_nowait(parse_command(raw))
                except ValueError as exc:
                    await self._send(error_message("bad_message", str(exc)))
        except Exception:
            pass
        finally:
            if self.client is ws:
                self.client = None
            self._claimed = False
            log.info("client disconnected")

    async def _apply_command(self, cmd: dict) -> None:
        """Apply one command; ROI selections are held for the next step."""
        kind = cmd["type"]
        if kind == "select_roi":
            self.pending_roi = cmd["bbox"]
            return
        if kind == "steer":
            if self.spec.trajectory.kind != "operator_driven":
                await self._send(error_message(
                    "steer_rejected", "scenario target is not operator driven"))
            else:
                self.loop.steer = cmd["v"]
        elif kind == "pause":
            self.paused = True
        elif kind == "resume":
            self.paused = False
        elif kind == "reset":
            self.loop.reset()
        elif kind == "set_mode":
            self.loop.set_mode(cmd["mode"])
        elif kind == "stop":
            self.stopped.set()

    async def _broadcast_pair(self, frame_msg: dict, telem_msg: dict) -> None:
        frame_msg = dict(frame_msg, seq=self.out_seq)
        telem_msg = dict(telem_msg, seq=self.out_seq)
        self.out_seq += 1
        await self._send(frame_msg)
        await self._send(telem_msg)
        self.last_pair = (frame_msg, telem_msg)

    async def run(self) -> None:
        """Paced loop: drain commands, advance, broadcast, sleep toward loop_hz."""
        nominal = 1.0 / self.spec.loop_hz
        looptime = nominal
        prev = time.perf_counter()
        while not self.stopped.is_set():
            # drain first: stop and reset apply even with no viewer attached
            while not self.commands.empty():
                await self._apply_command(self.commands.get_nowait())
            if self.stopped.is_set():
                break

            if self.client is None:
                await asyncio.sleep(0.02)  # sim advances only while watched
                prev = time.perf_counter()
                continue

            if self.paused:
                if self.last_pair is not None:
                    await self._broadcast_pair(*self.last_pair)
                await asyncio.sleep(1.0 / PAUSED_KEEPALIVE_HZ)
                prev = time.perf_counter()
                looptime = nominal
                continue

            roi_cmd, self.pending_roi = self.pending_roi, None
            record = self.loop.advance(looptime, roi_command=roi_cmd)
            if roi_cmd is not None and self.loop.last_roi_error is not None:
                await self._send(error_message("roi_rejected", self.loop.last_roi_error))
            bbox = self.loop.tracker.bbox if self.loop.tracker is not None else None
            await self._broadcast_pair(frame_message(self.loop.frame, 0),
                                       telemetry_message(record, 0, bbox))

            now = time.perf_counter()
            await asyncio.sleep(max(0.0, nominal - (now - prev)))
            after = time.perf_counter()
            looptime = after - prev
            prev = after


async def _serve(spec: ScenarioSpec, host: str, port: int,
                 ready: asyncio.Event | None = None) -> None:
    from websockets.asyncio.server import serve as ws_serve

    server = SessionServer(spec)
    async with ws_serve(server.handle_client, host, port):
        log.info("serving on %s:%d", host, port)
        if ready is not None:
            ready.set()
        loop_task = asyncio.create_task(server.run())
        await server.stopped.wait()
        loop_task.cancel()


def serve_scenario(spec: ScenarioSpec, port: int, host: str = "127.0.0.1") -> None:
    """Run a session server until a client sends stop. Blocks the caller."""
    asyncio.run(_serve(spec, host, port))
