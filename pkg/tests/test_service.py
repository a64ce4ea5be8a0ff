import json
import socket
import threading
import time

import pytest

from pantiltsim.runtime import ScenarioSpec
from pantiltsim.service import serve_scenario
from pantiltsim.simworld import CameraModel, TargetState, TrajectorySpec, position_at

websockets_sync = pytest.importorskip("websockets.sync.client")


def small_spec(kind="operator_driven") -> ScenarioSpec:
    camera = CameraModel(320, 240, 60.0)
    return ScenarioSpec(
        seed=13, steps=10 ** 6, loop_hz=200.0, camera=camera,
        target=TargetState(position_at(0.0, -20.0, 2.0),
                           radius=15.0 * 2.0 / camera.focal_px),
        trajectory=TrajectorySpec(kind))


def _free_port() -> int:
    s = socket.socket()
    s.bind(("127.0.0.1", 0))
    port = s.getsockname()[1]
    s.close()
    return port


class Client:
    def __init__(self, port, timeout=5.0):
        deadline = time.time() + timeout
        self.ws = None
        while time.time() < deadline:
            try:
                self.ws = websockets_sync.connect(
                    f"ws://127.0.0.1:{port}", open_timeout=1, max_size=None)
                break
            except OSError:
                time.sleep(0.02)
        if self.ws is None:
            raise TimeoutError("server did not come up")

    def recv(self, timeout=5.0) -> dict:
        return json.loads(self.ws.recv(timeout=timeout))

    def send(self, **msg) -> None:
        self.ws.send(json.dumps(msg))

    def send_raw(self, raw: str) -> None:
        self.ws.send(raw)

    def next_of_type(self, kind, limit=400, timeout=5.0) -> dict:
        for _ in range(limit):
            msg = self.recv(timeout=timeout)
            if msg["type"] == kind:
                return msg
        raise AssertionError(f"no {kind} message within {limit} messages")

    def close(self):
        self.ws.close()


@pytest.fixture
def server():
    port = _free_port()
    spec = small_spec()
    thread = threading.Thread(target=serve_scenario, args=(spec, port), daemon=True)
    thread.start()
    yield port
    # ask the session to stop if it is still up
    try:
        c = Client(port, timeout=1.0)
        c.next_of_type("hello", limit=5, timeout=1.0)
        c.send(type="stop")
        c.close()
    except Exception:
        pass
    thread.join(timeout=5.0)


class TestProtocol:
    def test_hello_comes_first_with_version_and_dims(self, server):
        c = Client(server)
        hello = c.recv()
        assert hello == {"type": "hello", "proto_version": 1,
                         "frame_width": 320, "frame_height": 240}
        c.send(type="stop")
        c.close()

    def test_frame_telemetry_pairing_without_gaps(self, server):
        c = Client(server)
        c.next_of_type("hello")
        first = c.next_of_type("frame")
        seq = first["seq"]
        telem = c.recv()
        assert telem["type"] == "telemetry" and telem["seq"] == seq
        for i in range(1, 30):
            frame = c.recv()
            telem = c.recv()
            assert frame["type"] == "frame" and telem["type"] == "telemetry"
            assert frame["seq"] == seq + i
            assert telem["seq"] == seq + i
        assert frame["encoding"] == "gray8_b64"
        assert frame["width"] == 320 and frame["height"] == 240
        import base64
        assert len(base64.b64decode(frame["data"])) == 320 * 240
        c.send(type="stop")
        c.close()

    def test_select_roi_locks_and_echoes_bbox(self, server):
        c = Client(server)
        c.next_of_type("hello")
        telem = c.next_of_type("telemetry")
        assert telem["track"] == "idle"
        c.send(type="select_roi", x=140, y=100, w=40, h=40)
        for _ in range(200):
            telem = c.next_of_type("telemetry")
            if telem["track"] == "ok":
                break
        assert telem["track"] == "ok"
        assert telem["bbox"] == {"x": 140, "y": 100, "w": 40, "h": 40}
        assert abs(telem["errorx"]) <= 40 and abs(telem["errory"]) <= 40
        c.send(type="stop")
        c.close()

    def test_flat_roi_is_rejected_and_stays_idle(self, server):
        c = Client(server)
        c.next_of_type("hello")
        c.send(type="select_roi", x=5, y=5, w=20, h=20)
        err = c.next_of_type("error")
        assert err["code"] == "roi_rejected"
        telem = c.next_of_type("telemetry")
        assert telem["track"] == "idle"
        c.send(type="stop")
        c.close()

    def test_malformed_and_unknown_messages_survive(self, server):
        c = Client(server)
        c.next_of_type("hello")
        c.send_raw("this is not json")
        err = c.next_of_type("error")
        assert err["code"] == "bad_message"
        c.send(type="launch_missiles")
        err = c.next_of_type("error")
        assert err["code"] == "bad_message"
        c.send(type="select_roi", x="a", y=0, w=10, h=10)
        err = c.next_of_type("error")
        assert err["code"] == "bad_message"
        # session still streams
        c.next_of_type("frame")
        c.send(type="stop")
        c.close()

    def test_second_client_refused_busy(self, server):
        c1 = Client(server)
        c1.next_of_type("hello")
        c2 = Client(server)
        msg = c2.recv()
        assert msg["type"] == "error" and msg["code"] == "busy"
        c2.close()
        c1.next_of_type("frame")  # first session unaffected
        c1.send(type="stop")
        c1.close()

    def test_steer_moves_operator_target(self, server):
        c = Client(server)
        c.next_of_type("hello")
        c.send(type="select_roi", x=140, y=100, w=40, h=40)
        for _ in range(200):
            telem = c.next_of_type("telemetry")
            if telem["track"] == "ok":
                break
        c.send(type="steer", vx=0.004, vy=0.0)
        time.sleep(0.1)
        c.send(type="steer", vx=0.0, vy=0.0)
        moved = [c.next_of_type("telemetry")["errorx"] for _ in range(25)]
        assert max(abs(e) for e in moved) > 2.0
        c.send(type="stop")
        c.close()

    def test_steer_rejected_for_non_operator_scenario(self):
        port = _free_port()
        spec = small_spec(kind="stationary")
        thread = threading.Thread(target=serve_scenario, args=(spec, port), daemon=True)
        thread.start()
        c = Client(port)
        c.next_of_type("hello")
        c.send(type="steer", vx=0.01, vy=0.0)
        err = c.next_of_type("error")
        assert err["code"] == "steer_rejected"
        c.send(type="stop")
        c.close()
        thread.join(timeout=5.0)

    def test_pause_freezes_state_and_keeps_seq_increasing(self, server):
        c = Client(server)
        c.next_of_type("hello")
        c.next_of_type("telemetry")
        c.send(type="pause")
        time.sleep(0.2)
        # drain whatever was in flight, then compare consecutive keepalives
        frames = []
        telems = []
        deadline = time.time() + 4.0
        while len(telems) < 2 and time.time() < deadline:
            msg = c.recv()
            if msg["type"] == "frame":
                frames.append(msg)
            elif msg["type"] == "telemetry":
                telems.append(msg)
        assert len(telems) >= 2
        assert telems[-1]["seq"] > telems[-2]["seq"]
        c.send(type="resume")
        c.next_of_type("frame")
        c.send(type="stop")
        c.close()

    def test_reset_returns_to_idle(self, server):
        c = Client(server)
        c.next_of_type("hello")
        c.send(type="select_roi", x=140, y=100, w=40, h=40)
        for _ in range(200):
            if c.next_of_type("telemetry")["track"] == "ok":
                break
        c.send(type="reset")
        saw_idle = False
        for _ in range(40):
            if c.next_of_type("telemetry")["track"] == "idle":
                saw_idle = True
                break
        assert saw_idle
        c.send(type="stop")
        c.close()

    def test_set_mode_switches_controller(self, server):
        c = Client(server)
        c.next_of_type("hello")
        c.send(type="set_mode", mode="faithful")
        c.next_of_type("telemetry")  # applied at a step boundary, no error
        c.send(type="set_mode", mode="bogus")
        err = c.next_of_type("error")
        assert err["code"] == "bad_message"
        c.send(type="stop")
        c.close()
