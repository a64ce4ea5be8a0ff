import numpy as np
import pytest

from pantiltsim.gimbal import GimbalState
from pantiltsim.simworld import CameraModel, Frame, TargetState, render_frame, world_from_camera
from pantiltsim.tracker import (BBox, NccTracker, TrackerParams,
                                UntrackableRoiError, ncc_score)

from reference import brute_force_ncc_argmax, pearson_ncc


def noise_frame(rng, w=64, h=48):
    return Frame(w, h, rng.integers(0, 256, size=(h, w), dtype=np.uint8).astype(np.uint8))


def small_scene(px_radius=14.0, at=(0.0, 0.0), w=160, h=120):
    """Small rendered scene with the disk offset (display px) from center."""
    cam = CameraModel(w, h, 60.0)
    level = GimbalState(0.0, 0.0)
    depth = 2.0
    # display offset negates through the flip, so stage at the negated spot
    pos = world_from_camera(level, [-at[0] * depth / cam.focal_px,
                                    -at[1] * depth / cam.focal_px, depth])
    target = TargetState(pos, radius=px_radius * depth / cam.focal_px)
    return cam, level, target


class TestNccScore:
    def test_self_correlation_is_one(self):
        a = np.array([[10, 20], [30, 40]], dtype=np.uint8)
        assert ncc_score(a, a) == pytest.approx(1.0, abs=1e-12)

    def test_inverted_patch_scores_minus_one(self):
        a = np.array([[10, 20], [30, 40]], dtype=np.uint8)
        assert ncc_score(a, 255 - a) == pytest.approx(-1.0, abs=1e-12)

    def test_known_pair(self):
        a = [[1, 2], [3, 4]]
        b = [[1, 2], [3, 5]]
        assert ncc_score(a, b) == pytest.approx(0.9827, abs=1e-3)

    def test_agrees_with_textbook_formula(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            a = rng.integers(0, 256, size=(7, 9))
            b = rng.integers(0, 256, size=(7, 9))
            assert ncc_score(a, b) == pytest.approx(pearson_ncc(a, b), abs=1e-12)

    def test_zero_variance_convention(self):
        flat = np.full((4, 4), 9, dtype=np.uint8)
        tex = np.arange(16, dtype=np.uint8).reshape(4, 4)
        assert ncc_score(flat, tex) == 0.0
        assert ncc_score(tex, flat) == 0.0
        assert ncc_score(flat, flat) == 0.0

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValueError):
            ncc_score(np.zeros((2, 2)), np.zeros((2, 3)))

    def test_bounded(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            a = rng.integers(0, 256, size=(5, 5))
            b = rng.integers(0, 256, size=(5, 5))
            assert -1.0 <= ncc_score(a, b) <= 1.0


class TestInit:
    def test_stores_exact_patch_copy(self):
        cam, g, target = small_scene()
        frame = render_frame(cam, g, target)
        roi = BBox(66, 46, 28, 28)
        tracker = NccTracker()
        tracker.init(frame, roi)
        assert tracker.status == "tracking"
        assert tracker.bbox == roi
        assert np.array_equal(tracker.template,
                              frame.pixels[46:74, 66:94].astype(np.float64))

    def test_roi_overlapping_edge_rejected(self):
        frame = noise_frame(np.random.default_rng(0))
        tracker = NccTracker()
        with pytest.raises(ValueError):
            tracker.init(frame, BBox(60, 10, 10, 10))
        with pytest.raises(ValueError):
            tracker.init(frame, BBox(-1, 0, 10, 10))

    def test_flat_roi_rejected_with_distinct_error(self):
        cam, g, target = small_scene()
        frame = render_frame(cam, g, target)  # corners are flat background
        tracker = NccTracker()
        with pytest.raises(UntrackableRoiError):
            tracker.init(frame, BBox(0, 0, 12, 12))

    def test_degenerate_roi_rejected(self):
        frame = noise_frame(np.random.default_rng(0))
        with pytest.raises(ValueError):
            NccTracker().init(frame, BBox(5, 5, 0, 4))


class TestUpdate:
    def test_identical_frame_scores_one_in_place(self):
        cam, g, target = small_scene()
        frame = render_frame(cam, g, target)
        tracker = NccTracker()
        roi = BBox(66, 46, 28, 28)
        tracker.init(frame, roi)
        ok, box, score = tracker.update(frame)
        assert ok and box == roi
        assert score == pytest.approx(1.0, abs=1e-12)

    def test_recovers_known_shift(self):
        cam, g, target = small_scene(at=(0.3, -0.2))
        frame1 = render_frame(cam, g, target)
        cam2, _, target2 = small_scene(at=(5.3, 2.8))  # +5, +3 px in display
        frame2 = render_frame(cam2, g, target2)
        tracker = NccTracker()
        roi = BBox(66, 46, 28, 28)
        tracker.init(frame1, roi)
        ok, box, _ = tracker.update(frame2)
        assert ok
        assert (box.x - roi.x, box.y - roi.y) == (5, 3)

    def test_uniform_frame_fails_and_holds(self):
        cam, g, target = small_scene()
        frame = render_frame(cam, g, target)
        tracker = NccTracker()
        roi = BBox(66, 46, 28, 28)
        tracker.init(frame, roi)
        blank = render_frame(cam, g, None)
        ok, box, score = tracker.update(blank)
        assert not ok
        assert box == roi
        assert score == 0.0
        assert tracker.status == "lost"
        # a reappearing target is picked up again from the held box
        ok2, box2, _ = tracker.update(frame)
        assert ok2 and box2 == roi and tracker.status == "tracking"

    def test_update_before_init_rejected(self):
        with pytest.raises(ValueError):
            NccTracker().update(noise_frame(np.random.default_rng(0)))

    def test_dimension_mismatch_rejected(self):
        rng = np.random.default_rng(3)
        frame = noise_frame(rng)
        tracker = NccTracker()
        tracker.init(frame, BBox(10, 10, 12, 12))
        with pytest.raises(ValueError):
            tracker.update(noise_frame(rng, w=65, h=48))

    def test_zero_learning_rate_freezes_template(self):
        rng = np.random.default_rng(4)
        frame = noise_frame(rng, w=80, h=60)
        tracker = NccTracker(TrackerParams(search_radius=6, learning_rate=0.0))
        tracker.init(frame, BBox(30, 20, 16, 14))
        before = tracker.template.copy()
        for _ in range(5):
            tracker.update(noise_frame(rng, w=80, h=60))
            tracker.update(frame)
        assert np.array_equal(tracker.template, before)

    def test_template_adapts_toward_new_appearance(self):
        rng = np.random.default_rng(5)
        frame = noise_frame(rng, w=80, h=60)
        tracker = NccTracker(TrackerParams(search_radius=4, learning_rate=0.2,
                                           accept_threshold=0.2))
        tracker.init(frame, BBox(30, 20, 16, 14))
        before = tracker.template.copy()
        brighter = Frame(80, 60, np.clip(frame.pixels.astype(np.int32) + 20,
                                         0, 255).astype(np.uint8))
        ok, _, _ = tracker.update(brighter)
        assert ok
        assert not np.array_equal(tracker.template, before)
        assert np.all(np.abs(tracker.template - before) <= 20)

    def test_no_escape_from_frame(self):
        rng = np.random.default_rng(6)
        tracker = NccTracker(TrackerParams(search_radius=50, accept_threshold=-1.0))
        frame = noise_frame(rng, w=60, h=44)
        tracker.init(frame, BBox(2, 2, 12, 10))
        for _ in range(30):
            ok, box, _ = tracker.update(noise_frame(rng, w=60, h=44))
            assert 0 <= box.x and box.x + box.w <= 60
            assert 0 <= box.y and box.y + box.h <= 44


class TestOracleEquivalence:
    def test_matches_brute_force_on_random_frames(self):
        rng = np.random.default_rng(123)
        for _ in range(40):
            fw = int(rng.integers(30, 80))
            fh = int(rng.integers(30, 80))
            tw = int(rng.integers(6, 16))
            th = int(rng.integers(6, 16))
            src = noise_frame(rng, w=fw, h=fh)
            x = int(rng.integers(0, fw - tw + 1))
            y = int(rng.integers(0, fh - th + 1))
            tracker = NccTracker(TrackerParams(search_radius=max(fw, fh),
                                               accept_threshold=-1.0,
                                               learning_rate=0.0))
            tracker.init(src, BBox(x, y, tw, th))
            probe = noise_frame(rng, w=fw, h=fh)
            ok, box, score = tracker.update(probe)
            (oy, ox), oscore = brute_force_ncc_argmax(probe.pixels,
                                                      src.pixels[y:y + th, x:x + tw])
            assert (box.y, box.x) == (oy, ox)
            assert score == oscore  # bit-identical by construction

    def test_exact_tie_breaks_to_smallest_dy_dx(self):
        # two identical copies of the template: scores tie exactly, the
        # smaller (dy, dx) must win in both implementations
        pixels = np.full((40, 40), 10, dtype=np.uint8)
        block = np.array([[50, 60], [70, 80]], dtype=np.uint8)
        pixels[5:7, 8:10] = block
        pixels[20:22, 25:27] = block
        frame = Frame(40, 40, pixels)
        tracker = NccTracker(TrackerParams(search_radius=40, learning_rate=0.0))
        tracker.init(frame, BBox(25, 20, 2, 2))
        ok, box, score = tracker.update(frame)
        assert ok
        assert (box.y, box.x) == (5, 8)
        (oy, ox), _ = brute_force_ncc_argmax(pixels, block)
        assert (oy, ox) == (5, 8)


class TestPhotometricInvariance:
    def test_affine_gain_offset_keeps_argmax(self):
        # gain 1.25 and offset 2 keep the three rendered intensities exact
        # and unclipped, so the transformed frame is a true affine image
        cam, g, target = small_scene(at=(11.0, -7.0))
        frame1 = render_frame(cam, g, target)
        tracker = NccTracker(TrackerParams(search_radius=30, learning_rate=0.0))
        roi = BBox(60, 40, 30, 30)
        tracker.init(frame1, roi)
        transformed = Frame(frame1.width, frame1.height,
                            (frame1.pixels.astype(np.float64) * 1.25 + 2)
                            .astype(np.uint8))
        ok1, box1, _ = tracker.update(frame1)
        tracker2 = NccTracker(TrackerParams(search_radius=30, learning_rate=0.0))
        tracker2.init(frame1, roi)
        ok2, box2, _ = tracker2.update(transformed)
        assert ok1 and ok2
        assert box1 == box2


class TestParamsValidation:
    def test_bad_values_rejected(self):
        with pytest.raises(ValueError):
            TrackerParams(search_radius=-1)
        with pytest.raises(ValueError):
            TrackerParams(accept_threshold=1.5)
        with pytest.raises(ValueError):
            TrackerParams(learning_rate=-0.1)
