"""Normalized cross-correlation template tracker.

Drop-in for the usual ``init(frame, roi)`` / ``success, box = update(frame)``
tracker contract. The search evaluates every candidate placement whose
top-left corner lies within a Chebyshev radius of the previous one, scores
each with Pearson NCC, and takes the argmax (ties go to the smallest
(dy, dx) lexicographically).

All scores are computed from sums of 8-bit data. Every intermediate sum is
an integer below 2**53 and therefore exact in float64 regardless of
summation order, so any two correct implementations of the score formula
produce bit-identical values. That makes exhaustive-search results
reproducible against an independent brute-force reference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


class BBox(NamedTuple):
    """Integer pixel rectangle: top-left corner plus width and height."""

    x: int
    y: int
    w: int
    h: int


class UntrackableRoiError(ValueError):
    """Selected region has no intensity variation and cannot be matched."""


@dataclass(frozen=True)
class TrackerParams:
    search_radius: int = 48
    accept_threshold: float = 0.45
    learning_rate: float = 0.05

    def __post_init__(self):
        if self.search_radius < 0:
            raise ValueError("search_radius must be >= 0")
        if not -1.0 <= self.accept_threshold <= 1.0:
            raise ValueError("accept_threshold must lie in [-1, 1]")
        if not 0.0 <= self.learning_rate <= 1.0:
            raise ValueError("learning_rate must lie in [0, 1]")


def ncc_score(a, b) -> float:
    """Pearson normalized cross-correlation of two equally sized patches.

    Mean-subtracts both patches and divides their inner product by the
    product of their norms; result lies in [-1, 1]. Returns 0 when either
    patch has zero variance (flat patches are unmatchable by convention).
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"patch shapes differ: {a.shape} vs {b.shape}")
    n = a.size
    sa = float(a.sum())
    sb = float(b.sum())
    va = n * float((a * a).sum()) - sa * sa
    vb = n * float((b * b).sum()) - sb * sb
    if va <= 0.0 or vb <= 0.0:
        return 0.0
    num = n * float((a * b).sum()) - sa * sb
    r = num / math.sqrt(va * vb)
    return min(1.0, max(-1.0, r))


def _window_sums(arr: np.ndarray, th: int, tw: int) -> np.ndarray:
    """Sum of every th x tw window of arr, via a summed-area table."""
    rh, rw = arr.shape
    ii = np.zeros((rh + 1, rw + 1), dtype=np.float64)
    ii[1:, 1:] = arr.cumsum(axis=0).cumsum(axis=1)
    return ii[th:, tw:] - ii[:-th, tw:] - ii[th:, :-tw] + ii[:-th, :-tw]


def _correlate(region: np.ndarray, template: np.ndarray) -> np.ndarray:
    """Direct (non-FFT) valid-mode cross-correlation.

    Exact for integer-valued float64 inputs: every product and partial sum
    is an integer below 2**53, so the result does not depend on summation
    order and no FFT roundoff enters.
    """
    windows = np.lib.stride_tricks.sliding_window_view(region, template.shape)
    return np.einsum("ijkl,kl->ij", windows, template)


class NccTracker:
    """Template tracker with exhaustive local NCC search and slow adaptation."""

    def __init__(self, params: TrackerParams | None = None):
        self.params = params or TrackerParams()
        self.template: np.ndarray | None = None
        self.bbox: BBox | None = None
        self.status = "idle"
        self._frame_shape: tuple[int, int] | None = None

    def init(self, frame, roi: BBox) -> None:
        """Store the roi patch as the template and start tracking.

        Raises ValueError if the roi does not lie fully inside the frame and
        UntrackableRoiError if the selected patch is flat.
        """
        x, y, w, h = (int(v) for v in roi)
        pixels = frame.pixels
        fh, fw = pixels.shape
        if w <= 0 or h <= 0:
            raise ValueError(f"roi must have positive size, got {w}x{h}")
        if x < 0 or y < 0 or x + w > fw or y + h > fh:
            raise ValueError(f"roi {roi} extends outside the {fw}x{fh} frame")
        patch = pixels[y:y + h, x:x + w].astype(np.float64)
        n = patch.size
        s1 = float(patch.sum())
        var = n * float((patch * patch).sum()) - s1 * s1
        if var <= 0.0:
            raise UntrackableRoiError("selected region is flat; pick a textured area")
        self.template = patch
        self.bbox = BBox(x, y, w, h)
        self.status = "tracking"
        self._frame_shape = (fh, fw)

    def update(self, frame) -> tuple[bool, BBox, float]:
        """Search around the last box and return (success, box, best score).

        On success the box moves to the best placement and the template is
        blended toward the new patch (rounded back to integer intensities).
        On failure the box and template are left untouched and the status
        becomes "lost"; later updates keep searching around the same box.
        """
        if self.template is None or self.bbox is None:
            raise ValueError("update() before init()")
        pixels = frame.pixels
        if pixels.shape != self._frame_shape:
            raise ValueError(
                f"frame size {pixels.shape} differs from init-time {self._frame_shape}")
        th, tw = self.template.shape
        fh, fw = pixels.shape
        r = self.params.search_radius
        x0 = max(0, self.bbox.x - r)
        x1 = min(fw - tw, self.bbox.x + r)
        y0 = max(0, self.bbox.y - r)
        y1 = min(fh - th, self.bbox.y + r)

        region = pixels[y0:y1 + th, x0:x1 + tw].astype(np.float64)
        n = float(th * tw)
        s1 = _window_sums(region, th, tw)
        s2 = _window_sums(region * region, th, tw)
        ts1 = float(self.template.sum())
        tvar = n * float((self.template * self.template).sum()) - ts1 * ts1

        scores = np.zeros_like(s1)
        if tvar > 0.0:
            corr = _correlate(region, self.template)
            num = n * corr - ts1 * s1
            var = n * s2 - s1 * s1
            live = var > 0.0
            scores[live] = num[live] / np.sqrt(var[live] * tvar)

        flat_index = int(np.argmax(scores))  # first max in row-major order:
        dy, dx = divmod(flat_index, scores.shape[1])  # smallest (dy, dx) wins ties
        best = float(scores[dy, dx])
        success = best >= self.params.accept_threshold
        if success:
            nb = BBox(x0 + dx, y0 + dy, tw, th)
            patch = pixels[nb.y:nb.y + th, nb.x:nb.x + tw].astype(np.float64)
            lr = self.params.learning_rate
            self.template = np.rint((1.0 - lr) * self.template + lr * patch)
            self.bbox = nb
            self.status = "tracking"
        else:
            self.status = "lost"
        return success, self.bbox, best
