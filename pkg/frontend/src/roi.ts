// Drag-to-select: normalize any two drag corners into the select_roi box.

import type { BBox } from "./protocol.js";

export const MIN_DRAG_PX = 4;

/**
 * Turn a mouse-down / mouse-up pair (canvas pixels) into a frame-space box
 * with positive width and height, whichever direction the drag went.
 * `scale` is canvas-pixels per frame-pixel (the canvas may be displayed
 * smaller than the frame); returns null for drags under 4x4 frame pixels.
 */
export function normalizeDrag(
  downX: number,
  downY: number,
  upX: number,
  upY: number,
  scale = 1,
): BBox | null {
  const x0 = Math.min(downX, upX) / scale;
  const y0 = Math.min(downY, upY) / scale;
  const x1 = Math.max(downX, upX) / scale;
  const y1 = Math.max(downY, upY) / scale;
  const box = {
    x: Math.round(x0),
    y: Math.round(y0),
    w: Math.round(x1 - x0),
    h: Math.round(y1 - y0),
  };
  if (box.w < MIN_DRAG_PX || box.h < MIN_DRAG_PX) {
    return null;
  }
  return box;
}

/** Clip a box to the frame so selections dragged past an edge stay valid. */
export function clipToFrame(box: BBox, width: number, height: number): BBox | null {
  const x0 = Math.max(0, box.x);
  const y0 = Math.max(0, box.y);
  const x1 = Math.min(width, box.x + box.w);
  const y1 = Math.min(height, box.y + box.h);
  if (x1 - x0 < MIN_DRAG_PX || y1 - y0 < MIN_DRAG_PX) {
    return null;
  }
  return { x: x0, y: y0, w: x1 - x0, h: y1 - y0 };
}
