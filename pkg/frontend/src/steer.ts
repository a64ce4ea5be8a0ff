// Keyboard steering: arrow-key state becomes steer commands, rate limited.
//
// The displayed frame is mirrored in both axes, so moving the target toward
// screen-right means a negative world vx (and screen-down a negative vy).

export const STEER_SPEED = 0.01; // meters per step per held axis
export const MIN_SEND_INTERVAL_MS = 100; // at most 10 commands per second

export interface SteerState {
  vx: number;
  vy: number;
}

export class SteerInput {
  private held = new Set<string>();
  private lastSent: SteerState | null = null;
  private lastSentAt = -Infinity;
  private now: () => number;

  constructor(now: () => number = () => Date.now()) {
    this.now = now;
  }

  keyDown(key: string): void {
    this.held.add(key);
  }

  keyUp(key: string): void {
    this.held.delete(key);
  }

  releaseAll(): void {
    this.held.clear();
  }

  /** Current world-space velocity for the held keys. */
  state(): SteerState {
    let sx = 0;
    let sy = 0;
    if (this.held.has("ArrowLeft")) sx -= 1;
    if (this.held.has("ArrowRight")) sx += 1;
    if (this.held.has("ArrowUp")) sy -= 1;
    if (this.held.has("ArrowDown")) sy += 1;
    // screen direction -> world direction flips both signs (mirrored
    // display); subtract from zero so an idle axis is +0, not -0
    return { vx: 0 - sx * STEER_SPEED, vy: 0 - sy * STEER_SPEED };
  }

  /**
   * The steer command to emit right now, or null when nothing should be
   * sent: unchanged state is idempotent, and changes are rate limited to
   * one command per MIN_SEND_INTERVAL_MS. A release (all zeros) always
   * goes out once so the target stops.
   */
  poll(): SteerState | null {
    const next = this.state();
    const unchanged =
      this.lastSent !== null &&
      this.lastSent.vx === next.vx &&
      this.lastSent.vy === next.vy;
    if (unchanged) {
      return null;
    }
    const isStop = next.vx === 0 && next.vy === 0;
    if (!isStop && this.now() - this.lastSentAt < MIN_SEND_INTERVAL_MS) {
      return null;
    }
    this.lastSent = next;
    this.lastSentAt = this.now();
    return next;
  }
}
