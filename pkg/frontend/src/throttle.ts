/**
 * Trailing-edge rate limiter for pointer-move commands.
 *
 * The first push in a quiet period goes out immediately; pushes arriving
 * faster than the interval replace a pending value that is flushed when
 * the interval elapses, so the newest position always lands. A 1 s burst
 * of pointer events therefore produces at most 1000 / interval + 1
 * frames; the default interval keeps that at 30.
 */

export const DEFAULT_COMMAND_INTERVAL_MS = 34;

export class CommandThrottle<T> {
  private lastSent = Number.NEGATIVE_INFINITY;
  private pending: T | null = null;
  private timer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private readonly emit: (value: T) => void,
    private readonly minIntervalMs: number = DEFAULT_COMMAND_INTERVAL_MS,
    private readonly now: () => number = () => Date.now(),
  ) {}

  push(value: T): void {
    const t = this.now();
    if (t - this.lastSent >= this.minIntervalMs) {
      this.lastSent = t;
      this.emit(value);
      return;
    }
    this.pending = value;
    if (this.timer === null) {
      const wait = this.lastSent + this.minIntervalMs - t;
      this.timer = setTimeout(() => this.flushPending(), wait);
    }
  }

  /** Drop anything queued and cancel the timer. */
  dispose(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    this.pending = null;
  }

  private flushPending(): void {
    this.timer = null;
    if (this.pending === null) return;
    const value = this.pending;
    this.pending = null;
    this.lastSent = this.now();
    this.emit(value);
  }
}
