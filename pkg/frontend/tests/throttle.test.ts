import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { CommandThrottle, DEFAULT_COMMAND_INTERVAL_MS } from "../src/throttle.js";

describe("CommandThrottle", () => {
  beforeEach(() => {
    vi.useFakeTimers();
  });

  afterEach(() => {
    vi.useRealTimers();
  });

  it("emits the first push immediately", () => {
    const out: number[] = [];
    const throttle = new CommandThrottle<number>((v) => out.push(v));
    throttle.push(1);
    expect(out).toEqual([1]);
  });

  it("sends at most 30 frames for 100 events in one second", () => {
    const out: number[] = [];
    const throttle = new CommandThrottle<number>((v) => out.push(v));
    for (let i = 0; i < 100; i++) {
      throttle.push(i);
      vi.advanceTimersByTime(10);
    }
    expect(out.length).toBeLessThanOrEqual(30);
    expect(out.length).toBeGreaterThan(20);
    throttle.dispose();
  });

  it("always delivers the newest value once the interval elapses", () => {
    const out: number[] = [];
    const throttle = new CommandThrottle<number>((v) => out.push(v));
    throttle.push(1);
    throttle.push(2);
    throttle.push(3);
    expect(out).toEqual([1]);
    vi.advanceTimersByTime(DEFAULT_COMMAND_INTERVAL_MS);
    expect(out).toEqual([1, 3]);
  });

  it("dispose drops whatever is pending", () => {
    const out: number[] = [];
    const throttle = new CommandThrottle<number>((v) => out.push(v));
    throttle.push(1);
    throttle.push(2);
    throttle.dispose();
    vi.advanceTimersByTime(10 * DEFAULT_COMMAND_INTERVAL_MS);
    expect(out).toEqual([1]);
  });

  it("spaced pushes all pass through", () => {
    const out: number[] = [];
    const throttle = new CommandThrottle<number>((v) => out.push(v));
    for (let i = 0; i < 5; i++) {
      throttle.push(i);
      vi.advanceTimersByTime(DEFAULT_COMMAND_INTERVAL_MS + 1);
    }
    expect(out).toEqual([0, 1, 2, 3, 4]);
  });
});
