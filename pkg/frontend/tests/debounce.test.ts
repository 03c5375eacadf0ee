import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { debounce } from "../src/debounce.js";

describe("debounce", () => {
  beforeEach(() => {
    vi.useFakeTimers();
  });
  afterEach(() => {
    vi.useRealTimers();
  });

  it("collapses a burst into one trailing call with the last arguments", () => {
    const calls: number[] = [];
    const d = debounce((n: number) => calls.push(n), 100);
    for (let i = 0; i < 10; i++) {
      d(i);
      vi.advanceTimersByTime(5);
    }
    expect(calls).toEqual([]);
    vi.advanceTimersByTime(100);
    expect(calls).toEqual([9]);
  });

  it("fires once per quiet window when calls are spaced out", () => {
    const calls: number[] = [];
    const d = debounce((n: number) => calls.push(n), 50);
    d(1);
    vi.advanceTimersByTime(60);
    d(2);
    vi.advanceTimersByTime(60);
    expect(calls).toEqual([1, 2]);
  });

  it("flush runs the pending call immediately", () => {
    const calls: number[] = [];
    const d = debounce((n: number) => calls.push(n), 1000);
    d(7);
    d.flush();
    expect(calls).toEqual([7]);
    vi.advanceTimersByTime(2000);
    expect(calls).toEqual([7]);
  });

  it("flush with nothing pending is a no-op", () => {
    const calls: number[] = [];
    const d = debounce((n: number) => calls.push(n), 50);
    d.flush();
    expect(calls).toEqual([]);
  });

  it("cancel drops the pending call", () => {
    const calls: number[] = [];
    const d = debounce((n: number) => calls.push(n), 50);
    d(1);
    d.cancel();
    vi.advanceTimersByTime(200);
    expect(calls).toEqual([]);
  });
});
