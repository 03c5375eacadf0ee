export const PREVIEW_DEBOUNCE_MS = 250;

export interface Debounced<A extends unknown[]> {
  (...args: A): void;
  /** Run a pending call now instead of waiting out the window. */
  flush(): void;
  cancel(): void;
}

/** Trailing-edge debounce: one call per quiet window, last arguments win. */
export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  waitMs: number,
): Debounced<A> {
  let timer: ReturnType<typeof setTimeout> | null = null;
  let pending: A | null = null;

  const fire = () => {
    timer = null;
    if (pending) {
      const args = pending;
      pending = null;
      fn(...args);
    }
  };

  const wrapped = (...args: A) => {
    pending = args;
    if (timer) {
      clearTimeout(timer);
    }
    timer = setTimeout(fire, waitMs);
  };
  wrapped.flush = () => {
    if (timer) {
      clearTimeout(timer);
      fire();
    }
  };
  wrapped.cancel = () => {
    if (timer) {
      clearTimeout(timer);
    }
    timer = null;
    pending = null;
  };
  return wrapped;
}
