import { ApiError, InvalidPointsError, type SessionApi } from "./api.js";
import { debounce, PREVIEW_DEBOUNCE_MS, type Debounced } from "./debounce.js";
import {
  toPoints,
  type PhaseInfo,
  type PreviewResult,
  type SliderValues,
} from "./types.js";

export const TOTAL_PHASES = 6;

// Principal branch of the angle feature and a unit velocity band; a point
// can only break the norm constraint through the combination, which the
// server reports back.
export const ANGLE_MIN = -Math.PI / 2;
export const ANGLE_MAX = Math.PI / 2;
export const VELOCITY_MIN = -1;
export const VELOCITY_MAX = 1;

function clamp(value: number, lo: number, hi: number): number {
  return Math.min(hi, Math.max(lo, value));
}

export function clampSliders(values: SliderValues): SliderValues {
  return {
    q1: clamp(values.q1, ANGLE_MIN, ANGLE_MAX),
    v1: clamp(values.v1, VELOCITY_MIN, VELOCITY_MAX),
    q2: clamp(values.q2, ANGLE_MIN, ANGLE_MAX),
    v2: clamp(values.v2, VELOCITY_MIN, VELOCITY_MAX),
  };
}

function sameValues(a: SliderValues, b: SliderValues): boolean {
  return a.q1 === b.q1 && a.v1 === b.v1 && a.q2 === b.q2 && a.v2 === b.v2;
}

/** Everything a view needs to render one frame of the session. */
export interface ControllerView {
  sessionId: string | null;
  phase: PhaseInfo | null;
  totalPhases: number;
  committed: number;
  done: boolean;
  sliders: SliderValues;
  /** Settled preview for the current slider values, else null. */
  preview: PreviewResult | null;
  previewPending: boolean;
  /** Score to display; null unless the server sent one. Never computed here. */
  score: number | null;
  pointErrors: string[];
  canCommit: boolean;
  committing: boolean;
  /** Network-failure text for a retry banner, null when healthy. */
  banner: string | null;
}

export type ViewListener = (view: ControllerView) => void;

/**
 * Client-side session state machine.
 *
 * Holds the slider values, mirrors the server's phase progression, and owns
 * the two concurrency rules: at most one in-flight preview (responses for
 * superseded slider values are discarded) and a one-shot commit per phase.
 * All scoring stays on the server.
 */
export class SessionController {
  private sessionId: string | null = null;
  private phase: PhaseInfo | null = null;
  private committed = 0;
  private done = false;
  private sliders: SliderValues = { q1: 0, v1: 0, q2: 0, v2: 0 };
  private preview: PreviewResult | null = null;
  private committing = false;
  private banner: string | null = null;

  private inflight: Promise<void> | null = null;
  private sentFor: SliderValues | null = null;
  private readonly schedule: Debounced<[]>;
  private readonly listeners: ViewListener[] = [];

  constructor(
    private readonly api: SessionApi,
    debounceMs: number = PREVIEW_DEBOUNCE_MS,
  ) {
    this.schedule = debounce(() => this.pump(), debounceMs);
  }

  onChange(listener: ViewListener): void {
    this.listeners.push(listener);
  }

  view(): ControllerView {
    const score =
      this.preview && typeof this.preview.score === "number"
        ? this.preview.score
        : null;
    return {
      sessionId: this.sessionId,
      phase: this.phase,
      totalPhases: TOTAL_PHASES,
      committed: this.committed,
      done: this.done,
      sliders: { ...this.sliders },
      preview: this.preview,
      previewPending: this.inflight !== null,
      score,
      pointErrors: this.preview?.errors ?? [],
      canCommit:
        this.sessionId !== null &&
        !this.done &&
        !this.committing &&
        this.preview !== null &&
        this.preview.valid,
      committing: this.committing,
      banner: this.banner,
    };
  }

  async start(group: string): Promise<void> {
    const created = await this.api.createSession(group);
    this.sessionId = created.id;
    this.phase = created.phase;
    this.committed = 0;
    this.done = false;
    this.preview = null;
    this.banner = null;
    this.notify();
    this.schedule();
  }

  /** Slider input; values are clamped and a debounced preview is queued. */
  setSliders(changes: Partial<SliderValues>): void {
    const next = clampSliders({ ...this.sliders, ...changes });
    if (sameValues(next, this.sliders)) {
      return;
    }
    this.sliders = next;
    this.preview = null; // previous response no longer describes the sliders
    this.notify();
    if (this.sessionId && !this.done) {
      this.schedule();
    }
  }

  /** Commit the current pair; resolves once the server answered. */
  async commit(): Promise<void> {
    if (!this.view().canCommit || !this.sessionId) {
      return;
    }
    this.committing = true;
    this.notify();
    // no preview may straddle the phase boundary: a late response would be
    // scored against the phase that was active when it was sent
    this.schedule.cancel();
    while (this.inflight) {
      await this.inflight;
    }
    try {
      const outcome = await this.api.commit(
        this.sessionId,
        toPoints(this.sliders),
      );
      this.committed += 1;
      this.phase = outcome.next_phase;
      this.done = outcome.done;
      this.preview = null;
      this.banner = null;
    } catch (err) {
      if (err instanceof InvalidPointsError) {
        // server-side validation wins; surface it like an invalid preview
        this.preview = { valid: false, errors: err.errors };
      } else if (err instanceof ApiError && err.status === 409) {
        await this.refetch();
      } else {
        this.banner = "commit failed; check the connection and try again";
      }
    } finally {
      this.committing = false;
      if (!this.done && this.sessionId && this.preview === null) {
        this.schedule();
      }
      this.notify();
    }
  }

  /** Retry-banner action: drop the failure note and ask the server again. */
  refresh(): void {
    this.banner = null;
    this.preview = null;
    this.notify();
    if (this.sessionId && !this.done) {
      this.schedule();
    }
  }

  /** Testing/teardown hook: flush the debounce and wait out the preview. */
  async settle(): Promise<void> {
    this.schedule.flush();
    while (this.inflight) {
      await this.inflight;
    }
  }

  private async refetch(): Promise<void> {
    if (!this.sessionId) {
      return;
    }
    try {
      const snap = await this.api.getSession(this.sessionId);
      this.phase = snap.phase;
      this.committed = snap.committed;
      this.done = snap.status === "complete";
      this.preview = null;
    } catch {
      this.banner = "lost the session; check the connection and try again";
    }
  }

  private pump(): void {
    if (this.inflight || !this.sessionId || this.done || this.committing) {
      return;
    }
    this.inflight = this.runPreview().finally(() => {
      this.inflight = null;
      // values moved while the request was out: go again immediately
      if (this.sentFor && !sameValues(this.sentFor, this.sliders)) {
        this.pump();
      }
      this.notify();
    });
    this.notify();
  }

  private async runPreview(): Promise<void> {
    const sid = this.sessionId;
    if (!sid) {
      return;
    }
    const values = { ...this.sliders };
    this.sentFor = values;
    try {
      const result = await this.api.preview(sid, toPoints(values));
      if (sameValues(values, this.sliders)) {
        this.preview = result;
        this.banner = null;
      } // else: stale, discard
    } catch {
      if (sameValues(values, this.sliders)) {
        this.banner = "preview failed; check the connection and try again";
      }
    }
  }

  private notify(): void {
    const view = this.view();
    for (const listener of this.listeners) {
      listener(view);
    }
  }
}
