// End-to-end run against a real service process. Spawns the Python server
// on an ephemeral port and drives the client stack over actual HTTP.

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiError, InvalidPointsError, TeachingApi } from "../src/api.js";
import { SessionController } from "../src/controller.js";
import { PREVIEW_DEBOUNCE_MS } from "../src/debounce.js";

const sleep = (ms: number) => new Promise<void>((r) => setTimeout(r, ms));

const BEST = { q1: Math.PI / 2, v1: 0, q2: 0, v2: 1 };

let child: ChildProcess | null = null;
let tmp = "";
let base = "";
let finishedSession = "";

beforeAll(async () => {
  tmp = mkdtempSync(join(tmpdir(), "teach-ui-e2e-"));
  child = spawn(
    "python3",
    [
      "-m",
      "skillteach.cli",
      "serve",
      "--port",
      "0",
      "--log",
      join(tmp, "events.jsonl"),
      "--sigma",
      "0",
    ],
    { stdio: ["ignore", "pipe", "pipe"] },
  );

  base = await new Promise<string>((resolve, reject) => {
    let buf = "";
    const onData = (chunk: Buffer) => {
      buf += chunk.toString();
      const m = buf.match(/listening on (http:\/\/\S+)/);
      if (m) {
        resolve(m[1]);
      }
    };
    child!.stdout!.on("data", onData);
    child!.stderr!.on("data", onData);
    child!.on("exit", (code) =>
      reject(new Error(`server exited early (${code}): ${buf}`)),
    );
    setTimeout(() => reject(new Error(`server start timed out: ${buf}`)), 30_000);
  });

  const deadline = Date.now() + 30_000;
  for (;;) {
    try {
      const res = await fetch(`${base}/api/skills/s1/reference?stride=30000`);
      if (res.ok) {
        break;
      }
    } catch {
      // not accepting connections yet
    }
    if (Date.now() > deadline) {
      throw new Error("server never became ready");
    }
    await sleep(200);
  }
});

afterAll(() => {
  child?.kill();
  if (tmp) {
    rmSync(tmp, { recursive: true, force: true });
  }
});

describe("against a live service", () => {
  it("serves the reference trajectory the animation plays", async () => {
    const api = new TeachingApi(base);
    const traj = await api.reference("s1");
    expect(traj.skill).toBe("s1");
    expect(traj.dt).toBeCloseTo(1e-4, 12);
    expect(traj.stride).toBe(200);
    expect(traj.samples.length).toBe(151);
    expect(traj.samples[0].angle).toBeCloseTo(Math.PI / 2, 9);
    expect(traj.samples[1].t).toBeCloseTo(0.02, 9);
  });

  it("target group: score arrives within a debounce window in the guided phase and six commits finish the session", async () => {
    const api = new TeachingApi(base);
    const c = new SessionController(api);
    await c.start("target");
    finishedSession = c.view().sessionId!;

    for (let phase = 1; phase <= 6; phase++) {
      const view = c.view();
      expect(view.phase?.index).toBe(phase);

      // nudge one slider, then place the spread-out optimal pair and let
      // the debounce window pass without any manual flushing
      c.setSliders({ v2: 0.5 });
      c.setSliders(BEST);
      await sleep(PREVIEW_DEBOUNCE_MS + 500);

      const settled = c.view();
      expect(settled.previewPending).toBe(false);
      expect(settled.preview?.valid).toBe(true);
      if (phase === 3) {
        expect(settled.phase?.guided).toBe(true);
        expect(settled.score).toBe(100);
      } else {
        expect(settled.phase?.guided).toBe(false);
        expect(settled.score).toBe(null);
        expect(settled.preview).not.toHaveProperty("score");
      }
      expect(settled.canCommit).toBe(true);
      await c.commit();
    }

    const done = c.view();
    expect(done.done).toBe(true);
    expect(done.phase).toBe(null);
    expect(done.committed).toBe(6);
  });

  it("control group: phase 3 shows no score even for the optimal pair", async () => {
    const api = new TeachingApi(base);
    const c = new SessionController(api, 10);
    await c.start("control");

    for (let phase = 1; phase <= 2; phase++) {
      c.setSliders(BEST);
      await c.settle();
      await c.commit();
    }
    expect(c.view().phase?.index).toBe(3);
    expect(c.view().phase?.guided).toBe(false);

    c.setSliders(BEST);
    await c.settle();
    const view = c.view();
    expect(view.preview?.valid).toBe(true);
    expect(view.score).toBe(null);
    expect(view.preview).not.toHaveProperty("score");
  });

  it("an over-norm point invalidates the preview and blocks commit with a message", async () => {
    const api = new TeachingApi(base);
    const c = new SessionController(api, 10);
    await c.start("target");

    // sin^2(pi/4) + 0.9^2 = 1.31 > 1
    c.setSliders({ q1: Math.PI / 4, v1: 0.9, q2: 0, v2: 1 });
    await c.settle();

    const view = c.view();
    expect(view.preview?.valid).toBe(false);
    expect(view.canCommit).toBe(false);
    expect(view.pointErrors.some((msg) => msg.includes("point 1"))).toBe(true);

    await c.commit(); // must be a no-op in this state
    expect(c.view().committed).toBe(0);
    expect(c.view().phase?.index).toBe(1);
  });

  it("the raw client maps server rejections to typed errors", async () => {
    const api = new TeachingApi(base);
    const created = await api.createSession("target");

    const invalid = await api
      .commit(created.id, [
        { angle: Math.PI / 4, velocity: 0.9 },
        { angle: 0, velocity: 1 },
      ])
      .catch((e: unknown) => e);
    expect(invalid).toBeInstanceOf(InvalidPointsError);
    expect((invalid as InvalidPointsError).errors[0]).toContain("point 1");

    // the session finished in the earlier test: a 7th commit conflicts
    const conflict = await api
      .commit(finishedSession, [
        { angle: BEST.q1, velocity: BEST.v1 },
        { angle: BEST.q2, velocity: BEST.v2 },
      ])
      .catch((e: unknown) => e);
    expect(conflict).toBeInstanceOf(ApiError);
    expect((conflict as ApiError).status).toBe(409);

    const missing = await api.getSession("no-such-id").catch((e: unknown) => e);
    expect(missing).toBeInstanceOf(ApiError);
    expect((missing as ApiError).status).toBe(404);
  });
});
