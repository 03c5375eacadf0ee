import type { ReferenceTrajectory, ViaPoint } from "./types.js";

// Pendulum drawn from the pivot at the canvas centre; angle 0 points up,
// positive angles lean right, matching the simulator's convention.

const ROD_FRACTION = 0.38;
const BOB_RADIUS = 9;
const ARROW_SCALE = 0.35; // rod lengths per rad/s of marker velocity

function bobPosition(
  cx: number,
  cy: number,
  rod: number,
  angle: number,
): [number, number] {
  return [cx + rod * Math.sin(angle), cy - rod * Math.cos(angle)];
}

/** Looping playback of a reference trajectory with via-point markers. */
export class ReferenceAnimation {
  private traj: ReferenceTrajectory | null = null;
  private markers: ViaPoint[] = [];
  private raf = 0;
  private startedAt = 0;

  constructor(private readonly canvas: HTMLCanvasElement) {}

  setTrajectory(traj: ReferenceTrajectory): void {
    this.traj = traj;
    this.startedAt = performance.now();
    this.draw();
  }

  setMarkers(markers: ViaPoint[]): void {
    this.markers = markers;
    this.draw();
  }

  start(): void {
    this.stop();
    this.startedAt = performance.now();
    const loop = () => {
      this.draw();
      this.raf = requestAnimationFrame(loop);
    };
    this.raf = requestAnimationFrame(loop);
  }

  stop(): void {
    if (this.raf) {
      cancelAnimationFrame(this.raf);
      this.raf = 0;
    }
  }

  private currentAngle(): number | null {
    const traj = this.traj;
    if (!traj || traj.samples.length === 0) {
      return null;
    }
    const last = traj.samples[traj.samples.length - 1];
    const duration = last.t;
    if (duration <= 0) {
      return last.angle;
    }
    const t = ((performance.now() - this.startedAt) / 1000) % duration;
    const step = traj.dt * traj.stride;
    const idx = Math.min(Math.floor(t / step), traj.samples.length - 1);
    return traj.samples[idx].angle;
  }

  private draw(): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) {
      return;
    }
    const { width, height } = this.canvas;
    const cx = width / 2;
    const cy = height / 2;
    const rod = Math.min(width, height) * ROD_FRACTION;

    ctx.clearRect(0, 0, width, height);

    // faint vertical datum
    ctx.strokeStyle = "#d8d8d8";
    ctx.lineWidth = 1;
    ctx.setLineDash([4, 4]);
    ctx.beginPath();
    ctx.moveTo(cx, cy);
    ctx.lineTo(cx, cy - rod);
    ctx.stroke();
    ctx.setLineDash([]);

    for (const marker of this.markers) {
      this.drawMarker(ctx, cx, cy, rod, marker);
    }

    const angle = this.currentAngle();
    if (angle !== null) {
      const [bx, by] = bobPosition(cx, cy, rod, angle);
      ctx.strokeStyle = "#1a1a1a";
      ctx.lineWidth = 3;
      ctx.beginPath();
      ctx.moveTo(cx, cy);
      ctx.lineTo(bx, by);
      ctx.stroke();
      ctx.fillStyle = "#1a1a1a";
      ctx.beginPath();
      ctx.arc(bx, by, BOB_RADIUS, 0, 2 * Math.PI);
      ctx.fill();
    }

    ctx.fillStyle = "#555";
    ctx.beginPath();
    ctx.arc(cx, cy, 4, 0, 2 * Math.PI);
    ctx.fill();
  }

  private drawMarker(
    ctx: CanvasRenderingContext2D,
    cx: number,
    cy: number,
    rod: number,
    marker: ViaPoint,
  ): void {
    const [bx, by] = bobPosition(cx, cy, rod, marker.angle);
    ctx.strokeStyle = "#4a7fd4";
    ctx.lineWidth = 1.5;
    ctx.setLineDash([6, 4]);
    ctx.beginPath();
    ctx.moveTo(cx, cy);
    ctx.lineTo(bx, by);
    ctx.stroke();
    ctx.setLineDash([]);

    ctx.fillStyle = "rgba(74, 127, 212, 0.35)";
    ctx.strokeStyle = "#4a7fd4";
    ctx.beginPath();
    ctx.arc(bx, by, BOB_RADIUS - 2, 0, 2 * Math.PI);
    ctx.fill();
    ctx.stroke();

    if (marker.velocity !== 0) {
      // velocity arrow along the tangent of the circular path
      const len = marker.velocity * rod * ARROW_SCALE;
      const tx = Math.cos(marker.angle);
      const ty = Math.sin(marker.angle);
      const ex = bx + len * tx;
      const ey = by + len * ty;
      ctx.strokeStyle = "#2c5aa0";
      ctx.lineWidth = 2;
      ctx.beginPath();
      ctx.moveTo(bx, by);
      ctx.lineTo(ex, ey);
      ctx.stroke();
      const head = 5 * Math.sign(len);
      ctx.beginPath();
      ctx.moveTo(ex, ey);
      ctx.lineTo(ex - head * tx + head * 0.6 * ty, ey - head * ty - head * 0.6 * tx);
      ctx.moveTo(ex, ey);
      ctx.lineTo(ex - head * tx - head * 0.6 * ty, ey - head * ty + head * 0.6 * tx);
      ctx.stroke();
    }
  }
}
