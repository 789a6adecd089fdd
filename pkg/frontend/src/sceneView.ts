/**
 * 2D scene renderer with draggable obstacles.
 *
 * Fixed meters-to-pixels mapping sized for the desk-scale floor plan; no
 * camera controls. Dragging an obstacle reports positions in meters to a
 * callback; the caller owns throttling and sending. The safe-zone
 * corridor turns red while breached, and the active link is drawn either
 * as the direct ray or as the two reflector legs.
 */

import { ObstacleState, ScenePayload } from "./protocol.js";

type Point = [number, number];

const SCALE_PX_PER_M = 150;
const ORIGIN_X_M = -0.6;
const ORIGIN_Y_M = 3.4;

export type ObstacleDragHandler = (id: string, x: number, y: number) => void;

function sub(a: Point, b: Point): Point {
  return [a[0] - b[0], a[1] - b[1]];
}

function dot(a: Point, b: Point): number {
  return a[0] * b[0] + a[1] * b[1];
}

/** Specular bounce point on the reflector segment, or null when none exists. */
export function reflectionPoint(gnb: Point, ue: Point, reflector: [Point, Point]): Point | null {
  const [a, b] = reflector;
  const d = sub(b, a);
  const len2 = dot(d, d);
  if (len2 === 0) return null;
  // mirror the gNB across the reflector line
  const ap = sub(gnb, a);
  const t = dot(ap, d) / len2;
  const foot: Point = [a[0] + t * d[0], a[1] + t * d[1]];
  const image: Point = [2 * foot[0] - gnb[0], 2 * foot[1] - gnb[1]];
  // intersect image->ue with the reflector segment
  const r = sub(ue, image);
  const denom = d[0] * r[1] - d[1] * r[0];
  if (denom === 0) return null;
  const qp = sub(image, a);
  const u = (qp[0] * r[1] - qp[1] * r[0]) / denom;
  const s = (qp[0] * d[1] - qp[1] * d[0]) / denom;
  if (u < 0 || u > 1 || s < 0 || s > 1) return null;
  return [a[0] + u * d[0], a[1] + u * d[1]];
}

export class SceneView {
  private readonly ctx: CanvasRenderingContext2D;
  private scene: ScenePayload | null = null;
  private draggingId: string | null = null;

  constructor(
    private readonly canvas: HTMLCanvasElement,
    private readonly onDrag: ObstacleDragHandler,
  ) {
    const ctx = canvas.getContext("2d");
    if (ctx === null) throw new Error("canvas 2d context unavailable");
    this.ctx = ctx;
    canvas.addEventListener("pointerdown", (e) => this.pointerDown(e));
    canvas.addEventListener("pointermove", (e) => this.pointerMove(e));
    canvas.addEventListener("pointerup", (e) => this.pointerUp(e));
    canvas.addEventListener("pointercancel", (e) => this.pointerUp(e));
  }

  update(scene: ScenePayload): void {
    this.scene = scene;
  }

  get dragging(): string | null {
    return this.draggingId;
  }

  private toPx(p: Point): Point {
    return [(p[0] - ORIGIN_X_M) * SCALE_PX_PER_M, (ORIGIN_Y_M - p[1]) * SCALE_PX_PER_M];
  }

  private toMeters(px: number, py: number): Point {
    return [px / SCALE_PX_PER_M + ORIGIN_X_M, ORIGIN_Y_M - py / SCALE_PX_PER_M];
  }

  private canvasPos(e: PointerEvent): Point {
    const rect = this.canvas.getBoundingClientRect();
    return [
      ((e.clientX - rect.left) / rect.width) * this.canvas.width,
      ((e.clientY - rect.top) / rect.height) * this.canvas.height,
    ];
  }

  private pointerDown(e: PointerEvent): void {
    if (this.scene === null) return;
    const [px, py] = this.canvasPos(e);
    for (const o of this.scene.obstacles) {
      const [ox, oy] = this.toPx([o.x, o.y]);
      const reach = o.radius * SCALE_PX_PER_M + 8;
      if ((px - ox) ** 2 + (py - oy) ** 2 <= reach * reach) {
        this.draggingId = o.id;
        this.canvas.setPointerCapture(e.pointerId);
        return;
      }
    }
  }

  private pointerMove(e: PointerEvent): void {
    if (this.draggingId === null) return;
    const [px, py] = this.canvasPos(e);
    const [x, y] = this.toMeters(px, py);
    this.onDrag(this.draggingId, Number(x.toFixed(3)), Number(y.toFixed(3)));
  }

  private pointerUp(e: PointerEvent): void {
    if (this.draggingId !== null && this.canvas.hasPointerCapture(e.pointerId)) {
      this.canvas.releasePointerCapture(e.pointerId);
    }
    this.draggingId = null;
  }

  draw(): void {
    const { ctx, canvas } = this;
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    ctx.fillStyle = "#10141a";
    ctx.fillRect(0, 0, canvas.width, canvas.height);
    if (this.scene === null) {
      ctx.fillStyle = "#8292a6";
      ctx.font = "14px sans-serif";
      ctx.fillText("waiting for scene frames", 20, 30);
      return;
    }
    const scene = this.scene;
    const gnb = scene.gnb;
    const ue = scene.ue;

    this.drawCorridor(gnb, ue, scene.safe_zone_margin, scene.breach);
    this.drawLink(scene);
    if (scene.reflector !== null) {
      this.drawSegment(scene.reflector[0], scene.reflector[1], "#9aa7b8", 5);
    }
    this.drawNode(gnb, "#58a6ff", "gNB", true);
    this.drawNode(ue, "#4ac26b", "UE", false);
    for (const o of scene.obstacles) {
      this.drawObstacle(o);
    }
    if (scene.breach) {
      ctx.fillStyle = "#f85149";
      ctx.font = "bold 14px sans-serif";
      ctx.fillText("BREACH", 20, 24);
    }
  }

  private drawCorridor(gnb: Point, ue: Point, margin: number, breached: boolean): void {
    const { ctx } = this;
    const [ax, ay] = this.toPx(gnb);
    const [bx, by] = this.toPx(ue);
    const len = Math.hypot(bx - ax, by - ay);
    ctx.save();
    ctx.translate(ax, ay);
    ctx.rotate(Math.atan2(by - ay, bx - ax));
    ctx.fillStyle = breached ? "rgba(248, 81, 73, 0.18)" : "rgba(88, 166, 255, 0.10)";
    const half = margin * SCALE_PX_PER_M;
    ctx.fillRect(0, -half, len, 2 * half);
    ctx.restore();
  }

  private drawLink(scene: ScenePayload): void {
    const gnb = scene.gnb;
    const ue = scene.ue;
    if (scene.active_link === "NLOS" && scene.reflector !== null) {
      const bounce = reflectionPoint(gnb, ue, scene.reflector);
      if (bounce !== null) {
        this.drawSegment(gnb, bounce, "#e0a84a", 2, [6, 4]);
        this.drawSegment(bounce, ue, "#e0a84a", 2, [6, 4]);
        return;
      }
    }
    this.drawSegment(gnb, ue, "#58a6ff", 2);
  }

  private drawSegment(a: Point, b: Point, color: string, width: number, dash: number[] = []): void {
    const { ctx } = this;
    const [ax, ay] = this.toPx(a);
    const [bx, by] = this.toPx(b);
    ctx.strokeStyle = color;
    ctx.lineWidth = width;
    ctx.setLineDash(dash);
    ctx.beginPath();
    ctx.moveTo(ax, ay);
    ctx.lineTo(bx, by);
    ctx.stroke();
    ctx.setLineDash([]);
  }

  private drawNode(p: Point, color: string, label: string, square: boolean): void {
    const { ctx } = this;
    const [x, y] = this.toPx(p);
    ctx.fillStyle = color;
    if (square) {
      ctx.fillRect(x - 7, y - 7, 14, 14);
    } else {
      ctx.beginPath();
      ctx.arc(x, y, 7, 0, 2 * Math.PI);
      ctx.fill();
    }
    ctx.font = "12px sans-serif";
    ctx.fillText(label, x + 10, y + 4);
  }

  private drawObstacle(o: ObstacleState): void {
    const { ctx } = this;
    const [x, y] = this.toPx([o.x, o.y]);
    const r = o.radius * SCALE_PX_PER_M;
    ctx.beginPath();
    ctx.arc(x, y, r, 0, 2 * Math.PI);
    ctx.fillStyle = this.draggingId === o.id ? "rgba(224, 168, 74, 0.85)" : "rgba(154, 167, 184, 0.75)";
    ctx.fill();
    ctx.strokeStyle = "#e6edf3";
    ctx.lineWidth = 1;
    ctx.stroke();
    ctx.fillStyle = "#e6edf3";
    ctx.font = "12px sans-serif";
    ctx.fillText(o.id, x + r + 4, y + 4);
  }
}
