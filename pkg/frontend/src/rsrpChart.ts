/**
 * RSRP strip chart.
 *
 * The model keeps a sliding window of samples appended strictly in
 * timestamp order; anything at or before the newest timestamp is dropped,
 * never reordered. Beam-switch annotations are vertical markers. The view
 * draws the model onto a canvas with a fixed dBm range.
 */

import { DecisionPayload } from "./protocol.js";

export interface RsrpSample {
  t: number;
  rsrpDbm: number;
}

export class RsrpChartModel {
  private readonly samples: RsrpSample[] = [];
  private readonly marks: DecisionPayload[] = [];

  constructor(private readonly windowS: number = 15) {}

  /** Append one sample; false when it is out of timestamp order. */
  append(t: number, rsrpDbm: number): boolean {
    const last = this.samples[this.samples.length - 1];
    if (last !== undefined && t <= last.t) {
      return false;
    }
    this.samples.push({ t, rsrpDbm });
    this.trim(t);
    return true;
  }

  annotate(decision: DecisionPayload): void {
    this.marks.push(decision);
    const cutoff = decision.t - this.windowS;
    while (this.marks.length > 0 && this.marks[0].t < cutoff) {
      this.marks.shift();
    }
  }

  get data(): readonly RsrpSample[] {
    return this.samples;
  }

  get annotations(): readonly DecisionPayload[] {
    return this.marks;
  }

  get latest(): RsrpSample | null {
    return this.samples[this.samples.length - 1] ?? null;
  }

  private trim(now: number): void {
    const cutoff = now - this.windowS;
    let drop = 0;
    while (drop < this.samples.length && this.samples[drop].t < cutoff) {
      drop += 1;
    }
    if (drop > 0) this.samples.splice(0, drop);
  }
}

const RANGE_TOP_DBM = -45;
const RANGE_BOTTOM_DBM = -75;

export class RsrpChartView {
  private readonly ctx: CanvasRenderingContext2D;

  constructor(
    private readonly canvas: HTMLCanvasElement,
    private readonly model: RsrpChartModel,
    private readonly windowS: number = 15,
  ) {
    const ctx = canvas.getContext("2d");
    if (ctx === null) throw new Error("canvas 2d context unavailable");
    this.ctx = ctx;
  }

  draw(): void {
    const { ctx, canvas } = this;
    const w = canvas.width;
    const h = canvas.height;
    ctx.clearRect(0, 0, w, h);
    ctx.fillStyle = "#10141a";
    ctx.fillRect(0, 0, w, h);

    const latest = this.model.latest;
    const tRight = latest === null ? this.windowS : Math.max(latest.t, this.windowS);
    const tLeft = tRight - this.windowS;
    const toX = (t: number) => ((t - tLeft) / this.windowS) * w;
    const toY = (dbm: number) =>
      ((RANGE_TOP_DBM - dbm) / (RANGE_TOP_DBM - RANGE_BOTTOM_DBM)) * h;

    ctx.strokeStyle = "#2a3442";
    ctx.fillStyle = "#8292a6";
    ctx.font = "11px sans-serif";
    ctx.lineWidth = 1;
    for (let dbm = RANGE_TOP_DBM - 5; dbm > RANGE_BOTTOM_DBM; dbm -= 5) {
      const y = toY(dbm);
      ctx.beginPath();
      ctx.moveTo(0, y);
      ctx.lineTo(w, y);
      ctx.stroke();
      ctx.fillText(`${dbm} dBm`, 4, y - 3);
    }

    ctx.strokeStyle = "#e0a84a";
    ctx.lineWidth = 1;
    for (const mark of this.model.annotations) {
      const x = toX(mark.t);
      if (x < 0) continue;
      ctx.beginPath();
      ctx.moveTo(x, 0);
      ctx.lineTo(x, h);
      ctx.stroke();
      ctx.fillStyle = "#e0a84a";
      ctx.fillText(`${mark.reason} -> ${mark.target_link}`, Math.min(x + 3, w - 90), 12);
    }

    const data = this.model.data;
    if (data.length > 1) {
      ctx.strokeStyle = "#4ac26b";
      ctx.lineWidth = 2;
      ctx.beginPath();
      ctx.moveTo(toX(data[0].t), toY(data[0].rsrpDbm));
      for (let i = 1; i < data.length; i++) {
        ctx.lineTo(toX(data[i].t), toY(data[i].rsrpDbm));
      }
      ctx.stroke();
    }

    if (latest !== null) {
      ctx.fillStyle = "#e6edf3";
      ctx.font = "13px sans-serif";
      ctx.fillText(`${latest.rsrpDbm.toFixed(2)} dBm`, w - 88, 16);
    }
  }
}
