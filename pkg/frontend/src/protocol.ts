/**
 * Bridge wire protocol.
 *
 * The bridge speaks JSON text frames, one object per message. Outbound
 * data frames carry {topic, timestamp_ms, payload}; the only control
 * frame a client sends is {subscribe: [patterns]}. Inbound data frames
 * from the client may omit timestamp_ms.
 */

export const TOPIC_SENSING_DETECTIONS = "sensing/detections";
export const TOPIC_RAN_SSB = "ran/ssb";
export const TOPIC_RAN_RSRP = "ran/rsrp";
export const TOPIC_BM_DECISION = "bm/decision";
export const TOPIC_UI_SCENE = "ui/scene";
export const TOPIC_UI_OBSTACLE_CMD = "ui/obstacle_cmd";

export interface BridgeFrame {
  topic: string;
  timestamp_ms: number;
  payload: unknown;
}

export interface ObstacleState {
  id: string;
  x: number;
  y: number;
  radius: number;
}

export interface ScenePayload {
  t: number;
  gnb: [number, number];
  ue: [number, number];
  reflector: [[number, number], [number, number]] | null;
  obstacles: ObstacleState[];
  safe_zone_margin: number;
  active_link: string;
  active_beam: number;
  rsrp_dbm: number;
  breach: boolean;
}

export interface RsrpPayload {
  t: number;
  rsrp_dbm: number;
  active_link: string;
  active_beam: number;
  blocked: boolean;
}

export interface DecisionPayload {
  t: number;
  target_beam: number;
  target_link: string;
  reason: string;
}

export interface ObstacleCommand {
  id: string;
  x: number;
  y: number;
}

/** Parse one wire message; null for anything that is not a data frame. */
export function decodeFrame(raw: string): BridgeFrame | null {
  let doc: unknown;
  try {
    doc = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof doc !== "object" || doc === null || Array.isArray(doc)) {
    return null;
  }
  const frame = doc as Record<string, unknown>;
  if (typeof frame.topic !== "string" || !("payload" in frame)) {
    return null;
  }
  const ts = typeof frame.timestamp_ms === "number" ? frame.timestamp_ms : 0;
  return { topic: frame.topic, timestamp_ms: ts, payload: frame.payload };
}

export function encodeSubscribe(patterns: string[]): string {
  return JSON.stringify({ subscribe: patterns });
}

export function encodeObstacleCommand(cmd: ObstacleCommand): string {
  return JSON.stringify({
    topic: TOPIC_UI_OBSTACLE_CMD,
    payload: { id: cmd.id, x: cmd.x, y: cmd.y },
  });
}

function isFiniteNumber(v: unknown): v is number {
  return typeof v === "number" && Number.isFinite(v);
}

function isPoint(v: unknown): v is [number, number] {
  return Array.isArray(v) && v.length === 2 && isFiniteNumber(v[0]) && isFiniteNumber(v[1]);
}

export function isScenePayload(payload: unknown): payload is ScenePayload {
  if (typeof payload !== "object" || payload === null) return false;
  const p = payload as Record<string, unknown>;
  return (
    isFiniteNumber(p.t) &&
    isPoint(p.gnb) &&
    isPoint(p.ue) &&
    (p.reflector === null || (Array.isArray(p.reflector) && p.reflector.length === 2)) &&
    Array.isArray(p.obstacles) &&
    isFiniteNumber(p.safe_zone_margin) &&
    typeof p.active_link === "string" &&
    isFiniteNumber(p.rsrp_dbm) &&
    typeof p.breach === "boolean"
  );
}

export function isRsrpPayload(payload: unknown): payload is RsrpPayload {
  if (typeof payload !== "object" || payload === null) return false;
  const p = payload as Record<string, unknown>;
  return isFiniteNumber(p.t) && isFiniteNumber(p.rsrp_dbm) && typeof p.active_link === "string";
}

export function isDecisionPayload(payload: unknown): payload is DecisionPayload {
  if (typeof payload !== "object" || payload === null) return false;
  const p = payload as Record<string, unknown>;
  return (
    isFiniteNumber(p.t) &&
    isFiniteNumber(p.target_beam) &&
    typeof p.target_link === "string" &&
    typeof p.reason === "string"
  );
}
