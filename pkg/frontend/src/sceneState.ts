/**
 * Client-side mirror of the running scenario.
 *
 * Keeps the most recent frame per topic (the render loop always draws the
 * newest state) plus a bounded list of beam-switch annotations for the
 * chart and scene overlays.
 */

import {
  BridgeFrame,
  DecisionPayload,
  RsrpPayload,
  ScenePayload,
  TOPIC_BM_DECISION,
  TOPIC_RAN_RSRP,
  TOPIC_UI_SCENE,
  isDecisionPayload,
  isRsrpPayload,
  isScenePayload,
} from "./protocol.js";

const MAX_ANNOTATIONS = 50;

export class UiSceneState {
  scene: ScenePayload | null = null;
  lastRsrp: RsrpPayload | null = null;
  decisions: DecisionPayload[] = [];

  /** Fold one bridge frame into the mirror; true when anything changed. */
  applyFrame(frame: BridgeFrame): boolean {
    switch (frame.topic) {
      case TOPIC_UI_SCENE:
        if (!isScenePayload(frame.payload)) return false;
        this.scene = frame.payload;
        return true;
      case TOPIC_RAN_RSRP:
        if (!isRsrpPayload(frame.payload)) return false;
        this.lastRsrp = frame.payload;
        return true;
      case TOPIC_BM_DECISION:
        if (!isDecisionPayload(frame.payload)) return false;
        this.decisions.push(frame.payload);
        if (this.decisions.length > MAX_ANNOTATIONS) {
          this.decisions.splice(0, this.decisions.length - MAX_ANNOTATIONS);
        }
        return true;
      default:
        return false;
    }
  }

  hasObstacle(id: string): boolean {
    if (this.scene === null) return false;
    return this.scene.obstacles.some((o) => o.id === id);
  }

  get activeLink(): string {
    return this.scene?.active_link ?? "?";
  }

  get activeBeam(): number | null {
    return this.scene?.active_beam ?? null;
  }

  get breached(): boolean {
    return this.scene?.breach ?? false;
  }
}
