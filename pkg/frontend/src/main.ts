/**
 * Entry point: wires the bridge connection to the scene view, RSRP chart,
 * status banner, and the drag-to-command path.
 */

import { BridgeConnection, ConnectionStatus } from "./connection.js";
import { ObstacleCommander } from "./controls.js";
import {
  TOPIC_BM_DECISION,
  TOPIC_RAN_RSRP,
  TOPIC_UI_SCENE,
  isDecisionPayload,
  isRsrpPayload,
} from "./protocol.js";
import { RsrpChartModel, RsrpChartView } from "./rsrpChart.js";
import { UiSceneState } from "./sceneState.js";
import { SceneView } from "./sceneView.js";

const BRIDGE_URL = `ws://${location.hostname || "127.0.0.1"}:8787`;

function element<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (el === null) throw new Error(`missing #${id}`);
  return el as T;
}

const sceneCanvas = element<HTMLCanvasElement>("scene");
const chartCanvas = element<HTMLCanvasElement>("chart");
const banner = element<HTMLDivElement>("banner");
const indicator = element<HTMLDivElement>("indicator");
const notice = element<HTMLDivElement>("notice");

const state = new UiSceneState();
const chartModel = new RsrpChartModel(15);
const chartView = new RsrpChartView(chartCanvas, chartModel, 15);

let dirty = true;

const STATUS_TEXT: Record<ConnectionStatus, string> = {
  connecting: "connecting to bridge...",
  connected: "",
  stale: "no data for 2 s, stream stale",
  disconnected: "disconnected from bridge, retrying",
};

const connection = new BridgeConnection({
  url: BRIDGE_URL,
  patterns: [TOPIC_UI_SCENE, TOPIC_RAN_RSRP, TOPIC_BM_DECISION],
  onFrame: (frame) => {
    if (frame.topic === TOPIC_RAN_RSRP && isRsrpPayload(frame.payload)) {
      chartModel.append(frame.payload.t, frame.payload.rsrp_dbm);
    } else if (frame.topic === TOPIC_BM_DECISION && isDecisionPayload(frame.payload)) {
      chartModel.annotate(frame.payload);
    }
    if (state.applyFrame(frame)) dirty = true;
  },
  onStatus: (status) => {
    banner.textContent = STATUS_TEXT[status];
    banner.className = status;
    dirty = true;
  },
});

let noticeTimer: ReturnType<typeof setTimeout> | null = null;

function showNotice(message: string): void {
  notice.textContent = message;
  if (noticeTimer !== null) clearTimeout(noticeTimer);
  noticeTimer = setTimeout(() => {
    notice.textContent = "";
    noticeTimer = null;
  }, 2500);
}

const commander = new ObstacleCommander({ state, connection, onNotice: showNotice });
const sceneView = new SceneView(sceneCanvas, (id, x, y) => {
  commander.moveTo(id, x, y);
});

function renderLoop(): void {
  if (dirty || sceneView.dragging !== null) {
    dirty = false;
    if (state.scene !== null) sceneView.update(state.scene);
    sceneView.draw();
    chartView.draw();
    const beam = state.activeBeam;
    indicator.textContent =
      state.scene === null
        ? "no scene yet"
        : `link ${state.activeLink}  beam ${beam ?? "?"}  ` +
          `rsrp ${state.scene.rsrp_dbm.toFixed(2)} dBm  t=${state.scene.t.toFixed(2)} s`;
  }
  requestAnimationFrame(renderLoop);
}

connection.connect();
requestAnimationFrame(renderLoop);

window.addEventListener("beforeunload", () => {
  commander.dispose();
  connection.close();
});
