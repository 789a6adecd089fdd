"""Deterministic fixed-step simulation engine.

Each tick advances scripted obstacles, runs the sensors at their frame
boundaries, steps the beam manager on fused detections, applies decisions
to the transceiver registers, fires and measures due SSB bursts, and emits
one TickRecord. With a fixed seed and interactive mode off, two runs of
the same scenario produce byte-identical JSONL traces.
"""

from __future__ import annotations

import copy
import json
import logging
import math
import threading
import time as wall_time
from dataclasses import dataclass, field, replace
from typing import IO, Optional, Union

import numpy as np

from .bus import (
    TOPIC_BM_DECISION,
    TOPIC_RAN_RSRP,
    TOPIC_RAN_SSB,
    TOPIC_SENSING_DETECTIONS,
    TOPIC_UI_OBSTACLE_CMD,
    TOPIC_UI_SCENE,
    Broker,
)
from .channel import (
    NOISE_FLOOR_DBM,
    PathGeometry,
    PathKind,
    compute_rsrp,
    fspl,
    los_path,
    measure_burst,
    nlos_path,
)
from .manager import BeamDecision, ManagerState, safe_zone_breach, step
from .scenario import Scenario, script_position
from .sensing import Detection, fuse_detections, sense_frame
from .ssb import apply_ssb, schedule_burst
from .transceiver import DEFAULT_PIN_MAP, TransceiverState, TrxMode, init_transceiver, set_beam

logger = logging.getLogger(__name__)

# Slack for comparing tick times against frame/burst boundaries.
_TIME_EPS = 1e-9

DEFAULT_SPI_CLOCK_DIVIDER = 4


@dataclass(frozen=True)
class TickRecord:
    t: float
    obstacles: tuple[dict, ...]
    detections: Optional[tuple[dict, ...]]
    burst: Optional[tuple[dict, ...]]
    active_link: PathKind
    active_beam: int
    rsrp_dbm: float
    blocked: dict
    decision: Optional[BeamDecision]
    commands: tuple[dict, ...] = ()

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "obstacles": list(self.obstacles),
            "detections": None if self.detections is None else list(self.detections),
            "burst": None if self.burst is None else list(self.burst),
            "active_link": self.active_link.value,
            "active_beam": self.active_beam,
            "rsrp_dbm": self.rsrp_dbm,
            "blocked": self.blocked,
            "decision": None if self.decision is None else _decision_dict(self.decision),
            "commands": list(self.commands),
        }


@dataclass
class SimResult:
    scenario_name: str
    seed: int
    ticks: int
    duration: float
    min_rsrp_dbm: float
    mean_rsrp_dbm: float
    switch_count: int
    blocked_ticks: int
    decisions: list[BeamDecision] = field(default_factory=list)
    transceiver: Optional[TransceiverState] = None
    records: Optional[list[TickRecord]] = None

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario_name,
            "seed": self.seed,
            "ticks": self.ticks,
            "duration_s": self.duration,
            "min_rsrp_dbm": self.min_rsrp_dbm,
            "mean_rsrp_dbm": self.mean_rsrp_dbm,
            "switch_count": self.switch_count,
            "blocked_ticks": self.blocked_ticks,
        }


class JsonlRecorder:
    """One JSON line per tick; flushed and closed at run end."""

    def __init__(self, target: Union[str, IO[str]]):
        if isinstance(target, str):
            self._fh: IO[str] = open(target, "w", encoding="utf-8")
            self._owns = True
        else:
            self._fh = target
            self._owns = False
        self.lines = 0

    def write(self, rec: TickRecord) -> None:
        self._fh.write(json.dumps(rec.to_dict(), sort_keys=True))
        self._fh.write("\n")
        self.lines += 1

    def close(self) -> None:
        if self._fh.closed:
            return
        self._fh.flush()
        if self._owns:
            self._fh.close()

    def __enter__(self) -> "JsonlRecorder":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def record_tick(recorder: JsonlRecorder, rec: TickRecord) -> None:
    """Append one tick to an open recorder."""
    recorder.write(rec)


def calibrate_tx_constant(target_rsrp: float, distance: float, frequency: float) -> float:
    """Transmit constant that yields `target_rsrp` on an aligned link.

    Pure inversion of the received-power formula for zero pattern gains:
    target + FSPL. No clamping.
    """
    return target_rsrp + fspl(distance, frequency)


def _decision_dict(decision: BeamDecision) -> dict:
    return {
        "t": decision.timestamp,
        "target_beam": decision.target_beam,
        "target_link": decision.target_link.value,
        "reason": decision.reason.value,
    }


def _detection_dict(det: Detection) -> dict:
    return {
        "object_id": det.object_id,
        "x": det.position[0],
        "y": det.position[1],
        "radius": det.radius_est,
        "t": det.timestamp,
        "source": det.source,
    }


def _obstacle_dict(obstacle) -> dict:
    return {"id": obstacle.id, "x": obstacle.center[0], "y": obstacle.center[1], "radius": obstacle.radius}


def _measurement_dicts(measurements: list[tuple[int, int, float]]) -> tuple[dict, ...]:
    return tuple(
        {"ssb_index": ssb_index, "beam_id": beam_id, "rsrp_dbm": rsrp}
        for ssb_index, beam_id, rsrp in measurements
    )


def _timestamp_ms(t: float) -> int:
    return int(round(t * 1000.0))


def run(
    scenario: Scenario,
    recorder: Optional[JsonlRecorder] = None,
    broker: Optional[Broker] = None,
    pace: bool = False,
    stop: Optional[threading.Event] = None,
    keep_records: bool = False,
) -> SimResult:
    """Execute a scenario tick by tick.

    `recorder` receives one TickRecord per tick; `broker` gets the live
    topic feed and, when the scenario is interactive, supplies obstacle
    commands. `pace` slows the loop to wall clock for interactive use, and
    `stop` ends the run early. `keep_records` retains records in memory
    (tests introspect them without a file).
    """
    scene = copy.deepcopy(scenario.scene)
    rng = np.random.default_rng(scenario.seed)
    manager_cfg = scenario.manager
    trx = init_transceiver(
        DEFAULT_PIN_MAP,
        DEFAULT_SPI_CLOCK_DIVIDER,
        manager_cfg.los_beam,
        codebook=scenario.codebook,
    )
    mgr_state = ManagerState(
        active_link=PathKind.LOS,
        los_beam=manager_cfg.los_beam,
        nlos_beam=manager_cfg.nlos_beam,
        hysteresis_frames=manager_cfg.hysteresis_frames,
    )

    dt = 1.0 / scenario.tick_rate
    n_ticks = max(1, math.ceil(scenario.duration * scenario.tick_rate - _TIME_EPS))

    scripts = {s.obstacle_id: s for s in scenario.obstacle_script}
    origins = {o.id: o.center for o in scene.obstacles}
    manual_overrides: dict[str, tuple[float, float]] = {}

    cmd_sub = None
    if broker is not None and scenario.interactive:
        cmd_sub = broker.subscribe(TOPIC_UI_OBSTACLE_CMD)

    next_frame = [0] * len(scenario.sensors)
    next_burst = 0
    bursts_enabled = scenario.ssb_config.bitmap.popcount > 0

    decisions: list[BeamDecision] = []
    records: list[TickRecord] = []
    rsrp_sum = 0.0
    min_rsrp = math.inf
    blocked_ticks = 0
    ticks_done = 0
    wall_start = wall_time.monotonic()

    for k in range(n_ticks):
        if stop is not None and stop.is_set():
            break
        t = k * dt

        commands: list[dict] = []
        if cmd_sub is not None:
            for msg in cmd_sub.drain():
                payload = msg.payload
                if (
                    isinstance(payload, dict)
                    and isinstance(payload.get("id"), str)
                    and payload["id"] in origins
                    and isinstance(payload.get("x"), (int, float))
                    and isinstance(payload.get("y"), (int, float))
                    and not isinstance(payload.get("x"), bool)
                    and not isinstance(payload.get("y"), bool)
                ):
                    manual_overrides[payload["id"]] = (float(payload["x"]), float(payload["y"]))
                    commands.append({"id": payload["id"], "x": float(payload["x"]), "y": float(payload["y"])})
                else:
                    logger.warning("ignoring malformed obstacle command: %r", payload)

        for obstacle in scene.obstacles:
            if obstacle.id in manual_overrides:
                obstacle.center = manual_overrides[obstacle.id]
            elif obstacle.id in scripts:
                obstacle.center = script_position(scripts[obstacle.id], origins[obstacle.id], t)

        frames = []
        for i, spec in enumerate(scenario.sensors):
            if t + _TIME_EPS >= next_frame[i] / spec.frame_rate:
                frames.append(sense_frame(scene, spec, t, rng))
                next_frame[i] += 1
        detections: Optional[list[Detection]] = None
        breach_now = False
        if frames:
            detections = fuse_detections(frames)
            breach_now = any(safe_zone_breach(manager_cfg.zone, d) for d in detections)
            if broker is not None:
                broker.publish_json(
                    TOPIC_SENSING_DETECTIONS,
                    _timestamp_ms(t),
                    {"t": t, "detections": [_detection_dict(d) for d in detections]},
                )

        decision: Optional[BeamDecision] = None
        if detections is not None and manager_cfg.enabled:
            mgr_state, decision = step(mgr_state, manager_cfg.zone, detections, t)
            if decision is not None:
                trx = apply_decision(trx, decision)
                decisions.append(decision)
                if broker is not None:
                    broker.publish_json(TOPIC_BM_DECISION, _timestamp_ms(t), _decision_dict(decision))

        burst_dicts: Optional[tuple[dict, ...]] = None
        if bursts_enabled and t + _TIME_EPS >= next_burst * scenario.ssb_config.burst_period:
            burst = schedule_burst(scenario.ssb_config, t)
            for tx in burst:
                trx = apply_ssb(trx, tx)
            measurements = measure_burst(scene, scenario.codebook, burst, manager_cfg.rx_beam)
            burst_dicts = _measurement_dicts(measurements)
            next_burst += 1
            if broker is not None:
                broker.publish_json(TOPIC_RAN_SSB, _timestamp_ms(t), {"t": t, "measurements": list(burst_dicts)})

        los = los_path(scene)
        nlos = nlos_path(scene)
        active_path: Optional[PathGeometry]
        if mgr_state.active_link is PathKind.LOS or nlos is None:
            active_path = los
        else:
            active_path = nlos
        if active_path is None:
            rsrp = NOISE_FLOOR_DBM
            path_blocked = True
        else:
            rsrp = compute_rsrp(scene, scenario.codebook, mgr_state.active_beam, manager_cfg.rx_beam, active_path)
            path_blocked = active_path.blocked

        rsrp_sum += rsrp
        min_rsrp = min(min_rsrp, rsrp)
        if path_blocked:
            blocked_ticks += 1

        if broker is not None:
            broker.publish_json(
                TOPIC_RAN_RSRP,
                _timestamp_ms(t),
                {
                    "t": t,
                    "rsrp_dbm": rsrp,
                    "active_link": mgr_state.active_link.value,
                    "active_beam": mgr_state.active_beam,
                    "blocked": path_blocked,
                },
            )
            broker.publish_json(
                TOPIC_UI_SCENE,
                _timestamp_ms(t),
                {
                    "t": t,
                    "gnb": [scene.gnb_pos[0], scene.gnb_pos[1]],
                    "ue": [scene.ue_pos[0], scene.ue_pos[1]],
                    "reflector": None
                    if scene.reflector is None
                    else [list(scene.reflector[0]), list(scene.reflector[1])],
                    "obstacles": [_obstacle_dict(o) for o in scene.obstacles],
                    "safe_zone_margin": manager_cfg.zone.margin,
                    "active_link": mgr_state.active_link.value,
                    "active_beam": mgr_state.active_beam,
                    "rsrp_dbm": rsrp,
                    "breach": breach_now,
                },
            )

        rec = TickRecord(
            t=t,
            obstacles=tuple(_obstacle_dict(o) for o in scene.obstacles),
            detections=None if detections is None else tuple(_detection_dict(d) for d in detections),
            burst=burst_dicts,
            active_link=mgr_state.active_link,
            active_beam=mgr_state.active_beam,
            rsrp_dbm=rsrp,
            blocked={"los": los.blocked, "nlos": None if nlos is None else nlos.blocked},
            decision=decision,
            commands=tuple(commands),
        )
        if recorder is not None:
            record_tick(recorder, rec)
        if keep_records:
            records.append(rec)
        ticks_done += 1

        if pace:
            target = wall_start + (k + 1) * dt
            delay = target - wall_time.monotonic()
            if delay > 0:
                wall_time.sleep(delay)

    if cmd_sub is not None:
        broker.unsubscribe(cmd_sub)
    if recorder is not None:
        recorder.close()

    return SimResult(
        scenario_name=scenario.name,
        seed=scenario.seed,
        ticks=ticks_done,
        duration=scenario.duration,
        min_rsrp_dbm=min_rsrp if ticks_done else math.nan,
        mean_rsrp_dbm=rsrp_sum / ticks_done if ticks_done else math.nan,
        switch_count=len(decisions),
        blocked_ticks=blocked_ticks,
        decisions=decisions,
        transceiver=trx,
        records=records if keep_records else None,
    )


def apply_decision(trx: TransceiverState, decision: BeamDecision) -> TransceiverState:
    """Point the TX beam at the decision's target."""
    return set_beam(trx, decision.timestamp, TrxMode.TX, decision.target_beam)


def with_manager_enabled(scenario: Scenario, enabled: bool) -> Scenario:
    """Copy of `scenario` with the manager forced on or off."""
    return replace(scenario, manager=replace(scenario.manager, enabled=enabled))


def with_seed(scenario: Scenario, seed: int) -> Scenario:
    return replace(scenario, seed=seed)


def with_analog_beamforming(scenario: Scenario, enabled: bool) -> Scenario:
    """Copy of `scenario` with SSB sweeping forced on or off."""
    return replace(scenario, ssb_config=replace(scenario.ssb_config, analog_beamforming=enabled))
