"""Proactive beam management.

Watches fused detections for safe-zone breaches around the active link and
switches the gNB between a primary LOS beam and a stored NLOS fallback beam
before the obstacle physically blocks the path. Switching back to LOS is
debounced by a clear-frame hysteresis counter. Sweep-based strongest-beam
selection is provided for measurement-driven protocols.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

from .channel import PathKind
from .errors import DomainError, SelectionError
from .geometry import Point, point_segment_distance
from .sensing import Detection

DEFAULT_SAFE_ZONE_MARGIN = 1.0
DEFAULT_HYSTERESIS_FRAMES = 5


class DecisionReason(Enum):
    BREACH = "breach"
    CLEAR = "clear"
    SWEEP_SELECT = "sweep_select"


@dataclass(frozen=True)
class SafeZone:
    """Corridor of fixed margin around the protected link segment."""

    link_segment: tuple[Point, Point]
    margin: float = DEFAULT_SAFE_ZONE_MARGIN

    def __post_init__(self):
        if self.margin <= 0.0:
            raise DomainError(f"margin must be > 0, got {self.margin}")


@dataclass(frozen=True)
class ManagerState:
    active_link: PathKind
    los_beam: int
    nlos_beam: int
    hysteresis_frames: int = DEFAULT_HYSTERESIS_FRAMES
    clear_counter: int = 0
    last_decision_time: float = 0.0

    def __post_init__(self):
        if self.hysteresis_frames < 0:
            raise DomainError(f"hysteresis_frames must be >= 0, got {self.hysteresis_frames}")
        if self.clear_counter < 0 or self.clear_counter > self.hysteresis_frames:
            raise DomainError(
                f"clear_counter must be in [0, hysteresis_frames], got {self.clear_counter}"
            )

    @property
    def active_beam(self) -> int:
        return self.los_beam if self.active_link is PathKind.LOS else self.nlos_beam


@dataclass(frozen=True)
class BeamDecision:
    timestamp: float
    target_beam: int
    target_link: PathKind
    reason: DecisionReason


def safe_zone_breach(zone: SafeZone, det: Detection) -> bool:
    """True iff the detected disc overlaps the corridor.

    The corridor is inflated by the detection's radius estimate so wide
    bodies trigger on their edge, not their center.
    """
    d = point_segment_distance(det.position, *zone.link_segment)
    return d <= zone.margin + det.radius_est


def step(
    state: ManagerState,
    zone: SafeZone,
    detections: list[Detection],
    time: float,
) -> tuple[ManagerState, Optional[BeamDecision]]:
    """One sensor-frame update.

    A breach while on LOS switches to the NLOS beam immediately. While on
    NLOS, every clear frame advances the hysteresis counter; reaching the
    threshold switches back to the LOS beam. A breach while already on NLOS
    just resets the counter.
    """
    breached = any(safe_zone_breach(zone, det) for det in detections)

    if breached:
        if state.active_link is PathKind.LOS:
            decision = BeamDecision(
                timestamp=time,
                target_beam=state.nlos_beam,
                target_link=PathKind.NLOS,
                reason=DecisionReason.BREACH,
            )
            new_state = replace(
                state,
                active_link=PathKind.NLOS,
                clear_counter=0,
                last_decision_time=time,
            )
            return new_state, decision
        return replace(state, clear_counter=0), None

    if state.active_link is PathKind.NLOS:
        counter = state.clear_counter + 1
        if counter >= state.hysteresis_frames:
            decision = BeamDecision(
                timestamp=time,
                target_beam=state.los_beam,
                target_link=PathKind.LOS,
                reason=DecisionReason.CLEAR,
            )
            new_state = replace(
                state,
                active_link=PathKind.LOS,
                clear_counter=0,
                last_decision_time=time,
            )
            return new_state, decision
        return replace(state, clear_counter=counter), None

    return state, None


def select_strongest(measurements: list[tuple[int, int, float]]) -> int:
    """Beam id of the max-RSRP measurement; ties go to the lowest SSB index."""
    if not measurements:
        raise SelectionError("cannot select a beam from an empty measurement list")
    best = max(measurements, key=lambda m: (m[2], -m[0]))
    return best[1]


def sweep_decision(
    state: ManagerState,
    measurements: list[tuple[int, int, float]],
    time: float,
) -> tuple[ManagerState, BeamDecision]:
    """Adopt the strongest swept beam for the currently active link."""
    beam = select_strongest(measurements)
    decision = BeamDecision(
        timestamp=time,
        target_beam=beam,
        target_link=state.active_link,
        reason=DecisionReason.SWEEP_SELECT,
    )
    if state.active_link is PathKind.LOS:
        new_state = replace(state, los_beam=beam, last_decision_time=time)
    else:
        new_state = replace(state, nlos_beam=beam, last_decision_time=time)
    return new_state, decision
