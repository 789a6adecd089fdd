"""Geometric 2D propagation model.

Free-space loss plus directional pattern gains over two candidate paths: the
direct LOS segment and, when a reflector is present, a single specular NLOS
bounce constructed with the image method. Disc obstacles attenuate any path
they touch by a fixed blockage loss; the model is deliberately two-level
(no diffraction, no fading).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .codebook import BeamCodebook, beam_gain
from .errors import DomainError
from .geometry import (
    Point,
    azimuth,
    distance,
    mirror_point,
    segment_disc_intersects,
    segment_intersection,
)

SPEED_OF_LIGHT = 299_792_458.0

# Finite sentinel reported when no propagation path exists at all.
NOISE_FLOOR_DBM = -120.0

DEFAULT_BLOCKAGE_LOSS_DB = 13.0
DEFAULT_REFLECTION_LOSS_DB = 3.0
DEFAULT_TX_CONST_DBM = 17.8


class PathKind(Enum):
    LOS = "LOS"
    NLOS = "NLOS"


@dataclass
class Obstacle:
    """Moving disc blockage (a pedestrian at desk scale)."""

    id: str
    center: Point
    radius: float
    velocity: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if self.radius <= 0.0:
            raise DomainError(f"obstacle {self.id}: radius must be > 0, got {self.radius}")


@dataclass
class Scene:
    """Planar deployment: gNB, UE, optional reflector segment, disc obstacles."""

    gnb_pos: Point
    ue_pos: Point
    carrier_freq: float
    reflector: Optional[tuple[Point, Point]] = None
    obstacles: list[Obstacle] = field(default_factory=list)
    tx_const_dbm: float = DEFAULT_TX_CONST_DBM
    blockage_loss_db: float = DEFAULT_BLOCKAGE_LOSS_DB
    reflection_loss_db: float = DEFAULT_REFLECTION_LOSS_DB

    def __post_init__(self):
        if self.gnb_pos == self.ue_pos:
            raise DomainError("gnb_pos and ue_pos must differ")
        if self.carrier_freq <= 0.0:
            raise DomainError(f"carrier_freq must be > 0, got {self.carrier_freq}")
        if self.blockage_loss_db < 0.0 or self.reflection_loss_db < 0.0:
            raise DomainError("loss terms must be >= 0 dB")


@dataclass(frozen=True)
class PathGeometry:
    kind: PathKind
    segments: tuple[tuple[Point, Point], ...]
    total_length: float
    departure_az: float
    arrival_az: float
    blocked: bool
    extra_loss_db: float


def fspl(dist: float, frequency: float) -> float:
    """Free-space path loss in dB: 20*log10(4*pi*d*f/c)."""
    if dist <= 0.0:
        raise DomainError(f"distance must be > 0, got {dist}")
    if frequency <= 0.0:
        raise DomainError(f"frequency must be > 0, got {frequency}")
    return 20.0 * math.log10(4.0 * math.pi * dist * frequency / SPEED_OF_LIGHT)


def _segment_blocked(a: Point, b: Point, obstacles: list[Obstacle]) -> bool:
    return any(segment_disc_intersects(a, b, o.center, o.radius) for o in obstacles)


def los_path(scene: Scene) -> PathGeometry:
    """Direct gNB-to-UE segment with binary obstacle blockage."""
    a, b = scene.gnb_pos, scene.ue_pos
    blocked = _segment_blocked(a, b, scene.obstacles)
    return PathGeometry(
        kind=PathKind.LOS,
        segments=((a, b),),
        total_length=distance(a, b),
        departure_az=azimuth(a, b),
        arrival_az=azimuth(b, a),
        blocked=blocked,
        extra_loss_db=scene.blockage_loss_db if blocked else 0.0,
    )


def nlos_path(scene: Scene) -> Optional[PathGeometry]:
    """Single-bounce specular path via the reflector, or None.

    Image method: mirror the gNB across the reflector line; the reflection
    point is where the image-to-UE segment crosses the physical reflector
    segment. No crossing, no path.
    """
    if scene.reflector is None:
        return None
    ra, rb = scene.reflector
    try:
        image = mirror_point(scene.gnb_pos, ra, rb)
    except ValueError:
        return None
    reflection_point = segment_intersection(image, scene.ue_pos, ra, rb)
    if reflection_point is None:
        return None
    leg1 = (scene.gnb_pos, reflection_point)
    leg2 = (reflection_point, scene.ue_pos)
    blocked = _segment_blocked(*leg1, scene.obstacles) or _segment_blocked(*leg2, scene.obstacles)
    extra = scene.reflection_loss_db + (scene.blockage_loss_db if blocked else 0.0)
    return PathGeometry(
        kind=PathKind.NLOS,
        segments=(leg1, leg2),
        total_length=distance(*leg1) + distance(*leg2),
        departure_az=azimuth(scene.gnb_pos, reflection_point),
        arrival_az=azimuth(scene.ue_pos, reflection_point),
        blocked=blocked,
        extra_loss_db=extra,
    )


def compute_rsrp(
    scene: Scene,
    codebook: BeamCodebook,
    tx_beam: int,
    rx_beam: int,
    path: PathGeometry,
) -> float:
    """Received power in dBm over one path.

    tx_const + G_tx(departure) + G_rx(arrival) - FSPL(length) - extra losses.
    """
    return (
        scene.tx_const_dbm
        + beam_gain(codebook, tx_beam, path.departure_az)
        + beam_gain(codebook, rx_beam, path.arrival_az)
        - fspl(path.total_length, scene.carrier_freq)
        - path.extra_loss_db
    )


def best_path(scene: Scene, codebook: BeamCodebook, tx_beam: int, rx_beam: int) -> Optional[PathGeometry]:
    """Strongest available path for a beam pair.

    Unblocked paths always outrank blocked ones; within a rank the higher
    RSRP wins and LOS breaks ties. Returns None only for pathless scenes
    (which a valid Scene cannot produce for LOS, but NLOS-only callers may).
    """
    candidates = [los_path(scene)]
    nlos = nlos_path(scene)
    if nlos is not None:
        candidates.append(nlos)

    def rank(path: PathGeometry):
        return (
            0 if not path.blocked else 1,
            -compute_rsrp(scene, codebook, tx_beam, rx_beam, path),
            0 if path.kind is PathKind.LOS else 1,
        )

    return min(candidates, key=rank, default=None)


def measure_burst(
    scene: Scene,
    codebook: BeamCodebook,
    burst: list,
    rx_beam: int,
) -> list[tuple[int, int, float]]:
    """Per-SSB RSRP measurements over the best available path.

    Returns (ssb_index, beam_id, rsrp_dbm) per transmission; pathless
    measurements report the noise floor.
    """
    measurements = []
    for tx in burst:
        path = best_path(scene, codebook, tx.beam_id, rx_beam)
        if path is None:
            rsrp = NOISE_FLOOR_DBM
        else:
            rsrp = compute_rsrp(scene, codebook, tx.beam_id, rx_beam, path)
        measurements.append((tx.ssb_index, tx.beam_id, rsrp))
    return measurements
