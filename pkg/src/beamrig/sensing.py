"""Oracle sensors over the simulated scene.

Each sensor reports the obstacles inside its range and azimuth field of view
at its frame rate, with optional additive Gaussian position noise. This
stands in for the camera and lidar object-detection pipelines; only the
output contract (id, position, size estimate, timestamp, source) is modeled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .channel import Scene
from .errors import DomainError
from .geometry import Point, angular_offset, azimuth, distance

LIDAR_MAX_RANGE = 200.0
LIDAR_FRAME_RATE = 20.0
CAMERA_FOV_AZ = 2.0 * math.pi / 3.0
DEFAULT_NOISE_SIGMA = 0.05

FUSED_SOURCE = "fused"


class SensorKind(Enum):
    LIDAR = "lidar"
    CAMERA = "camera"


@dataclass(frozen=True)
class SensorSpec:
    kind: SensorKind
    mount_pos: Point
    mount_az: float = 0.0
    fov_az: float = 2.0 * math.pi
    max_range: float = LIDAR_MAX_RANGE
    frame_rate: float = LIDAR_FRAME_RATE
    noise_sigma: float = DEFAULT_NOISE_SIGMA

    def __post_init__(self):
        if not 0.0 < self.fov_az <= 2.0 * math.pi:
            raise DomainError(f"fov_az must be in (0, 2*pi], got {self.fov_az}")
        if self.max_range <= 0.0:
            raise DomainError(f"max_range must be > 0, got {self.max_range}")
        if self.frame_rate <= 0.0:
            raise DomainError(f"frame_rate must be > 0, got {self.frame_rate}")
        if self.noise_sigma < 0.0:
            raise DomainError(f"noise_sigma must be >= 0, got {self.noise_sigma}")


def lidar_spec(mount_pos: Point, mount_az: float = 0.0, *, noise_sigma: float = DEFAULT_NOISE_SIGMA) -> SensorSpec:
    """360 degree scanning lidar: 200 m range, 20 Hz frames."""
    return SensorSpec(
        kind=SensorKind.LIDAR,
        mount_pos=mount_pos,
        mount_az=mount_az,
        fov_az=2.0 * math.pi,
        max_range=LIDAR_MAX_RANGE,
        frame_rate=LIDAR_FRAME_RATE,
        noise_sigma=noise_sigma,
    )


def camera_spec(mount_pos: Point, mount_az: float = 0.0, *, noise_sigma: float = DEFAULT_NOISE_SIGMA) -> SensorSpec:
    """Forward camera: 120 degree field of view."""
    return SensorSpec(
        kind=SensorKind.CAMERA,
        mount_pos=mount_pos,
        mount_az=mount_az,
        fov_az=CAMERA_FOV_AZ,
        max_range=LIDAR_MAX_RANGE,
        frame_rate=LIDAR_FRAME_RATE,
        noise_sigma=noise_sigma,
    )


@dataclass(frozen=True)
class Detection:
    object_id: str
    position: Point
    radius_est: float
    timestamp: float
    source: str


def sense_frame(scene: Scene, spec: SensorSpec, time: float, rng: np.random.Generator) -> list[Detection]:
    """One detection per obstacle inside the sensor's range and FOV.

    The visibility test uses the obstacle center only. Reported positions
    carry isotropic Gaussian noise of std noise_sigma; the radius estimate
    is exact.
    """
    detections = []
    for obstacle in scene.obstacles:
        if distance(spec.mount_pos, obstacle.center) > spec.max_range:
            continue
        bearing = azimuth(spec.mount_pos, obstacle.center)
        if angular_offset(bearing, spec.mount_az) > spec.fov_az / 2.0:
            continue
        noise = rng.normal(0.0, spec.noise_sigma, size=2)
        detections.append(
            Detection(
                object_id=obstacle.id,
                position=(obstacle.center[0] + float(noise[0]), obstacle.center[1] + float(noise[1])),
                radius_est=obstacle.radius,
                timestamp=time,
                source=spec.kind.value,
            )
        )
    return detections


def fuse_detections(frames: list[list[Detection]]) -> list[Detection]:
    """Merge per-sensor frames into one detection per object.

    Objects seen by a single sensor pass through untouched; objects seen by
    several get the mean position and a fused source marker. Output order
    follows first appearance.
    """
    groups: dict[str, list[Detection]] = {}
    order: list[str] = []
    for frame in frames:
        for det in frame:
            if det.object_id not in groups:
                groups[det.object_id] = []
                order.append(det.object_id)
            groups[det.object_id].append(det)

    fused = []
    for object_id in order:
        members = groups[object_id]
        if len(members) == 1:
            fused.append(members[0])
            continue
        x = sum(d.position[0] for d in members) / len(members)
        y = sum(d.position[1] for d in members) / len(members)
        fused.append(replace(members[0], position=(x, y), source=FUSED_SOURCE))
    return fused
