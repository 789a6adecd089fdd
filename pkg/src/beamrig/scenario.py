"""Scenario files: a single JSON document describing scene, codebook, SSB
configuration, sensors, manager policy, and scripted obstacle motion.

Angles in the file are degrees, positions meters, frequencies Hz; suffixes
on field names say which. The SSB block keeps the configuration-file
variable names of the emulated stack (ssb_PositionsInBurst_Bitmap,
set_analog_beamforming, beam_weights) verbatim.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Union

from .channel import (
    DEFAULT_BLOCKAGE_LOSS_DB,
    DEFAULT_REFLECTION_LOSS_DB,
    DEFAULT_TX_CONST_DBM,
    Obstacle,
    Scene,
)
from .codebook import MAX_BEAMS, BeamCodebook, append_omni_beam, make_uniform_codebook
from .errors import BeamRigError, ParseError, ValidationError
from .geometry import Point, distance
from .manager import DEFAULT_HYSTERESIS_FRAMES, DEFAULT_SAFE_ZONE_MARGIN, SafeZone
from .sensing import (
    CAMERA_FOV_AZ,
    DEFAULT_NOISE_SIGMA,
    LIDAR_FRAME_RATE,
    LIDAR_MAX_RANGE,
    SensorKind,
    SensorSpec,
)
from .ssb import DEFAULT_BURST_PERIOD, DEFAULT_SLOT_DURATION, SsbConfig, build_ssb_config, parse_bitmap

DEFAULT_TICK_RATE = 100.0


def _scenario_dir():
    return resources.files("beamrig").joinpath("scenarios")


@dataclass(frozen=True)
class Waypoint:
    pos: Point
    speed: float


@dataclass(frozen=True)
class ObstacleScript:
    """Piecewise-linear path: walk to each waypoint at its constant speed."""

    obstacle_id: str
    start_time: float
    waypoints: tuple[Waypoint, ...]


def script_position(script: ObstacleScript, origin: Point, time: float) -> Point:
    """Scripted position at `time`, starting from `origin`.

    Holds at the origin until start_time, then walks each leg at its
    waypoint speed, and holds at the final waypoint forever after.
    """
    if time <= script.start_time:
        return origin
    pos = origin
    leg_start = script.start_time
    for wp in script.waypoints:
        length = distance(pos, wp.pos)
        if length == 0.0:
            continue
        leg_duration = length / wp.speed
        if time < leg_start + leg_duration:
            frac = (time - leg_start) / leg_duration
            return (pos[0] + frac * (wp.pos[0] - pos[0]), pos[1] + frac * (wp.pos[1] - pos[1]))
        pos = wp.pos
        leg_start += leg_duration
    return pos


@dataclass(frozen=True)
class ManagerConfig:
    enabled: bool
    los_beam: int
    nlos_beam: int
    rx_beam: int
    zone: SafeZone
    hysteresis_frames: int = DEFAULT_HYSTERESIS_FRAMES


@dataclass(frozen=True)
class Scenario:
    name: str
    scene: Scene
    codebook: BeamCodebook
    ssb_config: SsbConfig
    sensors: tuple[SensorSpec, ...]
    manager: ManagerConfig
    duration: float
    tick_rate: float
    seed: int
    interactive: bool
    obstacle_script: tuple[ObstacleScript, ...] = ()
    description: str = ""
    metadata: dict = field(default_factory=dict)


def _require(obj: dict, key: str, path: str) -> Any:
    if key not in obj:
        raise ValidationError(f"{path}.{key}" if path else key, "missing required field")
    return obj[key]


def _as_dict(value: Any, path: str) -> dict:
    if not isinstance(value, dict):
        raise ValidationError(path, f"expected an object, got {type(value).__name__}")
    return value


def _as_list(value: Any, path: str) -> list:
    if not isinstance(value, list):
        raise ValidationError(path, f"expected an array, got {type(value).__name__}")
    return value


def _as_number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(path, f"expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ValidationError(path, f"expected a finite number, got {value!r}")
    return float(value)


def _as_int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(path, f"expected an integer, got {value!r}")
    return value


def _as_bool(value: Any, path: str) -> bool:
    if not isinstance(value, bool):
        raise ValidationError(path, f"expected a boolean, got {value!r}")
    return value


def _as_str(value: Any, path: str) -> str:
    if not isinstance(value, str):
        raise ValidationError(path, f"expected a string, got {value!r}")
    return value


def _as_point(value: Any, path: str) -> Point:
    seq = _as_list(value, path)
    if len(seq) != 2:
        raise ValidationError(path, f"expected [x, y], got {len(seq)} elements")
    return (_as_number(seq[0], f"{path}[0]"), _as_number(seq[1], f"{path}[1]"))


def _positive(value: float, path: str) -> float:
    if value <= 0.0:
        raise ValidationError(path, f"must be > 0, got {value}")
    return value


def _non_negative(value: float, path: str) -> float:
    if value < 0.0:
        raise ValidationError(path, f"must be >= 0, got {value}")
    return value


def _rad(deg: float) -> float:
    return math.radians(deg)


def _parse_scene(doc: dict) -> Scene:
    block = _as_dict(_require(doc, "scene", ""), "scene")
    gnb = _as_point(_require(block, "gnb_pos", "scene"), "scene.gnb_pos")
    ue = _as_point(_require(block, "ue_pos", "scene"), "scene.ue_pos")
    freq = _positive(_as_number(_require(block, "carrier_freq_hz", "scene"), "scene.carrier_freq_hz"), "scene.carrier_freq_hz")

    reflector = None
    if block.get("reflector") is not None:
        seq = _as_list(block["reflector"], "scene.reflector")
        if len(seq) != 2:
            raise ValidationError("scene.reflector", "expected two endpoints")
        reflector = (_as_point(seq[0], "scene.reflector[0]"), _as_point(seq[1], "scene.reflector[1]"))

    obstacles = []
    seen_ids = set()
    for i, entry in enumerate(_as_list(block.get("obstacles", []), "scene.obstacles")):
        opath = f"scene.obstacles[{i}]"
        odict = _as_dict(entry, opath)
        oid = _as_str(_require(odict, "id", opath), f"{opath}.id")
        if oid in seen_ids:
            raise ValidationError(f"{opath}.id", f"duplicate obstacle id {oid!r}")
        seen_ids.add(oid)
        center = _as_point(_require(odict, "center", opath), f"{opath}.center")
        radius = _positive(_as_number(_require(odict, "radius", opath), f"{opath}.radius"), f"{opath}.radius")
        obstacles.append(Obstacle(id=oid, center=center, radius=radius))

    try:
        return Scene(
            gnb_pos=gnb,
            ue_pos=ue,
            carrier_freq=freq,
            reflector=reflector,
            obstacles=obstacles,
            tx_const_dbm=_as_number(block.get("tx_const_dbm", DEFAULT_TX_CONST_DBM), "scene.tx_const_dbm"),
            blockage_loss_db=_non_negative(
                _as_number(block.get("blockage_loss_db", DEFAULT_BLOCKAGE_LOSS_DB), "scene.blockage_loss_db"),
                "scene.blockage_loss_db",
            ),
            reflection_loss_db=_non_negative(
                _as_number(block.get("reflection_loss_db", DEFAULT_REFLECTION_LOSS_DB), "scene.reflection_loss_db"),
                "scene.reflection_loss_db",
            ),
        )
    except BeamRigError as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError("scene", str(exc)) from exc


def _parse_codebook(doc: dict) -> BeamCodebook:
    block = _as_dict(_require(doc, "codebook", ""), "codebook")
    n_beams = _as_int(_require(block, "n_beams", "codebook"), "codebook.n_beams")
    if not 1 <= n_beams <= MAX_BEAMS:
        raise ValidationError("codebook.n_beams", f"must be in 1..{MAX_BEAMS}, got {n_beams}")
    codebook = make_uniform_codebook(
        n_beams=n_beams,
        az_start=_rad(_as_number(_require(block, "az_start_deg", "codebook"), "codebook.az_start_deg")),
        az_step=_rad(_as_number(_require(block, "az_step_deg", "codebook"), "codebook.az_step_deg")),
        beamwidth_3db=_rad(
            _positive(_as_number(_require(block, "beamwidth_deg", "codebook"), "codebook.beamwidth_deg"), "codebook.beamwidth_deg")
        ),
        peak_gain_db=_as_number(block.get("peak_gain_db", 0.0), "codebook.peak_gain_db"),
        sidelobe_floor_db=_as_number(block.get("sidelobe_floor_db", -20.0), "codebook.sidelobe_floor_db"),
    )
    if _as_bool(block.get("append_omni", False), "codebook.append_omni"):
        if n_beams >= MAX_BEAMS:
            raise ValidationError("codebook.append_omni", "no free beam id left for the omni entry")
        codebook = append_omni_beam(codebook, peak_gain_db=_as_number(block.get("omni_gain_db", 0.0), "codebook.omni_gain_db"))
    return codebook


def _parse_ssb(doc: dict, codebook: BeamCodebook) -> SsbConfig:
    block = _as_dict(_require(doc, "ssb", ""), "ssb")
    bitmap_text = _as_str(
        _require(block, "ssb_PositionsInBurst_Bitmap", "ssb"), "ssb.ssb_PositionsInBurst_Bitmap"
    )
    try:
        bitmap = parse_bitmap(bitmap_text)
    except ParseError as exc:
        raise ValidationError("ssb.ssb_PositionsInBurst_Bitmap", str(exc)) from exc

    weights_raw = _as_dict(block.get("beam_weights", {}), "ssb.beam_weights")
    weights = {}
    for key, value in weights_raw.items():
        wpath = f"ssb.beam_weights[{key!r}]"
        try:
            index = int(key)
        except (TypeError, ValueError):
            raise ValidationError(wpath, f"SSB index key must be an integer string, got {key!r}") from None
        beam_id = _as_int(value, wpath)
        if not codebook.has_beam(beam_id):
            raise ValidationError(wpath, f"beam {beam_id} not in codebook")
        weights[index] = beam_id

    fixed_beam = _as_int(_require(block, "fixed_beam", "ssb"), "ssb.fixed_beam")
    if not codebook.has_beam(fixed_beam):
        raise ValidationError("ssb.fixed_beam", f"beam {fixed_beam} not in codebook")

    try:
        return build_ssb_config(
            bitmap=bitmap,
            analog_beamforming=_as_bool(_require(block, "set_analog_beamforming", "ssb"), "ssb.set_analog_beamforming"),
            beam_weights=weights,
            fixed_beam=fixed_beam,
            burst_period=_as_number(block.get("burst_period_s", DEFAULT_BURST_PERIOD), "ssb.burst_period_s"),
            ssb_slot_duration=_as_number(block.get("ssb_slot_duration_s", DEFAULT_SLOT_DURATION), "ssb.ssb_slot_duration_s"),
        )
    except BeamRigError as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError("ssb", str(exc)) from exc


def _parse_sensors(doc: dict) -> tuple[SensorSpec, ...]:
    sensors = []
    for i, entry in enumerate(_as_list(doc.get("sensors", []), "sensors")):
        spath = f"sensors[{i}]"
        sdict = _as_dict(entry, spath)
        kind_text = _as_str(_require(sdict, "kind", spath), f"{spath}.kind")
        try:
            kind = SensorKind(kind_text)
        except ValueError:
            raise ValidationError(f"{spath}.kind", f"unknown sensor kind {kind_text!r}") from None
        default_fov = 2.0 * math.pi if kind is SensorKind.LIDAR else CAMERA_FOV_AZ
        fov = (
            _rad(_as_number(sdict["fov_az_deg"], f"{spath}.fov_az_deg"))
            if "fov_az_deg" in sdict
            else default_fov
        )
        try:
            sensors.append(
                SensorSpec(
                    kind=kind,
                    mount_pos=_as_point(_require(sdict, "mount_pos", spath), f"{spath}.mount_pos"),
                    mount_az=_rad(_as_number(sdict.get("mount_az_deg", 0.0), f"{spath}.mount_az_deg")),
                    fov_az=fov,
                    max_range=_as_number(sdict.get("max_range_m", LIDAR_MAX_RANGE), f"{spath}.max_range_m"),
                    frame_rate=_as_number(sdict.get("frame_rate_hz", LIDAR_FRAME_RATE), f"{spath}.frame_rate_hz"),
                    noise_sigma=_as_number(sdict.get("noise_sigma_m", DEFAULT_NOISE_SIGMA), f"{spath}.noise_sigma_m"),
                )
            )
        except BeamRigError as exc:
            if isinstance(exc, ValidationError):
                raise
            raise ValidationError(spath, str(exc)) from exc
    return tuple(sensors)


def _parse_manager(doc: dict, scene: Scene, codebook: BeamCodebook) -> ManagerConfig:
    block = _as_dict(_require(doc, "manager", ""), "manager")
    beams = {}
    for key in ("los_beam", "nlos_beam", "rx_beam"):
        beam_id = _as_int(_require(block, key, "manager"), f"manager.{key}")
        if not codebook.has_beam(beam_id):
            raise ValidationError(f"manager.{key}", f"beam {beam_id} not in codebook")
        beams[key] = beam_id

    margin = _as_number(block.get("safe_zone_margin_m", DEFAULT_SAFE_ZONE_MARGIN), "manager.safe_zone_margin_m")
    if margin <= 0.0:
        raise ValidationError("manager.safe_zone_margin_m", f"must be > 0, got {margin}")
    hysteresis = _as_int(block.get("hysteresis_frames", DEFAULT_HYSTERESIS_FRAMES), "manager.hysteresis_frames")
    if hysteresis < 0:
        raise ValidationError("manager.hysteresis_frames", f"must be >= 0, got {hysteresis}")

    return ManagerConfig(
        enabled=_as_bool(_require(block, "enabled", "manager"), "manager.enabled"),
        los_beam=beams["los_beam"],
        nlos_beam=beams["nlos_beam"],
        rx_beam=beams["rx_beam"],
        zone=SafeZone(link_segment=(scene.gnb_pos, scene.ue_pos), margin=margin),
        hysteresis_frames=hysteresis,
    )


def _parse_script(doc: dict, scene: Scene) -> tuple[ObstacleScript, ...]:
    known_ids = {o.id for o in scene.obstacles}
    scripts = []
    scripted_ids = set()
    for i, entry in enumerate(_as_list(doc.get("obstacle_script", []), "obstacle_script")):
        spath = f"obstacle_script[{i}]"
        sdict = _as_dict(entry, spath)
        oid = _as_str(_require(sdict, "obstacle_id", spath), f"{spath}.obstacle_id")
        if oid not in known_ids:
            raise ValidationError(f"{spath}.obstacle_id", f"unknown obstacle id {oid!r}")
        if oid in scripted_ids:
            raise ValidationError(f"{spath}.obstacle_id", f"obstacle {oid!r} scripted twice")
        scripted_ids.add(oid)
        start = _non_negative(
            _as_number(sdict.get("start_time_s", 0.0), f"{spath}.start_time_s"), f"{spath}.start_time_s"
        )
        waypoints = []
        wp_list = _as_list(_require(sdict, "waypoints", spath), f"{spath}.waypoints")
        if not wp_list:
            raise ValidationError(f"{spath}.waypoints", "must contain at least one waypoint")
        for j, wp_entry in enumerate(wp_list):
            wpath = f"{spath}.waypoints[{j}]"
            wdict = _as_dict(wp_entry, wpath)
            waypoints.append(
                Waypoint(
                    pos=_as_point(_require(wdict, "pos", wpath), f"{wpath}.pos"),
                    speed=_positive(
                        _as_number(_require(wdict, "speed_mps", wpath), f"{wpath}.speed_mps"), f"{wpath}.speed_mps"
                    ),
                )
            )
        scripts.append(ObstacleScript(obstacle_id=oid, start_time=start, waypoints=tuple(waypoints)))
    return tuple(scripts)


def scenario_from_dict(doc: dict) -> Scenario:
    """Validate one parsed scenario document."""
    doc = _as_dict(doc, "")
    name = _as_str(_require(doc, "name", ""), "name")
    scene = _parse_scene(doc)
    codebook = _parse_codebook(doc)
    ssb_config = _parse_ssb(doc, codebook)
    sensors = _parse_sensors(doc)
    manager = _parse_manager(doc, scene, codebook)
    script = _parse_script(doc, scene)

    sim_block = _as_dict(_require(doc, "sim", ""), "sim")
    duration = _positive(_as_number(_require(sim_block, "duration_s", "sim"), "sim.duration_s"), "sim.duration_s")
    tick_rate = _positive(
        _as_number(sim_block.get("tick_rate_hz", DEFAULT_TICK_RATE), "sim.tick_rate_hz"), "sim.tick_rate_hz"
    )
    max_frame_rate = max((s.frame_rate for s in sensors), default=0.0)
    if tick_rate < max_frame_rate:
        raise ValidationError(
            "sim.tick_rate_hz", f"must be >= the fastest sensor frame rate ({max_frame_rate} Hz), got {tick_rate}"
        )

    return Scenario(
        name=name,
        scene=scene,
        codebook=codebook,
        ssb_config=ssb_config,
        sensors=sensors,
        manager=manager,
        duration=duration,
        tick_rate=tick_rate,
        seed=_as_int(sim_block.get("seed", 0), "sim.seed"),
        interactive=_as_bool(sim_block.get("interactive", False), "sim.interactive"),
        obstacle_script=script,
        description=_as_str(doc.get("description", ""), "description"),
        metadata=_as_dict(doc.get("metadata", {}), "metadata"),
    )


def load_scenario(path: Union[str, Path]) -> Scenario:
    """Load and validate a scenario JSON file."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: not valid JSON: {exc}") from exc
    return scenario_from_dict(doc)


def bundled_scenario_names() -> list[str]:
    """Names of the scenarios shipped with the package."""
    names = []
    for entry in _scenario_dir().iterdir():
        if entry.name.endswith(".json"):
            names.append(entry.name[: -len(".json")])
    return sorted(names)


def load_bundled_scenario(name: str) -> Scenario:
    """Load a shipped scenario by bare name (e.g. "demo_berlin")."""
    resource = _scenario_dir().joinpath(f"{name}.json")
    if not resource.is_file():
        raise ParseError(f"no bundled scenario named {name!r}; available: {bundled_scenario_names()}")
    doc = json.loads(resource.read_text(encoding="utf-8"))
    return scenario_from_dict(doc)


def resolve_scenario(ref: str) -> Scenario:
    """Treat `ref` as a file path if one exists, else as a bundled name."""
    path = Path(ref)
    if path.exists():
        return load_scenario(path)
    return load_bundled_scenario(ref)
