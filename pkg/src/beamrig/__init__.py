"""Desk-scale beam-management playground.

A deterministic 2D simulator and protocol library for codebook-based
mm-wave beam management: SSB beam sweeping against a register-level
transceiver emulator, a geometric LOS/NLOS channel with disc blockages,
oracle sensors, a proactive safe-zone beam manager, and a pub/sub bus
with a WebSocket bridge for live frontends.
"""

from .bridge import BridgeServer, BridgeThread, bridge_serve
from .bus import (
    Broker,
    BusMessage,
    Subscription,
    TOPIC_BM_DECISION,
    TOPIC_RAN_RSRP,
    TOPIC_RAN_SSB,
    TOPIC_SENSING_DETECTIONS,
    TOPIC_UI_OBSTACLE_CMD,
    TOPIC_UI_SCENE,
)
from .channel import (
    NOISE_FLOOR_DBM,
    Obstacle,
    PathGeometry,
    PathKind,
    Scene,
    best_path,
    compute_rsrp,
    fspl,
    los_path,
    measure_burst,
    nlos_path,
)
from .codebook import (
    Beam,
    BeamCodebook,
    BeamKind,
    append_omni_beam,
    beam_gain,
    make_uniform_codebook,
)
from .errors import (
    BeamRigError,
    CodebookError,
    ConfigurationError,
    DomainError,
    OrderingError,
    ParseError,
    RegisterError,
    SelectionError,
    TopicError,
    ValidationError,
)
from .manager import (
    BeamDecision,
    DecisionReason,
    ManagerState,
    SafeZone,
    safe_zone_breach,
    select_strongest,
    step,
    sweep_decision,
)
from .scenario import (
    ManagerConfig,
    ObstacleScript,
    Scenario,
    Waypoint,
    bundled_scenario_names,
    load_bundled_scenario,
    load_scenario,
    resolve_scenario,
    scenario_from_dict,
    script_position,
)
from .sensing import (
    Detection,
    SensorKind,
    SensorSpec,
    camera_spec,
    fuse_detections,
    lidar_spec,
    sense_frame,
)
from .sim import (
    JsonlRecorder,
    SimResult,
    TickRecord,
    calibrate_tx_constant,
    record_tick,
    run,
    with_analog_beamforming,
    with_manager_enabled,
    with_seed,
)
from .ssb import (
    SsbBitmap,
    SsbConfig,
    SsbTransmission,
    apply_ssb,
    build_ssb_config,
    parse_bitmap,
    schedule_burst,
    serialize_bitmap,
)
from .transceiver import (
    BF_RX_AWV_PTR,
    BF_TX_AWV_PTR,
    DEFAULT_PIN_MAP,
    ModeChangeEvent,
    PinMap,
    SpiTransaction,
    TransceiverState,
    TrxMode,
    export_log_jsonl,
    init_transceiver,
    replay_log,
    set_beam,
    set_trx_mode,
    spi_write,
)

__version__ = "0.1.0"
