"""SSB burst configuration and scheduling.

Parses the 64-bit SSB transmission bitmap, validates the SSB-to-beam
mapping, and expands a configuration into time-stamped transmissions that
drive the transceiver emulator during sweeps. Timing is abstracted to
uniform slots of `ssb_slot_duration` seconds within each burst period.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import ConfigurationError, ParseError
from .transceiver import TransceiverState, TrxMode, set_beam, set_trx_mode

SSB_COUNT = 64

DEFAULT_BURST_PERIOD = 20e-3
DEFAULT_SLOT_DURATION = 125e-6


@dataclass(frozen=True)
class SsbBitmap:
    """64-entry transmission pattern; bit i enables SSB index i."""

    bits: tuple[bool, ...]

    def __post_init__(self):
        if len(self.bits) != SSB_COUNT:
            raise ConfigurationError(f"bitmap must hold {SSB_COUNT} bits, got {len(self.bits)}")

    @property
    def enabled_indices(self) -> list[int]:
        return [i for i, b in enumerate(self.bits) if b]

    @property
    def popcount(self) -> int:
        return sum(self.bits)


@dataclass(frozen=True)
class SsbConfig:
    bitmap: SsbBitmap
    analog_beamforming: bool
    beam_weights: Mapping[int, int]
    fixed_beam: int
    burst_period: float = DEFAULT_BURST_PERIOD
    ssb_slot_duration: float = DEFAULT_SLOT_DURATION


@dataclass(frozen=True)
class SsbTransmission:
    ssb_index: int
    beam_id: int
    start_time: float


def parse_bitmap(text: str) -> SsbBitmap:
    """Parse a 64-character '0'/'1' string into an SsbBitmap."""
    if len(text) != SSB_COUNT:
        raise ParseError(f"bitmap must be {SSB_COUNT} characters, got {len(text)}")
    if set(text) - {"0", "1"}:
        raise ParseError(f"bitmap may contain only '0' and '1': {text!r}")
    return SsbBitmap(bits=tuple(c == "1" for c in text))


def serialize_bitmap(bitmap: SsbBitmap) -> str:
    return "".join("1" if b else "0" for b in bitmap.bits)


def build_ssb_config(
    bitmap: SsbBitmap,
    analog_beamforming: bool,
    beam_weights: Mapping[int, int],
    fixed_beam: int,
    burst_period: float = DEFAULT_BURST_PERIOD,
    ssb_slot_duration: float = DEFAULT_SLOT_DURATION,
) -> SsbConfig:
    """Validate and assemble an SSB configuration.

    With analog beamforming enabled, every enabled SSB index must map to a
    beam id; with it disabled, all transmissions use `fixed_beam` and the
    weights are ignored.
    """
    if ssb_slot_duration <= 0.0:
        raise ConfigurationError(f"ssb_slot_duration must be > 0, got {ssb_slot_duration}")
    if burst_period <= SSB_COUNT * ssb_slot_duration:
        raise ConfigurationError(
            f"burst_period {burst_period} must exceed {SSB_COUNT} slots "
            f"({SSB_COUNT * ssb_slot_duration})"
        )
    if analog_beamforming:
        missing = [i for i in bitmap.enabled_indices if i not in beam_weights]
        if missing:
            raise ConfigurationError(f"enabled SSB indices without beam weight: {missing}")
    return SsbConfig(
        bitmap=bitmap,
        analog_beamforming=analog_beamforming,
        beam_weights=dict(beam_weights),
        fixed_beam=fixed_beam,
        burst_period=burst_period,
        ssb_slot_duration=ssb_slot_duration,
    )


def schedule_burst(config: SsbConfig, burst_start: float) -> list[SsbTransmission]:
    """One transmission per enabled SSB index, at burst_start + i * slot."""
    transmissions = []
    for i in config.bitmap.enabled_indices:
        beam_id = config.beam_weights[i] if config.analog_beamforming else config.fixed_beam
        transmissions.append(
            SsbTransmission(ssb_index=i, beam_id=beam_id, start_time=burst_start + i * config.ssb_slot_duration)
        )
    return transmissions


def apply_ssb(transceiver: TransceiverState, tx: SsbTransmission) -> TransceiverState:
    """Drive one SSB through the register model: TX mode, then one beam write."""
    set_trx_mode(transceiver, tx.start_time, TrxMode.TX)
    return set_beam(transceiver, tx.start_time, TrxMode.TX, tx.beam_id)
