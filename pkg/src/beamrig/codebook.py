"""Beam codebooks and the parametric antenna gain pattern.

A codebook is an ordered set of up to 64 indexed beams. Directional beams
use a quadratic-in-dB main lobe with a hard sidelobe floor; omni beams have
constant gain. Codebooks are immutable after construction and safe to share.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .errors import CodebookError, ConfigurationError
from .geometry import angular_offset

MAX_BEAMS = 64


class BeamKind(Enum):
    DIRECTIONAL = "directional"
    OMNI = "omni"


@dataclass(frozen=True)
class Beam:
    """One codebook entry: an integer id bound to a parametric pattern."""

    id: int
    boresight_az: float
    beamwidth_3db: float
    peak_gain_db: float
    kind: BeamKind = BeamKind.DIRECTIONAL

    def __post_init__(self):
        if not 0 <= self.id < MAX_BEAMS:
            raise ConfigurationError(f"beam id {self.id} outside 0..{MAX_BEAMS - 1}")
        if self.kind is BeamKind.DIRECTIONAL and not 0.0 < self.beamwidth_3db <= 2.0 * math.pi:
            raise ConfigurationError(
                f"beam {self.id}: beamwidth_3db must be in (0, 2*pi], got {self.beamwidth_3db}"
            )


@dataclass(frozen=True)
class BeamCodebook:
    """Ordered, immutable set of beams with a common sidelobe floor."""

    beams: tuple[Beam, ...]
    sidelobe_floor_db: float

    def __post_init__(self):
        if len(self.beams) > MAX_BEAMS:
            raise ConfigurationError(f"codebook holds {len(self.beams)} beams, cap is {MAX_BEAMS}")
        if self.sidelobe_floor_db >= 0.0:
            raise ConfigurationError("sidelobe_floor_db must be negative")
        ids = [b.id for b in self.beams]
        if len(set(ids)) != len(ids):
            raise ConfigurationError("duplicate beam ids in codebook")
        object.__setattr__(self, "_by_id", {b.id: b for b in self.beams})

    def beam(self, beam_id: int) -> Beam:
        try:
            return self._by_id[beam_id]
        except KeyError:
            raise CodebookError(f"beam id {beam_id} not in codebook") from None

    def has_beam(self, beam_id: int) -> bool:
        return beam_id in self._by_id

    @property
    def beam_ids(self) -> list[int]:
        return [b.id for b in self.beams]


def make_uniform_codebook(
    n_beams: int,
    az_start: float,
    az_step: float,
    beamwidth_3db: float,
    peak_gain_db: float,
    sidelobe_floor_db: float,
) -> BeamCodebook:
    """Build a codebook of `n_beams` equal-width beams on a uniform azimuth grid.

    Beam i gets id i and boresight az_start + i * az_step.
    """
    if not 1 <= n_beams <= MAX_BEAMS:
        raise ConfigurationError(f"n_beams must be in 1..{MAX_BEAMS}, got {n_beams}")
    beams = tuple(
        Beam(
            id=i,
            boresight_az=az_start + i * az_step,
            beamwidth_3db=beamwidth_3db,
            peak_gain_db=peak_gain_db,
        )
        for i in range(n_beams)
    )
    return BeamCodebook(beams=beams, sidelobe_floor_db=sidelobe_floor_db)


def append_omni_beam(codebook: BeamCodebook, peak_gain_db: float = 0.0) -> BeamCodebook:
    """Return a new codebook with an omni beam appended under the next free id."""
    next_id = max((b.id for b in codebook.beams), default=-1) + 1
    omni = Beam(
        id=next_id,
        boresight_az=0.0,
        beamwidth_3db=2.0 * math.pi,
        peak_gain_db=peak_gain_db,
        kind=BeamKind.OMNI,
    )
    return BeamCodebook(beams=codebook.beams + (omni,), sidelobe_floor_db=codebook.sidelobe_floor_db)


def beam_gain(codebook: BeamCodebook, beam_id: int, direction_az: float) -> float:
    """Gain in dB of one beam toward `direction_az`.

    Directional beams follow a quadratic roll-off in dB, clamped at the
    codebook's sidelobe floor:

        max(peak - 12 * (delta / beamwidth_3db)^2, peak + floor)

    with delta the wrapped angular offset in [0, pi]. Omni beams return
    their peak gain everywhere.
    """
    beam = codebook.beam(beam_id)
    if beam.kind is BeamKind.OMNI:
        return beam.peak_gain_db
    delta = angular_offset(direction_az, beam.boresight_az)
    rolloff = 12.0 * (delta / beam.beamwidth_3db) ** 2
    return max(beam.peak_gain_db - rolloff, beam.peak_gain_db + codebook.sidelobe_floor_db)
