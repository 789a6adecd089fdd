"""Beam codebook construction and the quadratic gain pattern."""

from __future__ import annotations

import math

import numpy as np
import pytest

from beamrig.codebook import (
    MAX_BEAMS,
    Beam,
    BeamCodebook,
    BeamKind,
    append_omni_beam,
    beam_gain,
    make_uniform_codebook,
)
from beamrig.errors import CodebookError, ConfigurationError


def small_codebook():
    return make_uniform_codebook(
        n_beams=4,
        az_start=0.0,
        az_step=math.radians(10.0),
        beamwidth_3db=math.radians(10.0),
        peak_gain_db=20.0,
        sidelobe_floor_db=-25.0,
    )


def test_uniform_codebook_layout():
    cb = small_codebook()
    assert cb.beam_ids == [0, 1, 2, 3]
    for i, beam in enumerate(cb.beams):
        assert beam.id == i
        assert beam.boresight_az == pytest.approx(math.radians(10.0 * i))
        assert beam.kind is BeamKind.DIRECTIONAL


def test_gain_at_boresight_is_peak():
    cb = small_codebook()
    assert beam_gain(cb, 0, 0.0) == pytest.approx(20.0)
    assert beam_gain(cb, 2, math.radians(20.0)) == pytest.approx(20.0)


def test_gain_drops_3db_at_half_beamwidth():
    cb = small_codebook()
    # quadratic roll-off: 12 * (0.5)^2 = 3 dB down at half the 3 dB width
    off = math.radians(5.0)
    assert beam_gain(cb, 0, off) == pytest.approx(20.0 - 3.0)
    assert beam_gain(cb, 0, -off) == pytest.approx(20.0 - 3.0)


def test_gain_drops_12db_at_full_beamwidth():
    cb = small_codebook()
    assert beam_gain(cb, 0, math.radians(10.0)) == pytest.approx(20.0 - 12.0)


def test_gain_clamps_to_sidelobe_floor():
    cb = small_codebook()
    assert beam_gain(cb, 0, math.pi) == pytest.approx(20.0 - 25.0)
    assert beam_gain(cb, 0, math.radians(90.0)) == pytest.approx(-5.0)


def test_gain_uses_wrapped_angular_offset():
    cb = make_uniform_codebook(
        n_beams=1,
        az_start=math.radians(175.0),
        az_step=0.0,
        beamwidth_3db=math.radians(20.0),
        peak_gain_db=10.0,
        sidelobe_floor_db=-30.0,
    )
    # -175 deg is 10 deg away from +175 deg across the wrap
    assert beam_gain(cb, 0, math.radians(-175.0)) == pytest.approx(10.0 - 3.0)


def test_omni_beam_gain_independent_of_direction():
    cb = append_omni_beam(small_codebook(), peak_gain_db=2.0)
    omni_id = cb.beam_ids[-1]
    assert cb.beam(omni_id).kind is BeamKind.OMNI
    for az in np.linspace(-math.pi, math.pi, 17):
        assert beam_gain(cb, omni_id, float(az)) == pytest.approx(2.0)


def test_append_omni_assigns_next_free_id():
    cb = append_omni_beam(small_codebook())
    assert cb.beam_ids == [0, 1, 2, 3, 4]


def test_unknown_beam_id_raises():
    cb = small_codebook()
    with pytest.raises(CodebookError):
        cb.beam(99)
    with pytest.raises(CodebookError):
        beam_gain(cb, -1, 0.0)
    assert cb.has_beam(3)
    assert not cb.has_beam(4)


def test_codebook_size_limit():
    cb = make_uniform_codebook(
        n_beams=MAX_BEAMS,
        az_start=0.0,
        az_step=2 * math.pi / MAX_BEAMS,
        beamwidth_3db=math.radians(6.0),
        peak_gain_db=15.0,
        sidelobe_floor_db=-20.0,
    )
    assert len(cb.beams) == MAX_BEAMS
    with pytest.raises(ConfigurationError):
        append_omni_beam(cb)
    with pytest.raises(ConfigurationError):
        make_uniform_codebook(
            n_beams=MAX_BEAMS + 1,
            az_start=0.0,
            az_step=0.1,
            beamwidth_3db=0.1,
            peak_gain_db=0.0,
            sidelobe_floor_db=-20.0,
        )


def test_invalid_parameters_rejected():
    with pytest.raises(ConfigurationError):
        Beam(id=0, boresight_az=0.0, beamwidth_3db=0.0, peak_gain_db=0.0)
    with pytest.raises(ConfigurationError):
        Beam(id=64, boresight_az=0.0, beamwidth_3db=0.1, peak_gain_db=0.0)
    beams = (Beam(id=0, boresight_az=0.0, beamwidth_3db=0.1, peak_gain_db=0.0),)
    with pytest.raises(ConfigurationError):
        BeamCodebook(beams=beams, sidelobe_floor_db=0.0)
    dup = beams + beams
    with pytest.raises(ConfigurationError):
        BeamCodebook(beams=dup, sidelobe_floor_db=-20.0)


def test_gain_monotone_in_offset_until_floor():
    cb = small_codebook()
    offsets = np.linspace(0.0, math.pi, 200)
    gains = [beam_gain(cb, 0, float(o)) for o in offsets]
    diffs = np.diff(gains)
    assert np.all(diffs <= 1e-12)
