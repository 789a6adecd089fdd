"""Propagation model oracles: path loss, image-method reflection, blockage."""

from __future__ import annotations

import math

import numpy as np
import pytest

from beamrig.channel import (
    DEFAULT_BLOCKAGE_LOSS_DB,
    DEFAULT_REFLECTION_LOSS_DB,
    Obstacle,
    PathKind,
    Scene,
    SPEED_OF_LIGHT,
    best_path,
    compute_rsrp,
    fspl,
    los_path,
    measure_burst,
    nlos_path,
)
from beamrig.codebook import append_omni_beam, make_uniform_codebook
from beamrig.errors import DomainError
from beamrig.geometry import azimuth, distance
from beamrig.ssb import SsbTransmission

FREQ = 27.533e9

# Independently computed 20*log10(4*pi*d*f/c) at 27.533 GHz.
FSPL_3M = 70.78727901160559
FSPL_4M = 73.28605374377159
DOUBLING_DB = 20.0 * math.log10(2.0)

# Transmit constant that lands an omni-to-omni 3 m link on -53 dBm exactly.
TX_CONST_3M = -53.0 + FSPL_3M


def omni_codebook():
    cb = make_uniform_codebook(
        n_beams=1,
        az_start=0.0,
        az_step=0.0,
        beamwidth_3db=math.radians(10.0),
        peak_gain_db=0.0,
        sidelobe_floor_db=-20.0,
    )
    return append_omni_beam(cb)  # omni beam gets id 1


def three_meter_scene(**kwargs):
    return Scene(
        gnb_pos=(0.0, 0.0),
        ue_pos=(3.0, 0.0),
        carrier_freq=FREQ,
        tx_const_dbm=TX_CONST_3M,
        **kwargs,
    )


def test_fspl_frozen_oracles():
    assert fspl(3.0, FREQ) == pytest.approx(FSPL_3M, abs=0.01)
    assert fspl(4.0, FREQ) == pytest.approx(FSPL_4M, abs=0.01)


def test_fspl_doubling_adds_six_db():
    rng = np.random.default_rng(11)
    for _ in range(200):
        d = float(rng.uniform(0.1, 500.0))
        f = float(rng.uniform(1e9, 100e9))
        assert fspl(2.0 * d, f) - fspl(d, f) == pytest.approx(DOUBLING_DB, abs=1e-9)
        assert fspl(d, 2.0 * f) - fspl(d, f) == pytest.approx(DOUBLING_DB, abs=1e-9)


def test_fspl_strictly_increasing():
    ds = np.sort(np.random.default_rng(12).uniform(0.01, 100.0, size=50))
    losses = [fspl(float(d), FREQ) for d in ds]
    assert all(b > a for a, b in zip(losses, losses[1:]))


def test_fspl_domain_errors():
    with pytest.raises(DomainError):
        fspl(0.0, FREQ)
    with pytest.raises(DomainError):
        fspl(-1.0, FREQ)
    with pytest.raises(DomainError):
        fspl(3.0, 0.0)


def test_fspl_formula_direct():
    d, f = 7.3, 61e9
    expected = 20.0 * math.log10(4.0 * math.pi * d * f / SPEED_OF_LIGHT)
    assert fspl(d, f) == pytest.approx(expected, abs=1e-12)


def test_scene_validation():
    with pytest.raises(DomainError):
        Scene(gnb_pos=(0, 0), ue_pos=(0, 0), carrier_freq=FREQ)
    with pytest.raises(DomainError):
        Scene(gnb_pos=(0, 0), ue_pos=(1, 0), carrier_freq=-1.0)
    with pytest.raises(DomainError):
        Scene(gnb_pos=(0, 0), ue_pos=(1, 0), carrier_freq=FREQ, blockage_loss_db=-1.0)
    with pytest.raises(DomainError):
        Obstacle(id="o", center=(0, 0), radius=0.0)


def test_los_path_fields():
    scene = three_meter_scene()
    path = los_path(scene)
    assert path.kind is PathKind.LOS
    assert path.total_length == pytest.approx(3.0)
    assert path.departure_az == pytest.approx(0.0)
    assert path.arrival_az == pytest.approx(math.pi)
    assert not path.blocked
    assert path.extra_loss_db == 0.0


def test_los_blockage_cases():
    blocked = three_meter_scene(obstacles=[Obstacle("p", (1.5, 0.0), 0.25)])
    assert los_path(blocked).blocked
    assert los_path(blocked).extra_loss_db == DEFAULT_BLOCKAGE_LOSS_DB
    clear = three_meter_scene(obstacles=[Obstacle("p", (1.5, 0.3), 0.25)])
    assert not los_path(clear).blocked
    grazing = three_meter_scene(obstacles=[Obstacle("p", (1.5, 0.25), 0.25)])
    assert los_path(grazing).blocked


def test_rsrp_omni_levels_unblocked_and_blocked():
    cb = omni_codebook()
    scene = three_meter_scene()
    assert compute_rsrp(scene, cb, 1, 1, los_path(scene)) == pytest.approx(-53.0, abs=1e-9)
    blocked = three_meter_scene(obstacles=[Obstacle("p", (1.5, 0.0), 0.25)])
    assert compute_rsrp(blocked, cb, 1, 1, los_path(blocked)) == pytest.approx(-66.0, abs=1e-9)


def test_nlos_image_method_oracle():
    scene = three_meter_scene(reflector=((0.0, 2.0), (3.0, 2.0)))
    path = nlos_path(scene)
    assert path is not None
    assert path.kind is PathKind.NLOS
    # image of (0,0) across y=2 is (0,4); its segment to (3,0) crosses at (1.5,2)
    assert path.segments[0][1] == pytest.approx((1.5, 2.0), abs=1e-12)
    assert path.total_length == pytest.approx(5.0, abs=1e-12)
    assert path.departure_az == pytest.approx(math.atan2(2.0, 1.5))
    assert path.arrival_az == pytest.approx(math.atan2(2.0, -1.5))
    assert path.extra_loss_db == DEFAULT_REFLECTION_LOSS_DB

    cb = omni_codebook()
    expected = TX_CONST_3M - fspl(5.0, FREQ) - DEFAULT_REFLECTION_LOSS_DB
    assert compute_rsrp(scene, cb, 1, 1, path) == pytest.approx(expected, abs=1e-9)


def test_nlos_absent_cases():
    assert nlos_path(three_meter_scene()) is None
    # reflector too short: the specular point (1.5, 2) falls outside it
    miss = three_meter_scene(reflector=((2.5, 2.0), (3.0, 2.0)))
    assert nlos_path(miss) is None
    degenerate = three_meter_scene(reflector=((1.0, 2.0), (1.0, 2.0)))
    assert nlos_path(degenerate) is None


def test_nlos_leg_blockage():
    reflector = ((0.0, 2.0), (3.0, 2.0))
    # obstacle centered on the first leg (gnb -> (1.5, 2)) blocks the bounce
    on_leg = three_meter_scene(
        reflector=reflector, obstacles=[Obstacle("p", (0.75, 1.0), 0.2)]
    )
    path = nlos_path(on_leg)
    assert path.blocked
    assert path.extra_loss_db == DEFAULT_REFLECTION_LOSS_DB + DEFAULT_BLOCKAGE_LOSS_DB
    # the same obstacle leaves a low reflector's path clear if moved aside
    aside = three_meter_scene(
        reflector=reflector, obstacles=[Obstacle("p", (0.75, -1.0), 0.2)]
    )
    assert not nlos_path(aside).blocked


def test_nlos_specular_reflection_law():
    """Random geometry: the bounce obeys d_out = d_in - 2 (d_in . n) n."""
    rng = np.random.default_rng(99)
    cases = 0
    while cases < 200:
        h = float(rng.uniform(1.0, 4.0))
        gnb = (float(rng.uniform(-4, 4)), float(rng.uniform(-4, h - 0.2)))
        ue = (float(rng.uniform(-4, 4)), float(rng.uniform(-4, h - 0.2)))
        if distance(gnb, ue) < 1e-6:
            continue
        scene = Scene(
            gnb_pos=gnb,
            ue_pos=ue,
            carrier_freq=FREQ,
            reflector=((-100.0, h), (100.0, h)),
        )
        path = nlos_path(scene)
        assert path is not None
        r = path.segments[0][1]
        d_in = np.array([r[0] - gnb[0], r[1] - gnb[1]])
        d_in /= np.linalg.norm(d_in)
        d_out = np.array([ue[0] - r[0], ue[1] - r[1]])
        d_out /= np.linalg.norm(d_out)
        normal = np.array([0.0, 1.0])
        reflected = d_in - 2.0 * float(d_in @ normal) * normal
        assert np.allclose(reflected, d_out, atol=1e-9)
        cases += 1


def test_nlos_never_shorter_than_los():
    rng = np.random.default_rng(5)
    for _ in range(300):
        h = float(rng.uniform(0.5, 5.0))
        gnb = (float(rng.uniform(-4, 4)), float(rng.uniform(-4, h - 0.1)))
        ue = (float(rng.uniform(-4, 4)), float(rng.uniform(-4, h - 0.1)))
        if distance(gnb, ue) < 1e-6:
            continue
        scene = Scene(gnb_pos=gnb, ue_pos=ue, carrier_freq=FREQ, reflector=((-100.0, h), (100.0, h)))
        path = nlos_path(scene)
        assert path.total_length >= distance(gnb, ue) - 1e-12


def test_reciprocity_of_path_rsrp():
    cb = omni_codebook()
    rng = np.random.default_rng(17)
    for _ in range(200):
        gnb = (float(rng.uniform(-3, 3)), float(rng.uniform(-3, 1.5)))
        ue = (float(rng.uniform(-3, 3)), float(rng.uniform(-3, 1.5)))
        if distance(gnb, ue) < 1e-3:
            continue
        fwd = Scene(gnb_pos=gnb, ue_pos=ue, carrier_freq=FREQ, reflector=((-50.0, 2.0), (50.0, 2.0)))
        rev = Scene(gnb_pos=ue, ue_pos=gnb, carrier_freq=FREQ, reflector=((-50.0, 2.0), (50.0, 2.0)))
        assert compute_rsrp(fwd, cb, 1, 1, los_path(fwd)) == pytest.approx(
            compute_rsrp(rev, cb, 1, 1, los_path(rev)), abs=1e-9
        )
        assert compute_rsrp(fwd, cb, 1, 1, nlos_path(fwd)) == pytest.approx(
            compute_rsrp(rev, cb, 1, 1, nlos_path(rev)), abs=1e-9
        )


def test_best_path_prefers_unblocked():
    cb = omni_codebook()
    reflector = ((0.0, 2.0), (3.0, 2.0))
    open_scene = three_meter_scene(reflector=reflector)
    assert best_path(open_scene, cb, 1, 1).kind is PathKind.LOS
    blocked_scene = three_meter_scene(
        reflector=reflector, obstacles=[Obstacle("p", (1.5, 0.0), 0.25)]
    )
    assert best_path(blocked_scene, cb, 1, 1).kind is PathKind.NLOS


def test_best_path_rsrp_monotone_under_blockage():
    """Adding an obstacle never raises the best-path RSRP."""
    cb = omni_codebook()
    rng = np.random.default_rng(23)
    for _ in range(300):
        gnb = (0.0, 0.0)
        ue = (float(rng.uniform(1.0, 4.0)), float(rng.uniform(-1.0, 1.0)))
        reflector = ((-50.0, 2.0), (50.0, 2.0))
        base = Scene(gnb_pos=gnb, ue_pos=ue, carrier_freq=FREQ, reflector=reflector)
        obstacle = Obstacle(
            "p",
            (float(rng.uniform(-1.0, 4.0)), float(rng.uniform(-1.0, 2.0))),
            float(rng.uniform(0.05, 0.6)),
        )
        with_obs = Scene(
            gnb_pos=gnb, ue_pos=ue, carrier_freq=FREQ, reflector=reflector, obstacles=[obstacle]
        )
        before = compute_rsrp(base, cb, 1, 1, best_path(base, cb, 1, 1))
        after = compute_rsrp(with_obs, cb, 1, 1, best_path(with_obs, cb, 1, 1))
        assert after <= before + 1e-9


def test_measure_burst_gain_ladder():
    # four beams fanned away from the +x link direction, omni receiver
    cb = append_omni_beam(
        make_uniform_codebook(
            n_beams=4,
            az_start=0.0,
            az_step=math.radians(30.0),
            beamwidth_3db=math.radians(30.0),
            peak_gain_db=0.0,
            sidelobe_floor_db=-20.0,
        )
    )
    scene = Scene(gnb_pos=(0.0, 0.0), ue_pos=(4.0, 0.0), carrier_freq=FREQ, tx_const_dbm=TX_CONST_3M)
    burst = [SsbTransmission(ssb_index=i, beam_id=i, start_time=i * 125e-6) for i in range(4)]
    out = measure_burst(scene, cb, burst, rx_beam=4)
    assert [m[0] for m in out] == [0, 1, 2, 3]
    assert [m[1] for m in out] == [0, 1, 2, 3]
    base = TX_CONST_3M - fspl(4.0, FREQ)
    # 0, -12 (one beamwidth off), then the -20 dB floor twice
    assert out[0][2] == pytest.approx(base, abs=1e-9)
    assert out[1][2] == pytest.approx(base - 12.0, abs=1e-9)
    assert out[2][2] == pytest.approx(base - 20.0, abs=1e-9)
    assert out[3][2] == pytest.approx(base - 20.0, abs=1e-9)


def test_measure_burst_strongest_is_angularly_closest():
    cb = append_omni_beam(
        make_uniform_codebook(
            n_beams=16,
            az_start=math.radians(-60.0),
            az_step=math.radians(7.5),
            beamwidth_3db=math.radians(7.5),
            peak_gain_db=0.0,
            sidelobe_floor_db=-20.0,
        )
    )
    rng = np.random.default_rng(31)
    for _ in range(100):
        az = float(rng.uniform(math.radians(-58), math.radians(58)))
        ue = (3.0 * math.cos(az), 3.0 * math.sin(az))
        scene = Scene(gnb_pos=(0.0, 0.0), ue_pos=ue, carrier_freq=FREQ)
        burst = [SsbTransmission(ssb_index=i, beam_id=i, start_time=0.0) for i in range(16)]
        out = measure_burst(scene, cb, burst, rx_beam=16)
        best = max(out, key=lambda m: m[2])
        offsets = [abs(cb.beam(i).boresight_az - azimuth((0.0, 0.0), ue)) for i in range(16)]
        assert offsets[best[1]] == pytest.approx(min(offsets), abs=1e-12)


def test_measure_burst_all_blocked_reports_blocked_los():
    cb = omni_codebook()
    scene = three_meter_scene(obstacles=[Obstacle("p", (1.5, 0.0), 0.25)])
    burst = [SsbTransmission(ssb_index=0, beam_id=1, start_time=0.0)]
    out = measure_burst(scene, cb, burst, rx_beam=1)
    assert out[0][2] == pytest.approx(-66.0, abs=1e-9)
