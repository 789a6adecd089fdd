"""Register-level phased-array transceiver emulation.

Beam switching is modeled as SPI write transactions against two named
beam-pointer registers; TX/RX switching as a mode register with a guard-time
check. Every transaction is appended to a time-ordered log so conformance
tests can replay the full register history.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .codebook import BeamCodebook
from .errors import CodebookError, ConfigurationError, OrderingError, RegisterError

BF_TX_AWV_PTR = "bf_tx_awv_ptr"
BF_RX_AWV_PTR = "bf_rx_awv_ptr"

# Symbolic register names mapped to addresses for trace export only; the
# emulator itself always addresses registers by name.
DEFAULT_REGISTER_ADDRESSES = {
    BF_TX_AWV_PTR: 0x00,
    BF_RX_AWV_PTR: 0x01,
}

DEFAULT_GUARD_TIME = 1e-6


class TrxMode(Enum):
    TX = "TX"
    RX = "RX"
    IDLE = "IDLE"


@dataclass(frozen=True)
class PinMap:
    """GPIO assignment: five signal pins plus ground pins."""

    spi_clk: int
    spi_mosi: int
    spi_miso: int
    spi_cs_n: int
    tx_rx_sw: int
    grounds: tuple[int, ...] = (5, 6)

    def __post_init__(self):
        signals = (self.spi_clk, self.spi_mosi, self.spi_miso, self.spi_cs_n, self.tx_rx_sw)
        if len(set(signals)) != len(signals):
            raise ConfigurationError(f"signal pins must be pairwise distinct, got {signals}")


DEFAULT_PIN_MAP = PinMap(spi_clk=0, spi_mosi=1, spi_miso=2, spi_cs_n=3, tx_rx_sw=4)


@dataclass(frozen=True)
class SpiTransaction:
    time: float
    register: str
    value: int
    chip_select: int

    def __post_init__(self):
        if self.time < 0.0:
            raise ConfigurationError(f"transaction time must be non-negative, got {self.time}")


@dataclass(frozen=True)
class ModeChangeEvent:
    time: float
    mode: TrxMode
    pin: int
    timing_violation: bool


@dataclass
class TransceiverState:
    """Single-owner mutable register file; mutations go through the ops below."""

    registers: dict[str, int]
    trx_mode: TrxMode
    pin_map: PinMap
    spi_clock_divider: int
    log: list[SpiTransaction] = field(default_factory=list)
    mode_log: list[ModeChangeEvent] = field(default_factory=list)
    guard_time: float = DEFAULT_GUARD_TIME
    codebook: Optional[BeamCodebook] = None
    register_addresses: dict[str, int] = field(default_factory=lambda: dict(DEFAULT_REGISTER_ADDRESSES))

    def read(self, register: str) -> int:
        if register not in self.registers:
            raise RegisterError(f"unknown register {register!r}")
        return self.registers[register]

    @property
    def last_log_time(self) -> float:
        return self.log[-1].time if self.log else 0.0


def init_transceiver(
    pin_map: PinMap,
    spi_clock_divider: int,
    initial_beam: int,
    codebook: Optional[BeamCodebook] = None,
    guard_time: float = DEFAULT_GUARD_TIME,
) -> TransceiverState:
    """Fresh transceiver: both beam pointers at `initial_beam`, IDLE, empty log."""
    if spi_clock_divider < 1:
        raise ConfigurationError(f"spi_clock_divider must be >= 1, got {spi_clock_divider}")
    if codebook is not None and not codebook.has_beam(initial_beam):
        raise CodebookError(f"initial beam {initial_beam} not in codebook")
    return TransceiverState(
        registers={BF_TX_AWV_PTR: initial_beam, BF_RX_AWV_PTR: initial_beam},
        trx_mode=TrxMode.IDLE,
        pin_map=pin_map,
        spi_clock_divider=spi_clock_divider,
        guard_time=guard_time,
        codebook=codebook,
    )


def spi_write(state: TransceiverState, time: float, register: str, value: int) -> TransceiverState:
    """Write a register and append one transaction to the log."""
    if register not in state.registers:
        raise RegisterError(f"unknown register {register!r}")
    if state.log and time < state.log[-1].time:
        raise OrderingError(
            f"write at t={time} regresses behind log tail t={state.log[-1].time}"
        )
    state.registers[register] = value
    state.log.append(
        SpiTransaction(time=time, register=register, value=value, chip_select=state.pin_map.spi_cs_n)
    )
    return state


def set_beam(state: TransceiverState, time: float, direction: TrxMode, beam_id: int) -> TransceiverState:
    """Point the TX or RX beam via exactly one beam-pointer write.

    Writes are unconditional: re-selecting the current beam still logs one
    transaction.
    """
    if direction not in (TrxMode.TX, TrxMode.RX):
        raise ConfigurationError(f"set_beam direction must be TX or RX, got {direction}")
    if state.codebook is not None and not state.codebook.has_beam(beam_id):
        raise CodebookError(f"beam id {beam_id} not in attached codebook")
    register = BF_TX_AWV_PTR if direction is TrxMode.TX else BF_RX_AWV_PTR
    return spi_write(state, time, register, beam_id)


def set_trx_mode(state: TransceiverState, time: float, mode: TrxMode) -> TransceiverState:
    """Switch TX/RX/IDLE; flags the event when it violates the guard time."""
    if state.mode_log and time < state.mode_log[-1].time:
        raise OrderingError(
            f"mode change at t={time} regresses behind previous at t={state.mode_log[-1].time}"
        )
    violation = bool(state.mode_log) and (time - state.mode_log[-1].time) < state.guard_time
    state.trx_mode = mode
    state.mode_log.append(
        ModeChangeEvent(time=time, mode=mode, pin=state.pin_map.tx_rx_sw, timing_violation=violation)
    )
    return state


def replay_log(
    log: list[SpiTransaction],
    pin_map: PinMap,
    spi_clock_divider: int,
    initial_beam: int,
    codebook: Optional[BeamCodebook] = None,
) -> TransceiverState:
    """Fold a transaction log over a fresh init: event-sourcing equivalence check."""
    fresh = init_transceiver(pin_map, spi_clock_divider, initial_beam, codebook=codebook)
    for txn in log:
        spi_write(fresh, txn.time, txn.register, txn.value)
    return fresh


def export_log_jsonl(state: TransceiverState) -> str:
    """Transaction log as JSON-lines: one {time, register, value, chip_select} per line."""
    lines = []
    for txn in state.log:
        lines.append(
            json.dumps(
                {
                    "time": txn.time,
                    "register": txn.register,
                    "value": txn.value,
                    "chip_select": txn.chip_select,
                },
                sort_keys=True,
            )
        )
    return "\n".join(lines) + ("\n" if lines else "")
