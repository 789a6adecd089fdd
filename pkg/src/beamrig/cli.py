"""Command-line entry point.

Subcommands: run a scenario to trace + summary files, verify the sweep
register behavior, print the calibrated transmit constant, or serve an
interactive scenario over the WebSocket bridge.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional

from .bridge import DEFAULT_BRIDGE_PORT, bridge_serve
from .bus import Broker
from .errors import BeamRigError
from .scenario import Scenario, resolve_scenario
from .sim import (
    JsonlRecorder,
    SimResult,
    calibrate_tx_constant,
    run,
    with_analog_beamforming,
    with_manager_enabled,
    with_seed,
)
from .transceiver import BF_TX_AWV_PTR

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _apply_overrides(scenario: Scenario, args: argparse.Namespace) -> Scenario:
    if getattr(args, "seed", None) is not None:
        scenario = with_seed(scenario, args.seed)
    if getattr(args, "no_manager", False):
        scenario = with_manager_enabled(scenario, False)
    return scenario


def _cmd_run(args: argparse.Namespace) -> int:
    scenario = _apply_overrides(resolve_scenario(args.scenario), args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    trace_path = out_dir / f"{scenario.name}_trace.jsonl"
    summary_path = out_dir / f"{scenario.name}_summary.json"

    result = run(scenario, recorder=JsonlRecorder(str(trace_path)))
    summary_path.write_text(json.dumps(result.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")

    print(f"scenario {scenario.name}: {result.ticks} ticks over {result.duration} s")
    print(f"  min RSRP  {result.min_rsrp_dbm:.2f} dBm")
    print(f"  mean RSRP {result.mean_rsrp_dbm:.2f} dBm")
    print(f"  switches  {result.switch_count}")
    print(f"  blocked   {result.blocked_ticks} ticks")
    print(f"trace   -> {trace_path}")
    print(f"summary -> {summary_path}")
    return EXIT_OK


def _tx_pointer_writes(result: SimResult) -> list[int]:
    assert result.transceiver is not None
    return [txn.value for txn in result.transceiver.log if txn.register == BF_TX_AWV_PTR]


def _burst_rsrps(result: SimResult) -> list[list[float]]:
    assert result.records is not None
    return [[m["rsrp_dbm"] for m in rec.burst] for rec in result.records if rec.burst is not None]


def verify_sweep_checks(scenario: Scenario) -> list[tuple[str, bool]]:
    """Register- and measurement-level sweep invariants; (name, ok) pairs."""
    checks: list[tuple[str, bool]] = []
    weights = scenario.ssb_config.beam_weights
    enabled = scenario.ssb_config.bitmap.enabled_indices
    expected_sweep = [weights[i] for i in enabled]
    fixed_beam = scenario.ssb_config.fixed_beam

    sweep = run(with_analog_beamforming(scenario, True), keep_records=True)
    writes = _tx_pointer_writes(sweep)
    per_burst = len(expected_sweep)
    checks.append(
        (
            "sweep: tx pointer writes follow beam_weights in SSB order each burst",
            len(writes) % per_burst == 0
            and len(writes) > 0
            and all(
                writes[i : i + per_burst] == expected_sweep for i in range(0, len(writes), per_burst)
            ),
        )
    )
    sweep_rsrps = _burst_rsrps(sweep)
    checks.append(
        (
            "sweep: one strict per-burst RSRP maximum",
            all(sorted(b)[-1] > sorted(b)[-2] for b in sweep_rsrps),
        )
    )

    fixed = run(with_analog_beamforming(scenario, False), keep_records=True)
    fixed_writes = _tx_pointer_writes(fixed)
    checks.append(
        (
            f"fixed: tx pointer writes all equal {fixed_beam}",
            len(fixed_writes) > 0 and all(v == fixed_beam for v in fixed_writes),
        )
    )
    fixed_rsrps = _burst_rsrps(fixed)
    checks.append(
        (
            "fixed: per-burst RSRP spread below 0.01 dB",
            all(max(b) - min(b) < 0.01 for b in fixed_rsrps),
        )
    )
    return checks


def _cmd_verify_sweep(args: argparse.Namespace) -> int:
    scenario = resolve_scenario(args.scenario)
    if getattr(args, "seed", None) is not None:
        scenario = with_seed(scenario, args.seed)
    failures = 0
    for name, ok in verify_sweep_checks(scenario):
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
        if not ok:
            failures += 1
    return EXIT_OK if failures == 0 else EXIT_FAIL


def _cmd_calibrate(args: argparse.Namespace) -> int:
    value = calibrate_tx_constant(args.rsrp, args.dist, args.freq)
    print(f"{value:.4f}")
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    scenario = _apply_overrides(resolve_scenario(args.scenario), args)
    from dataclasses import replace

    scenario = replace(scenario, interactive=True)
    broker = Broker()
    bridge = bridge_serve(broker, port=args.port)
    print(f"bridge on ws://127.0.0.1:{bridge.port}, scenario {scenario.name}, ctrl-c to stop")
    try:
        run(scenario, broker=broker, pace=True)
    except KeyboardInterrupt:
        print("interrupted")
    finally:
        bridge.stop()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="beamrig", description="Beam-management scenario runner")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a scenario, writing trace and summary files")
    p_run.add_argument("scenario", help="scenario file path or bundled scenario name")
    p_run.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    p_run.add_argument("--out", default=".", help="output directory (default: current)")
    p_run.add_argument("--no-manager", action="store_true", help="disable the beam manager (fixed-beam baseline)")
    p_run.set_defaults(func=_cmd_run)

    p_verify = sub.add_parser("verify-sweep", help="check sweep/fixed register and RSRP invariants")
    p_verify.add_argument("scenario", nargs="?", default="verify_sweep", help="scenario to verify")
    p_verify.add_argument("--seed", type=int, default=None)
    p_verify.set_defaults(func=_cmd_verify_sweep)

    p_cal = sub.add_parser("calibrate", help="print the tx constant for a target RSRP")
    p_cal.add_argument("--rsrp", type=float, required=True, help="target RSRP in dBm")
    p_cal.add_argument("--dist", type=float, required=True, help="link distance in meters")
    p_cal.add_argument("--freq", type=float, required=True, help="carrier frequency in Hz")
    p_cal.set_defaults(func=_cmd_calibrate)

    p_serve = sub.add_parser("serve", help="run an interactive scenario with the WebSocket bridge")
    p_serve.add_argument("scenario", nargs="?", default="demo_berlin", help="scenario to serve")
    p_serve.add_argument("--seed", type=int, default=None)
    p_serve.add_argument("--port", type=int, default=DEFAULT_BRIDGE_PORT, help="bridge port")
    p_serve.add_argument("--no-manager", action="store_true")
    p_serve.set_defaults(func=_cmd_serve)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; normalize other codes
        return EXIT_USAGE if exc.code not in (0,) else EXIT_OK
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BeamRigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
