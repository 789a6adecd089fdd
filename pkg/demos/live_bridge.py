"""
Live scenario behind the WebSocket bridge
=========================================

Runs the bundled desk-scale scenario in interactive mode, paced to wall
clock, with every bus topic exposed over a WebSocket on port 8787. Point
the browser UI (or any WebSocket client) at it, subscribe to topics, and
push obstacle commands to drag the pedestrian around while the beam
manager reacts. Ctrl+C stops the run.
"""

import json
import logging
import sys
import threading
from dataclasses import replace

from beamrig import Broker, bridge_serve, load_bundled_scenario, run

logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")

port = int(sys.argv[1]) if len(sys.argv) > 1 else 8787

# 1. One broker carries all traffic; the bridge mirrors it over WebSocket.
broker = Broker()
bridge = bridge_serve(broker, port=port)
print(f"bridge listening on ws://127.0.0.1:{bridge.port}")

# 2. Interactive mode makes the run listen on ui/obstacle_cmd; a long
#    duration keeps it alive until interrupted.
scenario = replace(load_bundled_scenario("demo_berlin"), interactive=True, duration=3600.0)

print("topics: sensing/detections  ran/ssb  ran/rsrp  bm/decision  ui/scene")
print("subscribe:  " + json.dumps({"subscribe": ["ui/scene", "bm/decision", "ran/rsrp"]}))
print("move ped1:  " + json.dumps({"topic": "ui/obstacle_cmd", "payload": {"id": "ped1", "x": 1.5, "y": 0.9}}))
print("running, Ctrl+C to stop")

# 3. Pace the tick loop to real time so clients see a live feed.
stop = threading.Event()
try:
    result = run(scenario, broker=broker, pace=True, stop=stop)
except KeyboardInterrupt:
    stop.set()
    result = None
finally:
    bridge.stop()

if result is not None:
    print(f"done: {result.ticks} ticks, min rsrp {result.min_rsrp_dbm:.2f} dBm, {result.switch_count} switches")
