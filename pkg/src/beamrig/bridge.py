"""WebSocket bridge between the broker and external clients.

Every bus message a client has subscribed to is forwarded as one JSON text
frame {topic, timestamp_ms, payload}; inbound frames of the same shape are
published onto the broker. Clients pick topics with a control frame
{"subscribe": ["pattern", ...]}; until then they receive nothing.
"""

from __future__ import annotations

import asyncio
import contextlib
import json
import logging
import threading
import time
from typing import Optional

from websockets.asyncio.server import serve

from .bus import Broker, BusMessage, topic_matches, validate_pattern, validate_topic
from .errors import TopicError

logger = logging.getLogger(__name__)

DEFAULT_BRIDGE_HOST = "127.0.0.1"
DEFAULT_BRIDGE_PORT = 8787


def encode_frame(msg: BusMessage) -> str:
    return json.dumps(
        {"topic": msg.topic, "timestamp_ms": msg.timestamp_ms, "payload": msg.payload},
        sort_keys=True,
    )


def decode_frame(raw) -> Optional[dict]:
    """Parse one inbound text frame; None when malformed."""
    try:
        obj = json.loads(raw)
    except (json.JSONDecodeError, TypeError, ValueError):
        return None
    return obj if isinstance(obj, dict) else None


class BridgeServer:
    """Asyncio WebSocket server bound to one broker.

    Each client holds a broker subscription on everything and filters
    against its own pattern list at send time, so pattern changes take
    effect immediately without resubscribing.
    """

    def __init__(
        self,
        broker: Broker,
        host: str = DEFAULT_BRIDGE_HOST,
        port: int = DEFAULT_BRIDGE_PORT,
    ):
        self.broker = broker
        self.host = host
        self.port = port
        self._server = None

    async def start(self) -> None:
        """Bind and listen; port 0 picks a free port (reread self.port)."""
        self._server = await serve(self._handle_client, self.host, self.port)
        sock = next(iter(self._server.sockets))
        self.port = sock.getsockname()[1]
        logger.info("bridge listening on ws://%s:%d", self.host, self.port)

    async def stop(self) -> None:
        if self._server is not None:
            self._server.close()
            await self._server.wait_closed()
            self._server = None

    async def _handle_client(self, websocket) -> None:
        patterns: list[str] = []
        outbound: asyncio.Queue = asyncio.Queue()
        loop = asyncio.get_running_loop()

        def deliver(msg: BusMessage) -> None:
            # Broker callbacks may fire from the sim thread.
            loop.call_soon_threadsafe(outbound.put_nowait, msg)

        sub = self.broker.subscribe("*", callback=deliver)
        sender = asyncio.create_task(self._send_loop(websocket, outbound, patterns))
        try:
            async for raw in websocket:
                self._handle_frame(raw, patterns)
        finally:
            self.broker.unsubscribe(sub)
            sender.cancel()
            with contextlib.suppress(asyncio.CancelledError):
                await sender

    async def _send_loop(self, websocket, outbound: asyncio.Queue, patterns: list[str]) -> None:
        while True:
            msg = await outbound.get()
            if any(topic_matches(p, msg.topic) for p in patterns):
                await websocket.send(encode_frame(msg))

    def _handle_frame(self, raw, patterns: list[str]) -> None:
        frame = decode_frame(raw)
        if frame is None:
            logger.warning("dropping malformed frame")
            return

        if "subscribe" in frame:
            requested = frame["subscribe"]
            if not isinstance(requested, list):
                logger.warning("dropping subscribe frame with non-list patterns")
                return
            try:
                for pattern in requested:
                    validate_pattern(pattern)
            except TopicError as exc:
                logger.warning("dropping subscribe frame: %s", exc)
                return
            patterns[:] = requested
            return

        if "topic" not in frame or "payload" not in frame:
            logger.warning("dropping frame without topic/payload")
            return
        try:
            validate_topic(frame["topic"])
        except TopicError as exc:
            logger.warning("dropping frame: %s", exc)
            return
        timestamp_ms = frame.get("timestamp_ms")
        if not isinstance(timestamp_ms, int) or isinstance(timestamp_ms, bool):
            timestamp_ms = int(time.time() * 1000)
        self.broker.publish(
            BusMessage(topic=frame["topic"], timestamp_ms=timestamp_ms, payload=frame["payload"])
        )


class BridgeThread:
    """Runs a BridgeServer on a dedicated asyncio loop thread."""

    def __init__(
        self,
        broker: Broker,
        host: str = DEFAULT_BRIDGE_HOST,
        port: int = DEFAULT_BRIDGE_PORT,
    ):
        self.server = BridgeServer(broker, host=host, port=port)
        self._thread: Optional[threading.Thread] = None
        self._started = threading.Event()
        self._loop: Optional[asyncio.AbstractEventLoop] = None
        self._stop_event: Optional[asyncio.Event] = None
        self._startup_error: Optional[BaseException] = None

    def start(self, timeout: float = 5.0) -> "BridgeThread":
        self._thread = threading.Thread(target=self._run, name="ws-bridge", daemon=True)
        self._thread.start()
        if not self._started.wait(timeout):
            raise RuntimeError("bridge failed to start within timeout")
        if self._startup_error is not None:
            raise self._startup_error
        return self

    def _run(self) -> None:
        asyncio.run(self._main())

    async def _main(self) -> None:
        self._loop = asyncio.get_running_loop()
        self._stop_event = asyncio.Event()
        try:
            await self.server.start()
        except OSError as exc:
            self._startup_error = exc
            self._started.set()
            return
        self._started.set()
        await self._stop_event.wait()
        await self.server.stop()

    def stop(self) -> None:
        if self._loop is not None and self._stop_event is not None:
            self._loop.call_soon_threadsafe(self._stop_event.set)
        if self._thread is not None:
            self._thread.join(timeout=5.0)

    @property
    def port(self) -> int:
        return self.server.port


def bridge_serve(
    broker: Broker,
    port: int = DEFAULT_BRIDGE_PORT,
    host: str = DEFAULT_BRIDGE_HOST,
) -> BridgeThread:
    """Start the bridge on a background thread and return the running handle."""
    return BridgeThread(broker, host=host, port=port).start()
