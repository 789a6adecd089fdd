"""In-process publish/subscribe broker.

Topics are slash-delimited strings; subscriptions match either an exact
topic or a trailing wildcard ("sensing/*", or "*" for everything). There
are no retained messages and no QoS tiers: a publish is delivered exactly
once to every live matching subscription, in publish order.
"""

from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

from .errors import TopicError

TOPIC_SENSING_DETECTIONS = "sensing/detections"
TOPIC_BM_DECISION = "bm/decision"
TOPIC_RAN_RSRP = "ran/rsrp"
TOPIC_RAN_SSB = "ran/ssb"
TOPIC_UI_OBSTACLE_CMD = "ui/obstacle_cmd"
TOPIC_UI_SCENE = "ui/scene"

MATCH_ALL = "*"


@dataclass(frozen=True)
class BusMessage:
    topic: str
    timestamp_ms: int
    payload: Any


def validate_topic(topic: str) -> None:
    if not isinstance(topic, str) or not topic:
        raise TopicError(f"topic must be a non-empty string, got {topic!r}")
    if any(c.isspace() for c in topic):
        raise TopicError(f"topic must not contain whitespace: {topic!r}")
    if "*" in topic:
        raise TopicError(f"topic must not contain wildcards: {topic!r}")


def validate_pattern(pattern: str) -> None:
    if pattern == MATCH_ALL:
        return
    if isinstance(pattern, str) and pattern.endswith("/*"):
        validate_topic(pattern[:-2])
        return
    validate_topic(pattern)


def topic_matches(pattern: str, topic: str) -> bool:
    if pattern == MATCH_ALL:
        return True
    if pattern.endswith("/*"):
        return topic.startswith(pattern[:-1])
    return topic == pattern


@dataclass
class Subscription:
    """Queue of delivered messages, optionally tapped by a callback."""

    pattern: str
    queue: deque = field(default_factory=deque)
    callback: Optional[Callable[[BusMessage], None]] = None

    def pop(self) -> Optional[BusMessage]:
        """Oldest undelivered message, or None."""
        try:
            return self.queue.popleft()
        except IndexError:
            return None

    def drain(self) -> list[BusMessage]:
        """All queued messages, in delivery order."""
        messages = []
        while True:
            msg = self.pop()
            if msg is None:
                return messages
            messages.append(msg)

    def __len__(self) -> int:
        return len(self.queue)


class Broker:
    """Thread-safe fan-out hub.

    Publishes are serialized under one reentrant lock, which both preserves
    per-topic FIFO order across concurrent publishers and keeps delivery
    callbacks from running concurrently. Callbacks may themselves publish.
    """

    def __init__(self):
        self._lock = threading.RLock()
        self._subscriptions: list[Subscription] = []

    def subscribe(
        self,
        pattern: str,
        callback: Optional[Callable[[BusMessage], None]] = None,
    ) -> Subscription:
        """Register a pattern; only later publishes are delivered."""
        validate_pattern(pattern)
        sub = Subscription(pattern=pattern, callback=callback)
        with self._lock:
            self._subscriptions.append(sub)
        return sub

    def unsubscribe(self, sub: Subscription) -> None:
        with self._lock:
            try:
                self._subscriptions.remove(sub)
            except ValueError:
                pass

    def publish(self, msg: BusMessage) -> None:
        validate_topic(msg.topic)
        with self._lock:
            for sub in list(self._subscriptions):
                if topic_matches(sub.pattern, msg.topic):
                    sub.queue.append(msg)
                    if sub.callback is not None:
                        sub.callback(msg)

    def publish_json(self, topic: str, timestamp_ms: int, payload: Any) -> None:
        self.publish(BusMessage(topic=topic, timestamp_ms=timestamp_ms, payload=payload))
