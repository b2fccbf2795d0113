"""Events, light-speed messages and a deterministic event loop.

Space is a line, ``c = 1``.  Agents sit at fixed positions; agents of
different parties may share a position (adjacent laboratories).  Every
message is a :class:`TimedMessage` whose construction fails if it would
travel faster than light.  The loop delivers messages in
``(time, site, sequence)`` order and records a trace.
"""

from __future__ import annotations

import hashlib
import heapq
import json
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

LIGHT_TOL = 1e-12


class CausalityViolation(RuntimeError):
    """A message or schedule would need faster-than-light signalling."""


@dataclass(frozen=True)
class SpacetimeEvent:
    site_position: float
    time: float

    def __post_init__(self):
        if not (math.isfinite(self.site_position) and math.isfinite(self.time)):
            raise ValueError("spacetime coordinates must be finite")


def verify_independence(a: SpacetimeEvent, b: SpacetimeEvent) -> bool:
    """True iff the two events are strictly spacelike separated.

    Lightlike pairs count as dependent.
    """
    return abs(a.site_position - b.site_position) > abs(a.time - b.time)


@dataclass(frozen=True)
class TimedMessage:
    sender: str
    receiver: str
    payload: Any
    emitted: SpacetimeEvent
    received: SpacetimeEvent
    kind: str = "msg"

    def __post_init__(self):
        dx = abs(self.received.site_position - self.emitted.site_position)
        dt = self.received.time - self.emitted.time
        if dx > dt + LIGHT_TOL:
            raise CausalityViolation(
                f"{self.sender}->{self.receiver} covers {dx} in time {dt}")


@dataclass(frozen=True)
class SiteLayout:
    """Site positions on the line; distinct sites are at least ``separation`` apart."""

    positions: tuple
    separation: float

    def __post_init__(self):
        pos = tuple(float(p) for p in self.positions)
        if self.separation <= 0:
            raise ValueError("separation must be positive")
        for i in range(len(pos)):
            for j in range(i + 1, len(pos)):
                if abs(pos[i] - pos[j]) < self.separation - LIGHT_TOL:
                    raise ValueError("sites closer than the declared separation")
        object.__setattr__(self, "positions", pos)

    @classmethod
    def line(cls, n_sites: int, separation: float = 1.0) -> "SiteLayout":
        return cls(tuple(k * separation for k in range(n_sites)), separation)

    def __len__(self) -> int:
        return len(self.positions)


@dataclass(frozen=True)
class QubitHandle:
    """Reference to a register held in the simulator's handle table."""

    key: str


def payload_digest(payload: Any) -> str:
    """Short stable digest of a payload for trace logs."""
    h = hashlib.sha256()
    if isinstance(payload, np.ndarray):
        h.update(str(payload.dtype).encode())
        h.update(payload.tobytes())
    elif isinstance(payload, (bytes, bytearray)):
        h.update(bytes(payload))
    else:
        h.update(repr(payload).encode())
    return h.hexdigest()[:16]


@dataclass(order=True)
class _Pending:
    time: float
    site: float
    seq: int
    agent: str = field(compare=False)
    kind: str = field(compare=False)
    payload: Any = field(compare=False)
    message: TimedMessage | None = field(compare=False, default=None)


@dataclass
class Delivery:
    """What a handler receives: a delivered message or a local timer."""

    time: float
    agent: str
    kind: str
    payload: Any
    message: TimedMessage | None


class EventLoop:
    """Single-threaded event loop over agents at fixed positions.

    Parameters
    ----------
    positions : dict
        Agent id to position on the line.
    record : bool
        Keep a trace of every delivered item.
    """

    def __init__(self, positions: dict, record: bool = True):
        self.positions = {k: float(v) for k, v in positions.items()}
        self._queue: list[_Pending] = []
        self._seq = 0
        self._handlers: dict[str, Callable[["EventLoop", Delivery], None]] = {}
        self.record = record
        self.trace: list[dict] = []
        self.messages: list[TimedMessage] = []
        self.now = -math.inf

    def on(self, agent: str, handler: Callable[["EventLoop", Delivery], None]) -> None:
        self._handlers[agent] = handler

    def event(self, agent: str, time: float) -> SpacetimeEvent:
        return SpacetimeEvent(self.positions[agent], time)

    def _push(self, item: _Pending):
        if item.time < self.now - LIGHT_TOL:
            raise CausalityViolation("cannot schedule into the past")
        heapq.heappush(self._queue, item)

    def send(self, sender: str, receiver: str, payload: Any, at: float,
             kind: str = "msg", delay: float = 0.0) -> TimedMessage:
        """Emit at ``at``; arrival at light speed plus ``delay``."""
        if delay < 0:
            raise CausalityViolation("negative extra delay")
        src = self.positions[sender]
        dst = self.positions[receiver]
        msg = TimedMessage(sender, receiver, payload, SpacetimeEvent(src, at),
                           SpacetimeEvent(dst, at + abs(dst - src) + delay), kind)
        self.messages.append(msg)
        self._seq += 1
        self._push(_Pending(msg.received.time, dst, self._seq, receiver, kind, payload, msg))
        return msg

    def timer(self, agent: str, at: float, kind: str, payload: Any = None) -> None:
        """Local action of ``agent`` at time ``at``."""
        self._seq += 1
        self._push(_Pending(at, self.positions[agent], self._seq, agent, kind, payload))

    def run(self, until: float = math.inf) -> None:
        while self._queue and self._queue[0].time <= until:
            item = heapq.heappop(self._queue)
            self.now = item.time
            if self.record:
                self.trace.append({"t": item.time, "site": item.site, "agent": item.agent,
                                   "kind": item.kind, "payload-digest": payload_digest(item.payload)})
            handler = self._handlers.get(item.agent)
            if handler is not None:
                handler(self, Delivery(item.time, item.agent, item.kind, item.payload, item.message))

    def trace_json(self) -> str:
        return json.dumps(self.trace, sort_keys=True)


def check_light_speed(messages: Sequence[TimedMessage]) -> bool:
    """Re-check the light-speed invariant over a finished run."""
    for m in messages:
        dx = abs(m.received.site_position - m.emitted.site_position)
        if dx > m.received.time - m.emitted.time + LIGHT_TOL:
            return False
    return True
