"""Relativistic coin toss and biased die roll.

Both parties have one agent at each of two sites.  At ``t0`` each party
hands a random value to the other party's agent at one site; each value
must arrive before ``t0 + D`` (``D`` the site separation), which makes
the two emissions causally independent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import _rng
from ..cointoss import CoinOutcome, TossReport
from ..qmath import FiniteDistribution
from .spacetime import EventLoop, SiteLayout

ABORT = "abort"


@dataclass(frozen=True)
class RelStrategy:
    """Behaviour of one party in the relativistic coin toss or die roll.

    kind:
      ``honest``   uniformly random value, sent on time;
      ``fixed``    always sends ``value``;
      ``delayed``  waits until the other party's value reaches it, then
                   answers so the outcome equals ``value``;
      ``miscomposed`` (die roll, Alice) sends the string ``value``.
    """

    kind: str = "honest"
    value: object = None

    def __post_init__(self):
        if self.kind not in ("honest", "fixed", "delayed", "miscomposed"):
            raise ValueError(f"unknown strategy {self.kind!r}")

    @property
    def is_honest(self) -> bool:
        return self.kind == "honest"


def _agents(layout: SiteLayout) -> dict:
    if len(layout) != 2:
        raise ValueError("this protocol uses exactly two sites")
    x1, x2 = layout.positions
    return {"A1": x1, "B1": x1, "A2": x2, "B2": x2}


def _exchange_once(alice_value, bob_value, alice: RelStrategy, bob: RelStrategy,
                   layout: SiteLayout, combine, record: bool, t0: float = 0.0):
    """Core schedule shared by the coin toss and die roll.

    ``alice_value`` goes A1 -> B1, ``bob_value`` goes B2 -> A2.  Delayed
    strategies relay the other party's value to their second agent first.
    Returns ``(result, loop)`` where ``result`` is ``ABORT`` or the value
    agreed by both parties.
    """
    loop = EventLoop(_agents(layout), record=record)
    D = abs(layout.positions[1] - layout.positions[0])
    deadline = t0 + D
    got = {}

    def a1(lp, ev):
        if ev.kind == "relay_bob_value":  # Alice cheating: answer now
            lp.send("A1", "B1", alice.value(ev.payload), lp.now, "alice_value")

    def b1(lp, ev):
        if ev.kind == "alice_value":
            got["B1"] = ev
            if bob.kind == "delayed":
                lp.send("B1", "B2", ev.payload, lp.now, "relay_alice_value")

    def b2(lp, ev):
        if ev.kind == "relay_alice_value":
            lp.send("B2", "A2", bob.value(ev.payload), lp.now, "bob_value")

    def a2(lp, ev):
        if ev.kind == "bob_value":
            got["A2"] = ev
            if alice.kind == "delayed":
                lp.send("A2", "A1", ev.payload, lp.now, "relay_bob_value")

    for name, h in (("A1", a1), ("B1", b1), ("A2", a2), ("B2", b2)):
        loop.on(name, h)
    if alice.kind != "delayed":
        loop.send("A1", "B1", alice_value, t0, "alice_value")
    if bob.kind != "delayed":
        loop.send("B2", "A2", bob_value, t0, "bob_value")
    loop.run()

    on_time = {k: ev.time < deadline for k, ev in got.items()}
    if not (on_time.get("A2") and on_time.get("B1")):
        return ABORT, loop
    # after the deadline each party pools its data over its own channel
    loop.send("A2", "A1", got["A2"].payload, deadline, "pool")
    loop.send("B1", "B2", got["B1"].payload, deadline, "pool")
    loop.run()
    return combine(got["B1"].payload, got["A2"].payload), loop


def rel_coin_toss_once(alice: RelStrategy, bob: RelStrategy, layout: SiteLayout,
                       rng: np.random.Generator, record: bool = False):
    """One run; returns ``(CoinOutcome, loop)``."""
    b = int(rng.integers(2)) if alice.kind == "honest" else alice.value
    bp = int(rng.integers(2)) if bob.kind == "honest" else bob.value
    alice_eff, bob_eff = alice, bob
    if alice.kind == "delayed":
        want = alice.value
        alice_eff = RelStrategy("delayed", lambda other: other ^ want)
    if bob.kind == "delayed":
        want_b = bob.value
        bob_eff = RelStrategy("delayed", lambda other: other ^ want_b)
    res, loop = _exchange_once(b, bp, alice_eff, bob_eff, layout,
                               lambda x, y: x ^ y, record)
    if res == ABORT:
        return CoinOutcome.ABORT, loop
    return CoinOutcome(res), loop


def run_rel_coin_toss(alice: RelStrategy, bob: RelStrategy, layout: SiteLayout,
                      trials: int = 1, seed: int = 0) -> TossReport:
    """Outcome frequencies of the relativistic coin toss over ``trials`` runs."""
    if not alice.is_honest and not bob.is_honest:
        raise ValueError("no requirement is made when both parties cheat")
    for s in (alice, bob):
        if s.kind == "miscomposed":
            raise ValueError("miscomposed strings apply to the die roll only")

    def draw(rng, n):
        counts = np.zeros(3, dtype=np.int64)
        for _ in range(n):
            out, _ = rel_coin_toss_once(alice, bob, layout, rng)
            counts[int(out)] += 1
        return counts

    counts = _rng.chunked(trials, seed, (2,), draw)
    f = counts / trials
    cheat = not (alice.is_honest and bob.is_honest)
    return TossReport(f[0], f[1], f[2], f[2] if cheat else 0.0, trials)


# ---------------------------------------------------------------------------
# biased die


def die_composition(p, N: int, rounding: bool = False) -> np.ndarray:
    """Number of entries of each face in a string of length ``N``."""
    probs = p.probs if isinstance(p, FiniteDistribution) else np.asarray(p, float)
    exact = probs * N
    counts = np.rint(exact).astype(int)
    if np.all(np.abs(exact - counts) < 1e-9):
        return counts
    if not rounding:
        raise ValueError("N * p_i must be integral; pass rounding=True to round")
    counts = np.floor(exact).astype(int)
    short = N - counts.sum()
    order = np.argsort(-(exact - counts), kind="stable")
    counts[order[:short]] += 1
    return counts


def die_roll_once(p, N: int, alice: RelStrategy, bob: RelStrategy, layout: SiteLayout,
                  rng: np.random.Generator, rounding: bool = False, record: bool = False):
    """One die roll; returns ``(face or "abort", loop)``."""
    counts = die_composition(p, N, rounding)
    if alice.kind == "miscomposed":
        X = tuple(int(v) for v in alice.value)
    elif alice.kind == "honest":
        X = tuple(int(v) for v in rng.permutation(np.repeat(np.arange(counts.size), counts)))
    else:
        raise ValueError("Alice's die-roll strategy must be honest or miscomposed")
    if bob.kind == "honest":
        j = int(rng.integers(N))
        bob_eff = bob
    elif bob.kind == "fixed":
        j = int(bob.value)
        bob_eff = bob
    else:
        face = int(bob.value)

        def choose(x, face=face):
            hits = [k for k, v in enumerate(x) if v == face]
            return hits[0] if hits else 0

        j = None
        bob_eff = RelStrategy("delayed", choose)

    def combine(x, jj):
        # Bob's composition check on the received string
        if len(x) != N or any(v < 0 or v >= counts.size for v in x):
            return ABORT
        if not np.array_equal(np.bincount(x, minlength=counts.size), counts):
            return ABORT
        return x[jj]

    res, loop = _exchange_once(X, j, alice, bob_eff, layout, combine, record)
    return res, loop


def run_die_roll(p, N: int, alice: RelStrategy, bob: RelStrategy, layout: SiteLayout,
                 seed: int = 0, rounding: bool = False):
    """Single die roll; returns the face (int) or ``"abort"``."""
    res, _ = die_roll_once(p, N, alice, bob, layout, _rng.substream(seed, 3), rounding)
    return res


def die_roll_frequencies(p, N: int, alice: RelStrategy, bob: RelStrategy, layout: SiteLayout,
                         trials: int, seed: int = 0, rounding: bool = False) -> dict:
    """Face and abort frequencies over ``trials`` runs."""
    n_faces = len(p.probs if isinstance(p, FiniteDistribution) else p)

    def draw(rng, n):
        counts = np.zeros(n_faces + 1, dtype=np.int64)
        for _ in range(n):
            res, _ = die_roll_once(p, N, alice, bob, layout, rng, rounding)
            counts[n_faces if res == ABORT else res] += 1
        return counts

    counts = _rng.chunked(trials, seed, (4,), draw)
    return {"faces": counts[:n_faces] / trials, "p_abort": counts[n_faces] / trials,
            "trials": trials}
