"""Strong coin tossing without relativity.

Two protocols are simulated exactly on state vectors:

* ``ambainis``: Alice encodes a bit in one of four qutrit states and Bob
  answers with a classical bit; Bob verifies Alice's opening.
* ``colbeck``: Alice prepares two maximally entangled pairs, Bob chooses
  which pair decides the coin and tests the other one.

Each run is expanded into its leaves (every combination of the parties'
random choices and measurement results, with its probability).  Analytic
mode sums the leaves; sampled mode draws leaves with a seeded generator.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from . import _rng
from .discrim import Ensemble, helstrom
from .qmath import PovmSet, PureState, ket, projector

KITAEV_BIAS = 1.0 / math.sqrt(2.0) - 0.5


class CoinOutcome(enum.IntEnum):
    ZERO = 0
    ONE = 1
    ABORT = 2


class UnsupportedStrategy(ValueError):
    """The requested strategy combination has no construction here."""


@dataclass(frozen=True)
class PartyStrategy:
    """How one party behaves.

    Parameters
    ----------
    kind : {"honest", "cheat", "custom"}
    bit : int, optional
        Target outcome for ``cheat`` and ``custom``.
    state : array_like, optional
        Custom pure state (Colbeck Alice: 16 amplitudes, qubits ordered
        A1 B1 A2 B2).
    povm : sequence of arrays, optional
        Custom measurement (Ambainis Bob: two qutrit elements used to guess
        Alice's bit).
    """

    kind: str = "honest"
    bit: int | None = None
    state: object = None
    povm: object = None

    def __post_init__(self):
        if self.kind not in ("honest", "cheat", "custom"):
            raise ValueError(f"unknown strategy kind {self.kind!r}")
        if self.kind != "honest" and self.bit not in (0, 1):
            raise ValueError("cheating strategies need a target bit")
        if self.state is not None and not isinstance(self.state, PureState):
            object.__setattr__(self, "state", PureState(self.state))
        if self.povm is not None and not isinstance(self.povm, PovmSet):
            object.__setattr__(self, "povm", PovmSet(tuple(self.povm)))

    @classmethod
    def honest(cls) -> "PartyStrategy":
        return cls("honest")

    @classmethod
    def cheat_towards(cls, bit: int) -> "PartyStrategy":
        return cls("cheat", bit)

    @classmethod
    def custom(cls, bit: int, state=None, povm=None) -> "PartyStrategy":
        return cls("custom", bit, state, povm)

    @property
    def is_honest(self) -> bool:
        return self.kind == "honest"

    def label(self) -> str:
        return "honest" if self.is_honest else f"{self.kind}{self.bit}"


@dataclass(frozen=True)
class TossReport:
    """Outcome statistics of a coin-tossing run.

    ``detection_prob`` is the probability that the honest party catches
    the cheater (zero when nobody cheats).  ``trials`` is ``"analytic"``
    or the number of sampled runs.
    """

    p_zero: float
    p_one: float
    p_abort: float
    detection_prob: float
    trials: int | str = "analytic"
    extras: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        for name in ("p_zero", "p_one", "p_abort", "detection_prob"):
            v = float(getattr(self, name))
            object.__setattr__(self, name, v)
            if not -1e-12 <= v <= 1 + 1e-12:
                raise ValueError(f"{name}={v} outside [0, 1]")
        if self.trials == "analytic":
            total = self.p_zero + self.p_one + self.p_abort
            if abs(total - 1.0) > 1e-9:
                raise ValueError(f"probabilities sum to {total}")

    def p(self, outcome: int) -> float:
        return (self.p_zero, self.p_one, self.p_abort)[outcome]

    def sigma(self, outcome: int) -> float:
        """Binomial standard error of a sampled frequency (0 if analytic)."""
        if self.trials == "analytic":
            return 0.0
        p = self.p(outcome)
        return math.sqrt(max(p * (1 - p), 1e-300) / self.trials)

    def as_record(self) -> dict:
        return {"p_zero": self.p_zero, "p_one": self.p_one, "p_abort": self.p_abort,
                "detection_prob": self.detection_prob, "trials": self.trials}


@dataclass(frozen=True)
class Leaf:
    """One complete run: its probability, its outcome and the choices that led to it."""

    prob: float
    outcome: CoinOutcome
    path: tuple = ()


def _report(leaves: Sequence[Leaf], cheater_present: bool, mode) -> TossReport:
    probs = np.array([leaf.prob for leaf in leaves])
    outcomes = np.array([int(leaf.outcome) for leaf in leaves])
    if mode is None or mode == "analytic":
        totals = np.array([probs[outcomes == k].sum() for k in range(3)])
        totals = totals / totals.sum()
        return TossReport(totals[0], totals[1], totals[2],
                          totals[2] if cheater_present else 0.0, "analytic")
    trials, seed = mode
    if trials < 1:
        raise ValueError("sampled mode needs at least one trial")
    p = probs / probs.sum()

    def draw(rng, n):
        idx = rng.choice(p.size, size=n, p=p)
        return np.bincount(outcomes[idx], minlength=3)

    counts = _rng.chunked(trials, seed, (1,), draw)
    freq = counts / trials
    return TossReport(freq[0], freq[1], freq[2], freq[2] if cheater_present else 0.0, trials)


def _check_pair(alice: PartyStrategy, bob: PartyStrategy):
    if not alice.is_honest and not bob.is_honest:
        raise UnsupportedStrategy("no requirement is made when both parties cheat")


# ---------------------------------------------------------------------------
# Ambainis' qutrit protocol


def ambainis_state(b: int, x: int) -> np.ndarray:
    s = 1.0 if x == 0 else -1.0
    other = 1 if b == 0 else 2
    return (ket(0, 3) + s * ket(other, 3)) / math.sqrt(2.0)


def ambainis_ensemble() -> Ensemble:
    """Bob's view of Alice's bit: ``rho_b = (phi_{b,0} + phi_{b,1}) / 2``."""
    rhos = [0.5 * sum(projector(ambainis_state(b, x)) for x in (0, 1)) for b in (0, 1)]
    return Ensemble.of(rhos)


def _verification_basis(phi: np.ndarray) -> list[np.ndarray]:
    """Orthonormal basis whose first element is ``phi``."""
    m = np.column_stack([phi, np.eye(3)])
    q, _ = np.linalg.qr(m)
    q[:, 0] *= np.vdot(q[:, 0], phi) / abs(np.vdot(q[:, 0], phi))
    return [q[:, k] for k in range(3)]


def ambainis_leaves(alice: PartyStrategy, bob: PartyStrategy) -> list[Leaf]:
    _check_pair(alice, bob)
    if not alice.is_honest:
        raise UnsupportedStrategy("Alice-side cheating is not constructed for this protocol")
    if bob.kind == "custom" and bob.povm is None:
        raise UnsupportedStrategy("custom Bob needs a two-outcome qutrit POVM")
    if bob.kind == "cheat":
        guess_povm = helstrom(ambainis_ensemble())[1]
    else:
        guess_povm = bob.povm
    leaves = []
    for b, x in itertools.product((0, 1), repeat=2):
        phi = ambainis_state(b, x)
        rho = projector(phi)
        if bob.is_honest:
            basis = _verification_basis(phi)
            for bp in (0, 1):
                for k, vec in enumerate(basis):
                    pk = abs(np.vdot(vec, phi)) ** 2
                    if pk < 1e-15:
                        continue
                    out = CoinOutcome(b ^ bp) if k == 0 else CoinOutcome.ABORT
                    leaves.append(Leaf(0.25 * 0.5 * pk, out, (b, x, bp, k)))
        else:
            # Bob measures to guess b, then answers so that b xor b' hits
            # his target; he has no reason to abort afterwards.
            for g, e in enumerate(guess_povm.elements):
                pg = float(np.real(np.trace(e @ rho)))
                bp = g ^ bob.bit
                leaves.append(Leaf(0.25 * pg, CoinOutcome(b ^ bp), (b, x, g)))
    return leaves


def run_ambainis(alice: PartyStrategy, bob: PartyStrategy, mode="analytic") -> TossReport:
    """Run Ambainis' protocol.

    Parameters
    ----------
    alice, bob : PartyStrategy
    mode : "analytic" or (trials, seed)
    """
    leaves = ambainis_leaves(alice, bob)
    return _report(leaves, not (alice.is_honest and bob.is_honest), mode)


# ---------------------------------------------------------------------------
# the entanglement-sharing protocol

BELL = (ket(0, 4) + ket(3, 4)) / math.sqrt(2.0)  # (|00> + |11>)/sqrt 2
_BELL_PROJ = projector(BELL)


def colbeck_alice_cheat_state(bit: int = 0) -> np.ndarray:
    """Alice's optimal cheating state over A1 B1 A2 B2."""
    v = np.zeros(16, dtype=complex)
    # |0000>, |0011>, |1100> in A1 B1 A2 B2 order
    v[0b0000] = math.sqrt(2.0 / 3.0)
    v[0b0011] = 1.0 / math.sqrt(6.0)
    v[0b1100] = 1.0 / math.sqrt(6.0)
    if bit == 1:
        v = v[::-1].copy()  # flip every qubit
    return v


def colbeck_family_state(a00: float, a01: float, a10: float) -> np.ndarray:
    """``a00|0000> + a01|0011> + a10|1100>`` (normalised)."""
    v = np.zeros(16, dtype=complex)
    v[0b0000], v[0b0011], v[0b1100] = a00, a01, a10
    return v / np.linalg.norm(v)


def colbeck_success_functional(a00: float, a01: float, a10: float) -> float:
    """Alice's success towards 0 for the three-amplitude family."""
    return 0.25 * (2 * a00 ** 2 + 2 * a00 * a01 + 2 * a00 * a10 + a01 ** 2 + a10 ** 2)


def maximize_colbeck_functional(grid: int = 60) -> tuple[float, np.ndarray]:
    """Sweep the positive octant of the unit sphere, then polish locally."""
    best, arg = -1.0, None
    for t in np.linspace(0, math.pi / 2, grid):
        for f in np.linspace(0, math.pi / 2, grid):
            a = np.array([math.cos(t), math.sin(t) * math.cos(f), math.sin(t) * math.sin(f)])
            val = colbeck_success_functional(*a)
            if val > best:
                best, arg = val, a

    def neg(angles):
        t, f = angles
        return -colbeck_success_functional(math.cos(t), math.sin(t) * math.cos(f),
                                           math.sin(t) * math.sin(f))

    t0 = math.acos(arg[0])
    f0 = math.atan2(arg[2], arg[1])
    res = minimize(neg, [t0, f0], method="Nelder-Mead",
                   options={"xatol": 1e-12, "fatol": 1e-15})
    t, f = res.x
    a = np.array([math.cos(t), math.sin(t) * math.cos(f), math.sin(t) * math.sin(f)])
    return float(-res.fun), np.abs(a)


def colbeck_leaves(alice: PartyStrategy, bob: PartyStrategy) -> list[Leaf]:
    _check_pair(alice, bob)
    if bob.kind == "custom":
        raise UnsupportedStrategy("custom Bob strategies are not defined for this protocol")
    if alice.is_honest:
        state = np.kron(BELL, BELL)
    elif alice.kind == "cheat":
        state = colbeck_alice_cheat_state(alice.bit)
    else:
        if alice.state is None or alice.state.dim != 16:
            raise UnsupportedStrategy("custom Alice needs a 16-amplitude state")
        state = alice.state.amplitudes
    psi = state.reshape(2, 2, 2, 2)  # axes A1 B1 A2 B2
    leaves = []
    if bob.is_honest:
        for c in (0, 1):
            b_axis = 1 if c == 0 else 3
            a_axis = 0 if c == 0 else 2
            for r in (0, 1):
                sub = np.take(psi, r, axis=b_axis)  # A_c and the other pair remain
                p_r = float(np.vdot(sub, sub).real)
                if p_r < 1e-15:
                    continue
                # move A_c to the front, flatten the other pair
                keep_axes = [ax for ax in range(4) if ax != b_axis]
                pos_a = keep_axes.index(a_axis)
                m = np.moveaxis(sub, pos_a, 0).reshape(2, 4)
                rho_pair = m.T @ m.conj() / p_r  # trace over A_c
                pass_p = float(np.real(np.vdot(BELL, rho_pair @ BELL)))
                pass_p = min(max(pass_p, 0.0), 1.0)
                leaves.append(Leaf(0.5 * p_r * pass_p, CoinOutcome(r), (c, r, 1)))
                if 1 - pass_p > 1e-15:
                    leaves.append(Leaf(0.5 * p_r * (1 - pass_p), CoinOutcome.ABORT, (c, r, 0)))
    else:
        # Bob reads both of his halves first and picks a pair showing his
        # target; Alice's half of that pair agrees with it.
        probs = np.einsum("abcd->bd", np.abs(psi) ** 2)
        for r1, r2 in itertools.product((0, 1), repeat=2):
            pr = float(probs[r1, r2])
            if pr < 1e-15:
                continue
            chosen = r1 if (r1 == bob.bit or r2 != bob.bit) else r2
            leaves.append(Leaf(pr, CoinOutcome(chosen), (r1, r2)))
    return leaves


def run_colbeck(alice: PartyStrategy, bob: PartyStrategy, mode="analytic") -> TossReport:
    """Run the entanglement-sharing protocol.

    Parameters
    ----------
    alice, bob : PartyStrategy
    mode : "analytic" or (trials, seed)
    """
    leaves = colbeck_leaves(alice, bob)
    return _report(leaves, not (alice.is_honest and bob.is_honest), mode)


def bias_report(protocol: str) -> list[dict]:
    """Best cheating probabilities, biases and detection for one protocol.

    The last row is the reference lower bound on any protocol's bias and
    is not computed from a strategy.
    """
    runner = {"ambainis": run_ambainis, "colbeck": run_colbeck}.get(protocol)
    if runner is None:
        raise ValueError(f"unknown protocol {protocol!r}")
    rows = []
    parties = ("alice", "bob") if protocol == "colbeck" else ("bob",)
    for party in parties:
        for bit in (0, 1):
            cheat = PartyStrategy.cheat_towards(bit)
            honest = PartyStrategy.honest()
            rep = runner(cheat, honest) if party == "alice" else runner(honest, cheat)
            success = rep.p(bit)
            rows.append({"protocol": protocol, "party": party, "strategy": f"cheat{bit}",
                         "success": success, "bias": success - 0.5,
                         "detection": rep.detection_prob})
    rows.append({"protocol": protocol, "party": "reference", "strategy": "kitaev_lower_bound",
                 "success": 0.5 + KITAEV_BIAS, "bias": KITAEV_BIAS, "detection": 0.0})
    return rows
