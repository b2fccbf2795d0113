"""Variable-bias coin tossing with relativistic quantum protocols.

VBCT1 (three sites): Alice streams qubits from ``{psi_0, psi_1}`` to B1 and
her agent A2 names each one to B2.  Bob's agents secretly agree on an index
``n``; B3 announces it spacelike to the n-th exchange.  B1 guesses the n-th
state in the ``|+>, |->`` basis and announces ``b = b' xor w``; the coin is
``a xor b``.  Every other state is checked against A2's description.

VBCT2 (two sites): Bob prepares batches of ``alpha|00> + beta|11>`` states
and keeps the first qubits; Alice tests a batch with probability
``1 - 2**-M`` and otherwise Bob picks a state with the bias he wants.

Each protocol has an event-level single run (traced, checked against the
light-speed invariant) and a vectorized sampler for many trials.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .. import _rng
from ..cointoss import CoinOutcome, TossReport
from ..qmath import measure_povm, projector, tensor, trace_distance
from .spacetime import EventLoop, QubitHandle, SpacetimeEvent, verify_independence

_PLUS = np.array([1.0, 1.0]) / math.sqrt(2.0)
_MINUS = np.array([1.0, -1.0]) / math.sqrt(2.0)


# ---------------------------------------------------------------------------
# VBCT1


def vbct1_states(theta: float) -> tuple[np.ndarray, np.ndarray]:
    """``cos(theta/2)|0> +- sin(theta/2)|1>``."""
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return np.array([c, s]), np.array([c, -s])


def vbct1_pmax(theta: float) -> float:
    """Best probability of guessing Alice's state, ``(1 + sin theta) / 2``."""
    return 0.5 * (1.0 + math.sin(theta))


@dataclass(frozen=True)
class Biased:
    """Alice tampers with each state independently with probability ``gamma``.

    A tampered state makes Bob's guess correct with probability
    ``pmax + delta`` and is the pure state that best survives Bob's test
    under that constraint.
    """

    delta: float
    gamma: float

    def __post_init__(self):
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError("gamma must lie in [0, 1]")


def tampered_state(theta: float, label: int, delta: float) -> np.ndarray:
    """State for label ``label`` with ``P(Bob guesses label) = pmax + delta``."""
    pm = vbct1_pmax(theta) + delta
    if not 0.0 <= pm <= 1.0:
        raise ValueError("pmax + delta must be a probability")
    good, bad = math.sqrt(pm), math.sqrt(1.0 - pm)
    return good * _PLUS + bad * _MINUS if label == 0 else bad * _PLUS + good * _MINUS


def tamper_pass_probability(theta: float, delta: float) -> float:
    """Probability that a tampered state passes Bob's test.

    Alice declares whichever of the two protocol states overlaps more.
    """
    pmax = vbct1_pmax(theta)
    pmin = 1.0 - pmax
    pm = pmax + delta
    if not 0.0 <= pm <= 1.0:
        raise ValueError("pmax + delta must be a probability")
    same = (math.sqrt(pmax * pm) + math.sqrt(pmin * (1.0 - pm))) ** 2
    other = (math.sqrt(pmin * pm) + math.sqrt(pmax * (1.0 - pm))) ** 2
    return max(same, other)


def _poisson_n(rng: np.random.Generator, mean: float, size=None):
    """Poisson draw conditioned on being at least 1 (rejection)."""
    if size is None:
        while True:
            n = int(rng.poisson(mean))
            if n >= 1:
                return n
    out = rng.poisson(mean, size=size)
    bad = out < 1
    while bad.any():
        out[bad] = rng.poisson(mean, size=int(bad.sum()))
        bad = out < 1
    return out


def _truncated_poisson_pmf(mean: float, tail: float = 1e-15) -> tuple[np.ndarray, np.ndarray]:
    from scipy.stats import poisson

    hi = int(poisson.isf(tail, mean)) + 2
    ns = np.arange(1, hi + 1)
    pmf = poisson.pmf(ns, mean)
    return ns, pmf / pmf.sum()


VBCT1_EXTRA_STATES = 1
"""States sent after the n-th before Alice hears ``n`` (interval ``D``, A3 at ``2D``)."""


def vbct1_undetected_cheat(theta: float, delta: float, gamma: float, poisson_mean: float) -> dict:
    """Exact and compact figures for Alice's tampering going unnoticed.

    ``exact`` is the probability that the n-th state is tampered and no
    other checked state fails; ``compact`` is ``gamma * (1 - delta**2) **
    (gamma * poisson_mean)``.
    """
    q = tamper_pass_probability(theta, delta)
    ns, pmf = _truncated_poisson_pmf(poisson_mean)
    per_state = 1.0 - gamma * (1.0 - q)
    exact = gamma * float(np.sum(pmf * per_state ** (ns - 1 + VBCT1_EXTRA_STATES)))
    compact = gamma * (1.0 - delta ** 2) ** (gamma * poisson_mean)
    return {"pass_probability": q, "exact": exact, "compact": compact}


def vbct1_once(theta: float, bob_wish: int, rng: np.random.Generator, alice_adversary=None,
               poisson_mean: float = 50.0, separation: float = 1.0, record: bool = False):
    """One event-level run; returns ``(CoinOutcome, details, loop)``."""
    D = float(separation)
    psi = vbct1_states(theta)
    positions = {"A1": 0.0, "B1": 0.0, "A2": D, "B2": D, "A3": 2 * D, "B3": 2 * D}
    loop = EventLoop(positions, record=record)
    n = _poisson_n(rng, poisson_mean)  # shared randomness of B1, B2, B3
    handles: dict[str, np.ndarray] = {}
    labels: dict[int, int] = {}
    state = {"a1_heard_n": None, "a2_heard_n": None, "stored": {}, "told": {},
             "b": None, "abort": None, "b1_emit": None, "a2_emit": {}}
    pm_basis = [projector(_PLUS), projector(_MINUS)]

    def t_of(i):
        return i * D

    def prepare(i):
        a = int(rng.integers(2))
        vec = psi[a]
        if isinstance(alice_adversary, Biased) and rng.random() < alice_adversary.gamma:
            vec = tampered_state(theta, a, alice_adversary.delta)
            ov = [abs(np.vdot(p, vec)) ** 2 for p in psi]
            a = int(np.argmax(ov))
        labels[i] = a
        key = f"q{i}"
        handles[key] = vec
        return QubitHandle(key)

    def a1(lp, ev):
        if ev.kind == "tick":
            i = ev.payload
            if state["a1_heard_n"] is not None:
                return
            lp.send("A1", "B1", prepare(i), lp.now, "qubit")
            lp.timer("A1", t_of(i + 1), "tick", i + 1)
        elif ev.kind == "n_from_A3":
            state["a1_heard_n"] = ev.payload
        elif ev.kind == "guess":
            state["b"] = ev.payload

    def a2(lp, ev):
        if ev.kind == "tick":
            i = ev.payload
            heard = state["a2_heard_n"]
            # A1 stops once the relay from A3 reaches her at t_n + 2D
            if heard is not None and lp.now >= t_of(heard) + 2 * D:
                return
            # Alice's agents share the random string that fixed each label
            msg = lp.send("A2", "B2", (i, labels[i]), lp.now, "identity")
            state["a2_emit"][i] = msg.emitted
            lp.timer("A2", t_of(i + 1), "tick", i + 1)
        elif ev.kind == "n_from_A3":
            state["a2_heard_n"] = ev.payload

    def a3(lp, ev):
        if ev.kind == "announce":
            lp.send("A3", "A1", ev.payload, lp.now, "n_from_A3")
            lp.send("A3", "A2", ev.payload, lp.now, "n_from_A3")

    def b1(lp, ev):
        if ev.kind == "qubit":
            i = int(ev.payload.key[1:])
            state["stored"][i] = ev.payload
            if i == n:
                # the guess must be independent of A2's naming of state n
                emit = lp.event("B1", lp.now)
                if not verify_independence(emit, state["a2_emit"].get(n, SpacetimeEvent(D, lp.now))):
                    state["abort"] = "causality"
                    return
                dist, _ = measure_povm(handles[ev.payload.key], pm_basis)
                b_prime = int(rng.choice(2, p=dist.probs))
                lp.send("B1", "A1", (n, b_prime ^ bob_wish), lp.now, "guess")
                state["b1_emit"] = emit
        elif ev.kind == "identity":
            i, a = ev.payload
            state["told"][i] = a

    def b2(lp, ev):
        if ev.kind == "identity":
            lp.send("B2", "B1", ev.payload, lp.now, "identity")

    def b3(lp, ev):
        if ev.kind == "announce_timer":
            lp.send("B3", "A3", n, lp.now, "announce")

    for name, h in (("A1", a1), ("A2", a2), ("A3", a3), ("B1", b1), ("B2", b2), ("B3", b3)):
        loop.on(name, h)
    loop.timer("A1", t_of(1), "tick", 1)
    loop.timer("A2", t_of(1), "tick", 1)
    loop.timer("B3", t_of(n), "announce_timer", n)
    loop.run()

    announce = SpacetimeEvent(2 * D, t_of(n))
    guards = (verify_independence(announce, SpacetimeEvent(0.0, t_of(n)))
              and verify_independence(announce, SpacetimeEvent(D, t_of(n))))
    details = {"n": n, "sent": len(labels), "a": labels.get(n), "w": bob_wish}
    if not guards or state["abort"] or state["b"] is None:
        details["reason"] = state["abort"] or "causality"
        return CoinOutcome.ABORT, details, loop
    # B1's verification of every stored state other than the n-th
    for i, h in state["stored"].items():
        if i == n:
            continue
        declared = psi[state["told"][i]]
        p_pass = abs(np.vdot(declared, handles[h.key])) ** 2
        if rng.random() >= p_pass:
            details["reason"] = f"state {i} failed"
            return CoinOutcome.ABORT, details, loop
    if state["a1_heard_n"] != state["b"][0]:
        details["reason"] = "index mismatch"
        return CoinOutcome.ABORT, details, loop
    b = state["b"][1]
    details["b"] = b
    return CoinOutcome(labels[n] ^ b), details, loop


def vbct1_sample(theta: float, trials: int, seed: int = 0, bob_wish=0, alice_adversary=None,
                 poisson_mean: float = 50.0) -> dict:
    """Vectorized runs; arrays ``a``, ``b``, ``c`` (2 = abort) and ``w``.

    ``bob_wish=None`` draws Bob's wish uniformly per run.
    """
    pmax = vbct1_pmax(theta)
    out = {k: [] for k in ("a", "b", "c", "w")}

    def draw(rng, count):
        a = rng.integers(0, 2, size=count)
        w = rng.integers(0, 2, size=count) if bob_wish is None else np.full(count, int(bob_wish))
        p_correct = np.full(count, pmax)
        abort = np.zeros(count, dtype=bool)
        if isinstance(alice_adversary, Biased):
            n = _poisson_n(rng, poisson_mean, size=count)
            tampered = rng.random(count) < alice_adversary.gamma
            q = tamper_pass_probability(theta, alice_adversary.delta)
            p_correct[tampered] = pmax + alice_adversary.delta
            others = n - 1 + VBCT1_EXTRA_STATES
            bad = rng.binomial(others, alice_adversary.gamma)
            failed = rng.binomial(bad, 1.0 - q) > 0
            abort = failed
        correct = rng.random(count) < p_correct
        b_prime = np.where(correct, a, 1 - a)
        b = b_prime ^ w
        c = np.where(abort, 2, a ^ b)
        return a, b, c, w

    for c_idx, start in enumerate(range(0, trials, _rng.CHUNK)):
        count = min(_rng.CHUNK, trials - start)
        parts = draw(_rng.substream(seed, 7, c_idx), count)
        for k, v in zip(("a", "b", "c", "w"), parts):
            out[k].append(v)
    return {k: np.concatenate(v) if v else np.zeros(0, dtype=int) for k, v in out.items()}


def run_vbct1(theta: float, bob_wish: int = 0, alice_adversary=None, poisson_mean: float = 50.0,
              seed: int = 0, trials: int = 1, engine: str = "batch") -> TossReport:
    """Outcome frequencies of VBCT1.

    Parameters
    ----------
    theta : float
        Angle in ``(0, pi/2]``.
    bob_wish : int
        0 to push the coin to 0, 1 to push it to 1.
    alice_adversary : Biased or None
    poisson_mean : float
        Mean of the (truncated) Poisson draw of ``n``.
    engine : {"batch", "event"}
        ``event`` runs the traced event loop once per trial.
    """
    if not 0.0 < theta <= math.pi / 2 + 1e-15:
        raise ValueError("theta must lie in (0, pi/2]")
    if bob_wish not in (0, 1):
        raise ValueError("bob_wish must be 0 or 1")
    if poisson_mean <= 0:
        raise ValueError("poisson_mean must be positive")
    if engine == "event":
        def draw(rng, count):
            counts = np.zeros(3, dtype=np.int64)
            for _ in range(count):
                res, _, _ = vbct1_once(theta, bob_wish, rng, alice_adversary, poisson_mean)
                counts[int(res)] += 1
            return counts

        counts = _rng.chunked(trials, seed, (8,), draw)
    elif engine == "batch":
        s = vbct1_sample(theta, trials, seed, bob_wish, alice_adversary, poisson_mean)
        counts = np.bincount(s["c"], minlength=3)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    f = counts / trials
    extras = {"pmax": vbct1_pmax(theta)}
    if isinstance(alice_adversary, Biased):
        extras.update(vbct1_undetected_cheat(theta, alice_adversary.delta, alice_adversary.gamma,
                                             poisson_mean))
    cheat = alice_adversary is not None
    return TossReport(f[0], f[1], f[2], f[2] if cheat else 0.0, trials, extras)


def wish_independence(samples: dict) -> dict:
    """Largest deviation ``|p(w|a,b,c) - p(w=1|c)|`` in units of its standard error.

    Only non-aborted runs count.  Cells with fewer than 30 runs are skipped.
    """
    ok = samples["c"] != 2
    a, b, c, w = (samples[k][ok] for k in ("a", "b", "c", "w"))
    worst_dev, worst_z = 0.0, 0.0
    for cv in (0, 1):
        in_c = c == cv
        p_c = w[in_c].mean()
        for av, bv in itertools.product((0, 1), repeat=2):
            cell = in_c & (a == av) & (b == bv)
            k = int(cell.sum())
            if k < 30:
                continue
            dev = abs(w[cell].mean() - p_c)
            se = math.sqrt(max(p_c * (1 - p_c), 1e-12) / k)
            worst_dev = max(worst_dev, dev)
            worst_z = max(worst_z, dev / se)
    return {"max_deviation": worst_dev, "max_z": worst_z}


# ---------------------------------------------------------------------------
# VBCT2


def vbct2_state(alpha: float) -> np.ndarray:
    """``alpha|00> + beta|11>`` with ``alpha`` the amplitude (bias ``alpha**2``)."""
    beta = math.sqrt(1.0 - alpha * alpha)
    return np.array([alpha, 0.0, 0.0, beta])


@dataclass(frozen=True)
class BobOverbias:
    """Bob replaces one state per batch, declared ``psi_0``, by one of bias ``alpha0**2 + delta``."""

    delta: float


ALICE_SPLIT_Z = "alice_split_z"


def overbias_pass_probability(alpha0: float, delta: float) -> float:
    """Probability that Bob's over-biased state passes Alice's test."""
    pmax = alpha0 * alpha0
    pm = pmax + delta
    if not 0.0 <= pm <= 1.0:
        raise ValueError("alpha0**2 + delta must be a probability")
    return (math.sqrt(pmax * pm) + math.sqrt((1 - pmax) * (1 - pm))) ** 2


def overbias_detection(alpha0: float, delta: float, M: int) -> float:
    """Probability that some tested batch fails before a trusted one arrives."""
    r = 2.0 ** -M
    q = overbias_pass_probability(alpha0, delta)
    return 1.0 - r / (1.0 - (1.0 - r) * q)


def _check_vbct2(alpha0, alpha1, N, M):
    if not (0 < alpha0 < 1 and 0 < alpha1 < 1):
        raise ValueError("alphas must lie in (0, 1)")
    if not alpha0 ** 2 > alpha1 ** 2:
        raise ValueError("need alpha0**2 > alpha1**2")
    if N < 2 or M < 1:
        raise ValueError("need N >= 2 and M >= 1")


def _fresh_batch(rng: np.random.Generator, N: int) -> np.ndarray:
    while True:
        ids = rng.integers(0, 2, size=N)
        if 0 < ids.sum() < N:
            return ids


def vbct2_once(alpha0: float, alpha1: float, N: int, M: int, bob_choice: int,
               rng: np.random.Generator, adversary=None, extratest: bool = True,
               separation: float = 1.0, record: bool = False, max_batches: int = 10 ** 6):
    """One event-level run; returns ``(CoinOutcome, flags, loop)``.

    ``flags`` holds ``batches``, ``bias_learned`` and ``exposed``.
    """
    _check_vbct2(alpha0, alpha1, N, M)
    D = float(separation)
    positions = {"A1": 0.0, "B1": 0.0, "A2": D, "B2": D}
    loop = EventLoop(positions, record=record)
    alphas = (alpha0, alpha1)
    pair_basis = [projector(np.array([1.0, 0, 0, 0])), np.diag([0.0, 1, 1, 0]),
                  projector(np.array([0, 0, 0, 1.0]))]
    flags = {"batches": 0, "bias_learned": False, "exposed": False}
    t = 0.0
    for _ in range(max_batches):
        flags["batches"] += 1
        ids = _fresh_batch(rng, N)
        states = [vbct2_state(alphas[i]) for i in ids]
        if isinstance(adversary, BobOverbias):
            slot = int(np.flatnonzero(ids == 0)[0])
            states[slot] = vbct2_state(math.sqrt(alpha0 ** 2 + adversary.delta))
        creation = loop.event("B1", t)
        loop.send("B1", "A1", QubitHandle(f"batch{flags['batches']}"), t, "halves")
        z = int(rng.random() >= 2.0 ** -M)  # z = 0 with probability 2**-M
        z1, z2 = (0, 1) if adversary == ALICE_SPLIT_Z else (z, z)
        loop.send("A1", "B1", z1, t, "z")
        z2_msg = loop.send("A2", "B2", z2, t, "z")
        if not verify_independence(z2_msg.emitted, creation):
            raise AssertionError("schedule puts A2's z inside B1's light cone")
        loop.run()
        if z1 == 1 and z2 == 1:
            loop.send("B1", "A1", tuple(int(i) for i in ids), loop.now, "identities")
            loop.run()
            for i, vec in zip(ids, states):
                p_pass = abs(np.vdot(vbct2_state(alphas[i]), vec)) ** 2
                if rng.random() >= p_pass:
                    return CoinOutcome.ABORT, flags, loop
            t = loop.now + D
            continue
        # trusted batch (at least as far as B1 knows)
        if isinstance(adversary, BobOverbias):
            choice = slot
        else:
            choice = int(rng.choice(np.flatnonzero(ids == bob_choice)))
        loop.send("B1", "A1", choice, loop.now, "choice")
        if z2 == 1:
            # B2 believes this batch is tested and names every state to A2
            loop.send("B2", "A2", tuple(int(i) for i in ids), loop.now, "identities")
            flags["bias_learned"] = True
        else:
            loop.send("B2", "A2", choice, loop.now, "choice")
        loop.run()
        # B1 and B2 pool their records after the exchange
        loop.send("B2", "B1", z2, loop.now, "pool")
        loop.run()
        if z1 != z2:
            flags["exposed"] = True
            return CoinOutcome.ABORT, flags, loop
        dist, _ = measure_povm(projector(states[choice]), pair_basis)
        outcome = int(rng.choice(3, p=dist.probs))
        if outcome == 1:
            raise AssertionError("Schmidt states never give mixed outcomes")
        if extratest:
            # honest Alice returns her halves; each returned pair checks out
            for k, (i, vec) in enumerate(zip(ids, states)):
                if k == choice:
                    continue
                if rng.random() >= abs(np.vdot(vbct2_state(alphas[i]), vec)) ** 2:
                    return CoinOutcome.ABORT, flags, loop
        return CoinOutcome(outcome // 2), flags, loop
    raise RuntimeError("no trusted batch within max_batches")


def run_vbct2(alpha0: float, alpha1: float, N: int = 8, M: int = 3, adversary=None, seed: int = 0,
              bob_choice: int = 0, trials: int = 1, engine: str = "batch",
              extratest: bool = True) -> TossReport:
    """Outcome frequencies of VBCT2.

    Parameters
    ----------
    alpha0, alpha1 : float
        Amplitudes of ``|00>``; biases are their squares.
    N : int
        States per batch.
    M : int
        Alice trusts a batch with probability ``2**-M``.
    adversary : None, BobOverbias or "alice_split_z"
    bob_choice : int
        Which bias an honest Bob selects.
    engine : {"batch", "event"}
    extratest : bool
        Run Bob's supplementary check of Alice's returned halves.

    Extras
    ------
    ``bias_learned`` and ``exposed`` (fractions of runs) for the split-z
    attack; ``analytic_detection`` for over-biasing.
    """
    _check_vbct2(alpha0, alpha1, N, M)
    if bob_choice not in (0, 1):
        raise ValueError("bob_choice must be 0 or 1")
    extras: dict = {}
    if engine == "event" or adversary == ALICE_SPLIT_Z:
        def draw(rng, count):
            acc = np.zeros(5, dtype=np.int64)
            for _ in range(count):
                res, flags, _ = vbct2_once(alpha0, alpha1, N, M, bob_choice, rng, adversary,
                                           extratest)
                acc[int(res)] += 1
                acc[3] += flags["bias_learned"]
                acc[4] += flags["exposed"]
            return acc

        acc = _rng.chunked(trials, seed, (9,), draw)
        counts = acc[:3]
        if adversary == ALICE_SPLIT_Z:
            extras["bias_learned"] = acc[3] / trials
            extras["exposed"] = acc[4] / trials
    elif engine == "batch":
        p0 = (alpha0, alpha1)[bob_choice] ** 2
        q = 1.0
        if isinstance(adversary, BobOverbias):
            p0 = alpha0 ** 2 + adversary.delta
            q = overbias_pass_probability(alpha0, adversary.delta)
            extras["analytic_detection"] = overbias_detection(alpha0, adversary.delta, M)

        def draw(rng, count):
            tested = rng.geometric(2.0 ** -M, size=count) - 1
            caught = rng.binomial(tested, 1.0 - q) > 0 if q < 1.0 else np.zeros(count, bool)
            zero = rng.random(count) < p0
            c = np.where(caught, 2, np.where(zero, 0, 1))
            return np.bincount(c, minlength=3)

        counts = _rng.chunked(trials, seed, (10,), draw)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    f = counts / trials
    cheat = adversary is not None
    return TossReport(f[0], f[1], f[2], f[2] if cheat else 0.0, trials, extras)


def vbct2_alice_info_bound(alpha0: float, alpha1: float, N: int) -> tuple[float, float]:
    """Trace distances Alice faces once Bob has chosen a state.

    Returns ``(d_full, d_single)`` where ``d_single = D(rho_0, rho_1)`` for
    Alice's halves of the two states and ``d_full = D(rho_0 x sigma_0,
    rho_1 x sigma_1)`` with ``sigma_b`` the normalized uniform mixture of the
    other ``N - 1`` halves over batches that are not all equal.
    """
    if not 2 <= N <= 9:
        raise ValueError("N must lie in 2..9")
    rho = [np.diag([a * a, 1.0 - a * a]) for a in (alpha0, alpha1)]
    diag = [np.diag(r) for r in rho]
    sig = [np.zeros(2 ** (N - 1)), np.zeros(2 ** (N - 1))]
    for bits in itertools.product((0, 1), repeat=N - 1):
        d = np.ones(1)
        for i in bits:
            d = np.kron(d, diag[i])
        if 1 in bits:
            sig[0] += d
        if 0 in bits:
            sig[1] += d
    sig = [s / s.sum() for s in sig]
    # every operator here is diagonal, so the trace distance is classical
    full0 = np.kron(diag[0], sig[0])
    full1 = np.kron(diag[1], sig[1])
    d_full = 0.5 * float(np.abs(full0 - full1).sum())
    d_single = trace_distance(rho[0], rho[1])
    return d_full, d_single


def vbct2_info_bound_dense(alpha0: float, alpha1: float, N: int) -> tuple[float, float]:
    """Same quantities from full density matrices; a cross-check for small ``N``."""
    rho = [np.diag([a * a, 1.0 - a * a]).astype(complex) for a in (alpha0, alpha1)]
    dim = 2 ** (N - 1)
    sig = [np.zeros((dim, dim), complex), np.zeros((dim, dim), complex)]
    for bits in itertools.product((0, 1), repeat=N - 1):
        term = tensor(*[rho[i] for i in bits]) if bits else np.ones((1, 1))
        if 1 in bits:
            sig[0] += term
        if 0 in bits:
            sig[1] += term
    sig = [s / np.trace(s).real for s in sig]
    return (trace_distance(tensor(rho[0], sig[0]), tensor(rho[1], sig[1])),
            trace_distance(rho[0], rho[1]))
