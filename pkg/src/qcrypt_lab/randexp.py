"""Randomness expansion with untrusted device triples.

Alice spends two bits of her private string per GHZ test to pick the
settings of three devices, checks the product of the three signs, and
turns each passing test into two fresh bits.  After the loop the raw bits
are hashed with a Toeplitz matrix drawn from the other half of her string.

Also here: the classical and quantum values of the GHZ, CHSH and PRC
nonlocal games, and a checker for states and observables that pass every
GHZ constraint.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import qr

from . import _rng
from .extract import BitString, ToeplitzSeed, seed_length, toeplitz_hash
from .qmath import PAULI_X, PAULI_Y, PAULI_Z, DensityOperator, as_matrix, tensor

SIGN_TOL = 1e-9

# ---------------------------------------------------------------------------
# GHZ test tables

GHZ_INPUTS = {(0, 0): ("P", "P", "P"), (0, 1): ("P", "Q", "Q"),
              (1, 0): ("Q", "P", "Q"), (1, 1): ("Q", "Q", "P")}
GHZ_REQUIRED = {("P", "P", "P"): -1, ("P", "Q", "Q"): 1, ("Q", "P", "Q"): 1, ("Q", "Q", "P"): 1}


def ghz_input(bits: Sequence[int]) -> tuple[str, str, str]:
    """Two bits to the three device settings."""
    b = tuple(int(v) for v in bits)
    if b not in GHZ_INPUTS:
        raise ValueError("need two bits")
    return GHZ_INPUTS[b]


def ghz_output(signs: Sequence[int]) -> tuple[int, int]:
    """Three signs to two bits.

    All equal gives 00; otherwise the position of the odd one out (first,
    second, third) gives 01, 10, 11.
    """
    s = tuple(int(v) for v in signs)
    if len(s) != 3 or any(v not in (-1, 1) for v in s):
        raise ValueError("need three signs in {-1, +1}")
    if s[0] == s[1] == s[2]:
        return (0, 0)
    if s[1] == s[2]:
        return (0, 1)
    if s[0] == s[2]:
        return (1, 0)
    return (1, 1)


def ghz_maps(direction: str, value):
    """``input``: two bits to settings; ``output``: sign triple to two bits."""
    if direction == "input":
        return ghz_input(value)
    if direction == "output":
        return ghz_output(value)
    raise ValueError("direction must be 'input' or 'output'")


# ---------------------------------------------------------------------------
# devices


def _sign_projectors(op: np.ndarray) -> dict:
    op = np.asarray(op, dtype=complex)
    if np.max(np.abs(op - op.conj().T)) > SIGN_TOL:
        raise ValueError("observable is not Hermitian")
    if np.max(np.abs(op @ op - np.eye(op.shape[0]))) > SIGN_TOL:
        raise ValueError("observable eigenvalues must be +1 or -1")
    eye = np.eye(op.shape[0])
    return {1: 0.5 * (eye + op), -1: 0.5 * (eye - op)}


class _QuantumDevice:
    """Holds its two observables; sees only its own setting."""

    def __init__(self, P: np.ndarray, Q: np.ndarray):
        self._proj = {"P": _sign_projectors(P), "Q": _sign_projectors(Q)}
        self.dim = self._proj["P"][1].shape[0]

    def projectors(self, setting: str) -> dict:
        return self._proj[setting]


@dataclass(frozen=True)
class HonestGhz:
    """``(|000> - |111>)/sqrt 2`` measured with ``P = X`` and ``Q = Y``."""


@dataclass(frozen=True)
class ClassicalProgrammed:
    """Fixed signs ``(P1, Q1, P2, Q2, P3, Q3)``."""

    assignment: tuple

    def __post_init__(self):
        a = tuple(int(v) for v in self.assignment)
        if len(a) != 6 or any(v not in (-1, 1) for v in a):
            raise ValueError("assignment needs six signs")
        object.__setattr__(self, "assignment", a)


@dataclass
class Replay:
    """Honest on the first run; afterwards replays what it output then.

    On a later run, test ``t`` repeats the recorded signs with probability
    1/4 and otherwise flips two of the three, using randomness the three
    devices share in advance.
    """

    seed: int = 0
    memory: list = field(default_factory=list)
    runs: int = 0


@dataclass(frozen=True)
class Custom:
    """Any tripartite state with per-device observables ``((P1, Q1), (P2, Q2), (P3, Q3))``."""

    state: object
    ops: tuple


def ghz_state() -> np.ndarray:
    v = np.zeros(8, dtype=complex)
    v[0], v[7] = 1.0, -1.0
    return v / math.sqrt(2.0)


def best_classical_assignment() -> tuple:
    """Signs that pass three of the four GHZ constraints (all +1)."""
    return (1, 1, 1, 1, 1, 1)


class DeviceTriple:
    """Three isolated devices behind one behaviour.

    ``fed_inputs`` is Alice's own record of which strings she has already
    used with this triple.
    """

    def __init__(self, behavior=None):
        self.behavior = HonestGhz() if behavior is None else behavior
        self.fed_inputs: set = set()
        self._dist_cache: dict = {}
        b = self.behavior
        if isinstance(b, (HonestGhz, Replay)):
            self._rho = as_matrix(ghz_state())
            self._devices = [_QuantumDevice(PAULI_X, PAULI_Y) for _ in range(3)]
        elif isinstance(b, Custom):
            self._rho = DensityOperator(as_matrix(b.state)).matrix
            if len(b.ops) != 3:
                raise ValueError("need observables for three devices")
            self._devices = [_QuantumDevice(P, Q) for P, Q in b.ops]
            if np.prod([d.dim for d in self._devices]) != self._rho.shape[0]:
                raise ValueError("state dimension does not match the devices")
        elif isinstance(b, ClassicalProgrammed):
            self._rho = None
        else:
            raise TypeError(f"unknown behaviour {b!r}")
        self._shared = _rng.substream(b.seed, 30) if isinstance(b, Replay) else None

    @property
    def label(self) -> str:
        return type(self.behavior).__name__

    def begin_run(self) -> None:
        if isinstance(self.behavior, Replay):
            self.behavior.runs += 1

    def _distribution(self, settings: tuple) -> np.ndarray:
        """Probabilities of the eight sign triples (order of ``itertools.product((1, -1))``)."""
        if settings not in self._dist_cache:
            probs = []
            for signs in itertools.product((1, -1), repeat=3):
                proj = tensor(*[d.projectors(s)[v] for d, s, v in zip(self._devices, settings, signs)])
                probs.append(max(float(np.real(np.trace(proj @ self._rho))), 0.0))
            probs = np.array(probs)
            self._dist_cache[settings] = probs / probs.sum()
        return self._dist_cache[settings]

    def test(self, settings: tuple, t: int, rng: np.random.Generator) -> tuple[int, int, int]:
        """Signs returned for test ``t`` of the current run."""
        b = self.behavior
        if isinstance(b, ClassicalProgrammed):
            a = b.assignment
            return tuple(a[2 * k + (s == "Q")] for k, s in enumerate(settings))
        if isinstance(b, Replay) and b.runs > 1 and t < len(b.memory):
            recorded = b.memory[t]
            if self._shared.random() < 0.25:
                return recorded
            pair = [(0, 1), (0, 2), (1, 2)][int(self._shared.integers(3))]
            return tuple(-v if k in pair else v for k, v in enumerate(recorded))
        idx = int(rng.choice(8, p=self._distribution(settings)))
        signs = list(itertools.product((1, -1), repeat=3))[idx]
        if isinstance(b, Replay) and b.runs == 1:
            b.memory.append(signs)
        return signs


# ---------------------------------------------------------------------------
# protocols


@dataclass(frozen=True)
class ExpansionConfig:
    """Security parameter and min-entropy credit policy.

    credit_mode:
      ``classical-threat``: credit every raw bit and shorten by the
      compression needed against classical attacks;
      ``conjectured``: credit ``zeta`` bits per passed test and shorten by
      ``2 log2(1/(2 epsilon)) - 2``.
    """

    epsilon: float = 1e-6
    zeta: float = 2.0
    credit_mode: str = "classical-threat"
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must lie in (0, 1)")
        if self.zeta < 0:
            raise ValueError("zeta must be nonnegative")
        if self.credit_mode not in ("classical-threat", "conjectured"):
            raise ValueError(f"unknown credit mode {self.credit_mode!r}")


@dataclass(frozen=True)
class ExpansionResult:
    outcome: str  # "output" or "abort"
    output: BitString | None
    consumed_bits: int
    produced_bits: int
    tests_run: int
    abort_round: int | None = None
    raw_bits: int = 0
    seed_bits: int = 0
    credit: float = 0.0
    credit_mode: str = ""
    raw: BitString | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.outcome == "abort" and self.produced_bits != 0:
            raise ValueError("an aborted run produces nothing")

    def as_record(self) -> dict:
        return {"outcome": self.outcome, "consumed": self.consumed_bits,
                "produced": self.produced_bits, "tests": self.tests_run,
                "abort_round": self.abort_round}

    def to_json(self) -> str:
        return json.dumps(self.as_record(), sort_keys=True)


def classical_attack_analysis(epsilon: float) -> tuple[float, float]:
    """``(m, compression)`` with ``m = log(1/eps)/log(4/3)`` and compression
    ``2 (1/log2(4/3) + 1) log2(1/eps) - 2`` bits.
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    m = math.log(1.0 / epsilon) / math.log(4.0 / 3.0)
    compression = 2.0 * (1.0 / math.log2(4.0 / 3.0) + 1.0) * math.log2(1.0 / epsilon) - 2.0
    return m, compression


def _credit(config: ExpansionConfig, tests: int, raw: int) -> tuple[float, float]:
    """Credited entropy and the shortening margin."""
    if config.credit_mode == "classical-threat":
        return float(raw), max(0.0, math.ceil(classical_attack_analysis(config.epsilon)[1]))
    margin = max(0.0, 2.0 * math.log2(1.0 / (2.0 * config.epsilon)) - 2.0)
    return config.zeta * tests, margin


def _bits_of(x) -> BitString:
    if isinstance(x, BitString):
        return x
    return BitString(np.asarray(x, dtype=np.uint8))


def run_protocol_a(x, triple: DeviceTriple, config: ExpansionConfig = ExpansionConfig(),
                   rng: np.random.Generator | None = None) -> ExpansionResult:
    """Expand the private string ``x`` with one device triple.

    The first half of ``x`` drives the tests, two bits each; the second
    half seeds a modified Toeplitz hash.  A repeated ``x`` on the same
    triple is credited with no entropy.
    """
    x = _bits_of(x)
    if x.length == 0 or x.length % 2:
        raise ValueError("x must have positive even length")
    half = x.length // 2
    x1, R = x.bits[:half], x.bits[half:]
    tests = half // 2
    rng = _rng.substream(config.seed, 20, 0) if rng is None else rng
    key = (x.length, x.bits.tobytes())
    repeated = key in triple.fed_inputs
    triple.fed_inputs.add(key)
    triple.begin_run()
    raw = np.empty(2 * tests, dtype=np.uint8)
    for t in range(tests):
        settings = ghz_input(x1[2 * t:2 * t + 2])
        signs = triple.test(settings, t, rng)
        if int(np.prod(signs)) != GHZ_REQUIRED[settings]:
            return ExpansionResult("abort", None, 2 * (t + 1), 0, t + 1, abort_round=t)
        raw[2 * t:2 * t + 2] = ghz_output(signs)
    n = raw.size
    credit, margin = _credit(config, tests, n)
    if repeated:
        credit = 0.0
    tau = int(max(0, min(n, math.floor(credit - margin))))
    if tau == 0 or n == 0:
        out = BitString(np.zeros(0, dtype=np.uint8))
        seed_bits = 0
    else:
        seed_bits = seed_length(n, tau, modified=True)
        seed = ToeplitzSeed(n, tau, BitString(R[:seed_bits]), modified=True)
        out = toeplitz_hash(seed, BitString(raw))
    return ExpansionResult("output", out, 2 * tests, tau, tests, None, n, seed_bits, credit,
                           config.credit_mode, BitString(raw))


def run_protocol_n(x, triples: Sequence[DeviceTriple],
                   config: ExpansionConfig = ExpansionConfig()) -> ExpansionResult:
    """Protocol A in one sealed sub-lab per triple, same ``x``; outputs concatenated.

    Sub-lab ``i`` draws from its own substream, so lab 0 matches a lone
    Protocol A run with the same configuration.
    """
    if not triples:
        raise ValueError("need at least one triple")
    if len({id(t) for t in triples}) != len(triples):
        raise ValueError("each sub-lab needs its own triple")
    results = [run_protocol_a(x, t, config, _rng.substream(config.seed, 20, i))
               for i, t in enumerate(triples)]
    consumed = sum(r.consumed_bits for r in results)
    tests = sum(r.tests_run for r in results)
    for r in results:
        if r.outcome == "abort":
            return ExpansionResult("abort", None, consumed, 0, tests, r.abort_round,
                                   credit_mode=config.credit_mode)
    bits = np.concatenate([r.output.bits for r in results])
    raw = np.concatenate([r.raw.bits for r in results])
    return ExpansionResult("output", BitString(bits), consumed, int(bits.size), tests, None,
                           int(raw.size), sum(r.seed_bits for r in results),
                           sum(r.credit for r in results), config.credit_mode, BitString(raw))


def ghz_test_stats(triple: DeviceTriple, tests: int, seed: int = 0) -> dict:
    """Abort rate and per-setting output counts over independent tests.

    Settings are uniform; a failed test is counted and the loop carries on.
    """
    rng = _rng.substream(seed, 21)
    triple.begin_run()
    counts = {s: np.zeros(4, dtype=np.int64) for s in GHZ_REQUIRED}
    fails = 0
    for t in range(tests):
        settings = ghz_input(rng.integers(0, 2, size=2))
        signs = triple.test(settings, t, rng)
        if int(np.prod(signs)) != GHZ_REQUIRED[settings]:
            fails += 1
            continue
        b = ghz_output(signs)
        counts[settings][2 * b[0] + b[1]] += 1
    return {"abort_rate": fails / tests, "counts": counts, "tests": tests}


def test_rates(k: int) -> tuple[int, int, float]:
    """Devices, constraints and output/input ratio of the k-th PRC test."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return 4 * k - 1, 4 * k, (4 * k - 2) / math.log2(4 * k)


# ---------------------------------------------------------------------------
# nonlocal games


def prc_constraints(k: int) -> list[tuple[tuple[str, ...], int]]:
    """``(settings, required product)`` for the PRC test on ``4k - 1`` devices."""
    n = 4 * k - 1
    cons = []
    for i in range(n):
        cons.append((tuple("P" if l == i else "Q" for l in range(n)), 1))
    cons.append((("P",) * n, -1))
    return cons


def game_constraints(game: str):
    if game == "ghz":
        return [(s, r) for s, r in GHZ_REQUIRED.items()]
    if game.startswith("prc"):
        return prc_constraints(_prc_k(game))
    raise ValueError(f"{game!r} has no constraint list")


def _prc_k(game: str) -> int:
    try:
        return int(game[4:-1]) if game.startswith("prc(") else int(game[3:])
    except ValueError:
        raise ValueError(f"cannot read k from {game!r}") from None


def classical_brute_force(game: str):
    """Best classical assignment, by enumeration.

    Returns ``(max_satisfied, total)`` for ``ghz`` and ``prc(k)``; the CHSH
    maximum and the number of terms for ``chsh``.
    """
    if game == "chsh":
        best = -math.inf
        for a1, a2, b1, b2 in itertools.product((1, -1), repeat=4):
            best = max(best, a1 * b1 + a1 * b2 + a2 * b1 - a2 * b2)
        return float(best), 4
    if game == "ghz":
        n = 3
    elif game.startswith("prc"):
        k = _prc_k(game)
        if not 1 <= k <= 3:
            raise ValueError("prc(k) enumeration is limited to k <= 3")
        n = 4 * k - 1
    else:
        raise ValueError(f"unknown game {game!r}")
    cons = game_constraints(game)
    codes = np.arange(1 << (2 * n), dtype=np.int64)
    # bit 2l is device l's P sign, bit 2l+1 its Q sign (1 meaning -1)
    satisfied = np.zeros(codes.size, dtype=np.int64)
    for settings, required in cons:
        parity = np.zeros(codes.size, dtype=np.int64)
        for l, s in enumerate(settings):
            parity ^= (codes >> (2 * l + (s == "Q"))) & 1
        want = 0 if required == 1 else 1
        satisfied += parity == want
    return int(satisfied.max()), len(cons)


def _observable(s: str) -> np.ndarray:
    return PAULI_X if s == "P" else PAULI_Y


def cat_state(n: int) -> np.ndarray:
    """``(|0...0> - |1...1>)/sqrt 2`` on ``n`` qubits."""
    v = np.zeros(1 << n, dtype=complex)
    v[0], v[-1] = 1.0, -1.0
    return v / math.sqrt(2.0)


def constraint_values(state: np.ndarray, constraints, observable=_observable) -> list[float]:
    """Expectation of each constrained product on ``state``."""
    vals = []
    for settings, _ in constraints:
        op = tensor(*[observable(s) for s in settings])
        vals.append(float(np.real(np.vdot(state, op @ state))))
    return vals


CHSH_OPS = {"A1": PAULI_Z, "A2": PAULI_X,
            "B1": -(PAULI_Z + PAULI_X) / math.sqrt(2.0), "B2": -(PAULI_Z - PAULI_X) / math.sqrt(2.0)}


def chsh_value(state: np.ndarray | None = None, ops: dict | None = None) -> float:
    """``<A1B1> + <A1B2> + <A2B1> - <A2B2>``; defaults to the singlet."""
    if state is None:
        state = np.array([0, 1, -1, 0], dtype=complex) / math.sqrt(2.0)
    ops = CHSH_OPS if ops is None else ops
    rho = as_matrix(state)

    def corr(a, b):
        return float(np.real(np.trace(rho @ np.kron(ops[a], ops[b]))))

    return corr("A1", "B1") + corr("A1", "B2") + corr("A2", "B1") - corr("A2", "B2")


def quantum_values(game: str):
    """CHSH value on the singlet, or pass/fail of every constraint on the cat state.

    For ``ghz`` and ``prc(k)`` returns ``(passed, values)``; a constraint
    passes when its product has expectation equal to the required sign
    within ``SIGN_TOL``, i.e. it holds with probability 1.
    """
    if game == "chsh":
        return chsh_value()
    if game == "ghz":
        n = 3
    elif game.startswith("prc"):
        k = _prc_k(game)
        if k > 2:
            raise ValueError("quantum check implemented for k <= 2")
        n = 4 * k - 1
    else:
        raise ValueError(f"unknown game {game!r}")
    cons = game_constraints(game)
    vals = constraint_values(cat_state(n), cons)
    passed = all(abs(v - r) <= SIGN_TOL for v, (_, r) in zip(vals, cons))
    return passed, vals


# ---------------------------------------------------------------------------
# states that pass the GHZ test


def _support_basis(rho: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    w, v = np.linalg.eigh(rho)
    return v[:, w > tol]


def _canonical_frame(P: np.ndarray, Q: np.ndarray, S: np.ndarray):
    """Isometry ``V`` with ``V^dag P V = I_d x X`` and ``V^dag Q V = I_d x Y`` on the support ``S``.

    Returns ``None`` when the restricted operators do not have that form.
    """
    p = S.conj().T @ P @ S
    q = S.conj().T @ Q @ S
    s = p.shape[0]
    if s % 2:
        return None
    z = 0.5j * (q @ p - p @ q)
    plus = 0.5 * (np.eye(s) + z)
    # a deterministic basis of the +1 eigenspace: pivoted QR of its projector
    qmat, r, _ = qr(plus, pivoting=True)
    rank = int(np.sum(np.abs(np.diag(r)) > 1e-8))
    if rank != s // 2:
        return None
    u = qmat[:, :rank]
    cols = []
    for m in range(rank):
        cols.append(u[:, m])
        cols.append(p @ u[:, m])
    W = np.stack(cols, axis=1)  # columns ordered (m, 0), (m, 1)
    if np.max(np.abs(W.conj().T @ W - np.eye(s))) > 1e-8:
        return None
    V = S @ W
    d = s // 2
    if (np.max(np.abs(W.conj().T @ p @ W - np.kron(np.eye(d), PAULI_X))) > 1e-8
            or np.max(np.abs(W.conj().T @ q @ W - np.kron(np.eye(d), PAULI_Y))) > 1e-8):
        return None
    return V


def ghz_characterization_check(state, observables):
    """Check the four GHZ relations and describe the solution.

    Parameters
    ----------
    state : PureState, DensityOperator or array
        Tripartite state, factors ordered 1, 2, 3.
    observables : sequence of three ``(P_i, Q_i)`` pairs

    Returns
    -------
    satisfies : bool
        Every relation ``O |Psi> = +-|Psi>`` holds within ``SIGN_TOL``.
    anticommute_ok : bool
        ``({P_i, Q_i} x 1) |Psi> = 0`` for every party and the operators
        restricted to each party's support anticommute.
    block_weights : list of float or None
        For pure states passing both checks: the squared amplitudes of
        ``Psi = sum_j a_j |j j' j''> x |GHZ>`` in the frame where every
        ``P_i = 1 x X`` and ``Q_i = 1 x Y``.
    """
    if len(observables) != 3:
        raise ValueError("need observables for three parties")
    ops = [(np.asarray(P, dtype=complex), np.asarray(Q, dtype=complex)) for P, Q in observables]
    dims = [P.shape[0] for P, _ in ops]
    for (P, Q), d in zip(ops, dims):
        if Q.shape != (d, d) or d < 2:
            raise ValueError("each party needs two square observables of size at least 2")
        _sign_projectors(P), _sign_projectors(Q)
    rho = as_matrix(state)
    if rho.shape[0] != int(np.prod(dims)):
        raise ValueError("state dimension does not match the observables")
    sel = {"P": 0, "Q": 1}
    satisfies = True
    for settings, required in GHZ_REQUIRED.items():
        op = tensor(*[ops[k][sel[s]] for k, s in enumerate(settings)])
        if abs(np.real(np.trace(rho @ op)) - required) > SIGN_TOL:
            satisfies = False
    if not satisfies:
        return False, False, None

    anticommute_ok = True
    frames = []
    for k, (P, Q) in enumerate(ops):
        anti = P @ Q + Q @ P
        mats = [np.eye(d) for d in dims]
        mats[k] = anti
        full = tensor(*mats)
        if np.real(np.trace(full.conj().T @ full @ rho)) > SIGN_TOL:
            anticommute_ok = False
        red = _reduced_rho(rho, dims, k)
        S = _support_basis(red)
        p, q = S.conj().T @ P @ S, S.conj().T @ Q @ S
        if np.max(np.abs(p @ q + q @ p)) > 1e-7:
            anticommute_ok = False
        frames.append(_canonical_frame(P, Q, S))
    w, v = np.linalg.eigh(rho)
    pure = w[-1] > 1 - 1e-9
    if not (anticommute_ok and pure) or any(f is None for f in frames):
        return satisfies, anticommute_ok, None
    psi = v[:, -1]
    V = tensor(*frames)
    coords = V.conj().T @ psi  # factors (d1, 2), (d2, 2), (d3, 2)
    ds = [f.shape[1] // 2 for f in frames]
    t = coords.reshape(ds[0], 2, ds[1], 2, ds[2], 2).transpose(0, 2, 4, 1, 3, 5)
    t = t.reshape(int(np.prod(ds)), 8)
    ghz = ghz_state()
    chi = t @ ghz.conj()
    if np.max(np.abs(t - np.outer(chi, ghz))) > 1e-7:
        return satisfies, anticommute_ok, None
    weights = np.abs(chi) ** 2
    return satisfies, anticommute_ok, [float(x) for x in weights if x > 1e-12]


def _reduced_rho(rho: np.ndarray, dims: Sequence[int], keep: int) -> np.ndarray:
    t = rho.reshape(list(dims) * 2)
    n = len(dims)
    letters = "abcdefgh"
    left = [letters[i] for i in range(n)]
    right = [letters[i] if i != keep else "z" for i in range(n)]
    return np.einsum("".join(left) + "".join(right) + "->" + letters[keep] + "z", t)


def two_copy_ghz(weights: Sequence[float] = (0.5, 0.5)):
    """``sum_j sqrt(w_j) |j j j> x GHZ`` with party spaces ``C^d x C^2``.

    Returns ``(state, observables)`` ready for the checker.
    """
    w = np.asarray(weights, dtype=float)
    d = w.size
    ops = [(np.kron(np.eye(d), PAULI_X), np.kron(np.eye(d), PAULI_Y)) for _ in range(3)]
    g = ghz_state().reshape(2, 2, 2)
    psi = np.zeros((d, 2, d, 2, d, 2), dtype=complex)
    for j in range(d):
        psi[j, :, j, :, j, :] = math.sqrt(w[j]) * g
    return psi.ravel(), ops
