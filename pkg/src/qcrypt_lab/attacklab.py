"""Cheating on ideal two-party computation boxes.

An ideal box takes Alice's input ``i`` and Bob's input ``j`` and hands out
the output ``k``.  Alice may feed a superposition of inputs instead of a
basis state; tracing out Bob's side leaves her one of several states that
depend on ``j``, and a good measurement on them can beat every honest
strategy at guessing ``j``.

Tables
------
Every table is turned into ``probs[i, j, k] = P(k | i, j)``.  A
deterministic table is written the way it is usually displayed: rows are
Bob's inputs ``j`` and columns are Alice's inputs ``i``, so
``outputs[j, i] = f(i, j)``.  A 2x2 probabilistic table holds
``p[i, j] = P(0 | i, j)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .discrim import (Ensemble, check_optimality, guess_probability, helstrom,
                      square_root_measurement)
from .qmath import DensityOperator, FiniteDistribution, PovmSet, projector

THM3_TOL = 1e-10
NEAR_ONE = (1 - 1e-2, 1 - 1e-3, 1 - 1e-4)


class InvalidTable(ValueError):
    """Table fails the conditions an attack is defined for."""


@dataclass(frozen=True)
class DetFunctionTable:
    """Deterministic function; ``outputs[j, i] = f(i, j)``."""

    outputs: np.ndarray

    def __post_init__(self):
        out = np.array(self.outputs, dtype=np.int64)
        if out.ndim != 2:
            raise ValueError("outputs must be a matrix")
        if out.min() < 0:
            raise ValueError("output labels start at 0")
        out.setflags(write=False)
        object.__setattr__(self, "outputs", out)

    @property
    def shape(self) -> tuple[int, int]:
        return self.outputs.shape

    def f(self, i: int, j: int) -> int:
        return int(self.outputs[j, i])

    @property
    def alphabet(self) -> int:
        return int(self.outputs.max()) + 1

    def as_probs(self) -> np.ndarray:
        rows, cols = self.shape
        probs = np.zeros((cols, rows, self.alphabet))
        for j in range(rows):
            for i in range(cols):
                probs[i, j, self.outputs[j, i]] = 1.0
        return probs

    def cond1(self) -> bool:
        """Potentially concealing: each row and column repeats some value."""
        lines = list(self.outputs) + list(self.outputs.T)
        return all(len(set(line.tolist())) < len(line) for line in lines)

    def cond2(self) -> bool:
        """Non-degenerate: all rows distinct and all columns distinct."""
        rows = {tuple(r) for r in self.outputs.tolist()}
        cols = {tuple(c) for c in self.outputs.T.tolist()}
        return len(rows) == self.shape[0] and len(cols) == self.shape[1]

    def __eq__(self, other):
        return isinstance(other, DetFunctionTable) and np.array_equal(self.outputs, other.outputs)

    def __hash__(self):
        return hash(self.outputs.tobytes())


@dataclass(frozen=True)
class ProbFunctionTable:
    """2x2 probabilistic function; ``p[i, j]`` is the chance of output 0."""

    p: np.ndarray

    def __post_init__(self):
        p = np.array(self.p, dtype=float)
        if p.shape != (2, 2):
            raise ValueError("p must be 2x2")
        if p.min() < 0 or p.max() > 1:
            raise ValueError("entries must lie in [0, 1]")
        p.setflags(write=False)
        object.__setattr__(self, "p", p)

    @classmethod
    def from_entries(cls, p00, p01, p10, p11) -> "ProbFunctionTable":
        return cls(np.array([[p00, p01], [p10, p11]]))

    def as_probs(self) -> np.ndarray:
        return np.stack([self.p, 1.0 - self.p], axis=2)


def _probs(table) -> np.ndarray:
    if isinstance(table, (DetFunctionTable, ProbFunctionTable)):
        return table.as_probs()
    probs = np.asarray(table, dtype=float)
    if probs.ndim != 3 or np.any(np.abs(probs.sum(axis=2) - 1) > 1e-9):
        raise ValueError("expected probs[i, j, k] summing to 1 over k")
    return probs


def _prior(prior, n: int) -> np.ndarray:
    if prior is None:
        return np.full(n, 1.0 / n)
    if isinstance(prior, FiniteDistribution):
        eta = prior.probs
    else:
        eta = FiniteDistribution(np.asarray(prior, dtype=float)).probs
    if eta.size != n:
        raise ValueError("prior does not match Bob's input count")
    return eta


# ---------------------------------------------------------------------------
# box outputs and guessing values


def box_output_state(table, amplitudes, j: int, sided: str = "two") -> DensityOperator:
    """Alice's state after the box when she feeds ``sum_i a_i |i>``.

    Two-sided: both parties get a copy of the output, so Alice holds
    ``sum_k (sum_i a_i sqrt(P(k|i,j)) |i, k>)`` with the ``k`` branches
    decohered by Bob's copy.  One-sided: only Alice gets the output and her
    state is the pure ``sum_i a_i |i> (sum_k sqrt(P(k|i,j)) |k>)``.
    Ordering of factors is input register, then output register.
    """
    probs = _probs(table)
    n_i, _, K = probs.shape
    a = np.asarray(amplitudes, dtype=complex)
    if a.shape != (n_i,):
        raise ValueError("one amplitude per Alice input is required")
    if abs(np.vdot(a, a).real - 1.0) > 1e-9:
        raise ValueError("amplitudes must be normalised")
    amp = np.sqrt(probs[:, j, :])  # (i, k)
    if sided == "two":
        rho = np.zeros((n_i * K, n_i * K), dtype=complex)
        for k in range(K):
            v = np.zeros(n_i * K, dtype=complex)
            v[np.arange(n_i) * K + k] = a * amp[:, k]
            rho += np.outer(v, v.conj())
        return DensityOperator(rho)
    if sided == "one":
        v = (a[:, None] * amp).ravel()
        return DensityOperator(np.outer(v, v.conj()))
    raise ValueError("sided must be 'one' or 'two'")


def output_ensemble(table, amplitudes, prior=None, sided: str = "two") -> Ensemble:
    """States ``rho_j`` for every Bob input ``j`` with prior ``eta``."""
    probs = _probs(table)
    eta = _prior(prior, probs.shape[1])
    states = [box_output_state(probs, amplitudes, j, sided).matrix for j in range(probs.shape[1])]
    keep = eta > 0  # zero-prior inputs are dropped from the ensemble
    return Ensemble.of([s for s, k in zip(states, keep) if k], eta[keep])


def honest_best(table, prior=None) -> float:
    """``max_i sum_k max_j eta_j P(k | i, j)``: best basis input and best guess."""
    probs = _probs(table)
    eta = _prior(prior, probs.shape[1])
    per_input = (probs * eta[None, :, None]).max(axis=1).sum(axis=1)
    return float(per_input.max())


def superposed_input(n: int, support: Sequence[int] | None = None) -> np.ndarray:
    """Uniform superposition over ``support`` (default all ``n`` inputs)."""
    support = range(n) if support is None else support
    a = np.zeros(n, dtype=complex)
    a[list(support)] = 1.0
    return a / np.linalg.norm(a)


def srm_cheat(table: DetFunctionTable, prior=None, check: bool = True) -> tuple[float, PovmSet]:
    """Square-root measurement after feeding the uniform superposition.

    Returns the guessing probability and the measurement.
    """
    if check:
        valid, _, _ = validate_and_canonicalize(table)
        if not valid:
            raise InvalidTable("table fails the concealing or non-degeneracy condition")
    probs = _probs(table)
    ens = output_ensemble(probs, superposed_input(probs.shape[0]), prior)
    povm = square_root_measurement(ens)
    return guess_probability(ens, povm), povm


# ---------------------------------------------------------------------------
# canonical forms of 3x3 deterministic tables


@dataclass(frozen=True)
class TableTransform:
    """``canonical[j, i] = relabel[f[row_perm[j], col_perm[i]]]``."""

    row_perm: tuple
    col_perm: tuple
    relabel: tuple

    def apply(self, outputs: np.ndarray) -> np.ndarray:
        out = np.asarray(outputs)[np.ix_(self.row_perm, self.col_perm)]
        return np.asarray(self.relabel)[out]

    def invert(self, canonical: np.ndarray) -> np.ndarray:
        canonical = np.asarray(canonical)
        inv_label = np.argsort(self.relabel)
        f = np.empty_like(canonical)
        f[np.ix_(self.row_perm, self.col_perm)] = inv_label[canonical]
        return f


def _is_tab1(t: np.ndarray) -> bool:
    """Column 0 is (0,0,1), column 1 is (a,b,b) with a != b and a=0 or b in {0,1}."""
    if tuple(t[:, 0]) != (0, 0, 1):
        return False
    a, b, b2 = t[:, 1]
    return b == b2 and a != b and (a == 0 or b == 0 or b == 1)


def _labels_consecutive(t: np.ndarray) -> bool:
    used = np.unique(t)
    return used[0] == 0 and used[-1] == used.size - 1


def validate_and_canonicalize(table: DetFunctionTable):
    """Check the two conditions and bring a 3x3 table to its standard form.

    Returns
    -------
    valid : bool
    canonical : DetFunctionTable or None
        Lexicographically smallest table of the standard form (column 0
        ``(0, 0, 1)``, column 1 ``(a, b, b)``, ``a != b`` and ``a = 0`` or
        ``b = 0`` or ``b = 1``) reachable by permuting rows and columns
        and relabelling outputs.
    transform : TableTransform or None
        Maps the input table to ``canonical``.
    """
    if not isinstance(table, DetFunctionTable):
        table = DetFunctionTable(table)
    if table.shape != (3, 3):
        raise ValueError("only 3x3 tables are handled")
    if not (table.cond1() and table.cond2()):
        return False, None, None
    f = table.outputs
    labels = np.unique(f)
    best = None
    for rp in itertools.permutations(range(3)):
        for cp in itertools.permutations(range(3)):
            moved = f[np.ix_(rp, cp)]
            for target in itertools.permutations(range(labels.size)):
                relabel = np.zeros(int(f.max()) + 1, dtype=np.int64)
                relabel[labels] = target
                cand = relabel[moved]
                if not _is_tab1(cand):
                    continue
                key = tuple(cand.ravel())
                if best is None or key < best[0]:
                    best = (key, cand, TableTransform(rp, cp, tuple(int(x) for x in relabel)))
    if best is None:
        raise AssertionError("valid table without a standard form")
    return True, DetFunctionTable(best[1]), best[2]


def _canonical_codes(tables: np.ndarray) -> np.ndarray:
    """Lex-min code of each table (rows of 9 entries) under the symmetry group.

    For every row/column permutation, outputs are relabelled by order of
    first appearance, which is the smallest relabelling lexicographically.
    """
    T = tables.shape[0]
    best = None
    weights = 4 ** np.arange(8, -1, -1)
    for rp in itertools.permutations(range(3)):
        for cp in itertools.permutations(range(3)):
            idx = np.array([r * 3 + c for r in rp for c in cp])
            moved = tables[:, idx]
            mapping = np.full((T, 4), -1, dtype=np.int64)
            nxt = np.zeros(T, dtype=np.int64)
            out = np.empty_like(moved)
            rows = np.arange(T)
            for pos in range(9):
                v = moved[:, pos]
                fresh = mapping[rows, v] < 0
                mapping[rows[fresh], v[fresh]] = nxt[fresh]
                nxt += fresh
                out[:, pos] = mapping[rows, v]
            code = out @ weights
            best = code if best is None else np.minimum(best, code)
    return best


def _decode(code: int) -> np.ndarray:
    digits = [(code >> (2 * (8 - p))) & 3 for p in range(9)]
    return np.array(digits, dtype=np.int64).reshape(3, 3)


def enumerate_canonical_tables(max_output_alphabet: int = 4) -> list[DetFunctionTable]:
    """Every 3x3 table with cond1 and cond2, one per symmetry class."""
    if not 1 <= max_output_alphabet <= 4:
        raise ValueError("alphabet must lie in 1..4")
    K = max_output_alphabet
    grid = np.array(list(itertools.product(range(K), repeat=9)), dtype=np.int64)
    codes = np.unique(_canonical_codes(grid))
    out = []
    for code in codes.tolist():
        t = DetFunctionTable(_decode(code))
        if t.cond1() and t.cond2():
            out.append(t)
    return out


# ---------------------------------------------------------------------------
# the honest operators on the two-input superposition


def tab1_honest_operators(a: int, b: int, alphas: Sequence[float]) -> list[np.ndarray]:
    """Operators E_0, E_1, E_2 that combine the basis outcomes ``|i k>``.

    Acts on input register ``{0, 1}`` times output register of size 4.
    ``alphas`` holds the five free weights.
    """
    a1, a2, a3, a4, a5 = alphas
    K = 4

    def P(i, k):
        return projector(np.eye(2 * K)[i * K + k])

    e0 = a1 * P(0, 0) + sum(float(a == k) * P(1, k) for k in range(4))
    e1 = (1 - a1) * P(0, 0) + sum(w * float(b == k) * P(1, k)
                                   for k, w in zip(range(4), (a2, a3, a4, a5)))
    e2 = np.eye(2 * K) - e0 - e1
    return [e0, e1, e2]


def tab1_states(a: int, b: int) -> list[np.ndarray]:
    """Alice's states for the standard-form table when she feeds ``(|0>+|1>)/sqrt 2``.

    Only columns 0 and 1 matter, so the unspecified column is filled with
    zeros; the output register has size 4.
    """
    t = np.zeros((3, 3), dtype=np.int64)
    t[:, 0] = (0, 0, 1)
    t[:, 1] = (a, b, b)
    probs = np.zeros((2, 3, 4))
    for j in range(3):
        for i in range(2):
            probs[i, j, t[j, i]] = 1.0
    amps = np.array([1.0, 1.0]) / math.sqrt(2.0)
    return [box_output_state(probs, amps, j).matrix for j in range(3)]


def honest_operators_optimal(a: int, b: int, grid: int = 11, prior=None) -> tuple[bool, float]:
    """Whether any grid choice of the free weights makes E_0..E_2 optimal.

    Only weights that multiply a nonzero projector are varied; the others
    are fixed at 0.  Returns ``(any_optimal, smallest_violation)``.
    """
    ens = Ensemble.of(tab1_states(a, b), None if prior is None else prior)
    levels = np.linspace(0.0, 1.0, grid)
    active = [True, b == 0, b == 1, b == 2, b == 3]
    axes = [levels if on else [0.0] for on in active]
    smallest = math.inf
    for alphas in itertools.product(*axes):
        ok, worst = check_optimality(ens, tab1_honest_operators(a, b, alphas))
        smallest = min(smallest, worst)
        if ok:
            return True, worst
    return False, smallest


def honest_value_tab1(a: int, b: int, alphas=(0.5,) * 5) -> float:
    """Guessing value of the combined basis measurement on the superposition."""
    ens = Ensemble.of(tab1_states(a, b))
    return guess_probability(ens, tab1_honest_operators(a, b, alphas))


def sweep_3x3(max_output_alphabet: int = 4, prior=None, grid: int = 11) -> list[dict]:
    """Honest value, SRM value and honest-operator optimality for every class.

    Rows are ordered by canonical code and carry ``canonical_id``, ``a``,
    ``b``, ``free_entries`` (column 2, top to bottom), ``p_h``, ``p_srm``,
    ``gap`` and ``honest_optimal``.
    """
    rows = []
    cache: dict = {}
    for cid, t in enumerate(enumerate_canonical_tables(max_output_alphabet)):
        _, canon, _ = validate_and_canonicalize(t)
        c = canon.outputs
        a, b = int(c[0, 1]), int(c[1, 1])
        if (a, b) not in cache:
            cache[(a, b)] = honest_operators_optimal(a, b, grid)[0]
        p_h = honest_best(canon, prior)
        p_srm, _ = srm_cheat(canon, prior, check=False)
        rows.append({"canonical_id": cid, "a": a, "b": b,
                     "free_entries": "".join(str(v) for v in c[:, 2]),
                     "p_h": p_h, "p_srm": p_srm, "gap": p_srm - p_h,
                     "honest_optimal": cache[(a, b)]})
    return rows


# ---------------------------------------------------------------------------
# 2x2 probabilistic functions


def thm3_eigenvalues(table: ProbFunctionTable, eta0: float) -> tuple[float, float, float, float]:
    """Closed-form spectrum ``(lambda_+, lambda_-, mu_+, mu_-)`` of ``eta0 rho0 - eta1 rho1``."""
    p = table.p
    eta1 = 1.0 - eta0

    def pair(q):
        a = (q[0, 0] + q[1, 0]) * eta0 - (q[0, 1] + q[1, 1]) * eta1
        b = 4.0 * (math.sqrt(q[0, 1] * q[1, 0]) - math.sqrt(q[0, 0] * q[1, 1])) ** 2 * eta0 * eta1
        r = math.sqrt(a * a + b)
        return 0.25 * (a + r), 0.25 * (a - r)

    lp, lm = pair(p)
    mp, mm = pair(1.0 - p)
    return lp, lm, mp, mm


def helstrom_cheat_2x2(table: ProbFunctionTable, eta0: float, sided: str = "two"):
    """Best guessing value of Bob's input after Alice's attack.

    Two-sided: Alice feeds ``(|0>+|1>)/sqrt 2``; returns ``(p_c, lambdas)``
    with the closed-form spectrum.  One-sided: Alice feeds a basis state
    (the better of the two) and ``lambdas`` is ``None``.
    """
    prior = np.array([eta0, 1.0 - eta0])
    if sided == "two":
        ens = output_ensemble(table, superposed_input(2), prior)
        if len(ens) < 2:
            return 1.0, thm3_eigenvalues(table, eta0)
        value, _ = helstrom(ens)
        return value, thm3_eigenvalues(table, eta0)
    if sided == "one":
        best = 0.0
        for i in (0, 1):
            ens = output_ensemble(table, np.eye(2)[i], prior, sided="one")
            best = max(best, 1.0 if len(ens) < 2 else helstrom(ens)[0])
        return best, None
    raise ValueError("sided must be 'one' or 'two'")


def thm3_default_grid() -> np.ndarray:
    return np.concatenate([np.linspace(0.0, 1.0, 201), NEAR_ONE])


def thm3_scan(table: ProbFunctionTable, grid=None):
    """Look for a prior at which the two-sided attack beats honesty.

    Returns ``(found, eta_star)`` where ``eta_star`` maximises
    ``p_c - p_h`` over the grid among points with a gap above
    ``THM3_TOL``, or ``None``.
    """
    grid = thm3_default_grid() if grid is None else np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("grid must be nonempty")
    best_gap, best_eta = 0.0, None
    for eta0 in grid:
        gap = helstrom_cheat_2x2(table, float(eta0))[0] - honest_best(table, [eta0, 1 - eta0])
        if gap > THM3_TOL and gap > best_gap:
            best_gap, best_eta = gap, float(eta0)
    return best_eta is not None, best_eta


def is_thm3_exception(table: ProbFunctionTable, tol: float = 1e-12) -> bool:
    p = table.p
    one = abs(p[0, 0] - p[1, 0]) <= tol and abs(p[0, 1] - p[1, 1]) <= tol
    two = abs(p[0, 0] - p[0, 1]) <= tol and abs(p[1, 0] - p[1, 1]) <= tol
    return one or two


def one_sided_check(table: ProbFunctionTable, i: int, eta0: float):
    """Is measuring Alice's output qubit in the computational basis optimal?

    Alice feeds the basis input ``i``.  The measurement guesses ``j = k``
    or ``j = 1 - k`` from outcome ``k``; it counts as optimal if either
    labelling satisfies the optimality conditions.  Returns
    ``(basis_optimal, p_best)`` with ``p_best`` the Helstrom value.
    """
    prior = np.array([eta0, 1.0 - eta0])
    amp = np.sqrt(_probs(table)[i])  # output qubit for each j; the input register is |i>
    ens = Ensemble.of([amp[0], amp[1]], prior)
    p_best, _ = helstrom(ens)
    z0, z1 = projector(np.array([1.0, 0.0])), projector(np.array([0.0, 1.0]))
    optimal = any(check_optimality(ens, els)[0] for els in ([z0, z1], [z1, z0]))
    return optimal, p_best


# ---------------------------------------------------------------------------
# oblivious transfer


def ot_table() -> np.ndarray:
    """``probs[0, b, k]``: the receiver's outcome ``k`` in ``(0, 1, ?)`` given bit ``b``."""
    return np.array([[[0.5, 0.0, 0.5], [0.0, 0.5, 0.5]]])


OT_E0 = np.array([[2 + math.sqrt(3), -1, 1 + math.sqrt(3)],
                  [-1, 2 - math.sqrt(3), 1 - math.sqrt(3)],
                  [1 + math.sqrt(3), 1 - math.sqrt(3), 2]]) / 6.0


def ot_demo() -> dict:
    """Honest and attacking guess values for the sender's bit."""
    probs = ot_table()
    ens = output_ensemble(probs, np.array([1.0]), sided="one")
    value, povm = helstrom(ens)
    optimal, _ = check_optimality(ens, povm)
    return {"honest": honest_best(probs), "attack": value, "povm": povm,
            "e0_error": float(np.max(np.abs(povm.elements[0] - OT_E0))), "optimal": optimal}
