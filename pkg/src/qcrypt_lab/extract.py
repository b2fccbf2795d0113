"""Entropies, universal hashing and privacy-amplification bounds.

Classical Rényi and conditional min-entropies, whole-atom smoothing,
Toeplitz universal_2 hashing with exact or sampled extractor-distance
estimates, the amplification/reconciliation brackets and the conditional
min-entropy of classical-quantum states.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import toeplitz
from scipy.optimize import minimize
from scipy.signal import fftconvolve

from .qmath import FiniteDistribution, as_matrix

logger = logging.getLogger(__name__)

EXACT_WORK_LIMIT = 2 ** 22
DENSE_HASH_LIMIT = 1 << 20


# ---------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class JointDistribution:
    """``P(x, y)`` as a matrix with rows indexed by ``x``."""

    probs: np.ndarray
    x_alphabet: tuple = field(default=None)
    y_alphabet: tuple = field(default=None)

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.ndim == 1:
            p = p[:, None]
        if p.ndim != 2:
            raise ValueError("joint distribution must be a matrix")
        if np.any(p < 0):
            raise ValueError("negative probability")
        if abs(p.sum() - 1.0) > 1e-12:
            raise ValueError(f"joint probabilities sum to {p.sum()!r}")
        xs = tuple(range(p.shape[0])) if self.x_alphabet is None else tuple(self.x_alphabet)
        ys = tuple(range(p.shape[1])) if self.y_alphabet is None else tuple(self.y_alphabet)
        if len(xs) != p.shape[0] or len(ys) != p.shape[1]:
            raise ValueError("alphabet sizes do not match the matrix")
        p = p.copy()
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)
        object.__setattr__(self, "x_alphabet", xs)
        object.__setattr__(self, "y_alphabet", ys)

    @classmethod
    def trivial_side(cls, p) -> "JointDistribution":
        """Joint distribution with a single, uninformative ``y``."""
        probs = p.probs if isinstance(p, FiniteDistribution) else np.asarray(p, float)
        return cls(probs[:, None])

    def marginal_y(self) -> np.ndarray:
        return self.probs.sum(axis=0)


@dataclass(frozen=True, eq=False)
class BitString:
    """Finite bit sequence stored as a ``uint8`` array of 0/1."""

    bits: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.bits, dtype=np.uint8).ravel()
        if np.any(b > 1):
            raise ValueError("bits must be 0 or 1")
        b = b.copy()
        b.setflags(write=False)
        object.__setattr__(self, "bits", b)

    @property
    def length(self) -> int:
        return int(self.bits.size)

    def __len__(self) -> int:
        return self.length

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitString):
            return NotImplemented
        return bool(np.array_equal(self.bits, other.bits))

    def __hash__(self) -> int:
        return hash(self.bits.tobytes())

    def __xor__(self, other: "BitString") -> "BitString":
        if other.length != self.length:
            raise ValueError("length mismatch")
        return BitString(self.bits ^ other.bits)

    def __getitem__(self, item) -> "BitString":
        return BitString(self.bits[item])

    def to_int(self) -> int:
        return int("".join(map(str, self.bits)) or "0", 2)

    @classmethod
    def from_int(cls, value: int, length: int) -> "BitString":
        if length < 0 or value < 0 or value >> length:
            raise ValueError("value does not fit in the requested length")
        return cls(np.array([(value >> (length - 1 - k)) & 1 for k in range(length)], dtype=np.uint8))

    def to_hex(self) -> str:
        """Big-endian hex, left-padded to whole nibbles."""
        if self.length == 0:
            return ""
        width = (self.length + 3) // 4
        return format(self.to_int(), f"0{width}x")

    @classmethod
    def from_hex(cls, text: str, length: int | None = None) -> "BitString":
        text = text.strip().lower().removeprefix("0x")
        n = 4 * len(text) if length is None else length
        value = int(text, 16) if text else 0
        return cls.from_int(value, n)

    @classmethod
    def random(cls, length: int, rng: np.random.Generator) -> "BitString":
        return cls(rng.integers(0, 2, size=length, dtype=np.uint8))

    def concat(self, other: "BitString") -> "BitString":
        return BitString(np.concatenate([self.bits, other.bits]))


def seed_length(n: int, tau: int, modified: bool = False) -> int:
    """Number of random bits that select one hash from the family."""
    if not 0 <= tau <= n:
        raise ValueError("need 0 <= tau <= n")
    if modified:
        return max(n - 1, 0) if tau < n else 0
    return n + tau - 1 if tau > 0 else 0


@dataclass(frozen=True)
class ToeplitzSeed:
    """Random description of one member of a Toeplitz hash family.

    The standard family uses a full ``tau x n`` Toeplitz matrix and needs
    ``n + tau - 1`` bits.  With ``modified=True`` the matrix is
    ``[I_tau | T]`` with ``T`` a ``tau x (n - tau)`` Toeplitz block, which is
    still universal_2 but needs only ``n - 1`` bits.
    """

    n: int
    tau: int
    diagonal_bits: BitString
    modified: bool = False

    def __post_init__(self):
        if not isinstance(self.diagonal_bits, BitString):
            object.__setattr__(self, "diagonal_bits", BitString(self.diagonal_bits))
        need = seed_length(self.n, self.tau, self.modified)
        if self.diagonal_bits.length != need:
            raise ValueError(f"seed needs {need} bits, got {self.diagonal_bits.length}")

    def matrix(self) -> np.ndarray:
        """The ``tau x n`` GF(2) matrix as ``uint8``."""
        n, tau = self.n, self.tau
        d = self.diagonal_bits.bits
        if tau == 0:
            return np.zeros((0, n), dtype=np.uint8)
        if self.modified:
            width = n - tau
            ident = np.eye(tau, dtype=np.uint8)
            if width == 0:
                return ident
            block = _toeplitz_block(d, tau, width)
            return np.hstack([ident, block])
        return _toeplitz_block(d, tau, n)


def _toeplitz_block(d: np.ndarray, rows: int, cols: int) -> np.ndarray:
    # entry (k, j) = d[k - j + cols - 1]: constant along diagonals
    first_col = d[cols - 1:cols - 1 + rows]
    first_row = d[cols - 1::-1][:cols]
    return toeplitz(first_col, first_row).astype(np.uint8)


def toeplitz_hash(seed: ToeplitzSeed, x: BitString) -> BitString:
    """Multiply ``x`` by the seed's matrix over GF(2)."""
    if x.length != seed.n:
        raise ValueError(f"input has {x.length} bits, seed expects {seed.n}")
    n, tau = seed.n, seed.tau
    if n * tau <= DENSE_HASH_LIMIT:
        out = (seed.matrix().astype(np.int64) @ x.bits.astype(np.int64)) % 2
        return BitString(out)
    # long inputs: a Toeplitz product is a slice of a convolution
    d = seed.diagonal_bits.bits.astype(float)
    xb = x.bits.astype(float)
    if seed.modified:
        width = n - tau
        head = xb[:tau]
        tail = np.rint(fftconvolve(d, xb[tau:]))[width - 1:width - 1 + tau] if width else 0.0
        out = (head + tail).astype(np.int64) % 2
    else:
        out = np.rint(fftconvolve(d, xb))[n - 1:n - 1 + tau].astype(np.int64) % 2
    return BitString(out)


# ---------------------------------------------------------------------------
# entropies


def _probs(p) -> np.ndarray:
    return p.probs if isinstance(p, FiniteDistribution) else np.asarray(p, dtype=float)


def renyi_entropy(p, alpha: float) -> float:
    """Rényi entropy of order ``alpha`` in bits.

    ``alpha = 1`` is the Shannon limit, ``alpha = 0`` the log of the support
    size and ``alpha = inf`` the min-entropy.
    """
    if alpha < 0 or math.isnan(alpha):
        raise ValueError("alpha must be nonnegative")
    q = _probs(p)
    q = q[q > 0]
    if alpha == 0:
        return float(np.log2(q.size))
    if alpha == 1:
        return float(-np.sum(q * np.log2(q)))
    if math.isinf(alpha):
        return float(-np.log2(q.max()))
    return float(np.log2(np.sum(q ** alpha)) / (1.0 - alpha))


def conditional_min_entropy(j: JointDistribution) -> float:
    """``-log2 sum_y max_x P(x, y)``."""
    return float(-np.log2(j.probs.max(axis=0).sum()))


def _atoms(j: JointDistribution):
    py = j.marginal_y()
    xs, ys = np.nonzero(j.probs > 0)
    joint = j.probs[xs, ys]
    cond = joint / py[ys]
    return ys, joint, cond


def smooth_entropy(j: JointDistribution, epsilon: float, kind: str = "min") -> float:
    """Smooth conditional min- or max-entropy over whole-atom event sets.

    An event set keeps a subset of the atoms ``(x, y)`` whose removed joint
    mass is at most ``epsilon``.  Conditional values keep the original
    ``P(y)`` in the denominator.

    Parameters
    ----------
    j : JointDistribution
    epsilon : float
        Smoothing parameter in ``[0, 1)``.
    kind : {"min", "max"}
        ``"min"`` maximises ``-log max_y max_x P(x, Omega | y)``;
        ``"max"`` minimises ``log max_y |{x kept}|``.
    """
    if not 0 <= epsilon < 1:
        raise ValueError("epsilon must lie in [0, 1)")
    ys, joint, cond = _atoms(j)
    # small slack so removing exactly epsilon of mass is allowed
    budget = epsilon + 1e-15
    if kind == "min":
        order = np.argsort(-cond, kind="stable")
        removed = np.cumsum(joint[order])
        n_drop = int(np.searchsorted(removed, budget, side="right"))
        return float(-np.log2(cond[order][n_drop]))
    if kind == "max":
        per_y = {}
        for y, pj in zip(ys, joint):
            per_y.setdefault(int(y), []).append(pj)
        sorted_y = [np.sort(v) for v in per_y.values()]
        for k in range(1, max(v.size for v in sorted_y) + 1):
            cost = sum(v[: max(v.size - k, 0)].sum() for v in sorted_y)
            if cost <= budget:
                return float(np.log2(k))
        raise AssertionError("unreachable: keeping every atom costs nothing")
    raise ValueError("kind must be 'min' or 'max'")


def smooth_entropy_bruteforce(j: JointDistribution, epsilon: float, kind: str = "min") -> float:
    """Exhaustive search over every removable atom subset (small supports)."""
    ys, joint, cond = _atoms(j)
    m = joint.size
    if m > 20:
        raise ValueError("support too large for exhaustive search")
    best = -np.inf if kind == "min" else np.inf
    for mask in range(1 << m):
        drop = np.array([(mask >> k) & 1 for k in range(m)], dtype=bool)
        if joint[drop].sum() > epsilon + 1e-15 or drop.all():
            continue
        keep = ~drop
        if kind == "min":
            best = max(best, -np.log2(cond[keep].max()))
        else:
            counts = np.bincount(ys[keep])
            best = min(best, np.log2(counts.max()))
    return float(best)


def collision_uniformity(p) -> tuple[float, float]:
    """Collision probability and its bound on the distance from uniform."""
    q = _probs(p)
    size = q.size
    pc = float(np.sum(q ** 2))
    bound = 0.5 * math.sqrt(size) * math.sqrt(max(pc - 1.0 / size, 0.0))
    return pc, bound


# ---------------------------------------------------------------------------
# hashing as an extractor


def _parity_table(n: int) -> np.ndarray:
    t = np.zeros(1 << n, dtype=np.uint8)
    for b in range(n):
        t ^= ((np.arange(1 << n) >> b) & 1).astype(np.uint8)
    return t


def _row_masks(seed_ints: np.ndarray, n: int, tau: int, modified: bool) -> np.ndarray:
    """Integer masks of every matrix row for a batch of seeds.

    Input bit ``j`` (big-endian) sits at integer position ``n - 1 - j``.
    """
    L = seed_length(n, tau, modified)
    seed_bits = ((seed_ints[:, None] >> (L - 1 - np.arange(L))[None, :]) & 1).astype(np.int64)
    masks = np.zeros((seed_ints.size, tau), dtype=np.int64)
    if modified:
        width = n - tau
        for k in range(tau):
            masks[:, k] |= 1 << (n - 1 - k)
            for j in range(width):
                masks[:, k] |= seed_bits[:, k - j + width - 1] << (n - 1 - (tau + j))
    else:
        for k in range(tau):
            for j in range(n):
                masks[:, k] |= seed_bits[:, k - j + n - 1] << (n - 1 - j)
    return masks


def _hash_table(seed_ints, support, n, tau, modified):
    """Hash outputs (as integers) for every (seed, support element) pair."""
    parity = _parity_table(n)
    masks = _row_masks(np.asarray(seed_ints, dtype=np.int64), n, tau, modified)
    out = np.zeros((masks.shape[0], support.size), dtype=np.int64)
    for k in range(tau):
        out = (out << 1) | parity[masks[:, k, None] & support[None, :]]
    return out


def extractor_distance_mc(source, tau: int, trials: int = 4096, rng_seed: int = 0,
                          modified: bool = False) -> float:
    """Distance of (hash output, seed) from (uniform, seed).

    ``source`` is a distribution over ``n``-bit strings indexed by their
    big-endian integer value, so it has ``2**n`` entries.  All seeds are
    enumerated when ``#seeds x |support| <= 2**22``; otherwise ``trials``
    seeds are sampled with a generator seeded by ``rng_seed`` and the
    per-seed distances (each exact) are averaged.
    """
    probs = _probs(source)
    n = int(round(math.log2(probs.size)))
    if 1 << n != probs.size:
        raise ValueError("source must have 2**n entries")
    if not 0 <= tau <= n:
        raise ValueError("need 0 <= tau <= n")
    if trials < 1:
        raise ValueError("trials must be positive")
    if tau == 0:
        return 0.0
    support = np.nonzero(probs > 0)[0].astype(np.int64)
    weights = probs[support]
    L = seed_length(n, tau, modified)
    n_seeds = 1 << L
    if n_seeds * support.size <= EXACT_WORK_LIMIT:
        seeds = np.arange(n_seeds, dtype=np.int64)
    else:
        rng = np.random.default_rng(rng_seed)
        seeds = rng.integers(0, n_seeds, size=trials, dtype=np.int64)
        logger.debug("sampling %d of %d seeds", trials, n_seeds)
    total = 0.0
    n_out = 1 << tau
    chunk = max(1, EXACT_WORK_LIMIT // (4 * support.size))
    for start in range(0, seeds.size, chunk):
        batch = seeds[start:start + chunk]
        outs = _hash_table(batch, support, n, tau, modified)
        flat = (np.arange(batch.size)[:, None] * n_out + outs).ravel()
        hist = np.bincount(flat, weights=np.broadcast_to(weights, outs.shape).ravel(),
                           minlength=batch.size * n_out).reshape(batch.size, n_out)
        total += 0.5 * np.abs(hist - 1.0 / n_out).sum()
    return float(total / seeds.size)


def collision_fractions(n: int, tau: int, modified: bool = False) -> np.ndarray:
    """Fraction of seeds on which each distinct input pair collides.

    Returns a ``2**n x 2**n`` matrix (diagonal set to 0).  Linearity means
    ``h(x) = h(y)`` iff ``h(x ^ y) = 0``, but the pairs are checked
    directly rather than through that shortcut.
    """
    L = seed_length(n, tau, modified)
    inputs = np.arange(1 << n, dtype=np.int64)
    outs = _hash_table(np.arange(1 << L, dtype=np.int64), inputs, n, tau, modified)
    frac = np.zeros((1 << n, 1 << n))
    for x in range(1 << n):
        frac[x] = (outs == outs[:, x:x + 1]).mean(axis=0)
        frac[x, x] = 0.0
    return frac


# ---------------------------------------------------------------------------
# bound calculators


def leftover_hash_bound(kappa: float, tau: float) -> float:
    """``2^{-(kappa - tau)/2} / 2``."""
    return 0.5 * 2.0 ** (-(kappa - tau) / 2.0)


def max_extractable_length(kappa: float, epsilon: float) -> float:
    """Largest ``tau`` with ``leftover_hash_bound(kappa, tau) <= epsilon``."""
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    return kappa - 2.0 * math.log2(1.0 / (2.0 * epsilon))


def pa_ir_bounds(entropy: float, epsilon: float, epsilon1: float, epsilon2: float,
                 mode: str = "amplification", entropy_eps1: float | None = None
                 ) -> tuple[float, float]:
    """Brackets on extractable or encoding length.

    Parameters
    ----------
    entropy : float
        ``H_inf^eps(X|Z)`` for amplification or ``H_0^eps(X|Y)`` for
        reconciliation.
    epsilon, epsilon1, epsilon2 : float
        Smoothing parameters with ``epsilon = epsilon1 + epsilon2``.
    mode : {"amplification", "reconciliation"}
    entropy_eps1 : float, optional
        The same entropy smoothed with ``epsilon1``.  Defaults to ``entropy``.

    Returns
    -------
    (lower, upper) : tuple of float
        Amplification: ``(H^{eps1} - 2 log(1/eps2), H^eps)``.
        Reconciliation: ``(H^eps, H^{eps1} + log(1/eps2))``.
    """
    for e in (epsilon, epsilon1, epsilon2):
        if not 0 < e < 1:
            raise ValueError("smoothing parameters must lie in (0, 1)")
    if abs(epsilon - (epsilon1 + epsilon2)) > 1e-12:
        raise ValueError("epsilon must equal epsilon1 + epsilon2")
    h1 = entropy if entropy_eps1 is None else entropy_eps1
    if mode == "amplification":
        return h1 - 2.0 * math.log2(1.0 / epsilon2), entropy
    if mode == "reconciliation":
        return entropy, h1 + math.log2(1.0 / epsilon2)
    raise ValueError("mode must be 'amplification' or 'reconciliation'")


# ---------------------------------------------------------------------------
# classical-quantum min-entropy


@dataclass(frozen=True)
class CqState:
    """``sum_i P(i) |i><i| (x) rho_i`` with classical first register."""

    priors: FiniteDistribution
    side_states: tuple

    def __post_init__(self):
        priors = self.priors
        if not isinstance(priors, FiniteDistribution):
            priors = FiniteDistribution(np.asarray(priors, float))
        mats = tuple(as_matrix(s) for s in self.side_states)
        if len(mats) != len(priors):
            raise ValueError("one side state per classical value")
        if any(m.shape != mats[0].shape for m in mats):
            raise ValueError("side states must share one dimension")
        object.__setattr__(self, "priors", priors)
        object.__setattr__(self, "side_states", mats)

    @property
    def side_dim(self) -> int:
        return int(self.side_states[0].shape[0])

    def weighted(self) -> list[np.ndarray]:
        return [p * m for p, m in zip(self.priors.probs, self.side_states)]

    def side_marginal(self) -> np.ndarray:
        return sum(self.weighted())


def _pos_part(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    return (v * np.clip(w, 0.0, None)) @ v.conj().T


def cq_lambda(weighted: Sequence[np.ndarray], sigma: np.ndarray, tol: float = 1e-10) -> float:
    """Smallest ``lam`` with ``lam * sigma >= eta_i rho_i`` for all ``i``."""
    w, v = np.linalg.eigh(0.5 * (sigma + sigma.conj().T))
    keep = w > tol
    vk = v[:, keep]
    outside = np.eye(sigma.shape[0]) - vk @ vk.conj().T
    for a in weighted:
        if np.max(np.abs(outside @ a @ outside)) > tol:
            return math.inf
    s = vk / np.sqrt(w[keep])
    return float(max(np.linalg.eigvalsh(s.conj().T @ a @ s)[-1] for a in weighted))


def _herm_pack(h: np.ndarray) -> np.ndarray:
    iu = np.triu_indices(h.shape[0], 1)
    return np.concatenate([h.diagonal().real, h[iu].real, h[iu].imag])


def _herm_unpack(x: np.ndarray, d: int) -> np.ndarray:
    iu = np.triu_indices(d, 1)
    m = iu[0].size
    h = np.zeros((d, d), dtype=complex)
    h[iu] = x[d:d + m] + 1j * x[d + m:]
    h = h + h.conj().T
    h[np.diag_indices(d)] = x[:d]
    return h


def _minimize_lambda(weighted, start: np.ndarray, penalty: float = 10.0,
                     max_outer: int = 200, tol: float = 1e-12):
    """Augmented Lagrangian for ``min tr L  s.t.  L >= A_i``.

    The multipliers converge to an optimal guessing measurement, so their
    objective ``sum_i tr(Y_i A_i)`` is reported as a dual certificate.
    """
    d = start.shape[0]
    lam_mat = start.copy()
    ys = [np.eye(d, dtype=complex) / len(weighted) for _ in weighted]
    iu = np.triu_indices(d, 1)

    def objective(x):
        lm = _herm_unpack(x, d)
        val = np.trace(lm).real
        grad = np.eye(d, dtype=complex)
        for a, y in zip(weighted, ys):
            p = _pos_part(y - penalty * (lm - a))
            val += (np.sum(np.abs(p) ** 2) - np.sum(np.abs(y) ** 2)) / (2 * penalty)
            grad -= p
        g = np.concatenate([grad.diagonal().real, 2 * grad[iu].real, 2 * grad[iu].imag])
        return val, g

    for _ in range(max_outer):
        res = minimize(objective, _herm_pack(lam_mat), jac=True, method="L-BFGS-B",
                       options={"gtol": 1e-13, "ftol": 1e-16, "maxiter": 500})
        lam_mat = _herm_unpack(res.x, d)
        new = [_pos_part(y - penalty * (lam_mat - a)) for a, y in zip(weighted, ys)]
        shift = max(float(np.max(np.abs(a - b))) for a, b in zip(new, ys))
        ys = new
        if shift < tol:
            break
    dual = float(sum(np.trace(y @ a).real for y, a in zip(ys, weighted)))
    return lam_mat, dual


def cq_min_entropy(state: CqState, sigma=None, return_sigma: bool = False):
    """Conditional min-entropy of the classical register given the side.

    With ``sigma`` given, returns ``-log2 lam`` for the smallest ``lam`` with
    ``lam (1 (x) sigma) >= rho_AB``.  Without ``sigma``, the best ``sigma``
    (smallest ``lam``) is searched for; the starting point is the side
    marginal, which already certifies a nonnegative value.

    Parameters
    ----------
    state : CqState
    sigma : array_like, optional
    return_sigma : bool
        Also return the ``sigma`` that achieves the reported value.
    """
    weighted = state.weighted()
    if sigma is not None:
        s = as_matrix(sigma)
        if s.shape[0] != state.side_dim:
            raise ValueError("sigma has the wrong dimension")
        lam = cq_lambda(weighted, s)
        h = -math.inf if math.isinf(lam) else -math.log2(lam)
        return (h, s) if return_sigma else h
    if state.side_dim > 4:
        raise ValueError("optimisation over sigma is limited to side dimension <= 4")
    rho_b = state.side_marginal()
    best_sigma, best_lam = rho_b, cq_lambda(weighted, rho_b)
    lam_mat, dual = _minimize_lambda(weighted, rho_b)
    cand = _pos_part(lam_mat)
    tr = np.trace(cand).real
    if tr > 0:
        cand = cand / tr
        lam = cq_lambda(weighted, cand)
        if lam < best_lam:
            best_sigma, best_lam = cand, lam
    logger.debug("cq min-entropy: primal %.3e dual %.3e", best_lam, dual)
    h = -math.log2(best_lam)
    return (h, best_sigma) if return_sigma else h


def all_bitstrings(n: int) -> list[BitString]:
    return [BitString(bits) for bits in itertools.product((0, 1), repeat=n)]
