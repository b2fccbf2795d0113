"""Dense linear algebra for small Hilbert spaces.

States, composite systems, measurements, Neumark dilations and the
distance/entropy functionals that every other module builds on.  All
objects are immutable after construction and every function is pure.

Matrices are plain ``numpy`` complex arrays wrapped in light dataclasses
that check their invariants once, at construction time.  Most functions
accept either the wrapper or a raw array so that inner loops can skip the
validation cost.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.linalg import null_space

TOL = 1e-9
POST_STATE_CUTOFF = 1e-12

__all__ = [
    "TOL",
    "PureState",
    "DensityOperator",
    "PovmSet",
    "UnitaryOp",
    "FiniteDistribution",
    "ket",
    "projector",
    "as_matrix",
    "tensor",
    "partial_trace",
    "measure_povm",
    "dilate_povm",
    "apply_unitary",
    "controlled_unitary",
    "trace_distance",
    "relative_entropy",
    "hermitian_abs",
    "psd_sqrt",
    "random_density",
    "random_pure",
    "random_unitary",
    "random_povm",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "IDENTITY2",
]

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY2 = np.eye(2, dtype=complex)


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class PureState:
    """Normalised state vector.

    Parameters
    ----------
    amplitudes : array_like
        Complex amplitudes.  Their squared norm must be 1 within ``1e-9``.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex).ravel()
        if amp.size == 0:
            raise ValueError("a pure state needs at least one amplitude")
        norm = float(np.vdot(amp, amp).real)
        if abs(norm - 1.0) > TOL:
            raise ValueError(f"amplitudes have squared norm {norm}, expected 1")
        object.__setattr__(self, "amplitudes", _freeze(amp))

    @property
    def dim(self) -> int:
        return int(self.amplitudes.size)

    @classmethod
    def normalized(cls, amplitudes) -> "PureState":
        amp = np.asarray(amplitudes, dtype=complex).ravel()
        return cls(amp / np.linalg.norm(amp))

    def density(self) -> "DensityOperator":
        return DensityOperator(np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True)
class DensityOperator:
    """Hermitian, positive semidefinite, unit-trace matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > TOL:
            raise ValueError("density matrix is not Hermitian")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TOL:
            raise ValueError(f"density matrix has trace {tr}")
        if np.linalg.eigvalsh(m).min() < -TOL:
            raise ValueError("density matrix has a negative eigenvalue")
        object.__setattr__(self, "matrix", _freeze(m))

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    @classmethod
    def from_pure(cls, amplitudes) -> "DensityOperator":
        v = np.asarray(amplitudes, dtype=complex).ravel()
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()))

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityOperator":
        return cls(np.eye(dim, dtype=complex) / dim)


@dataclass(frozen=True)
class PovmSet:
    """Positive operators that sum to the identity."""

    elements: tuple

    def __post_init__(self):
        els = [np.asarray(e, dtype=complex) for e in self.elements]
        if not els:
            raise ValueError("a POVM needs at least one element")
        d = els[0].shape[0]
        total = np.zeros((d, d), dtype=complex)
        for e in els:
            if e.shape != (d, d):
                raise ValueError("POVM elements must share one square shape")
            if np.max(np.abs(e - e.conj().T)) > TOL:
                raise ValueError("POVM element is not Hermitian")
            if np.linalg.eigvalsh(e).min() < -TOL:
                raise ValueError("POVM element is not positive")
            total += e
        if np.max(np.abs(total - np.eye(d))) > TOL:
            raise ValueError("POVM elements do not sum to the identity")
        object.__setattr__(self, "elements", tuple(_freeze(e) for e in els))

    @property
    def dim(self) -> int:
        return int(self.elements[0].shape[0])

    def __len__(self) -> int:
        return len(self.elements)

    @classmethod
    def computational(cls, dim: int) -> "PovmSet":
        return cls(tuple(projector(ket(i, dim)) for i in range(dim)))

    @classmethod
    def from_basis(cls, vectors: Iterable) -> "PovmSet":
        return cls(tuple(projector(v) for v in vectors))


@dataclass(frozen=True)
class UnitaryOp:
    matrix: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.matrix, dtype=complex)
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise ValueError("unitary must be square")
        if np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))) > TOL:
            raise ValueError("matrix is not unitary")
        object.__setattr__(self, "matrix", _freeze(u))

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])


@dataclass(frozen=True)
class FiniteDistribution:
    """Probability vector over a labelled alphabet.

    Labels default to ``0..n-1``.
    """

    probs: np.ndarray
    labels: tuple = field(default=None)

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float).ravel()
        if p.size == 0:
            raise ValueError("empty distribution")
        if np.any(p < 0):
            raise ValueError("negative probability")
        if abs(p.sum() - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {p.sum()!r}")
        labels = tuple(range(p.size)) if self.labels is None else tuple(self.labels)
        if len(labels) != p.size or len(set(labels)) != len(labels):
            raise ValueError("labels must be distinct and match probs")
        p = p.copy()
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return int(self.probs.size)

    @classmethod
    def uniform(cls, n: int) -> "FiniteDistribution":
        return cls(np.full(n, 1.0 / n))


# ---------------------------------------------------------------------------
# small constructors


def ket(index: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def projector(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex).ravel()
    return np.outer(v, v.conj())


def as_matrix(x) -> np.ndarray:
    """Return the matrix of a density operator, pure state or raw array.

    Vectors are turned into rank-one projectors.
    """
    if isinstance(x, DensityOperator):
        return x.matrix
    if isinstance(x, PureState):
        return projector(x.amplitudes)
    a = np.asarray(x, dtype=complex)
    if a.ndim == 1:
        return projector(a)
    return a


def _elements(povm) -> Sequence[np.ndarray]:
    if isinstance(povm, PovmSet):
        return povm.elements
    return [np.asarray(e, dtype=complex) for e in povm]


# ---------------------------------------------------------------------------
# composite systems


def tensor(*parts):
    """Kronecker product of states of one kind.

    Pure states give a pure state, density operators a density operator.
    Raw arrays are combined with ``np.kron`` and returned as arrays.
    """
    if not parts:
        raise ValueError("tensor needs at least one operand")
    if all(isinstance(p, PureState) for p in parts):
        out = parts[0].amplitudes
        for p in parts[1:]:
            out = np.kron(out, p.amplitudes)
        return PureState(out)
    if all(isinstance(p, DensityOperator) for p in parts):
        out = parts[0].matrix
        for p in parts[1:]:
            out = np.kron(out, p.matrix)
        return DensityOperator(out)
    if any(isinstance(p, (PureState, DensityOperator)) for p in parts):
        raise TypeError("tensor operands must all be the same kind")
    out = np.asarray(parts[0], dtype=complex)
    for p in parts[1:]:
        out = np.kron(out, np.asarray(p, dtype=complex))
    return out


def partial_trace(rho, factor_dims: Sequence[int], keep: Iterable[int]):
    """Trace out every factor not listed in ``keep``.

    Parameters
    ----------
    rho : DensityOperator or ndarray
        State on the composite space ``factor_dims[0] x factor_dims[1] x ...``.
    factor_dims : sequence of int
        Dimensions of the tensor factors, in order.
    keep : iterable of int
        Indices of the factors to keep.  Their order in the result follows
        the order in ``factor_dims``.

    Returns
    -------
    DensityOperator or ndarray
        Same kind as the input.
    """
    wrap = isinstance(rho, DensityOperator)
    m = as_matrix(rho)
    dims = [int(d) for d in factor_dims]
    if any(d <= 0 for d in dims) or int(np.prod(dims)) != m.shape[0]:
        raise ValueError(f"factor dims {dims} do not match dimension {m.shape[0]}")
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("keep must be a nonempty set of factor indices")
    if keep[0] < 0 or keep[-1] >= len(dims):
        raise ValueError("keep index out of range")
    n = len(dims)
    t = m.reshape(dims + dims)
    traced = [k for k in range(n) if k not in keep]
    # trace pairs from the highest index down so axis numbers stay valid
    for k in sorted(traced, reverse=True):
        t = np.trace(t, axis1=k, axis2=k + t.ndim // 2)
    d = int(np.prod([dims[k] for k in keep]))
    out = t.reshape(d, d)
    return DensityOperator(out) if wrap else out


# ---------------------------------------------------------------------------
# measurement


def psd_sqrt(a: np.ndarray) -> np.ndarray:
    """Square root of a positive semidefinite matrix, negatives clamped."""
    w, v = np.linalg.eigh(a)
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def measure_povm(rho, povm):
    """Outcome distribution and post-measurement states.

    Returns
    -------
    dist : FiniteDistribution
    post : list
        ``sqrt(E) rho sqrt(E) / p`` for each outcome, or ``None`` where the
        outcome probability is at most ``1e-12``.
    """
    m = as_matrix(rho)
    els = _elements(povm)
    if els[0].shape[0] != m.shape[0]:
        raise ValueError("POVM and state dimensions differ")
    probs = np.array([np.real(np.trace(e @ m)) for e in els])
    probs = np.clip(probs, 0.0, None)
    post = []
    for e, p in zip(els, probs):
        if p <= POST_STATE_CUTOFF:
            post.append(None)
            continue
        s = psd_sqrt(e)
        out = s @ m @ s / p
        out = 0.5 * (out + out.conj().T)
        post.append(DensityOperator(out))
    total = probs.sum()
    if abs(total - 1.0) > TOL:
        raise ValueError(f"outcome probabilities sum to {total}")
    return FiniteDistribution(probs / total), post


def dilate_povm(povm) -> tuple[UnitaryOp, PovmSet]:
    """Neumark dilation of a POVM.

    The ancilla (dimension = number of outcomes) is the *first* tensor factor,
    so the unitary maps ``|0>_anc |psi>`` to ``sum_i |i>_anc sqrt(E_i)|psi>``.
    Measuring ``|i><i| (x) I`` afterwards reproduces the POVM statistics.

    Returns
    -------
    unitary : UnitaryOp
        On ancilla (x) system.
    projective : PovmSet
        Ancilla projectors lifted to the full space.
    """
    els = _elements(povm)
    k = len(els)
    d = els[0].shape[0]
    iso = np.vstack([psd_sqrt(e) for e in els])  # (k d) x d isometry
    comp = null_space(iso.conj().T)
    u = np.zeros((k * d, k * d), dtype=complex)
    # columns 0..d-1 are the inputs |0>_anc |j>
    u[:, :d] = iso
    u[:, d:] = comp
    projs = tuple(np.kron(projector(ket(i, k)), np.eye(d)) for i in range(k))
    return UnitaryOp(u), PovmSet(projs)


def apply_unitary(rho, unitary):
    """Conjugate a state by a unitary; keeps the input kind."""
    u = unitary.matrix if isinstance(unitary, UnitaryOp) else np.asarray(unitary)
    out = u @ as_matrix(rho) @ u.conj().T
    if isinstance(rho, DensityOperator):
        return DensityOperator(0.5 * (out + out.conj().T))
    return out


def controlled_unitary(unitaries: Sequence) -> np.ndarray:
    """Block-diagonal ``sum_k |k><k| (x) U_k`` with the control first."""
    mats = [u.matrix if isinstance(u, UnitaryOp) else np.asarray(u, dtype=complex)
            for u in unitaries]
    k = len(mats)
    d = mats[0].shape[0]
    out = np.zeros((k * d, k * d), dtype=complex)
    for i, u in enumerate(mats):
        out[i * d:(i + 1) * d, i * d:(i + 1) * d] = u
    return out


# ---------------------------------------------------------------------------
# distances and entropies


def hermitian_abs(a: np.ndarray) -> np.ndarray:
    """``|A|`` for Hermitian ``A`` through its eigendecomposition."""
    w, v = np.linalg.eigh(a)
    return (v * np.abs(w)) @ v.conj().T


def trace_distance(a, b) -> float:
    """Half the trace norm of ``a - b``.

    Works on density operators, pure states, raw matrices and (classically)
    on :class:`FiniteDistribution` pairs or 1-D probability arrays when both
    arguments are classical.
    """
    if isinstance(a, FiniteDistribution) or isinstance(b, FiniteDistribution):
        pa = a.probs if isinstance(a, FiniteDistribution) else np.asarray(a, float)
        pb = b.probs if isinstance(b, FiniteDistribution) else np.asarray(b, float)
        if pa.shape != pb.shape:
            raise ValueError("distributions have different alphabets")
        return 0.5 * float(np.abs(pa - pb).sum())
    ma, mb = as_matrix(a), as_matrix(b)
    if ma.shape != mb.shape:
        raise ValueError("states have different dimensions")
    # averaging both orders makes the result exactly symmetric in a and b
    total = 0.0
    for diff in (ma - mb, mb - ma):
        total += np.abs(np.linalg.eigvalsh(0.5 * (diff + diff.conj().T))).sum()
    return float(min(1.0, 0.25 * total))


def relative_entropy(rho, sigma) -> float:
    """Quantum relative entropy ``tr rho log rho - tr rho log sigma`` in bits.

    Returns ``inf`` when the support of ``rho`` is not inside that of
    ``sigma``.
    """
    r, s = as_matrix(rho), as_matrix(sigma)
    if r.shape != s.shape:
        raise ValueError("states have different dimensions")
    wr = np.linalg.eigvalsh(r)
    wr = wr[wr > TOL]
    neg_entropy = float(np.sum(wr * np.log2(wr)))
    ws, vs = np.linalg.eigh(s)
    diag = np.real(np.einsum("ij,jk,ki->i", vs.conj().T, r, vs))
    inside = ws > TOL
    if np.any(diag[~inside] > TOL):
        return float("inf")
    cross = float(np.sum(diag[inside] * np.log2(ws[inside])))
    return max(0.0, neg_entropy - cross)


# ---------------------------------------------------------------------------
# random instances (used by tests and property checks)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR with phase correction."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_pure(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random mixed state from a Ginibre matrix of the given rank."""
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    m = g @ g.conj().T
    return m / np.trace(m).real


def random_povm(dim: int, n_outcomes: int, rng: np.random.Generator) -> list[np.ndarray]:
    """Random POVM: positive operators normalised by ``S^{-1/2} . S^{-1/2}``."""
    raw = []
    for _ in range(n_outcomes):
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        raw.append(g @ g.conj().T)
    s = sum(raw)
    w, v = np.linalg.eigh(s)
    s_inv = (v / np.sqrt(w)) @ v.conj().T
    out = [s_inv @ e @ s_inv for e in raw]
    return [0.5 * (e + e.conj().T) for e in out]
