"""Quantum state discrimination.

Two-state optimum (Helstrom), the square-root ("pretty good") measurement,
the generic guessing functional and a checker for the necessary and
sufficient optimality conditions of a minimum-error measurement.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .qmath import DensityOperator, FiniteDistribution, PovmSet, as_matrix

ZERO_EIG_TOL = 1e-12
SRM_CUTOFF = 1e-10
OPTIMALITY_TOL = 1e-7


@dataclass(frozen=True)
class Ensemble:
    """States ``rho_i`` prepared with prior probabilities ``eta_i``.

    ``states`` may hold density operators, pure-state vectors or raw
    matrices; they are normalised to a tuple of complex matrices.
    """

    priors: FiniteDistribution
    states: tuple

    def __post_init__(self):
        priors = self.priors
        if not isinstance(priors, FiniteDistribution):
            priors = FiniteDistribution(np.asarray(priors, dtype=float))
        mats = tuple(as_matrix(s) for s in self.states)
        if len(mats) != len(priors):
            raise ValueError("one state per prior is required")
        d = mats[0].shape
        if any(m.shape != d for m in mats):
            raise ValueError("ensemble states must share one dimension")
        object.__setattr__(self, "priors", priors)
        object.__setattr__(self, "states", mats)

    @property
    def eta(self) -> np.ndarray:
        return self.priors.probs

    @property
    def dim(self) -> int:
        return int(self.states[0].shape[0])

    def __len__(self) -> int:
        return len(self.states)

    @classmethod
    def of(cls, states: Sequence, priors=None) -> "Ensemble":
        n = len(states)
        p = np.full(n, 1.0 / n) if priors is None else np.asarray(priors, dtype=float)
        return cls(FiniteDistribution(p), tuple(states))

    def validated(self) -> "Ensemble":
        """Raise if any state is not a valid density operator."""
        for m in self.states:
            DensityOperator(m)
        return self


def _elements(povm):
    return povm.elements if isinstance(povm, PovmSet) else [np.asarray(e, complex) for e in povm]


def guess_probability(ensemble: Ensemble, povm) -> float:
    """``sum_i eta_i tr(E_i rho_i)``."""
    els = _elements(povm)
    if len(els) != len(ensemble):
        raise ValueError("POVM size does not match the ensemble")
    if els[0].shape[0] != ensemble.dim:
        raise ValueError("POVM and ensemble dimensions differ")
    return float(sum(eta * np.real(np.trace(e @ rho))
                     for eta, e, rho in zip(ensemble.eta, els, ensemble.states)))


def helstrom(ensemble: Ensemble) -> tuple[float, PovmSet]:
    """Optimal two-state discrimination.

    Returns
    -------
    value : float
        ``(1 + tr|eta_0 rho_0 - eta_1 rho_1|) / 2``.
    povm : PovmSet
        Projector onto the positive eigenspace of the weighted difference,
        and its complement.  Zero eigenvalues go to the second outcome.
    """
    if len(ensemble) != 2:
        raise ValueError("helstrom needs exactly two states")
    eta0, eta1 = ensemble.eta
    diff = eta0 * ensemble.states[0] - eta1 * ensemble.states[1]
    diff = 0.5 * (diff + diff.conj().T)
    w, v = np.linalg.eigh(diff)
    pos = w > ZERO_EIG_TOL
    e0 = v[:, pos] @ v[:, pos].conj().T
    e1 = np.eye(ensemble.dim) - e0
    value = 0.5 * (1.0 + float(np.abs(w).sum()))
    return value, PovmSet((e0, e1))


def square_root_measurement(ensemble: Ensemble) -> PovmSet:
    """``E_j = S^{-1/2} eta_j rho_j S^{-1/2}`` with ``S = sum_j eta_j rho_j``.

    The inverse square root is taken on the support of ``S``; the projector
    onto its kernel is added to element 0 so the elements sum to identity.
    """
    weighted = [eta * rho for eta, rho in zip(ensemble.eta, ensemble.states)]
    s = sum(weighted)
    s = 0.5 * (s + s.conj().T)
    w, v = np.linalg.eigh(s)
    keep = w > SRM_CUTOFF
    vk = v[:, keep]
    s_inv_half = (vk / np.sqrt(w[keep])) @ vk.conj().T
    els = [s_inv_half @ m @ s_inv_half for m in weighted]
    els = [0.5 * (e + e.conj().T) for e in els]
    kernel = np.eye(ensemble.dim) - vk @ vk.conj().T
    els[0] = els[0] + kernel
    return PovmSet(tuple(els))


def check_optimality(ensemble: Ensemble, povm, tol: float = OPTIMALITY_TOL) -> tuple[bool, float]:
    """Minimum-error optimality conditions for a measurement.

    Checks, for all pairs ``j, l``::

        E_j (eta_j rho_j - eta_l rho_l) E_l = 0
        sum_j E_j eta_j rho_j - eta_l rho_l >= 0

    Returns
    -------
    optimal : bool
        Whether both families hold within ``tol``.
    max_violation : float
        Largest absolute entry of the first family or most negative
        eigenvalue (as a positive number) of the second.
    """
    els = _elements(povm)
    n = len(ensemble)
    if len(els) != n:
        raise ValueError("POVM size does not match the ensemble")
    if els[0].shape[0] != ensemble.dim:
        raise ValueError("POVM and ensemble dimensions differ")
    weighted = [eta * rho for eta, rho in zip(ensemble.eta, ensemble.states)]
    worst = 0.0
    for j in range(n):
        for l in range(j + 1, n):
            op = els[j] @ (weighted[j] - weighted[l]) @ els[l]
            worst = max(worst, float(np.max(np.abs(op))))
    gamma = sum(e @ w for e, w in zip(els, weighted))
    gamma = 0.5 * (gamma + gamma.conj().T)
    for l in range(n):
        low = float(np.linalg.eigvalsh(gamma - weighted[l]).min())
        worst = max(worst, -low)
    return worst <= tol, worst
