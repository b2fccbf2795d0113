"""Independent reference computations used by the tests.

Nothing here imports the package's algorithms: each function is a slow,
direct computation (loops, enumeration, a generic SDP solver) meant to
catch mistakes in the fast paths.
"""

import itertools
import math

import numpy as np


def helstrom_value(eta0, rho0, rho1):
    """``(1 + ||eta0 rho0 - eta1 rho1||_1) / 2`` via singular values."""
    gamma = eta0 * rho0 - (1 - eta0) * rho1
    return 0.5 * (1 + np.linalg.svd(gamma, compute_uv=False).sum())


def partial_trace_loops(rho, dA, dB, keep_first=True):
    out = np.zeros((dA, dA) if keep_first else (dB, dB), dtype=complex)
    for i in range(dA):
        for j in range(dA):
            for k in range(dB):
                for l in range(dB):
                    v = rho[i * dB + k, j * dB + l]
                    if keep_first and k == l:
                        out[i, j] += v
                    elif not keep_first and i == j:
                        out[k, l] += v
    return out


def toeplitz_matrix_loops(d, n, tau):
    """Entry ``(k, j) = d[k - j + n - 1]``."""
    return np.array([[d[k - j + n - 1] for j in range(n)] for k in range(tau)], dtype=int)


def modified_toeplitz_loops(d, n, tau):
    width = n - tau
    m = np.zeros((tau, n), dtype=int)
    for k in range(tau):
        m[k, k] = 1
        for j in range(width):
            m[k, tau + j] = d[k - j + width - 1]
    return m


def gf2_apply(m, x):
    return [sum(int(a) * int(b) for a, b in zip(row, x)) % 2 for row in m]


def smooth_min_entropy_subsets(joint, epsilon):
    """Maximise over every atom subset removable within ``epsilon``."""
    joint = np.asarray(joint, float)
    py = joint.sum(axis=0)
    atoms = [(x, y) for x in range(joint.shape[0]) for y in range(joint.shape[1]) if joint[x, y] > 0]
    best = -math.inf
    for r in range(len(atoms)):
        for drop in itertools.combinations(atoms, r):
            if sum(joint[a] for a in drop) > epsilon + 1e-15:
                continue
            kept = [a for a in atoms if a not in drop]
            best = max(best, -math.log2(max(joint[x, y] / py[y] for x, y in kept)))
    return best


def smooth_max_entropy_subsets(joint, epsilon):
    joint = np.asarray(joint, float)
    atoms = [(x, y) for x in range(joint.shape[0]) for y in range(joint.shape[1]) if joint[x, y] > 0]
    best = math.inf
    for r in range(len(atoms)):
        for drop in itertools.combinations(atoms, r):
            if sum(joint[a] for a in drop) > epsilon + 1e-15:
                continue
            kept = [a for a in atoms if a not in drop]
            per_y = {}
            for x, y in kept:
                per_y[y] = per_y.get(y, 0) + 1
            best = min(best, math.log2(max(per_y.values())))
    return best


def cq_min_entropy_sdp(priors, side_states):
    """``-log2 min tr(sigma')`` s.t. ``1 x sigma' >= sum_i P(i)|i><i| x rho_i``."""
    import cvxpy as cp

    d = side_states[0].shape[0]
    s = cp.Variable((d, d), hermitian=True)
    cons = [s - p * r >> 0 for p, r in zip(priors, side_states)]
    prob = cp.Problem(cp.Minimize(cp.real(cp.trace(s))), cons)
    prob.solve(solver=cp.SCS, eps=1e-9, max_iters=200000)
    return -math.log2(prob.value)


def ghz_classical_loops():
    best = 0
    for P1, Q1, P2, Q2, P3, Q3 in itertools.product((1, -1), repeat=6):
        ok = (P1 * P2 * P3 == -1) + (P1 * Q2 * Q3 == 1) + (Q1 * P2 * Q3 == 1) + (Q1 * Q2 * P3 == 1)
        best = max(best, ok)
    return best


def chsh_classical_loops():
    return max(a1 * b1 + a1 * b2 + a2 * b1 - a2 * b2
               for a1, a2, b1, b2 in itertools.product((1, -1), repeat=4))


def prc_classical_loops(k):
    n = 4 * k - 1
    best = 0
    for signs in itertools.product((1, -1), repeat=2 * n):
        P, Q = signs[:n], signs[n:]
        ok = int(math.prod(P) == -1)
        for i in range(n):
            ok += int(P[i] * math.prod(Q[l] for l in range(n) if l != i) == 1)
        best = max(best, ok)
    return best


def rbc_slot_flip_acceptance(p):
    """Best chance that a slot committed to ``a`` opens as ``1 - a``.

    Plain loops over Bob's pairs (unknown to the unveiler), the true offset
    and the forged offset.
    """
    N = 2 ** p
    pairs = [(x, y) for x in range(N) for y in range(N) if x != y]
    best = 0.0
    for a in (0, 1):
        for m in range(N):
            for forged in range(N):
                hits = 0
                for pair in pairs:
                    c = (pair[a] + m) % N
                    hits += (c - forged) % N == pair[1 - a]
                best = max(best, hits / len(pairs))
    return best


def rbc_slot_view(p, pair, a):
    """Histogram of the commitment value over the uniform offset."""
    N = 2 ** p
    hist = [0] * N
    for m in range(N):
        hist[(pair[a] + m) % N] += 1
    return hist


def guess_prob_table(probs, eta):
    """``max_i sum_k max_j eta_j P(k | i, j)`` by loops."""
    I, J, K = probs.shape
    return max(sum(max(eta[j] * probs[i, j, k] for j in range(J)) for k in range(K))
               for i in range(I))
