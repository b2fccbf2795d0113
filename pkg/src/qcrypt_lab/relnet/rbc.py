"""Relativistic bit commitment sustained by chained modular commitments.

Level 0 is the commitment of the bit itself at site 1.  Each later level
sits at the other site and commits every bit of the previous level's
random offsets, so level ``k`` holds ``p**k`` commitments.  A commitment
of bit ``a`` against Bob's pair ``(n_0, n_1)`` is ``n_a + m mod 2**p``.

To unveil, the Alice agent at the site opposite the last level sends the
last level's offsets ``m``; Bob walks the chain back to level 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .. import _rng
from .spacetime import EventLoop, SpacetimeEvent, verify_independence


@dataclass(frozen=True)
class CommitRecord:
    """Bob's stored commitments, level by level, flattened."""

    p: int
    round_values: tuple
    sustain_depth: int

    def __post_init__(self):
        N = 1 << self.p
        if any(not 0 <= v < N for v in self.round_values):
            raise ValueError("commitment values must lie in [0, 2**p)")


@dataclass
class _Level:
    site: int
    time: float
    bits: np.ndarray
    pairs: np.ndarray  # (slots, 2)
    secrets: np.ndarray
    commits: np.ndarray


@dataclass(frozen=True)
class RbcResult:
    status: str  # "unveiled", "rejected" or "aborted"
    bit: int | None
    record: CommitRecord
    unveil_spacelike: bool
    trace: list = field(default_factory=list, compare=False)


def _to_bits(values: np.ndarray, p: int) -> np.ndarray:
    """Binary digits, most significant first; shape (len(values) * p,)."""
    shifts = np.arange(p - 1, -1, -1)
    return ((values[:, None] >> shifts[None, :]) & 1).ravel()


def _from_bits(bits: np.ndarray, p: int) -> np.ndarray:
    weights = 1 << np.arange(p - 1, -1, -1)
    return (bits.reshape(-1, p) * weights).sum(axis=1)


def _random_pairs(rng: np.random.Generator, count: int, N: int) -> np.ndarray:
    n0 = rng.integers(0, N, size=count)
    n1 = (n0 + 1 + rng.integers(0, N - 1, size=count)) % N
    return np.stack([n0, n1], axis=1)


def decode_chain(p: int, pairs: list, commits: list, final_offsets: np.ndarray):
    """Bob's check: walk back from the final offsets to the committed bit.

    Returns the decoded bit, or ``None`` if some commitment minus its offset
    matches neither member of its pair.
    """
    N = 1 << p
    offsets = np.asarray(final_offsets, dtype=np.int64)
    for level in range(len(commits) - 1, -1, -1):
        diff = (commits[level] - offsets) % N
        is0 = diff == pairs[level][:, 0]
        is1 = diff == pairs[level][:, 1]
        if not np.all(is0 | is1):
            return None
        bits = is1.astype(np.int64)
        if level == 0:
            return int(bits[0])
        offsets = _from_bits(bits, p)
    raise AssertionError("unreachable")


def run_rbc1(b: int, p: int, sustain_rounds: int = 0, adversary="none", seed: int = 0,
             separation: float = 1.0, record: bool = False) -> RbcResult:
    """Commit to ``b``, sustain, then unveil.

    Parameters
    ----------
    b : int
        Committed bit.
    p : int
        Modulus exponent, ``N = 2**p``; at least 2.
    sustain_rounds : int
        Number of sustaining levels after the initial commitment.
    adversary : "none", "alice_flips" or ("alice_garbles", level)
        ``alice_flips`` commits honestly and then tries to unveil ``1 - b``
        using only what the unveiling agent can know.  ``alice_garbles``
        sends an inconsistent commitment at the given level.
    seed : int
    separation : float
        Distance between the two sites.
    record : bool
        Keep the event trace.
    """
    if p < 2:
        raise ValueError("p must be at least 2")
    if sustain_rounds < 0:
        raise ValueError("sustain_rounds must be nonnegative")
    garble_level = None
    if isinstance(adversary, tuple):
        if adversary[0] != "alice_garbles":
            raise ValueError(f"unknown adversary {adversary!r}")
        garble_level = int(adversary[1])
        if not 0 <= garble_level <= sustain_rounds:
            raise ValueError("garbled level out of range")
        adversary = "alice_garbles"
    elif adversary not in ("none", "alice_flips"):
        raise ValueError(f"unknown adversary {adversary!r}")

    N = 1 << p
    D = float(separation)
    bob_rng = _rng.substream(seed, 5, 0)
    alice_rng = _rng.substream(seed, 5, 1)
    positions = {"A1": 0.0, "B1": 0.0, "A2": D, "B2": D}
    loop = EventLoop(positions, record=record)
    step = D / 2.0

    levels: list[_Level] = []
    bits = np.array([b], dtype=np.int64)
    for k in range(sustain_rounds + 1):
        site = k % 2
        t = k * step
        A, B = f"A{site + 1}", f"B{site + 1}"
        pairs = _random_pairs(bob_rng, bits.size, N)
        loop.send(B, A, tuple(map(tuple, pairs.tolist())), t, "pairs")
        secrets = alice_rng.integers(0, N, size=bits.size)
        commits = (pairs[np.arange(bits.size), bits] + secrets) % N
        if garble_level == k:
            # shift the first commitment off both admissible values
            bad = [d for d in range(1, N) if d != (pairs[0, 1 - bits[0]] - pairs[0, bits[0]]) % N]
            commits[0] = (pairs[0, bits[0]] + secrets[0] + bad[0]) % N
        loop.send(A, B, tuple(commits.tolist()), t, "commit")
        levels.append(_Level(site, t, bits, pairs, secrets, commits))
        bits = _to_bits(secrets, p)
    loop.run()

    last = levels[-1]
    u_site = 1 - last.site
    t_unveil = last.time + D / 4.0
    A_u, B_u = f"A{u_site + 1}", f"B{u_site + 1}"
    claimed = b
    offsets = last.secrets.copy()
    if adversary == "alice_flips":
        claimed = 1 - b
        offsets = _forge(levels, p, claimed, alice_rng)
    unveil = loop.send(A_u, B_u, (claimed, tuple(offsets.tolist())), t_unveil, "unveil")
    pairs_receipt = SpacetimeEvent(positions[f"A{last.site + 1}"], last.time)
    spacelike = verify_independence(unveil.emitted, pairs_receipt)
    # the other Bob agent forwards his records so B_u can check everything
    other_B = f"B{2 - u_site}"
    loop.send(other_B, B_u, "records", t_unveil, "pool")
    loop.run()

    rec = CommitRecord(p, tuple(int(v) for lv in levels for v in lv.commits), sustain_rounds)
    trace = loop.trace if record else []
    if not spacelike:
        return RbcResult("aborted", None, rec, spacelike, trace)
    decoded = decode_chain(p, [lv.pairs for lv in levels], [lv.commits for lv in levels], offsets)
    if decoded is None or decoded != claimed:
        return RbcResult("rejected", None, rec, spacelike, trace)
    return RbcResult("unveiled", decoded, rec, spacelike, trace)


def _forge(levels: list[_Level], p: int, target: int, rng: np.random.Generator) -> np.ndarray:
    """Offsets that would unveil ``target`` given the unveiler's knowledge.

    The unveiler knows every pair except those of the last level.  Where the
    last level must decode to a bit other than the honest one, the unknown
    pair difference is guessed uniformly among its ``N - 1`` possible values.
    """
    N = 1 << p
    wanted = np.array([target], dtype=np.int64)
    for lv in levels[:-1]:
        chosen = lv.pairs[np.arange(wanted.size), wanted]
        wanted = _to_bits((lv.commits - chosen) % N, p)
    last = levels[-1]
    offsets = last.secrets.copy()
    flip = wanted != last.bits
    guesses = 1 + rng.integers(0, N - 1, size=int(flip.sum()))
    # need n_wanted - n_honest = secret - forged
    offsets[flip] = (offsets[flip] - guesses) % N
    return offsets


# ---------------------------------------------------------------------------
# exhaustive security checks


def _all_pairs(N: int) -> np.ndarray:
    return np.array([(a, c) for a in range(N) for c in range(N) if a != c], dtype=np.int64)


def binding_check(p: int) -> dict:
    """Exhaustive forgery search for one commitment slot and for short chains.

    Reports
    -------
    max_flip_acceptance : float
        Best probability, over every offset the unveiler might send, that a
        slot committed to ``a`` is accepted as ``1 - a`` (pairs unknown to
        the unveiler, enumerated exhaustively).
    max_sum_p0_p1 : float
        Best ``P(unveil 0) + P(unveil 1)`` over every pre-agreed pair of
        offsets, with the committed value chosen adaptively from the pair.
    certain_forgery : bool
        Whether some forgery is accepted for every pair Bob might pick.
    """
    N = 1 << p
    pairs = _all_pairs(N)
    m = np.arange(N)
    best_flip = 0.0
    for a in (0, 1):
        honest = pairs[:, a]
        other = pairs[:, 1 - a]
        # c = n_a + m; accepted as 1-a iff c - m_forged = n_{1-a}
        c = (honest[:, None, None] + m[None, :, None]) % N
        accepted = (c - m[None, None, :]) % N == other[:, None, None]
        # for each true offset m and forged offset, average over Bob's pairs
        best_flip = max(best_flip, float(accepted.mean(axis=0).max()))
    # adaptive commit c = f(pair), offsets (m0, m1) fixed in advance
    m0, m1 = np.meshgrid(m, m, indexing="ij")
    coincide = ((pairs[:, 0, None, None] + m0[None]) % N) == ((pairs[:, 1, None, None] + m1[None]) % N)
    sum_p = 1.0 + coincide.mean(axis=0)
    result = {
        "p": p,
        "N": N,
        "max_flip_acceptance": best_flip,
        "max_sum_p0_p1": float(sum_p.max()),
        "bound": 1.0 / (N - 1),
        "certain_forgery": bool(best_flip >= 1.0),
    }
    if p == 2:
        result["chain_max_flip_acceptance"] = _chain_binding_p2()
    return result


def _chain_binding_p2() -> float:
    """Full enumeration of the one-sustain-round chain at ``p = 2``.

    The unveiler knows the level-0 pair, every secret offset and the bit
    ``b``; for each such situation she picks the best list of two offsets.
    Acceptance is averaged over all of Bob's level-1 pairs.
    """
    p, N = 2, 4
    pairs = _all_pairs(N)
    q1, q2 = np.meshgrid(np.arange(len(pairs)), np.arange(len(pairs)), indexing="ij")
    q = np.stack([pairs[q1.ravel()], pairs[q2.ravel()]], axis=1)  # (144, 2 slots, 2)
    forged = np.array(list(itertools.product(range(N), repeat=p)))  # (16, 2)
    best = 0.0
    for b in (0, 1):
        for pair0 in pairs:
            for m0 in range(N):
                c0 = (pair0[b] + m0) % N
                bits1 = _to_bits(np.array([m0]), p)
                for m1 in itertools.product(range(N), repeat=p):
                    c1 = (q[:, np.arange(p), bits1] + np.array(m1)) % N  # (144, 2)
                    diff = (c1[:, None, :] - forged[None, :, :]) % N  # (144, 16, 2)
                    is0 = diff == q[:, None, :, 0]
                    is1 = diff == q[:, None, :, 1]
                    valid = np.all(is0 | is1, axis=2)
                    offset0 = is1[..., 0] * 2 + is1[..., 1]
                    ok = valid & ((c0 - offset0) % N == pair0[1 - b])
                    best = max(best, float(ok.mean(axis=0).max()))
    return best


def concealing_check(p: int, joint_limit: int = 4, pair_samples: int = 3, seed: int = 0) -> dict:
    """Bob's pre-unveil view is uniform and independent of the bit.

    Single slot: for every pair and both bits, the commitment is uniform
    over ``Z_N`` as the offset ranges over ``Z_N`` (exact integer counts).
    One sustain round: for ``p <= joint_limit`` the joint distribution of
    all ``p + 1`` commitments is enumerated for a few fixed pair sets and
    compared between ``b = 0`` and ``b = 1``.
    """
    N = 1 << p
    pairs = _all_pairs(N)
    m = np.arange(N)
    slot_uniform = True
    for a in (0, 1):
        c = (pairs[:, a, None] + m[None, :]) % N
        counts = np.apply_along_axis(np.bincount, 1, c, minlength=N)
        slot_uniform &= bool(np.all(counts == 1))
    joint_equal = None
    if p <= joint_limit:
        rng = _rng.substream(seed, 6)
        joint_equal = True
        for _ in range(pair_samples):
            q0 = _random_pairs(rng, 1, N)[0]
            q = _random_pairs(rng, p, N)
            dists = []
            for b in (0, 1):
                m0 = np.arange(N)
                c0 = (q0[b] + m0) % N
                bits = ((m0[:, None] >> np.arange(p - 1, -1, -1)[None, :]) & 1)  # (N, p)
                grids = np.meshgrid(*([np.arange(N)] * p), indexing="ij")
                offs = np.stack([g.ravel() for g in grids], axis=1)  # (N**p, p)
                c1 = (q[np.arange(p)[None, None, :], bits[:, None, :]] + offs[None, :, :]) % N
                keys = c0[:, None] * N ** p + (c1 * (N ** np.arange(p - 1, -1, -1))).sum(axis=2)
                hist = np.bincount(keys.ravel(), minlength=N ** (p + 1))
                dists.append(hist)
            joint_equal &= bool(np.array_equal(dists[0], dists[1]))
            joint_equal &= bool(np.all(dists[0] == dists[0][0]))
    return {"p": p, "slot_uniform": slot_uniform, "joint_uniform_and_equal": joint_equal}
