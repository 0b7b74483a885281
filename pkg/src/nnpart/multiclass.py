"""Many-center reduction over pairwise sub-learners.

Each round builds the loss-bound matrix L and drop matrix D over all label
pairs, solves the feasibility LP for a distribution v with (D - L/2) v >= 0,
samples the guess from v, and updates only the (guessed, true) pair.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvariantViolationError
from .numerics import EQ, GE, LinearProgram, solve_lp
from .pairwise import FIRST, SECOND
from .seeding import derive_rng

_LABEL_STREAM_TAG = 7001


@dataclass
class RoundMatrices:
    """L symmetric loss bounds, D one-sided drops, M = D - L/2."""

    L: np.ndarray
    D: np.ndarray
    M: np.ndarray


def choose_distribution(M: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """A simplex point v with Mv >= 0; exists whenever M + M^T >= 0 entrywise.

    The all-zero matrix returns the uniform distribution; otherwise the
    feasibility LP's deterministic vertex is returned unchanged.
    """
    M = np.asarray(M, dtype=float)
    k = M.shape[0]
    if M.shape != (k, k):
        raise ValueError("M must be square")
    scale = float(np.abs(M).max())
    if (M + M.T).min() < -tol * max(1.0, scale):
        raise InvariantViolationError("M + M^T has a negative entry")
    if scale < 1e-15:
        return np.full(k, 1.0 / k)
    ms = M / scale
    cons = [(ms[i], 0.0, GE) for i in range(k)]
    cons.append((np.ones(k), 1.0, EQ))
    res = solve_lp(LinearProgram(np.zeros(k), cons, [(0.0, None)] * k), "min")
    if not res.optimal:
        raise InvariantViolationError(
            f"distribution LP came back {res.status}; upstream matrices are broken")
    v = np.clip(res.point, 0.0, None)
    v /= v.sum()
    if float((M @ v).min()) < -tol * max(1.0, scale):
        raise InvariantViolationError("distribution violates Mv >= 0 post-check")
    return v


class MulticlassLearner:
    """k-label learner made of one two-center sub-learner per unordered pair.

    sub_factory(i, j) must return an object with the pairwise interface
    (predict / observe / loss_bound / drop_bound, labels FIRST and SECOND),
    where FIRST corresponds to label i and SECOND to label j.
    """

    def __init__(self, k: int, sub_factory, seed: int = 0):
        if k < 2:
            raise ValueError("k must be at least 2")
        self.k = int(k)
        self.subs = {(i, j): sub_factory(i, j)
                     for i in range(k) for j in range(i + 1, k)}
        self._rng = derive_rng(seed, _LABEL_STREAM_TAG)
        self.last_round = None

    def pair(self, a: int, b: int):
        return self.subs[(min(a, b), max(a, b))]

    def build_matrices(self, q) -> RoundMatrices:
        """Round matrices from the sub-learners; mutates nothing."""
        k = self.k
        L = np.zeros((k, k))
        D = np.zeros((k, k))
        for (i, j), sub in self.subs.items():
            bound = sub.loss_bound(q)
            L[i, j] = L[j, i] = bound
            side = sub.predict(q)
            # D[i, j]: guaranteed drop of sub (i, j) when i is the true label,
            # which is a mistake for the sub exactly when it predicts j.
            if side == SECOND:
                D[i, j] = bound
            else:
                D[j, i] = bound
        return RoundMatrices(L=L, D=D, M=D - 0.5 * L)

    def predict(self, q) -> int:
        mats = self.build_matrices(q)
        v = choose_distribution(mats.M)
        u = self._rng.random()
        label = int(np.searchsorted(np.cumsum(v), u, side="right"))
        label = min(label, self.k - 1)
        self.last_round = {"q": np.asarray(q, dtype=float), "matrices": mats,
                           "distribution": v, "guess": label}
        return label

    def observe(self, q, guessed: int, true_label: int) -> None:
        """Update only the (guessed, true) pair; correct guesses change nothing."""
        for lbl in (guessed, true_label):
            if not 0 <= lbl < self.k:
                raise ValueError(f"label {lbl} out of range")
        if guessed == true_label:
            return
        a, b = min(guessed, true_label), max(guessed, true_label)
        sub = self.subs[(a, b)]
        side_true = FIRST if true_label == a else SECOND
        sub.observe(q, sub.predict(q), side_true)

    def loss_bound_for_query(self, q) -> float:
        return max(sub.loss_bound(q) for sub in self.subs.values())

    def loss_bound_batch(self, directions: np.ndarray) -> np.ndarray:
        directions = np.asarray(directions, dtype=float)
        bounds = np.zeros(directions.shape[0])
        for sub in self.subs.values():
            np.maximum(bounds, sub.loss_bound_batch(directions), out=bounds)
        return bounds

    def cut_counts(self) -> dict:
        return {pair: sub.cut_count for pair, sub in self.subs.items()}

    def total_cuts(self) -> int:
        return sum(self.cut_counts().values())
