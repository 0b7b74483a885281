"""Two-center learner for non-even p > 2 via per-scale lifted knowledge sets.

Each scale i keeps a knowledge set over pairs of lifted centers. A round
picks the smallest scale whose width in the query direction clears a
threshold, predicts by comparing the volumes of the two sides of the query
hyperplane, and applies a slack cut at the selected scale every round (no
rollback on correct guesses). Exposes the same predict / observe /
loss_bound / drop_bound interface as the inner-product pair learner, so the
many-center reduction can stack these.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigurationError
from .kernels import GeneralPKernel, generalp_lift_center, generalp_lift_query
from .knowledge import KnowledgeSet
from .pairwise import FIRST, SECOND
from .seeding import derive_seedseq

_PREDICT_TAG = 31

BEYOND_CAP = -1


class ScaleSet:
    """Knowledge set over concatenated (center one, center two) lifts at one scale."""

    def __init__(self, kernel: GeneralPKernel):
        self.kernel = kernel
        self.space = KnowledgeSet(2 * kernel.lifted_dim, box_halfwidth=1.0)


class MultiscaleLearner:
    def __init__(self, p: float, dim: int, separation: float | None = None,
                 c_scale: int = 100, selection_constant: float = 1e3,
                 slack_constant: float = 3.0, i_cap: int | None = None,
                 dim_budget: int = 2000, mc_samples: int = 256,
                 burn_in: int = 128, seed: int = 0):
        if p <= 2.0:
            raise ConfigurationError("the multiscale learner requires p > 2")
        self.p = float(p)
        self.dim = int(dim)
        self.separation = None if separation is None else float(separation)
        if self.separation is not None and self.separation <= 0:
            raise ConfigurationError("separation must be positive when provided")
        self.c_scale = float(c_scale)
        self.selection_constant = float(selection_constant)
        self.slack_constant = float(slack_constant)
        self.mc_samples = int(mc_samples)
        self.burn_in = int(burn_in)
        self.seed = int(seed)
        self._kernels: dict[int, GeneralPKernel] = {}
        self.scale_sets: dict[int, ScaleSet] = {}
        if i_cap is None:
            i_cap = 0
            while True:
                k = GeneralPKernel(self.p, self.dim, i_cap + 1, self.c_scale)
                if 2 * k.lifted_dim > dim_budget:
                    break
                i_cap += 1
            if i_cap < 1:
                raise ConfigurationError(
                    "dim_budget too small for even the coarsest scale")
        self.i_cap = int(i_cap)
        self._scale_memo = None
        self._label_memo = None
        self.last_cut_index = None

    # -- per-scale plumbing --------------------------------------------------

    def kernel_at(self, i: int) -> GeneralPKernel:
        if i not in self._kernels:
            self._kernels[i] = GeneralPKernel(self.p, self.dim, i, self.c_scale)
        return self._kernels[i]

    def round_direction(self, i: int, q) -> np.ndarray:
        """(-H_i(q), H_i(q)): positive inner product with (lift one, lift two)
        means the first center is nearer."""
        h = generalp_lift_query(self.kernel_at(i), q).to_dense()
        return np.concatenate([-h, h])

    def threshold(self, i: int) -> float:
        k = self.kernel_at(i)
        return (self.selection_constant * k.half_steps * self.p * self.dim ** 2
                * (self.p * k.delta) ** self.p)

    def slack(self, i: int) -> float:
        k = self.kernel_at(i)
        return self.slack_constant * self.dim * (self.p * k.delta) ** self.p

    def _width_unnormalized(self, i: int, v: np.ndarray) -> float:
        ss = self.scale_sets.get(i)
        if ss is None or ss.space.cut_count == 0:
            return 2.0 * float(np.abs(v).sum())  # fresh box shortcut
        nv = float(np.linalg.norm(v))
        return nv * ss.space.width(v / nv)

    @property
    def _version(self) -> int:
        return sum(ss.space.cut_count for ss in self.scale_sets.values())

    # -- the pairwise interface ----------------------------------------------

    def select_scale(self, q) -> int:
        """Smallest scale whose width clears its threshold; BEYOND_CAP if none."""
        q = np.asarray(q, dtype=float)
        key = (self._version, q.tobytes())
        if self._scale_memo is not None and self._scale_memo[0] == key:
            return self._scale_memo[1][0]
        chosen = BEYOND_CAP
        v_chosen = None
        for i in range(1, self.i_cap + 1):
            v = self.round_direction(i, q)
            if self._width_unnormalized(i, v) >= self.threshold(i) - 1e-12:
                chosen, v_chosen = i, v
                break
        self._scale_memo = (key, (chosen, v_chosen))
        return chosen

    def predict(self, q) -> int:
        q = np.asarray(q, dtype=float)
        i = self.select_scale(q)
        key = self._scale_memo[0]
        if self._label_memo is not None and self._label_memo[0] == key:
            return self._label_memo[1]
        if i == BEYOND_CAP:
            label = FIRST
        else:
            ss = self._ensure_scale(i)
            v = self._scale_memo[1][1]
            seed = derive_seedseq(self.seed, _PREDICT_TAG, i, ss.space.cut_count)
            pts = ss.space.sample(self.mc_samples, seed, burn_in=self.burn_in)
            proj = pts @ v
            label = FIRST if np.count_nonzero(proj > 0) >= np.count_nonzero(proj < 0) else SECOND
        self._label_memo = (key, label)
        return label

    def observe(self, q, predicted: int, true_label: int) -> None:
        """Apply the slack cut at the selected scale, mistake or not."""
        if true_label not in (FIRST, SECOND):
            raise ValueError("labels must be FIRST or SECOND")
        q = np.asarray(q, dtype=float)
        i = self.select_scale(q)
        if i == BEYOND_CAP:
            self._scale_memo = None
            self._label_memo = None
            self.last_cut_index = BEYOND_CAP
            return
        v = self._scale_memo[1][1]
        ss = self._ensure_scale(i)
        nv = float(np.linalg.norm(v))
        bound = self.slack(i) / nv
        if true_label == FIRST:
            ss.space = ss.space.cut(-v / nv, bound, "<=")  # keeps v . z >= -slack
        else:
            ss.space = ss.space.cut(v / nv, bound, "<=")   # keeps v . z <= +slack
        self._scale_memo = None
        self._label_memo = None
        self.last_cut_index = i

    def loss_bound(self, q) -> float:
        """Original-units bound on |dist(q, x1) - dist(q, x2)| for this round.

        Scales j below the selected one failed their width test, which pins
        the lifted gap; dividing by (separation/2)^(p-1) converts back to a
        distance gap. Scale 1 and beyond-cap rounds use the trivial diameter
        or the cap-scale tail respectively.
        """
        if self.separation is None:
            raise ConfigurationError("loss bounds require the separation parameter")
        i = self.select_scale(np.asarray(q, dtype=float))
        if i == BEYOND_CAP:
            return min(2.0, self._chain_bound(self.i_cap))
        if i == 1:
            return 2.0
        return min(2.0, self._chain_bound(i - 1))

    def _chain_bound(self, j: int) -> float:
        k = self.kernel_at(j)
        lifted_gap = self.threshold(j) + 2.0 * self.dim * (self.p * k.delta) ** self.p
        return 2.0 ** self.p * lifted_gap / (0.5 * self.separation) ** (self.p - 1.0)

    def drop_bound(self, q, hypothetical_true: int) -> float:
        if hypothetical_true not in (FIRST, SECOND):
            raise ValueError("labels must be FIRST or SECOND")
        if self.predict(q) == hypothetical_true:
            return 0.0
        return self.loss_bound(q)

    def loss_bound_batch(self, directions: np.ndarray) -> np.ndarray:
        return np.array([self.loss_bound(d) for d in np.asarray(directions, dtype=float)])

    @property
    def cut_count(self) -> int:
        return self._version

    def _ensure_scale(self, i: int) -> ScaleSet:
        if i not in self.scale_sets:
            self.scale_sets[i] = ScaleSet(self.kernel_at(i))
        return self.scale_sets[i]

    # -- harness hooks ---------------------------------------------------------

    def lifted_truth(self, i: int, x1, x2) -> np.ndarray:
        k = self.kernel_at(i)
        return np.concatenate([generalp_lift_center(k, x1),
                               generalp_lift_center(k, x2)])

    def containment_violation(self, x1, x2) -> float:
        """Worst cut violation of the lifted truth over all instantiated scales.

        Nonpositive means every applied cut still contains the truth (the
        exact, checkable form of the slack-cut safety argument).
        """
        worst = -np.inf
        for i, ss in self.scale_sets.items():
            if ss.space.cut_count == 0:
                continue
            u = self.lifted_truth(i, x1, x2)
            for normal, offset, sense in ss.space.cut_log:
                val = float(normal @ u)
                violation = val - offset if sense == "<=" else offset - val
                worst = max(worst, violation)
        return worst if np.isfinite(worst) else 0.0
