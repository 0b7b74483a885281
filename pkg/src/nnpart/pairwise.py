"""Two-center sign learner built on contextual search.

Predicts which of two hidden centers is more similar to a query direction by
thresholding the contextual-search guess at zero, and feeds back only on
mistake rounds (correct rounds roll the proposal back). Exposes the loss
bound L and the guaranteed potential-drop surrogate D used by the
multi-center reduction.
"""

from __future__ import annotations

import numpy as np

from .csearch import HIGH, LOW, CSearchState
from .knowledge import ScaleSchedule

FIRST, SECOND = 0, 1


class PairwiseLearner:
    """Sign learner over the difference of two hidden centers.

    alpha is the loss exponent: the loss bound in direction q is
    width(K, q) ** alpha.
    """

    def __init__(self, dim: int, alpha: float = 1.0, seed: int = 0,
                 mc_samples: int = 4096, schedule: ScaleSchedule | None = None,
                 box_halfwidth: float = 2.0):
        if alpha <= 0:
            raise ValueError("alpha must be positive")
        if schedule is None:
            schedule = ScaleSchedule.for_horizon(dim, alpha=alpha)
        self.cs = CSearchState(dim, schedule=schedule, mc_samples=mc_samples,
                               seed=seed, box_halfwidth=box_halfwidth)
        self.alpha = float(alpha)
        self._memo = None  # (cut_count, q bytes, g, i)
        self.last_cut_index = None  # scale index of the most recent applied cut

    @property
    def dim(self) -> int:
        return self.cs.dim

    @property
    def cut_count(self) -> int:
        return self.cs.cut_count

    @property
    def knowledge(self):
        return self.cs.knowledge

    def proposal(self, q) -> tuple[float, int]:
        """The (guess, scale index) this state would use for q; non-mutating."""
        q = np.asarray(q, dtype=float)
        key = (self.cs.cut_count, q.tobytes())
        if self._memo is not None and self._memo[0] == key:
            return self._memo[1]
        g, i = self.cs.guess(q)
        self._memo = (key, (g, i))
        return g, i

    def predict(self, q) -> int:
        g, _ = self.proposal(q)
        return FIRST if g >= 0.0 else SECOND

    def observe(self, q, predicted: int, true_label: int) -> None:
        """Mistake rounds apply the definitive sign cut; correct rounds are no-ops.

        On a mistake the feedback direction is certain: truth FIRST means the
        inner product is nonnegative while the guess was negative (guess too
        low); truth SECOND is the mirror case.
        """
        if predicted not in (FIRST, SECOND) or true_label not in (FIRST, SECOND):
            raise ValueError("labels must be FIRST or SECOND")
        if predicted == true_label:
            self._memo = None
            return
        q = np.asarray(q, dtype=float)
        g, i = self.proposal(q)
        self.cs.feedback(q, g, LOW if true_label == FIRST else HIGH)
        self._memo = None
        self.last_cut_index = i

    def loss_bound(self, q) -> float:
        q = np.asarray(q, dtype=float)
        return float(self.cs.knowledge.width(q) ** self.alpha)

    def loss_bound_batch(self, directions: np.ndarray) -> np.ndarray:
        return self.cs.knowledge.width_batch(np.asarray(directions, dtype=float)) ** self.alpha

    def drop_bound(self, q, hypothetical_true: int) -> float:
        """Guaranteed potential drop if hypothetical_true turns out correct.

        Equal to the loss bound on the side the learner would get wrong and 0
        on the side it would get right, so the two sides sum exactly to the
        loss bound.
        """
        if hypothetical_true not in (FIRST, SECOND):
            raise ValueError("labels must be FIRST or SECOND")
        if self.predict(q) == hypothetical_true:
            return 0.0
        return self.loss_bound(q)

    def clone(self) -> "PairwiseLearner":
        dup = PairwiseLearner.__new__(PairwiseLearner)
        dup.cs = self.cs.clone()
        dup.alpha = self.alpha
        dup._memo = self._memo
        dup.last_cut_index = self.last_cut_index
        return dup
