"""Contextual-search learner over a hidden vector.

Guesses the inner product of the hidden vector with a query direction by
halving the volume of the knowledge set expanded at a width-matched scale,
then absorbs high/low feedback as a halfspace cut.
"""

from __future__ import annotations

import numpy as np

from .knowledge import KnowledgeSet, ScaleSchedule, median_guess, select_index

LOW, HIGH = "low", "high"

# Stream tag separating guess sampling from other consumers of the same seed.
_GUESS_TAG = 101


class CSearchState:
    """Single-writer learner state; clone() supports rollback-style callers."""

    def __init__(self, dim: int, schedule: ScaleSchedule | None = None,
                 mc_samples: int = 4096, seed: int = 0,
                 box_halfwidth: float = 2.0):
        self.knowledge = KnowledgeSet(dim, box_halfwidth=box_halfwidth)
        self.schedule = schedule or ScaleSchedule.for_horizon(dim)
        self.mc_samples = int(mc_samples)
        self.seed = int(seed)

    @property
    def dim(self) -> int:
        return self.knowledge.dim

    @property
    def cut_count(self) -> int:
        return self.knowledge.cut_count

    def guess(self, x) -> tuple[float, int]:
        """(g, i): median guess for <x, hidden> and the chosen scale index.

        Pure: the state is unchanged, and repeated calls return identical
        values (the sampling seed is a function of the cut history).
        """
        x = np.asarray(x, dtype=float)
        w = self.knowledge.width(x)
        i = select_index(self.schedule, w)
        g = median_guess(self.knowledge, i, x, self.schedule, self.mc_samples,
                         self._guess_seed())
        return g, i

    def feedback(self, x, g: float, sign: str) -> None:
        """Apply one halfspace cut: low means <x, hidden> >= g, high means <= g."""
        x = np.asarray(x, dtype=float)
        if sign == LOW:
            self.knowledge = self.knowledge.cut(x, g, ">=")
        elif sign == HIGH:
            self.knowledge = self.knowledge.cut(x, g, "<=")
        else:
            raise ValueError(f"sign must be 'low' or 'high', got {sign!r}")

    def clone(self) -> "CSearchState":
        dup = CSearchState.__new__(CSearchState)
        dup.knowledge = self.knowledge  # immutable; safe to share
        dup.schedule = self.schedule
        dup.mc_samples = self.mc_samples
        dup.seed = self.seed
        return dup

    def _guess_seed(self):
        from .seeding import derive_seedseq
        return derive_seedseq(self.seed, _GUESS_TAG, self.cut_count)
