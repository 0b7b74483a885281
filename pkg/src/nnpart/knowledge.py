"""Knowledge sets: the convex region of hidden vectors consistent with feedback.

A knowledge set starts as a box, shrinks by halfspace cuts, and supports
widths, volume-median guesses at a chosen expansion scale, and a
scale-weighted log-volume potential.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyBodyError, InconsistentFeedbackError
from .numerics import (
    ConvexBody,
    directional_quantile,
    interior_point,
    membership,
    polytope_vertices,
    sample_body,
    support_value,
    unit_ball_volume,
)
from .seeding import derive_rng, split_seed

_UNIT_TOL = 1e-9


@dataclass(frozen=True)
class ScaleSchedule:
    """Dyadic expansion-radius schedule z(i) = 2^-i / (8 d) over i in [i_min, i_max]."""

    dim: int
    alpha: float = 1.0
    i_min: int = -2
    i_max: int = 20

    def __post_init__(self):
        if self.i_min > self.i_max:
            raise ValueError("i_min must not exceed i_max")
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")

    def expansion(self, i: int) -> float:
        return 2.0 ** (-i) / (8.0 * self.dim)

    @classmethod
    def for_horizon(cls, dim: int, alpha: float = 1.0, horizon: int = 4096,
                    i_min: int = -2) -> "ScaleSchedule":
        i_max = math.ceil(math.log2(max(2, horizon) * dim)) + 4
        return cls(dim=dim, alpha=alpha, i_min=i_min, i_max=i_max)


def _check_unit(v: np.ndarray, name: str = "direction"):
    n = np.linalg.norm(v)
    if abs(n - 1.0) > 1e-6:
        raise ValueError(f"{name} must be unit-norm (got |v| = {n:.3g})")


class KnowledgeSet:
    """Box intersected with recorded halfspace cuts; immutable (copy-on-cut)."""

    def __init__(self, dim: int | None = None, box_halfwidth: float = 2.0,
                 body: ConvexBody | None = None, cut_log: tuple = (),
                 lp_backend: str = "auto"):
        if body is None:
            if dim is None:
                raise ValueError("either dim or body is required")
            body = ConvexBody.box(np.full(dim, -box_halfwidth),
                                  np.full(dim, box_halfwidth))
        if body.expansion != 0.0:
            raise ValueError("knowledge sets carry no intrinsic expansion")
        self.body = body
        self.cut_log = tuple(cut_log)
        self.lp_backend = lp_backend
        self._verts = ("unset", None)
        self._extents = None

    @property
    def dim(self) -> int:
        return self.body.dim

    @property
    def cut_count(self) -> int:
        return len(self.cut_log)

    # -- geometry ----------------------------------------------------------

    @property
    def vertices(self) -> np.ndarray | None:
        state, verts = self._verts
        if state == "unset":
            try:
                verts = polytope_vertices(self.body)
            except Exception:
                verts = None
            self._verts = ("set", verts)
        return self._verts[1]

    def width(self, direction) -> float:
        direction = np.asarray(direction, dtype=float)
        _check_unit(direction)
        verts = self.vertices
        if verts is not None:
            vals = verts @ direction
            return float(vals.max() - vals.min())
        hi = support_value(self.body, direction, "max", backend=self.lp_backend)
        lo = support_value(self.body, direction, "min", backend=self.lp_backend)
        return float(hi - lo)

    def width_batch(self, directions: np.ndarray) -> np.ndarray:
        directions = np.asarray(directions, dtype=float)
        verts = self.vertices
        if verts is not None:
            vals = verts @ directions.T
            return vals.max(axis=0) - vals.min(axis=0)
        return np.array([self.width(d) for d in directions])

    def support_interval(self, direction) -> tuple[float, float]:
        direction = np.asarray(direction, dtype=float)
        verts = self.vertices
        if verts is not None:
            vals = verts @ direction
            return float(vals.min()), float(vals.max())
        return (support_value(self.body, direction, "min", backend=self.lp_backend),
                support_value(self.body, direction, "max", backend=self.lp_backend))

    def coordinate_extents(self) -> tuple[np.ndarray, np.ndarray]:
        """Tight per-coordinate bounding interval of the cut polytope."""
        if self._extents is None:
            verts = self.vertices
            if verts is not None:
                self._extents = (verts.min(axis=0), verts.max(axis=0))
            else:
                d = self.dim
                lo = np.empty(d)
                hi = np.empty(d)
                for k in range(d):
                    e = np.zeros(d)
                    e[k] = 1.0
                    lo[k] = support_value(self.body, e, "min", backend=self.lp_backend)
                    hi[k] = support_value(self.body, e, "max", backend=self.lp_backend)
                self._extents = (lo, hi)
        return self._extents

    def contains(self, point, tol: float = 1e-9) -> bool:
        return bool(membership(self.body, np.asarray(point, dtype=float), tol=tol))

    def sample(self, n: int, seed, expansion: float = 0.0,
               burn_in: int = 200) -> np.ndarray:
        return sample_body(self.body.with_expansion(expansion), n, seed,
                           burn_in=burn_in)

    # -- cuts ---------------------------------------------------------------

    def cut(self, normal, offset: float, sense: str = "<=") -> "KnowledgeSet":
        """New knowledge set with <normal, v> sense offset appended.

        Raises InconsistentFeedbackError when the result is empty: honest
        feedback can never exclude the true vector.
        """
        normal = np.asarray(normal, dtype=float)
        _check_unit(normal, "cut normal")
        if sense == ">=":
            body = self.body.with_halfspace(-normal, -float(offset))
        elif sense == "<=":
            body = self.body.with_halfspace(normal, float(offset))
        else:
            raise ValueError(f"unknown sense {sense!r}")
        try:
            _, margin = interior_point(body)
        except EmptyBodyError as exc:
            raise InconsistentFeedbackError(str(exc)) from exc
        if margin < -1e-9:
            raise InconsistentFeedbackError(
                "cut emptied the knowledge set; feedback is inconsistent")
        return KnowledgeSet(body=body,
                            cut_log=self.cut_log + ((normal.copy(), float(offset), sense),),
                            lp_backend=self.lp_backend)


def select_index(schedule: ScaleSchedule, width: float) -> int:
    """Largest i with 2^-i >= width, clamped to the schedule range.

    Ties at exact powers of two go to the larger index. Width 0 degenerates
    to i_max (the caller should treat the loss bound as 0).
    """
    if width <= 0.0:
        return schedule.i_max
    i = int(math.floor(-math.log2(width)))
    while 2.0 ** (-(i + 1)) >= width:
        i += 1
    while 2.0 ** (-i) < width:
        i -= 1
    return min(max(i, schedule.i_min), schedule.i_max)


def median_guess(knowledge: KnowledgeSet, i: int, direction, schedule: ScaleSchedule,
                 n: int, seed) -> float:
    """Empirical volume-median of <direction, .> over the set expanded at scale i."""
    direction = np.asarray(direction, dtype=float)
    _check_unit(direction)
    body = knowledge.body.with_expansion(schedule.expansion(i))
    return directional_quantile(body, direction, 0.5, n, seed)


@dataclass
class PotentialEstimate:
    value: float
    stderr: float

    def __float__(self):
        return self.value


def potential(knowledge: KnowledgeSet, schedule: ScaleSchedule, n: int,
              seed) -> PotentialEstimate:
    """Monte Carlo estimate of the scale-weighted log-volume potential.

    Sum over i of 2^(-alpha i) * log(Vol(K + z_i B) / Vol(z_i B)), each volume
    ratio estimated as the hit fraction of uniform samples from a tight
    bounding box of K inflated by z_i. Per-scale terms are clamped at 0 (the
    true terms are nonnegative), keeping the estimate nonnegative.
    """
    d = knowledge.dim
    lo, hi = knowledge.coordinate_extents()
    keys = split_seed(seed, schedule.i_max - schedule.i_min + 1)
    total = 0.0
    var = 0.0
    for idx, i in enumerate(range(schedule.i_min, schedule.i_max + 1)):
        z = schedule.expansion(i)
        widths = (hi - lo) + 2.0 * z
        vol_box = float(np.prod(widths))
        rng = derive_rng(keys[idx])
        pts = lo - z + rng.random((n, d)) * widths
        inside = membership(knowledge.body.with_expansion(z), pts)
        count = max(float(np.count_nonzero(inside)), 0.5)
        frac = count / n
        vol_body = vol_box * frac
        ratio = vol_body / (z ** d * unit_ball_volume(d))
        weight = 2.0 ** (-schedule.alpha * i)
        total += weight * max(0.0, math.log(ratio))
        var += (weight * math.sqrt(max(1.0 - frac, 0.0) / count)) ** 2
    return PotentialEstimate(max(total, 0.0), math.sqrt(var))


def volume_ratio(k_old: KnowledgeSet, k_new: KnowledgeSet, z: float, n: int,
                 seed) -> tuple[float, float]:
    """MC estimate of Vol(K_new + zB) / Vol(K_old + zB) with its standard error.

    K_new must be a subset of K_old (it was produced from it by cuts); the
    estimate conditions on samples landing in the old expanded body.
    """
    d = k_old.dim
    lo, hi = k_old.coordinate_extents()
    widths = (hi - lo) + 2.0 * z
    rng = derive_rng(split_seed(seed, 1)[0])
    pts = lo - z + rng.random((n, d)) * widths
    in_old = membership(k_old.body.with_expansion(z), pts)
    c_old = int(np.count_nonzero(in_old))
    if c_old == 0:
        raise EmptyBodyError("no samples landed in the old body; increase n")
    in_new = membership(k_new.body.with_expansion(z), pts[in_old])
    c_new = int(np.count_nonzero(in_new))
    ratio = c_new / c_old
    stderr = math.sqrt(max(ratio * (1.0 - ratio), 1.0 / c_old) / c_old)
    return ratio, stderr
