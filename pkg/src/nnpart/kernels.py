"""Coordinate lifts that turn L^p comparisons into inner products.

Three families:

* Euclidean: append the squared norm, one extra dimension, exact.
* Even integer p: per-coordinate polynomial features, exact, dimension (p+1)d.
* General p > 2: per-coordinate grids of power features at resolution
  delta_i paired with truncated Taylor blocks, approximate to d*(p*delta_i)^p,
  dimension p'. d (2 D_i + 1) at scale i.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DimensionMismatchError

_NORM_TOL = 1e-9


def _check_in_ball(v: np.ndarray, name: str):
    if np.linalg.norm(v) > 1.0 + _NORM_TOL:
        raise ValueError(f"{name} must lie in the unit ball")


# ---------------------------------------------------------------------------
# Euclidean lift
# ---------------------------------------------------------------------------

def l2_lift_center(x) -> np.ndarray:
    """(1/sqrt 2) (x, |x|^2): centers lift onto a paraboloid in d+1 dims."""
    x = np.asarray(x, dtype=float)
    _check_in_ball(x, "center")
    return np.concatenate([x, [x @ x]]) / math.sqrt(2.0)


def l2_lift_query(q) -> np.ndarray:
    """(1/sqrt 5) (2q, -1): queries pair with lifted centers so that larger
    inner product means smaller Euclidean distance."""
    q = np.asarray(q, dtype=float)
    _check_in_ball(q, "query")
    return np.concatenate([2.0 * q, [-1.0]]) / math.sqrt(5.0)


# ---------------------------------------------------------------------------
# Even p
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EvenPKernel:
    p: int
    dim: int

    def __post_init__(self):
        if self.p < 2 or self.p % 2 != 0:
            raise ValueError("p must be an even integer >= 2; use GeneralPKernel otherwise")
        if self.dim < 1:
            raise ValueError("dim must be positive")

    @property
    def lifted_dim(self) -> int:
        return (self.p + 1) * self.dim

    def distance_from_inner(self, inner: float) -> float:
        """Invert <G(y), H(z)> = |y - z|_p^p / (p^(p+1) d) back to the distance."""
        inner = max(float(inner), 0.0)
        return self.p ** ((self.p + 1) / self.p) * self.dim ** (1.0 / self.p) * inner ** (1.0 / self.p)


def evenp_lift_center(kernel: EvenPKernel, y) -> np.ndarray:
    """G(y): per-coordinate power features (1, a, ..., a^p) of a = y_j / p."""
    y = np.asarray(y, dtype=float)
    if y.shape != (kernel.dim,):
        raise DimensionMismatchError("center dimension mismatch")
    _check_in_ball(y, "center")
    a = y / kernel.p
    powers = a[:, None] ** np.arange(kernel.p + 1)[None, :]
    return powers.reshape(-1) / math.sqrt(kernel.p * kernel.dim)


def evenp_lift_query(kernel: EvenPKernel, z) -> np.ndarray:
    """H(z): alternating binomial features so that the pairing with G expands
    ((z_j - y_j)/p)^p coordinate-wise."""
    z = np.asarray(z, dtype=float)
    if z.shape != (kernel.dim,):
        raise DimensionMismatchError("query dimension mismatch")
    _check_in_ball(z, "query")
    a = z / kernel.p
    p = kernel.p
    ell = np.arange(p + 1)
    coeffs = (-1.0) ** ell * np.array([math.comb(p, int(l)) for l in ell])
    feats = coeffs[None, :] * a[:, None] ** (p - ell)[None, :]
    return feats.reshape(-1) / math.sqrt(p * kernel.dim)


# ---------------------------------------------------------------------------
# General p > 2, per-scale approximate lift
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeneralPKernel:
    """Scale-i lift for a non-even exponent p > 2.

    delta = 1 / (c_scale d^2 p' 2^i) is the grid resolution, half_steps the
    number of grid steps to each side of 0 (so 2*half_steps + 1 groups of p'
    features per coordinate).
    """

    p: float
    dim: int
    scale: int
    c_scale: float = 100.0

    def __post_init__(self):
        if self.p <= 2.0:
            raise ConfigurationError("general-p lifts require p > 2")
        if self.scale < 1:
            raise ConfigurationError("scale index must be >= 1")
        if self.c_scale <= 0:
            raise ConfigurationError("c_scale must be positive")
        steps = 1.0 / (2.0 * self.delta)
        if abs(steps - round(steps)) > 1e-9:
            raise ConfigurationError(
                "1/(2 delta) must be an integer; adjust c_scale")
        if self.p * self.delta > 1.0 + 1e-12:
            raise ConfigurationError(
                f"p * delta = {self.p * self.delta:.4g} exceeds 1; increase c_scale")

    @property
    def taylor_terms(self) -> int:
        """p' = floor(p) + 1 features per group."""
        return int(math.floor(self.p)) + 1

    @property
    def delta(self) -> float:
        return 1.0 / (self.c_scale * self.dim ** 2 * self.taylor_terms * 2 ** self.scale)

    @property
    def half_steps(self) -> int:
        return int(round(1.0 / (2.0 * self.delta)))

    @property
    def groups_per_coord(self) -> int:
        return 2 * self.half_steps + 1

    @property
    def lifted_dim(self) -> int:
        return self.taylor_terms * self.dim * self.groups_per_coord

    @property
    def approx_error(self) -> float:
        """Kernel-approximation slack d (p delta)^p."""
        return self.dim * (self.p * self.delta) ** self.p

    def _power_block(self, u: np.ndarray) -> np.ndarray:
        """Graded powers (|u|^p, sign(u)|u|^(p-1), |u|^(p-2), ...) column-wise."""
        p = self.p
        ell = np.arange(self.taylor_terms)
        mags = np.abs(u)[..., None] ** (p - ell)
        signs = np.where(ell % 2 == 1, np.sign(u)[..., None], 1.0)
        return mags * signs

    def _taylor_coeffs(self, h: np.ndarray) -> np.ndarray:
        """Truncated expansion coefficients with step -h, matching _power_block."""
        p = self.p
        out = np.empty(h.shape + (self.taylor_terms,))
        ff = 1.0
        for l in range(self.taylor_terms):
            out[..., l] = ff / math.factorial(l) * (-h) ** l
            ff *= (p - l)
        return out

    def group_index(self, x: np.ndarray) -> np.ndarray:
        """Grid cell c with c delta <= x < (c+1) delta, clamped to the grid."""
        c = np.floor(np.asarray(x) / self.delta).astype(int)
        return np.clip(c, -self.half_steps, self.half_steps)


def generalp_lift_center(kernel: GeneralPKernel, y) -> np.ndarray:
    """Dense center lift: per coordinate, power blocks at every grid offset."""
    y = np.asarray(y, dtype=float)
    if y.shape != (kernel.dim,):
        raise DimensionMismatchError("center dimension mismatch")
    _check_in_ball(y, "center")
    x = y / 2.0
    offsets = kernel.delta * np.arange(-kernel.half_steps, kernel.half_steps + 1)
    u = x[:, None] - offsets[None, :]
    blocks = kernel._power_block(u)  # (d, groups, p')
    return blocks.reshape(-1)


@dataclass
class SparseQueryLift:
    """Query lift with exactly one nonzero group per coordinate."""

    kernel: GeneralPKernel
    groups: np.ndarray  # (d,) grid-cell labels in [-half_steps, half_steps]
    values: np.ndarray  # (d, p') Taylor coefficients

    def to_dense(self) -> np.ndarray:
        k = self.kernel
        out = np.zeros((k.dim, k.groups_per_coord, k.taylor_terms))
        rows = np.arange(k.dim)
        out[rows, self.groups + k.half_steps, :] = self.values
        return out.reshape(-1)

    def dot(self, dense_center: np.ndarray) -> float:
        k = self.kernel
        blocks = dense_center.reshape(k.dim, k.groups_per_coord, k.taylor_terms)
        rows = np.arange(k.dim)
        return float(np.sum(blocks[rows, self.groups + k.half_steps, :] * self.values))

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))


def generalp_lift_query(kernel: GeneralPKernel, z) -> SparseQueryLift:
    z = np.asarray(z, dtype=float)
    if z.shape != (kernel.dim,):
        raise DimensionMismatchError("query dimension mismatch")
    _check_in_ball(z, "query")
    x = z / 2.0
    c = kernel.group_index(x)
    h = x - c * kernel.delta
    return SparseQueryLift(kernel, c, kernel._taylor_coeffs(h))


def generalp_inner(kernel: GeneralPKernel, y, z) -> float:
    """<G(y), H(z)> without materializing the dense center lift."""
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    lift = generalp_lift_query(kernel, z)
    u = y / 2.0 - lift.groups * kernel.delta
    return float(np.sum(kernel._power_block(u) * lift.values))


# ---------------------------------------------------------------------------
# Taylor remainder bound
# ---------------------------------------------------------------------------

def taylor_remainder_residual(p: float, x, x_ref):
    """|x|^p minus its truncated expansion around x_ref, in absolute value,
    minus the bound (p |x - x_ref|)^p. Nonpositive values satisfy the bound."""
    x = np.asarray(x, dtype=float)
    x_ref = np.asarray(x_ref, dtype=float)
    terms = int(math.floor(p)) + 1
    approx = np.zeros(np.broadcast(x, x_ref).shape)
    ff = 1.0
    sgn = np.sign(x_ref)
    for l in range(terms):
        approx = approx + ff / math.factorial(l) * (x - x_ref) ** l * sgn ** l * np.abs(x_ref) ** (p - l)
        ff *= (p - l)
    lhs = np.abs(np.abs(x) ** p - approx)
    return lhs - (p * np.abs(x - x_ref)) ** p


def taylor_remainder_check(p: float, x: float, x_ref: float, tol: float = 1e-12) -> bool:
    """True when the truncated expansion error is within (p |x - x_ref|)^p + tol."""
    return bool(np.all(taylor_remainder_residual(p, x, x_ref) <= tol))
