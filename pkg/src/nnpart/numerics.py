"""Shared numeric kernels.

A dense LP solver (two-phase simplex with Bland's anti-cycling rule, plus a
HiGHS backend for large instances), uniform sampling from bounded convex
bodies, membership tests for expanded bodies, and directional quantiles.

All routines are pure functions of (input, seed): identical inputs replay
identical outputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog as _scipy_linprog
from scipy.spatial import Delaunay, HalfspaceIntersection, QhullError

from .errors import DimensionMismatchError, EmptyBodyError, SolverFailureError
from .seeding import as_rng, derive_rng, split_seed

LE, EQ, GE = "<=", "==", ">="

_COST_TOL = 1e-9
_PIVOT_TOL = 1e-12
_FEAS_TOL = 1e-7
_UNIT_TOL = 1e-12

# Instances at most this big go through the in-house simplex; larger ones
# (the lifted scale sets) go to HiGHS.
_BLAND_SIZE_CAP = 160

# Vertex enumeration via qhull is only attempted in low dimension.
_VERTEX_DIM_CAP = 6


# ---------------------------------------------------------------------------
# Linear programming
# ---------------------------------------------------------------------------

@dataclass
class LinearProgram:
    """min/max objective . x subject to linear constraints and box bounds.

    constraints: list of (normal, offset, sense) meaning <normal, x> sense offset.
    bounds: per-coordinate (lo, hi); None means unbounded on that side.
    """

    objective: np.ndarray
    constraints: list = field(default_factory=list)
    bounds: list | None = None

    def __post_init__(self):
        self.objective = np.asarray(self.objective, dtype=float)
        if self.objective.ndim != 1:
            raise DimensionMismatchError("objective must be a vector")
        if not np.all(np.isfinite(self.objective)):
            raise ValueError("objective has non-finite coefficients")
        n = self.objective.size
        normalized = []
        for normal, offset, sense in self.constraints:
            a = np.asarray(normal, dtype=float)
            if a.shape != (n,):
                raise DimensionMismatchError(
                    f"constraint normal has dimension {a.size}, expected {n}")
            if not (np.all(np.isfinite(a)) and math.isfinite(offset)):
                raise ValueError("constraint has non-finite coefficients")
            if sense not in (LE, EQ, GE):
                raise ValueError(f"unknown sense {sense!r}")
            normalized.append((a, float(offset), sense))
        self.constraints = normalized
        if self.bounds is None:
            self.bounds = [(None, None)] * n
        if len(self.bounds) != n:
            raise DimensionMismatchError("bounds length must match objective")

    @property
    def n(self) -> int:
        return self.objective.size


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: float | None = None
    point: np.ndarray | None = None

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def solve_lp(lp: LinearProgram, sense: str = "max", backend: str = "auto") -> LPResult:
    """Solve a dense LP deterministically.

    backend "bland" uses the in-house two-phase simplex with Bland's rule;
    "highs" uses scipy's HiGHS (also deterministic for fixed input); "auto"
    picks by instance size.
    """
    if sense not in ("max", "min"):
        raise ValueError("sense must be 'max' or 'min'")
    if backend == "auto":
        backend = "bland" if lp.n + len(lp.constraints) <= _BLAND_SIZE_CAP else "highs"
    if backend == "bland":
        try:
            return _solve_bland(lp, sense)
        except SolverFailureError:
            # Deterministic fallback: breakdown is a property of the input.
            return _solve_highs(lp, sense)
    if backend == "highs":
        return _solve_highs(lp, sense)
    raise ValueError(f"unknown backend {backend!r}")


def _solve_highs(lp: LinearProgram, sense: str) -> LPResult:
    c = lp.objective if sense == "min" else -lp.objective
    a_ub, b_ub, a_eq, b_eq = [], [], [], []
    for a, b, s in lp.constraints:
        if s == LE:
            a_ub.append(a)
            b_ub.append(b)
        elif s == GE:
            a_ub.append(-a)
            b_ub.append(-b)
        else:
            a_eq.append(a)
            b_eq.append(b)
    res = _scipy_linprog(
        c,
        A_ub=np.asarray(a_ub) if a_ub else None,
        b_ub=np.asarray(b_ub) if b_ub else None,
        A_eq=np.asarray(a_eq) if a_eq else None,
        b_eq=np.asarray(b_eq) if b_eq else None,
        bounds=lp.bounds,
        method="highs",
    )
    if res.status == 0:
        value = float(lp.objective @ res.x)
        return LPResult("optimal", value, np.asarray(res.x, dtype=float))
    if res.status == 2:
        return LPResult("infeasible")
    if res.status == 3:
        return LPResult("unbounded")
    raise SolverFailureError(f"HiGHS failed with status {res.status}: {res.message}")


def _solve_bland(lp: LinearProgram, sense: str) -> LPResult:
    n = lp.n
    c_orig = lp.objective if sense == "min" else -lp.objective

    # Substitutions mapping each original variable to nonnegative columns:
    #   ("shift", lo)        x = lo + u
    #   ("flip", hi)         x = hi - u
    #   ("split", col_neg)   x = u+ - u-
    subs = []
    cols = 0
    extra_rows = []  # upper-bound rows on shifted columns
    for j, (lo, hi) in enumerate(lp.bounds):
        if lo is not None:
            subs.append(("shift", cols, float(lo)))
            if hi is not None:
                if hi < lo - 1e-15:
                    return LPResult("infeasible")
                extra_rows.append((cols, float(hi) - float(lo)))
            cols += 1
        elif hi is not None:
            subs.append(("flip", cols, float(hi)))
            cols += 1
        else:
            subs.append(("split", cols, None))
            cols += 2

    rows = []
    rhs = []
    senses = []
    for a, b, s in lp.constraints:
        row = np.zeros(cols)
        shift = 0.0
        for j, (kind, col, val) in enumerate(subs):
            if kind == "shift":
                row[col] = a[j]
                shift += a[j] * val
            elif kind == "flip":
                row[col] = -a[j]
                shift += a[j] * val
            else:
                row[col] = a[j]
                row[col + 1] = -a[j]
        rows.append(row)
        rhs.append(b - shift)
        senses.append(s)
    for col, ub in extra_rows:
        row = np.zeros(cols)
        row[col] = 1.0
        rows.append(row)
        rhs.append(ub)
        senses.append(LE)

    c = np.zeros(cols)
    obj_shift = 0.0
    for j, (kind, col, val) in enumerate(subs):
        if kind == "shift":
            c[col] = c_orig[j]
            obj_shift += c_orig[j] * val
        elif kind == "flip":
            c[col] = -c_orig[j]
            obj_shift += c_orig[j] * val
        else:
            c[col] = c_orig[j]
            c[col + 1] = -c_orig[j]

    m = len(rows)
    if m == 0:
        # No constraints: optimum at the bound pattern selected by signs.
        x = np.zeros(cols)
        if np.any((c < -_COST_TOL)):
            return LPResult("unbounded")
        return _recover(lp, sense, subs, x)

    A = np.vstack(rows)
    b = np.asarray(rhs, dtype=float)

    # Attach slack columns, normalize RHS signs, then add artificials.
    slack_cols = []
    for i, s in enumerate(senses):
        if s == LE:
            col = np.zeros(m)
            col[i] = 1.0
            slack_cols.append(col)
        elif s == GE:
            col = np.zeros(m)
            col[i] = -1.0
            slack_cols.append(col)
    if slack_cols:
        A = np.hstack([A, np.column_stack(slack_cols)])
    n_total = A.shape[1]
    neg = b < 0
    A[neg] *= -1.0
    b = np.abs(b)

    basis = np.full(m, -1, dtype=int)
    # Plain <= rows (not sign-flipped) start with their slack basic.
    slack_idx = cols
    for i, s in enumerate(senses):
        if s in (LE, GE):
            if s == LE and not neg[i]:
                basis[i] = slack_idx
            slack_idx += 1
    need_art = np.flatnonzero(basis < 0)
    n_art = need_art.size
    if n_art:
        art = np.zeros((m, n_art))
        for k, i in enumerate(need_art):
            art[i, k] = 1.0
            basis[i] = n_total + k
        A = np.hstack([A, art])

    tab = np.zeros((m + 1, A.shape[1] + 1))
    tab[:m, :-1] = A
    tab[:m, -1] = b

    # Phase 1: minimize the artificial sum.
    if n_art:
        cost1 = np.zeros(A.shape[1])
        cost1[n_total:] = 1.0
        tab[-1, :-1] = cost1
        tab[-1, -1] = 0.0
        for i in range(m):
            if basis[i] >= n_total:
                tab[-1] -= tab[i]
        status = _simplex_iterate(tab, basis)
        if status != "optimal":
            raise SolverFailureError("phase 1 did not terminate at an optimum")
        if -tab[-1, -1] > _FEAS_TOL * max(1.0, np.abs(b).max()):
            return LPResult("infeasible")
        _expel_artificials(tab, basis, n_total)

    # Phase 2 on the original columns only.
    tab2 = np.hstack([tab[:m, :n_total], tab[:m, -1:]])
    live = basis < n_total
    rows_keep = np.flatnonzero(live)
    tab2 = np.vstack([tab2[rows_keep], np.zeros((1, n_total + 1))])
    basis2 = basis[rows_keep].copy()
    c_full = np.zeros(n_total)
    c_full[:cols] = c
    tab2[-1, :-1] = c_full
    for i, bcol in enumerate(basis2):
        coef = tab2[-1, bcol]
        if coef != 0.0:
            tab2[-1] -= coef * tab2[i]
    status = _simplex_iterate(tab2, basis2)
    if status == "unbounded":
        return LPResult("unbounded")
    if status != "optimal":
        raise SolverFailureError("phase 2 did not terminate")

    x_std = np.zeros(n_total)
    x_std[basis2] = tab2[:-1, -1]
    return _recover(lp, sense, subs, x_std[:cols])


def _expel_artificials(tab, basis, n_total):
    """Pivot basic artificials out (or leave them on all-zero rows)."""
    m = tab.shape[0] - 1
    for i in range(m):
        if basis[i] < n_total:
            continue
        row = tab[i, :n_total]
        cand = np.flatnonzero(np.abs(row) > _PIVOT_TOL)
        if cand.size == 0:
            continue  # redundant row; harmless to keep
        j = int(cand[0])
        _pivot(tab, i, j)
        basis[i] = j


def _pivot(tab, row, col):
    tab[row] /= tab[row, col]
    factor = tab[:, col].copy()
    factor[row] = 0.0
    tab -= np.outer(factor, tab[row])
    # Clean the pivot column exactly to fight drift.
    tab[:, col] = 0.0
    tab[row, col] = 1.0


def _simplex_iterate(tab, basis, maxiter=20000):
    m = tab.shape[0] - 1
    tiny = 0
    for _ in range(maxiter):
        costs = tab[-1, :-1]
        entering = np.flatnonzero(costs < -_COST_TOL)
        if entering.size == 0:
            return "optimal"
        j = int(entering[0])  # Bland: smallest eligible index
        col = tab[:m, j]
        pos = col > _PIVOT_TOL
        if not pos.any():
            if np.any(col > 0):
                tiny += 1
                if tiny > 50:
                    raise SolverFailureError("repeated sub-tolerance pivots")
                tab[-1, j] = 0.0  # freeze the ill-conditioned column
                continue
            return "unbounded"
        ratios = np.full(m, np.inf)
        ratios[pos] = tab[:m, -1][pos] / col[pos]
        rmin = ratios.min()
        ties = np.flatnonzero(ratios <= rmin + 1e-12)
        i = int(ties[np.argmin(basis[ties])])  # Bland on the leaving variable
        _pivot(tab, i, j)
        basis[i] = j
    raise SolverFailureError("simplex iteration limit reached")


def _recover(lp, sense, subs, x_cols):
    x = np.zeros(lp.n)
    for j, (kind, col, val) in enumerate(subs):
        if kind == "shift":
            x[j] = val + x_cols[col]
        elif kind == "flip":
            x[j] = val - x_cols[col]
        else:
            x[j] = x_cols[col] - x_cols[col + 1]
    value = float(lp.objective @ x)
    return LPResult("optimal", value, x)


# ---------------------------------------------------------------------------
# Convex bodies
# ---------------------------------------------------------------------------

@dataclass
class ConvexBody:
    """(box intersect halfspaces) Minkowski-summed with a ball of radius `expansion`.

    Halfspace rows mean <normal, v> <= offset with unit normals.
    """

    lo: np.ndarray
    hi: np.ndarray
    normals: np.ndarray
    offsets: np.ndarray
    expansion: float = 0.0

    def __post_init__(self):
        self.lo = np.asarray(self.lo, dtype=float)
        self.hi = np.asarray(self.hi, dtype=float)
        d = self.lo.size
        if self.hi.shape != (d,):
            raise DimensionMismatchError("box bounds disagree")
        if np.any(self.hi < self.lo):
            raise EmptyBodyError("box is empty")
        self.normals = np.asarray(self.normals, dtype=float).reshape(-1, d)
        self.offsets = np.asarray(self.offsets, dtype=float).reshape(-1)
        if self.normals.shape[0] != self.offsets.size:
            raise DimensionMismatchError("halfspace normals and offsets disagree")
        if self.normals.shape[0]:
            norms = np.linalg.norm(self.normals, axis=1)
            if np.any(np.abs(norms - 1.0) > _UNIT_TOL):
                raise ValueError("halfspace normals must be unit vectors")
        if self.expansion < 0:
            raise ValueError("expansion must be nonnegative")

    @property
    def dim(self) -> int:
        return self.lo.size

    @classmethod
    def box(cls, lo, hi, expansion: float = 0.0) -> "ConvexBody":
        lo = np.asarray(lo, dtype=float)
        return cls(lo, np.asarray(hi, dtype=float),
                   np.empty((0, lo.size)), np.empty(0), expansion)

    def with_halfspace(self, normal, offset) -> "ConvexBody":
        normal = np.asarray(normal, dtype=float)
        return ConvexBody(
            self.lo, self.hi,
            np.vstack([self.normals, normal[None, :]]),
            np.append(self.offsets, float(offset)),
            self.expansion,
        )

    def with_expansion(self, z: float) -> "ConvexBody":
        return ConvexBody(self.lo, self.hi, self.normals, self.offsets, float(z))


def interior_point(body: ConvexBody):
    """Chebyshev-style center of the polytope part: (point, margin).

    margin < 0 certifies emptiness; margin == 0 means a flat body.
    """
    d = body.dim
    obj = np.zeros(d + 1)
    obj[-1] = 1.0
    cons = []
    for k in range(d):
        row = np.zeros(d + 1)
        row[k], row[-1] = 1.0, 1.0
        cons.append((row, body.hi[k], LE))
        row2 = np.zeros(d + 1)
        row2[k], row2[-1] = -1.0, 1.0
        cons.append((row2, -body.lo[k], LE))
    for a, b in zip(body.normals, body.offsets):
        row = np.concatenate([a, [1.0]])
        cons.append((row, b, LE))
    span = float(np.max(body.hi - body.lo)) if d else 1.0
    bounds = [(None, None)] * d + [(-span - 1.0, span + 1.0)]
    res = solve_lp(LinearProgram(obj, cons, bounds), sense="max")
    if not res.optimal:
        raise EmptyBodyError("interior-point LP did not solve")
    return res.point[:d], float(res.value)


def support_value(body: ConvexBody, direction, sense="max", backend="auto") -> float:
    """max (or min) of <direction, v> over the polytope part (expansion ignored)."""
    direction = np.asarray(direction, dtype=float)
    cons = [(a, b, LE) for a, b in zip(body.normals, body.offsets)]
    bounds = list(zip(body.lo, body.hi))
    res = solve_lp(LinearProgram(direction, cons, bounds), sense=sense, backend=backend)
    if res.status == "infeasible":
        raise EmptyBodyError("support LP infeasible")
    if not res.optimal:
        raise SolverFailureError(f"support LP status {res.status}")
    return float(res.value)


# ---------------------------------------------------------------------------
# Membership (Dykstra projection for expanded bodies)
# ---------------------------------------------------------------------------

def project_onto_polytope(body: ConvexBody, points: np.ndarray,
                          max_cycles: int = 400, tol: float = 1e-12) -> np.ndarray:
    """Euclidean projection of each row of `points` onto box intersect halfspaces.

    Dykstra's alternating projections; vectorized over points.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    x = pts.copy()
    n_sets = 1 + body.normals.shape[0]
    corrections = [np.zeros_like(x) for _ in range(n_sets)]
    for _ in range(max_cycles):
        x_prev = x.copy()
        y = x + corrections[0]
        x = np.clip(y, body.lo, body.hi)
        corrections[0] = y - x
        for k in range(body.normals.shape[0]):
            a = body.normals[k]
            b = body.offsets[k]
            y = x + corrections[k + 1]
            viol = y @ a - b
            np.maximum(viol, 0.0, out=viol)
            x = y - viol[:, None] * a
            corrections[k + 1] = y - x
        if np.max(np.abs(x - x_prev)) < tol:
            break
    return x


def membership(body: ConvexBody, point, tol: float = 1e-9):
    """True where the point lies in the (possibly expanded) body.

    Scalar input gives a bool; a (n, d) array gives a bool array.
    """
    pts = np.asarray(point, dtype=float)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    if pts.shape[1] != body.dim:
        raise DimensionMismatchError(
            f"point dimension {pts.shape[1]} != body dimension {body.dim}")
    if body.expansion == 0.0:
        ok = np.all(pts >= body.lo - tol, axis=1) & np.all(pts <= body.hi + tol, axis=1)
        if body.normals.shape[0]:
            ok &= np.all(pts @ body.normals.T <= body.offsets + tol, axis=1)
    else:
        if body.normals.shape[0] == 0:
            proj = np.clip(pts, body.lo, body.hi)
        else:
            proj = project_onto_polytope(body, pts)
        dist = np.linalg.norm(pts - proj, axis=1)
        ok = dist <= body.expansion + tol
    return bool(ok[0]) if single else ok


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

def sample_ball(dim: int, n: int, rng: np.random.Generator, radius: float = 1.0) -> np.ndarray:
    g = rng.standard_normal((n, dim))
    norms = np.linalg.norm(g, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    r = rng.random(n) ** (1.0 / dim)
    return g / norms * (radius * r)[:, None]


def hit_and_run(body: ConvexBody, n: int, burn_in: int, seed,
                start: np.ndarray | None = None) -> np.ndarray:
    """n approximately-uniform points from the polytope part of `body`.

    Requires expansion 0. One recorded point per chain step after burn-in;
    identical (seed, body, n, burn_in) inputs give identical output.
    """
    if body.expansion != 0.0:
        raise ValueError("hit_and_run samples the polytope; add ball offsets separately")
    if n < 1 or burn_in < 1:
        raise ValueError("n and burn_in must be >= 1")
    if start is None:
        x, margin = interior_point(body)
        if margin < -1e-9:
            raise EmptyBodyError("body is empty")
        if margin < 1e-12:
            return np.tile(x, (n, 1))  # degenerate (flat) body
    else:
        x = np.asarray(start, dtype=float).copy()
    rng = as_rng(seed)
    d = body.dim
    a_mat = body.normals if body.normals.shape[0] else None
    a_x = a_mat @ x if a_mat is not None else None
    out = np.empty((n, d))
    kept = 0
    step = 0
    attempts = 0
    max_attempts = 200 * (n + burn_in)
    while kept < n:
        attempts += 1
        if attempts > max_attempts:
            raise SolverFailureError("hit-and-run chords kept degenerating")
        step += 1
        u = rng.standard_normal(d)
        nu = np.linalg.norm(u)
        if nu < 1e-14:
            continue
        u /= nu
        t_lo, t_hi = -np.inf, np.inf
        with np.errstate(divide="ignore", invalid="ignore"):
            pos = u > 1e-14
            neg = u < -1e-14
            if pos.any():
                t_hi = min(t_hi, np.min((body.hi[pos] - x[pos]) / u[pos]))
                t_lo = max(t_lo, np.max((body.lo[pos] - x[pos]) / u[pos]))
            if neg.any():
                t_hi = min(t_hi, np.min((body.lo[neg] - x[neg]) / u[neg]))
                t_lo = max(t_lo, np.max((body.hi[neg] - x[neg]) / u[neg]))
            if a_mat is not None:
                a_u = a_mat @ u
                slack = body.offsets - a_x
                hit_pos = a_u > 1e-14
                hit_neg = a_u < -1e-14
                if hit_pos.any():
                    t_hi = min(t_hi, np.min(slack[hit_pos] / a_u[hit_pos]))
                if hit_neg.any():
                    t_lo = max(t_lo, np.max(slack[hit_neg] / a_u[hit_neg]))
        if not (np.isfinite(t_lo) and np.isfinite(t_hi)) or t_hi - t_lo < 1e-14:
            continue
        t = rng.uniform(t_lo, t_hi)
        x = x + t * u
        if a_mat is not None:
            a_x = a_x + t * a_u
        if step > burn_in:
            out[kept] = x
            kept += 1
    return out


def polytope_vertices(body: ConvexBody) -> np.ndarray | None:
    """Vertex enumeration for low-dimensional bodies; None when unavailable."""
    d = body.dim
    if d == 1:
        lo, hi = float(body.lo[0]), float(body.hi[0])
        for a, b in zip(body.normals, body.offsets):
            if a[0] > 0:
                hi = min(hi, b / a[0])
            else:
                lo = max(lo, b / a[0])
        if hi < lo - 1e-12:
            raise EmptyBodyError("1-D body is empty")
        return np.array([[lo], [hi]])
    if d > _VERTEX_DIM_CAP:
        return None
    try:
        center, margin = interior_point(body)
    except EmptyBodyError:
        raise
    if margin < -1e-9:
        raise EmptyBodyError("body is empty")
    if margin < 1e-10:
        return None  # flat body; callers fall back to LP machinery
    rows = [np.concatenate([np.eye(d)[k], [-body.hi[k]]]) for k in range(d)]
    rows += [np.concatenate([-np.eye(d)[k], [body.lo[k]]]) for k in range(d)]
    for a, b in zip(body.normals, body.offsets):
        rows.append(np.concatenate([a, [-b]]))
    try:
        hs = HalfspaceIntersection(np.vstack(rows), center)
    except QhullError:
        return None
    verts = np.unique(np.round(hs.intersections, 12), axis=0)
    return verts


def _triangulate(verts: np.ndarray):
    """(simplex corner array (s, d+1, d), cumulative volume fractions)."""
    d = verts.shape[1]
    if d == 1:
        corners = verts[np.argsort(verts[:, 0])][None, [0, -1], :]
        return corners, np.array([1.0])
    tri = Delaunay(verts)
    corners = verts[tri.simplices]
    mats = corners[:, 1:, :] - corners[:, :1, :]
    vols = np.abs(np.linalg.det(mats))
    total = vols.sum()
    if total <= 0:
        raise QhullError("triangulation degenerated")
    return corners, np.cumsum(vols / total)


def sample_polytope(body: ConvexBody, n: int, seed, burn_in: int = 200) -> np.ndarray:
    """n uniform points from the polytope part of `body`.

    Low-dimensional bodies are sampled i.i.d. via a cached-free triangulation;
    high-dimensional ones fall back to hit-and-run. The method choice is a
    deterministic function of the body, so output is reproducible per seed.
    """
    verts = None
    try:
        verts = polytope_vertices(body)
    except QhullError:
        verts = None
    if verts is None:
        return hit_and_run(body, n, burn_in, seed)
    if verts.shape[0] == 1 or np.max(np.ptp(verts, axis=0)) < 1e-12:
        return np.tile(verts[0], (n, 1))
    rng = as_rng(seed)
    try:
        corners, cum = _triangulate(verts)
    except QhullError:
        return hit_and_run(body, n, burn_in, seed)
    idx = np.searchsorted(cum, rng.random(n), side="left")
    idx = np.minimum(idx, corners.shape[0] - 1)
    w = rng.standard_exponential((n, corners.shape[1]))
    w /= w.sum(axis=1, keepdims=True)
    return np.einsum("nk,nkd->nd", w, corners[idx])


def sample_body(body: ConvexBody, n: int, seed, burn_in: int = 200) -> np.ndarray:
    """Sample the expanded body as (polytope sample) + expansion * (ball sample).

    Slightly overweights corners relative to the exact Minkowski sum; accepted
    because consumers only need approximate quantiles.
    """
    poly_key, ball_key = split_seed(seed, 2)
    pts = sample_polytope(body.with_expansion(0.0), n, poly_key, burn_in=burn_in)
    if body.expansion > 0.0:
        pts = pts + sample_ball(body.dim, n, derive_rng(ball_key), radius=body.expansion)
    return pts


def directional_quantile(body: ConvexBody, direction, q: float, n: int, seed,
                         burn_in: int = 200) -> float:
    """Empirical q-quantile of <direction, v> over uniform-ish samples of `body`."""
    if not 0.0 < q < 1.0:
        raise ValueError("q must lie strictly between 0 and 1")
    direction = np.asarray(direction, dtype=float)
    if direction.shape != (body.dim,):
        raise DimensionMismatchError("direction dimension mismatch")
    pts = sample_body(body, n, seed, burn_in=burn_in)
    return float(np.quantile(pts @ direction, q))


def unit_ball_volume(dim: int) -> float:
    return math.pi ** (dim / 2.0) / math.gamma(dim / 2.0 + 1.0)
