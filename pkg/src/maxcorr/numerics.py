"""Dense linear-algebra and small-LP kernel.

Thin, contract-checked wrappers over LAPACK (via numpy) and HiGHS (via
scipy.optimize.linprog), plus a conjugate-gradient solve for consistent
positive-semidefinite systems that serves as the iterative counterpart to
pseudoinverse-based formulas.  Everything is double precision and
deterministic under fixed inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .errors import DimensionMismatch, LpFailure, NonFinite, NotSymmetric

#: Relative cutoff below which singular values count as zero.
RANK_TOL = 1e-10


@dataclass(frozen=True)
class SvdResult:
    """Thin SVD ``A = U diag(s) Vt`` with s sorted descending."""

    u: np.ndarray
    s: np.ndarray
    vt: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.u * self.s) @ self.vt


def _require_finite(a: np.ndarray):
    if not np.all(np.isfinite(a)):
        raise NonFinite("matrix contains NaN or infinity")


def svd(a: np.ndarray) -> SvdResult:
    """Thin singular value decomposition of a dense real matrix."""
    a = np.asarray(a, dtype=float)
    _require_finite(a)
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    return SvdResult(u, s, vt)


def numerical_rank(s: np.ndarray, rank_tol: float = RANK_TOL) -> int:
    """Count of singular values above ``rank_tol * s_max``."""
    s = np.asarray(s, dtype=float)
    if s.size == 0 or s[0] <= 0:
        return 0
    return int(np.sum(s > rank_tol * s[0]))


def pseudoinverse(a: np.ndarray, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Moore-Penrose pseudoinverse, truncating relative to the top singular value."""
    if rank_tol <= 0:
        raise DimensionMismatch(f"rank_tol must be > 0, got {rank_tol}")
    res = svd(a)
    r = numerical_rank(res.s, rank_tol)
    if r == 0:
        return np.zeros((a.shape[1], a.shape[0]))
    inv = np.zeros_like(res.s)
    inv[:r] = 1.0 / res.s[:r]
    return (res.vt.T * inv) @ res.u.T


def nullspace_basis(a: np.ndarray, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis of the null space of a symmetric PSD matrix.

    Returns an (n, n - rank) matrix; empty second dimension when full rank.
    """
    a = np.asarray(a, dtype=float)
    _require_finite(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSymmetric(f"expected a square matrix, got shape {a.shape}")
    if not np.allclose(a, a.T, atol=1e-10 * max(1.0, float(np.abs(a).max())), rtol=0):
        raise NotSymmetric("matrix is not symmetric")
    res = svd(a)
    r = numerical_rank(res.s, rank_tol)
    return res.vt[r:].T.copy()


def cg_minimum_norm(a: np.ndarray, b: np.ndarray, tol: float = 1e-14, max_iter: int | None = None) -> np.ndarray:
    """Minimum-norm solution of the consistent PSD system ``a @ x = b`` by
    conjugate gradients started at zero.

    Iterates stay in the Krylov space of ``a`` applied to ``b``, hence in the
    column space, so the limit is the minimum-norm solution.  Callers must
    check the residual themselves when ``b`` may leave the column space.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape[0] != a.shape[1] or a.shape[0] != b.shape[0]:
        raise DimensionMismatch(f"incompatible shapes {a.shape} and {b.shape}")
    n = b.shape[0]
    if max_iter is None:
        max_iter = 50 * n
    bnorm = float(np.linalg.norm(b))
    x = np.zeros(n)
    if bnorm == 0.0:
        return x
    r = b.copy()
    p = r.copy()
    rs = float(r @ r)
    for _ in range(max_iter):
        ap = a @ p
        pap = float(p @ ap)
        if pap <= 0.0:
            break  # direction fell into the numerical null space
        alpha = rs / pap
        x += alpha * p
        r -= alpha * ap
        rs_new = float(r @ r)
        if np.sqrt(rs_new) <= tol * max(1.0, bnorm):
            break
        p = r + (rs_new / rs) * p
        rs = rs_new
    return x


@dataclass(frozen=True)
class LinearProgram:
    """min objective @ x  s.t.  a_ub @ x <= b_ub,  a_eq @ x = b_eq, bounds.

    ``bounds`` is either a single (lo, hi) pair applied to every variable or
    a sequence of pairs; ``None`` endpoints mean unbounded.
    """

    objective: np.ndarray
    a_ub: np.ndarray | None = None
    b_ub: np.ndarray | None = None
    a_eq: np.ndarray | None = None
    b_eq: np.ndarray | None = None
    bounds: object = (None, None)

    def __post_init__(self):
        c = np.asarray(self.objective, dtype=float)
        if c.ndim != 1:
            raise DimensionMismatch("objective must be a vector")
        n = c.shape[0]
        for name, mat, vec in (("ub", self.a_ub, self.b_ub), ("eq", self.a_eq, self.b_eq)):
            if (mat is None) != (vec is None):
                raise DimensionMismatch(f"a_{name} and b_{name} must be given together")
            if mat is not None:
                mat = np.asarray(mat, dtype=float)
                vec = np.asarray(vec, dtype=float)
                if mat.ndim != 2 or mat.shape[1] != n or vec.shape != (mat.shape[0],):
                    raise DimensionMismatch(f"a_{name}/b_{name} shapes inconsistent with {n} variables")
        object.__setattr__(self, "objective", c)


def solve_lp(lp: LinearProgram) -> tuple[str, np.ndarray | None, float | None]:
    """Solve a small dense LP; returns ``(status, point, value)``.

    Status is one of ``"Optimal"``, ``"Infeasible"``, ``"Unbounded"``;
    anything else from the backend raises :class:`LpFailure`.  HiGHS with
    tightened feasibility tolerances keeps vertex solutions accurate to
    ~1e-12 at this scale, and is deterministic for fixed input.
    """
    res = linprog(
        lp.objective,
        A_ub=lp.a_ub,
        b_ub=lp.b_ub,
        A_eq=lp.a_eq,
        b_eq=lp.b_eq,
        bounds=lp.bounds,
        method="highs",
        options={
            "primal_feasibility_tolerance": 1e-10,
            "dual_feasibility_tolerance": 1e-10,
        },
    )
    if res.status == 0:
        return "Optimal", np.asarray(res.x, dtype=float), float(res.fun)
    if res.status == 2:
        return "Infeasible", None, None
    if res.status == 3:
        return "Unbounded", None, None
    raise LpFailure(f"LP solver returned status {res.status}: {res.message}")
