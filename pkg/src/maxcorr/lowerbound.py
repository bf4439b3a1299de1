"""Separable lower bound on maximal correlation from pairwise marginals.

Restricting the transform of X in the maximal-correlation problem to sums
f(X) = sum_i xi_i(X_i) turns it into a quadratic program over the one-hot
indicator encoding w of (X_1..X_p).  With

    Q[(i,k), (j,l)] = P(X_i = k, X_j = l)         (pm x pm, PSD)
    d[(i,k)]        = P(X_i=k, Y=1) - P(X_i=k, Y=0)

the bound is

    rho_lb = sqrt(1 - gamma / (P(Y=0) P(Y=1))),
    gamma  = min_z  z'Qz - d'z + 1/4  =  (1 - d'Q^+ d) / 4,

whose minimizers are exactly the solutions of 2Qz = d.  The sign of the
linear term is a pure convention (z -> -z flips it without changing gamma);
this package consistently uses the least-squares form above, under which
gamma equals E[(w'z - b)^2] with b = y - 1/2, and the additive construction
downstream reads P*(Y=1|x) = 1/2 + z'w_x.

Everything here depends on the marginals only, so the bound is shared by the
whole class of joints with those marginals.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .distributions import AlphabetSpec, Dataset, PairwiseMarginalSet, validate_marginals
from .errors import (
    DegenerateY,
    DimensionMismatch,
    DInconsistentWithQ,
    InconsistentMarginals,
)
from .numerics import RANK_TOL, cg_minimum_norm, pseudoinverse

logger = logging.getLogger(__name__)

#: Relative residual above which d is declared outside the column space of Q.
RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class QdSystem:
    """Assembled quadratic system (Q, d) plus P(Y=1) and E[w]."""

    spec: AlphabetSpec
    q: np.ndarray
    d: np.ndarray
    p_y1: float
    e_w: np.ndarray

    def __post_init__(self):
        pm = self.spec.pm
        if self.q.shape != (pm, pm) or self.d.shape != (pm,) or self.e_w.shape != (pm,):
            raise DimensionMismatch("QdSystem arrays inconsistent with spec")

    @property
    def var_y(self) -> float:
        return self.p_y1 * (1.0 - self.p_y1)

    def quadratic(self, z: np.ndarray) -> float:
        """The least-squares objective z'Qz - d'z + 1/4 at z."""
        z = np.asarray(z, dtype=float)
        if z.shape != (self.spec.pm,):
            raise DimensionMismatch(f"z must have length {self.spec.pm}")
        return float(z @ self.q @ z - self.d @ z + 0.25)


@dataclass(frozen=True)
class LowerBoundResult:
    """gamma, the derived correlation bound, and the minimizer used."""

    gamma_lb: float
    rho_lb: float
    z_star: np.ndarray
    method: str  # "closed-form" | "iterative"


@dataclass(frozen=True)
class DesignSystem:
    """Indicator design matrix W (n x pm) and target b in {-1/2, +1/2}^n."""

    w: np.ndarray
    b: np.ndarray


def assemble_qd(marginals: PairwiseMarginalSet, check: bool = True) -> QdSystem:
    """Build (Q, d, P(Y=1), E[w]) from a pairwise marginal set.

    Layout: block i covers indices i*m .. i*m + m - 1 and entry k within the
    block is label k.  Raises :class:`InconsistentMarginals` when the local
    validity screen fails or Q is not positive semidefinite (a necessary
    condition for the marginals to be realizable).
    """
    if check:
        report = validate_marginals(marginals)
        if not report.ok:
            raise InconsistentMarginals("; ".join(report.violations))

    spec = marginals.spec
    p, m, pm = spec.p, spec.m, spec.pm
    q = np.zeros((pm, pm))
    for i in range(p):
        for j in range(p):
            q[i * m : (i + 1) * m, j * m : (j + 1) * m] = marginals.pair(i, j)
    d = (marginals.xy[:, :, 1] - marginals.xy[:, :, 0]).reshape(pm)
    e_w = marginals.px.reshape(pm)
    p_y1 = float(marginals.p_y[1])

    if check:
        min_eig = float(np.linalg.eigvalsh(q).min())
        if min_eig < -1e-10:
            raise InconsistentMarginals(
                f"Q has eigenvalue {min_eig:.3e} < 0; no joint realizes these marginals"
            )
    return QdSystem(spec, q, d, p_y1, e_w)


def _check_residual(system: QdSystem, z: np.ndarray):
    """Reject z unless 2Qz = d holds to relative tolerance (d = 0 passes)."""
    dnorm = float(np.linalg.norm(system.d))
    resid = float(np.linalg.norm(2.0 * system.q @ z - system.d))
    if dnorm > 0.0 and resid > RESIDUAL_TOL * dnorm:
        raise DInconsistentWithQ(
            f"relative stationarity residual {resid / dnorm:.3e} exceeds "
            f"{RESIDUAL_TOL}; d is outside the column space of Q"
        )


def _clamp_gamma(gamma: float) -> float:
    clipped = min(max(gamma, 0.0), 0.25)
    if abs(clipped - gamma) > 1e-10:
        logger.warning("gamma_lb %.17g clamped to %.17g", gamma, clipped)
    return clipped


def minimum_norm_stationary(system: QdSystem, rank_tol: float = RANK_TOL) -> np.ndarray:
    """The minimum-norm solution of 2Qz = d, i.e. z = Q^+ d / 2."""
    z = 0.5 * pseudoinverse(system.q, rank_tol) @ system.d
    _check_residual(system, z)
    return z


def gamma_lb_closed(system: QdSystem, rank_tol: float = RANK_TOL) -> float:
    """gamma via the pseudoinverse identity (1 - d'Q^+ d) / 4."""
    u = pseudoinverse(system.q, rank_tol) @ system.d
    dnorm = float(np.linalg.norm(system.d))
    resid = float(np.linalg.norm(system.q @ u - system.d))
    if dnorm > 0.0 and resid > RESIDUAL_TOL * dnorm:
        raise DInconsistentWithQ(
            f"relative projection residual {resid / dnorm:.3e} exceeds {RESIDUAL_TOL}"
        )
    return _clamp_gamma(0.25 * (1.0 - float(system.d @ u)))


def gamma_lb_iterative(system: QdSystem) -> LowerBoundResult:
    """gamma by conjugate-gradient minimization of the quadratic.

    Solves Q z = d/2 from a zero start, which converges to the same
    minimum-norm stationary point as the closed form but through an
    independent numerical route.
    """
    z = cg_minimum_norm(system.q, 0.5 * system.d)
    _check_residual(system, z)
    gamma = _clamp_gamma(system.quadratic(z))
    return LowerBoundResult(gamma, _rho_from_gamma(system, gamma), z, method="iterative")


def _rho_from_gamma(system: QdSystem, gamma: float) -> float:
    if system.p_y1 <= 0.0 or system.p_y1 >= 1.0:
        raise DegenerateY(f"P(Y=1) = {system.p_y1}; the bound is undefined")
    radicand = 1.0 - gamma / system.var_y
    if radicand < -1e-9:
        raise DInconsistentWithQ(f"gamma {gamma} exceeds Var(Y) = {system.var_y} beyond roundoff")
    return float(np.sqrt(max(radicand, 0.0)))


def rho_lb(system: QdSystem, rank_tol: float = RANK_TOL) -> float:
    """The separable lower bound sqrt(1 - gamma / (P(Y=0) P(Y=1)))."""
    return _rho_from_gamma(system, gamma_lb_closed(system, rank_tol))


def design_matrix(data: Dataset) -> DesignSystem:
    """One-hot design W (one indicator per feature block per row) and
    centered targets b = y - 1/2."""
    spec = data.spec
    n = data.n
    w = np.zeros((n, spec.pm))
    rows = np.arange(n)
    for i in range(spec.p):
        w[rows, i * spec.m + data.rows[:, i]] = 1.0
    b = data.rows[:, spec.p].astype(float) - 0.5
    return DesignSystem(w, b)


def lsq_objective(design: DesignSystem, z: np.ndarray) -> float:
    """||W z - b||^2.  Dividing by n reproduces the quadratic objective built
    from the same dataset's empirical marginals."""
    z = np.asarray(z, dtype=float)
    if z.shape != (design.w.shape[1],):
        raise DimensionMismatch(
            f"z must have length {design.w.shape[1]}, got shape {z.shape}"
        )
    r = design.w @ z - design.b
    return float(r @ r)
