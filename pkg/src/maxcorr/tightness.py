"""Is the separable lower bound achieved, and by which distribution?

The bound rho_lb is attained by some member of the marginal class iff the
class contains a joint whose conditional mean E[Y|X] is additive, iff some
minimizer z of the quadratic satisfies the per-block max bounds

    h(z) <= 1/2  and  h(-z) <= 1/2,
    h(z) = sum_i max(z over block i).

Those bounds are exactly what keeps 1/2 + z'w_x inside [0, 1], so a passing
z yields the achieving joint directly:

    P*(x, y=1) = (1/2 + z'w_x) Q(x),    P*(x, y=0) = (1/2 - z'w_x) Q(x)

for any base Q in the class.  P* keeps the pairwise marginals, has the
additive conditional mean 1/2 + z'w_x, and attains rho_lb.

The decision is run as a small LP over the FULL minimizer set
{z0 + N c : c free} (z0 the minimum-norm stationary point, N a null-space
basis of Q), since the minimum-norm point alone may violate the bounds while
another minimizer passes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distributions import (
    AlphabetSpec,
    DiscreteJoint,
    conditional_expectation,
    pairwise_from_joint,
    perturb_joint,
    uniform_joint,
)
from .errors import (
    DegenerateY,
    DimensionMismatch,
    HConstraintViolated,
    InvalidEpsilon,
    LpFailure,
    MarginalMismatch,
    NotStationary,
    ValidationError,
)
from .hgr import flatten_joint, hgr_svd
from .lowerbound import QdSystem, assemble_qd, minimum_norm_stationary, rho_lb
from .numerics import LinearProgram, nullspace_basis, solve_lp

#: Default slack for the h <= 1/2 boundary (non-strict in exact arithmetic).
TIGHT_TOL = 1e-9


@dataclass(frozen=True)
class TightnessCertificate:
    """Outcome of the achievability test.

    ``lp_value`` is min over the minimizer set of max(h(z), h(-z)); the
    verdict is Tight iff it is <= 1/2 + tol.  ``z_star`` is a feasible
    witness when Tight (the minimum-norm minimizer whenever it already
    passes), otherwise the LP minimizer.
    """

    verdict: str
    z_star: np.ndarray
    h_pos: float
    h_neg: float
    lp_value: float
    tol: float

    @property
    def tight(self) -> bool:
        return self.verdict == "Tight"


@dataclass(frozen=True)
class AdditiveDecomposition:
    """Per-feature tables f_i with E[Y|X=x] ~ sum_i f_i(x_i) on the support."""

    f: np.ndarray  # (p, m)
    residual: float
    additive: bool


def h_value(z: np.ndarray, spec: AlphabetSpec) -> float:
    """Sum over feature blocks of the per-block maximum of z."""
    z = np.asarray(z, dtype=float)
    if z.shape != (spec.pm,):
        raise DimensionMismatch(f"z must have length {spec.pm}, got shape {z.shape}")
    return float(z.reshape(spec.p, spec.m).max(axis=1).sum())


def check_tightness(system: QdSystem, tol: float = TIGHT_TOL) -> TightnessCertificate:
    """Decide whether the lower bound is attained over the marginal class.

    Solves  min u  s.t.  u >= sum_i t_i,  u >= sum_i s_i,
                         t_i >= (z0 + N c) on block i,
                         s_i >= -(z0 + N c) on block i,
    over free (c, t, s, u); the optimum is min max(h(z), h(-z)) over all
    quadratic minimizers z.
    """
    if system.p_y1 <= 0.0 or system.p_y1 >= 1.0:
        raise DegenerateY(f"P(Y=1) = {system.p_y1}; tightness test undefined")
    spec = system.spec
    p, m, pm = spec.p, spec.m, spec.pm

    z0 = minimum_norm_stationary(system)
    basis = nullspace_basis(system.q)
    ndim = basis.shape[1]
    nv = ndim + 2 * p + 1  # variables: c, t, s, u

    n_rows = 2 * pm + 2
    a_ub = np.zeros((n_rows, nv))
    b_ub = np.zeros(n_rows)
    row = 0
    for i in range(p):
        for k in range(m):
            idx = i * m + k
            a_ub[row, :ndim] = basis[idx]
            a_ub[row, ndim + i] = -1.0
            b_ub[row] = -z0[idx]
            row += 1
            a_ub[row, :ndim] = -basis[idx]
            a_ub[row, ndim + p + i] = -1.0
            b_ub[row] = z0[idx]
            row += 1
    a_ub[row, ndim : ndim + p] = 1.0
    a_ub[row, -1] = -1.0
    row += 1
    a_ub[row, ndim + p : ndim + 2 * p] = 1.0
    a_ub[row, -1] = -1.0

    objective = np.zeros(nv)
    objective[-1] = 1.0
    status, point, value = solve_lp(LinearProgram(objective, a_ub=a_ub, b_ub=b_ub))
    if status != "Optimal":
        raise LpFailure(f"tightness LP ended with status {status}")

    lp_value = float(value)
    z_lp = z0 + basis @ point[:ndim]
    verdict = "Tight" if lp_value <= 0.5 + tol else "NotTight"
    # Prefer the minimum-norm minimizer as the witness when it already passes.
    z_star = z0 if max(h_value(z0, spec), h_value(-z0, spec)) <= 0.5 + tol else z_lp
    return TightnessCertificate(
        verdict=verdict,
        z_star=z_star,
        h_pos=h_value(z_star, spec),
        h_neg=h_value(-z_star, spec),
        lp_value=lp_value,
        tol=tol,
    )


def is_additive(joint: DiscreteJoint, tol: float = TIGHT_TOL) -> AdditiveDecomposition:
    """Fit E[Y|X=x] by a sum of per-feature tables over the support.

    Probability-weighted least squares; off-support states carry no
    constraint.  ``additive`` is set when the worst support residual is
    within ``tol``.
    """
    p1 = joint.p_y1
    if p1 <= 0.0 or p1 >= 1.0:
        raise DegenerateY(f"P(Y=1) = {p1}; additivity test undefined")
    spec = joint.spec
    cond = conditional_expectation(joint)
    support = cond.support
    w = spec.indicator_matrix()[support]
    e = cond.values[support]
    weights = np.sqrt(joint.px[support])
    coef, *_ = np.linalg.lstsq(w * weights[:, None], e * weights, rcond=None)
    fitted = w @ coef
    residual = float(np.abs(fitted - e).max())
    return AdditiveDecomposition(coef.reshape(spec.p, spec.m), residual, residual <= tol)


def construct_additive(
    z_star: np.ndarray,
    base: DiscreteJoint,
    expected_marginals=None,
    tol: float = TIGHT_TOL,
) -> DiscreteJoint:
    """Build the additive-structure joint P* from a passing minimizer.

    ``base`` must carry the marginals that produced ``z_star`` (checked
    against ``expected_marginals`` entrywise when given, and always via the
    stationarity residual).  The result keeps all pairwise marginals of the
    base and has conditional P*(Y=1|x) = 1/2 + z_star'w_x, an additive
    function with per-feature tables z block + 1/(2p).
    """
    spec = base.spec
    z_star = np.asarray(z_star, dtype=float)
    if z_star.shape != (spec.pm,):
        raise DimensionMismatch(f"z_star must have length {spec.pm}")

    base_marginals = pairwise_from_joint(base)
    if expected_marginals is not None:
        worst = 0.0
        for key, tab in expected_marginals.xx.items():
            worst = max(worst, float(np.abs(tab - base_marginals.xx[key]).max()))
        worst = max(worst, float(np.abs(expected_marginals.xy - base_marginals.xy).max()))
        if worst > 1e-9:
            raise MarginalMismatch(f"base marginals deviate by {worst:.3e}")

    system = assemble_qd(base_marginals, check=False)
    resid = float(np.linalg.norm(2.0 * system.q @ z_star - system.d))
    if resid > 1e-8:
        raise NotStationary(f"||2Qz - d|| = {resid:.3e}; z_star does not minimize the quadratic")

    hp = h_value(z_star, spec)
    hn = h_value(-z_star, spec)
    if hp > 0.5 + tol or hn > 0.5 + tol:
        raise HConstraintViolated(
            f"h(z) = {hp:.12f}, h(-z) = {hn:.12f} exceed 1/2; the construction "
            "would produce negative probabilities"
        )

    shift = spec.indicator_matrix() @ z_star
    p1x = np.clip(0.5 + shift, 0.0, 1.0)
    qx = base.px
    prob = np.stack([(1.0 - p1x) * qx, p1x * qx], axis=1)
    return DiscreteJoint(spec, prob, tol=1e-12)


def tightness_gap(joint: DiscreteJoint) -> tuple[float, float, float]:
    """(exact maximal correlation, separable bound, gap) for one joint.

    The gap is for this particular class member; when the verdict is
    NotTight it says nothing about the minimum over the whole class beyond
    being an upper bound on it.
    """
    rho_oracle = hgr_svd(flatten_joint(joint)).rho
    bound = rho_lb(assemble_qd(pairwise_from_joint(joint)))
    return rho_oracle, bound, rho_oracle - bound


def near_uniform_probe(
    spec: AlphabetSpec, eps: float, trials: int, seed, tol: float = TIGHT_TOL
) -> float:
    """Fraction of random eps-perturbations of the uniform joint whose
    marginal class still contains an additive distribution.

    Each trial perturbs the uniform joint by at most eps in L1, extracts
    marginals, and runs the tightness test.  Trials are seeded independently
    so the result does not depend on evaluation order.
    """
    if eps < 0:
        raise InvalidEpsilon(f"eps must be >= 0, got {eps}")
    if trials < 1:
        raise ValidationError(f"trials must be >= 1, got {trials}")
    base = uniform_joint(spec)
    hits = 0
    for trial in range(trials):
        joint = perturb_joint(base, eps, seed=(seed, trial))
        system = assemble_qd(pairwise_from_joint(joint), check=False)
        if check_tightness(system, tol=tol).tight:
            hits += 1
    return hits / trials
