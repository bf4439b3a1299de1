"""Joint distributions over categorical features and a binary target.

The objects here are dense probability tables over ``(X_1..X_p, Y)`` with a
common feature alphabet ``{0..m-1}`` and ``Y in {0, 1}``, plus the pairwise
marginal sets that summarize them:

* ``mu^{ij}[k, l] = P(X_i = k, X_j = l)`` for every feature pair,
* ``mu^{i}[k, y]  = P(X_i = k, Y = y)`` for every feature.

X-states are encoded in mixed radix with ``x_1`` least significant, so state
``x`` maps to index ``x_1 + x_2*m + ... + x_p*m^(p-1)``.  This fixes the
iteration order for every table, flattening, and file in the package.

Dense full-joint operations are capped at ``2 * m^p <= 2**22`` atoms; larger
problems must stay in marginal form.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AtomCapExceeded,
    DuplicateEntry,
    InconsistentMarginals,
    InvalidEpsilon,
    LabelOutOfRange,
    NegativeProbability,
    NotNormalized,
    ValidationError,
)

#: Tolerance for user-supplied tables (files, hand-built rows).
INPUT_TOL = 1e-9
#: Tolerance for tables constructed internally; looser means a bug.
INTERNAL_TOL = 1e-12
#: Dense-table cap: m^p * 2 atoms must fit under this.
ATOM_CAP = 2**22


@dataclass(frozen=True)
class AlphabetSpec:
    """Shape of the problem: p features, each over {0..m-1}, binary Y."""

    p: int
    m: int

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or self.p < 1:
            raise ValidationError(f"p must be an integer >= 1, got {self.p!r}")
        if not isinstance(self.m, (int, np.integer)) or self.m < 2:
            raise ValidationError(f"m must be an integer >= 2, got {self.m!r}")
        # Exact integer arithmetic; guards m^p against int64 overflow.
        if self.m**self.p >= 2**62:
            raise ValidationError(f"m^p = {self.m}^{self.p} overflows the state index")

    @property
    def n_states(self) -> int:
        return self.m**self.p

    @property
    def n_atoms(self) -> int:
        return 2 * self.n_states

    @property
    def pm(self) -> int:
        """Length of the one-hot indicator vector."""
        return self.p * self.m

    def require_dense(self):
        if self.n_atoms > ATOM_CAP:
            raise AtomCapExceeded(
                f"{self.n_atoms} atoms exceed the dense cap {ATOM_CAP}; "
                "only marginal-based operations are available at this size"
            )

    def encode(self, x) -> int:
        """Mixed-radix state index of label tuple ``x`` (x_1 least significant)."""
        x = tuple(int(v) for v in x)
        if len(x) != self.p:
            raise LabelOutOfRange(f"expected {self.p} labels, got {len(x)}")
        if any(v < 0 or v >= self.m for v in x):
            raise LabelOutOfRange(f"labels {x} outside 0..{self.m - 1}")
        return sum(v * self.m**i for i, v in enumerate(x))

    def decode(self, idx: int) -> tuple:
        if idx < 0 or idx >= self.n_states:
            raise LabelOutOfRange(f"state index {idx} outside 0..{self.n_states - 1}")
        return tuple((idx // self.m**i) % self.m for i in range(self.p))

    def states(self) -> np.ndarray:
        """All state label tuples as an (m^p, p) array, in index order."""
        self.require_dense()
        idx = np.arange(self.n_states)
        cols = [(idx // self.m**i) % self.m for i in range(self.p)]
        return np.stack(cols, axis=1)

    def indicator_matrix(self) -> np.ndarray:
        """One-hot rows w_x over all states: (m^p, p*m), block i holds X_i."""
        st = self.states()
        w = np.zeros((self.n_states, self.pm))
        rows = np.arange(self.n_states)
        for i in range(self.p):
            w[rows, i * self.m + st[:, i]] = 1.0
        return w


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class DiscreteJoint:
    """Dense joint table: ``prob[state, y] = P(X = x(state), Y = y)``."""

    spec: AlphabetSpec
    prob: np.ndarray
    tol: float = field(default=INPUT_TOL, compare=False)

    def __post_init__(self):
        self.spec.require_dense()
        prob = np.asarray(self.prob, dtype=float)
        if prob.shape != (self.spec.n_states, 2):
            raise ValidationError(
                f"joint table must have shape {(self.spec.n_states, 2)}, got {prob.shape}"
            )
        if not np.all(np.isfinite(prob)):
            raise ValidationError("joint table contains non-finite entries")
        if np.any(prob < 0):
            worst = float(prob.min())
            raise NegativeProbability(f"negative probability {worst}")
        total = float(prob.sum())
        if abs(total - 1.0) > self.tol:
            raise NotNormalized(f"probabilities sum to {total}, not 1 within {self.tol}")
        object.__setattr__(self, "prob", _freeze(prob))

    @property
    def p_y1(self) -> float:
        return float(self.prob[:, 1].sum())

    @property
    def px(self) -> np.ndarray:
        """State marginals P(X = x), length m^p."""
        return self.prob.sum(axis=1)


@dataclass(frozen=True)
class Dataset:
    """n rows of labels (x_1..x_p, y)."""

    spec: AlphabetSpec
    rows: np.ndarray

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=int)
        if rows.ndim != 2 or rows.shape[1] != self.spec.p + 1:
            raise ValidationError(
                f"dataset rows must have shape (n, {self.spec.p + 1}), got {rows.shape}"
            )
        if rows.shape[0] < 1:
            raise ValidationError("dataset must contain at least one row")
        x = rows[:, : self.spec.p]
        y = rows[:, self.spec.p]
        if x.min() < 0 or x.max() >= self.spec.m:
            raise LabelOutOfRange("feature label outside alphabet")
        if y.min() < 0 or y.max() > 1:
            raise LabelOutOfRange("y label outside {0, 1}")
        rows = rows.copy()
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return self.rows.shape[0]


@dataclass(frozen=True)
class PairwiseMarginalSet:
    """Pairwise tables mu^{ij} (all ordered i != j), mu^{i}, and univariates.

    ``xx[(i, j)][k, l] = P(X_i = k, X_j = l)`` for i != j (0-based);
    ``xy[i, k, y] = P(X_i = k, Y = y)``; ``px[i, k] = P(X_i = k)``.

    Construction checks shapes and finiteness only; the probabilistic
    invariants are the business of :func:`validate_marginals`, so that
    deliberately broken sets can be represented and diagnosed.
    """

    spec: AlphabetSpec
    xx: dict
    xy: np.ndarray
    px: np.ndarray

    def __post_init__(self):
        p, m = self.spec.p, self.spec.m
        xy = np.asarray(self.xy, dtype=float)
        px = np.asarray(self.px, dtype=float)
        if xy.shape != (p, m, 2):
            raise ValidationError(f"xy must have shape {(p, m, 2)}, got {xy.shape}")
        if px.shape != (p, m):
            raise ValidationError(f"px must have shape {(p, m)}, got {px.shape}")
        xx = {}
        for i in range(p):
            for j in range(p):
                if i == j:
                    continue
                if (i, j) not in self.xx:
                    raise ValidationError(f"missing pairwise table for ({i}, {j})")
                t = np.asarray(self.xx[(i, j)], dtype=float)
                if t.shape != (m, m):
                    raise ValidationError(f"xx[{i},{j}] must be {m}x{m}, got {t.shape}")
                xx[(i, j)] = _freeze(t)
        for tab in (xy, px, *xx.values()):
            if not np.all(np.isfinite(tab)):
                raise ValidationError("marginal table contains non-finite entries")
        object.__setattr__(self, "xx", xx)
        object.__setattr__(self, "xy", _freeze(xy))
        object.__setattr__(self, "px", _freeze(px))

    def pair(self, i: int, j: int) -> np.ndarray:
        """mu^{ij} with the diagonal convention mu^{ii} = diag(P(X_i = .))."""
        if i == j:
            return np.diag(self.px[i])
        return self.xx[(i, j)]

    @property
    def p_y(self) -> np.ndarray:
        """(P(Y=0), P(Y=1)) read off the first feature's table."""
        return self.xy[0].sum(axis=0)


@dataclass(frozen=True)
class ConditionalTable:
    """E[Y | X = x] on the support of X; off-support states are only flagged."""

    spec: AlphabetSpec
    values: np.ndarray
    support: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        support = np.asarray(self.support, dtype=bool)
        if values.shape != (self.spec.n_states,) or support.shape != values.shape:
            raise ValidationError("conditional table shape mismatch")
        on = values[support]
        if on.size and (on.min() < -INTERNAL_TOL or on.max() > 1 + INTERNAL_TOL):
            raise ValidationError("conditional expectations must lie in [0, 1]")
        object.__setattr__(self, "values", _freeze(values))
        sup = support.copy()
        sup.setflags(write=False)
        object.__setattr__(self, "support", sup)


@dataclass(frozen=True)
class ValidationReport:
    """Findings from marginal validation; empty ``violations`` means pass."""

    violations: tuple
    warnings: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations


# ---------------------------------------------------------------------------
# construction and extraction
# ---------------------------------------------------------------------------


def joint_from_table(spec: AlphabetSpec, rows) -> DiscreteJoint:
    """Build a joint from sparse ``(x_tuple, y, prob)`` triples.

    Unspecified cells default to zero; duplicate cells and out-of-range
    labels are rejected, and the entries must form a probability table.
    """
    spec.require_dense()
    prob = np.zeros((spec.n_states, 2))
    seen = set()
    for x, y, value in rows:
        y = int(y)
        if y not in (0, 1):
            raise LabelOutOfRange(f"y label {y} outside {{0, 1}}")
        idx = spec.encode(x)
        if (idx, y) in seen:
            raise DuplicateEntry(f"cell (x={tuple(x)}, y={y}) specified twice")
        seen.add((idx, y))
        value = float(value)
        if value < 0:
            raise NegativeProbability(f"negative probability {value} at (x={tuple(x)}, y={y})")
        prob[idx, y] = value
    return DiscreteJoint(spec, prob)


def _state_tensor(spec: AlphabetSpec, flat: np.ndarray) -> np.ndarray:
    """Reshape an (m^p,) vector to axes (x_1, ..., x_p)."""
    return flat.reshape((spec.m,) * spec.p, order="F")


def pairwise_from_joint(joint: DiscreteJoint) -> PairwiseMarginalSet:
    """Exact pairwise marginals of a dense joint."""
    spec = joint.spec
    p, m = spec.p, spec.m
    tx = _state_tensor(spec, joint.px)
    ty = [_state_tensor(spec, joint.prob[:, y].copy()) for y in (0, 1)]

    px = np.zeros((p, m))
    xy = np.zeros((p, m, 2))
    for i in range(p):
        others = tuple(ax for ax in range(p) if ax != i)
        px[i] = tx.sum(axis=others)
        for y in (0, 1):
            xy[i, :, y] = ty[y].sum(axis=others)

    xx = {}
    for i in range(p):
        for j in range(i + 1, p):
            others = tuple(ax for ax in range(p) if ax not in (i, j))
            tab = tx.sum(axis=others)  # axes come out ordered (i, j)
            xx[(i, j)] = tab
            xx[(j, i)] = tab.T
    return PairwiseMarginalSet(spec, xx, xy, px)


def empirical_joint(data: Dataset) -> DiscreteJoint:
    """Frequency table of a dataset as a joint distribution."""
    spec = data.spec
    spec.require_dense()
    idx = np.zeros(data.n, dtype=np.int64)
    for i in range(spec.p):
        idx += data.rows[:, i] * spec.m**i
    flat = idx * 2 + data.rows[:, spec.p]
    counts = np.bincount(flat, minlength=spec.n_atoms).astype(float)
    return DiscreteJoint(spec, (counts / data.n).reshape(spec.n_states, 2), tol=INTERNAL_TOL)


def pairwise_from_dataset(data: Dataset) -> PairwiseMarginalSet:
    """Empirical pairwise marginals of a dataset.

    Under the dense cap this routes through the empirical joint, so it agrees
    with ``pairwise_from_joint(empirical_joint(data))`` bit for bit; above the
    cap the same counts are accumulated pairwise without the joint table.
    """
    spec = data.spec
    if spec.n_atoms <= ATOM_CAP:
        return pairwise_from_joint(empirical_joint(data))

    p, m, n = spec.p, spec.m, data.n
    x = data.rows[:, :p]
    y = data.rows[:, p]
    px = np.zeros((p, m))
    xy = np.zeros((p, m, 2))
    for i in range(p):
        px[i] = np.bincount(x[:, i], minlength=m) / n
        xy[i] = np.bincount(x[:, i] * 2 + y, minlength=2 * m).reshape(m, 2) / n
    xx = {}
    for i in range(p):
        for j in range(i + 1, p):
            tab = np.bincount(x[:, i] * m + x[:, j], minlength=m * m).reshape(m, m) / n
            xx[(i, j)] = tab
            xx[(j, i)] = tab.T
    return PairwiseMarginalSet(spec, xx, xy, px)


def conditional_expectation(joint: DiscreteJoint) -> ConditionalTable:
    """E[Y | X = x] = P(x, 1) / P(x) wherever P(x) > 0."""
    px = joint.px
    support = px > 0
    values = np.zeros(joint.spec.n_states)
    values[support] = joint.prob[support, 1] / px[support]
    return ConditionalTable(joint.spec, values, support)


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


def validate_marginals(marginals: PairwiseMarginalSet, tol: float = INPUT_TOL) -> ValidationReport:
    """Check every necessary local condition on a pairwise marginal set.

    Passing is necessary but NOT sufficient for the marginals to be realized
    by some joint distribution; exact membership in the marginal polytope is
    only decidable by :func:`feasible_member` at dense scale.
    """
    spec = marginals.spec
    p = spec.p
    violations = []
    warnings = []

    def check_table(name, tab):
        if tab.min() < -tol:
            violations.append(f"{name}: negative entry {tab.min():.3e}")
        if abs(tab.sum() - 1.0) > tol:
            violations.append(f"{name}: sums to {tab.sum():.12f}, not 1")

    for i in range(p):
        check_table(f"px[{i}]", marginals.px[i])
        check_table(f"xy[{i}]", marginals.xy[i])
    for (i, j), tab in marginals.xx.items():
        if i < j:
            check_table(f"xx[{i},{j}]", tab)

    for i in range(p):
        for j in range(i + 1, p):
            if not np.allclose(marginals.xx[(i, j)], marginals.xx[(j, i)].T, atol=tol, rtol=0):
                violations.append(f"xx[{i},{j}] is not the transpose of xx[{j},{i}]")

    # Row/column sums of every table must reproduce the univariate marginals.
    for i in range(p):
        if not np.allclose(marginals.xy[i].sum(axis=1), marginals.px[i], atol=tol, rtol=0):
            violations.append(f"xy[{i}] row sums disagree with px[{i}]")
        for j in range(p):
            if i == j:
                continue
            rows = marginals.xx[(i, j)].sum(axis=1)
            if not np.allclose(rows, marginals.px[i], atol=tol, rtol=0):
                violations.append(f"xx[{i},{j}] row sums disagree with px[{i}]")

    py = marginals.xy.sum(axis=1)  # (p, 2)
    for i in range(1, p):
        if not np.allclose(py[i], py[0], atol=tol, rtol=0):
            violations.append(f"xy[{i}] implies P(Y) = {py[i]} but xy[0] implies {py[0]}")

    p_y1 = float(py[0, 1])
    if p_y1 <= 0.0 or p_y1 >= 1.0:
        warnings.append(f"degenerate target: P(Y=1) = {p_y1}; correlation ops will reject this")

    return ValidationReport(tuple(violations), tuple(warnings))


def feasible_member(marginals: PairwiseMarginalSet, tol: float = INPUT_TOL) -> DiscreteJoint:
    """Some joint distribution realizing the marginals, via a feasibility LP
    over all atoms (dense cap applies).

    Raises :class:`InconsistentMarginals` when the class is empty.
    """
    from .numerics import LinearProgram, solve_lp

    spec = marginals.spec
    spec.require_dense()
    report = validate_marginals(marginals, tol=tol)
    if not report.ok:
        raise InconsistentMarginals("; ".join(report.violations))

    n_states, n_atoms = spec.n_states, spec.n_atoms
    states = spec.states()
    rows, rhs = [], []

    def atom_cols(mask_states, y=None):
        cols = np.zeros(n_atoms)
        for s in np.nonzero(mask_states)[0]:
            if y is None:
                cols[2 * s] = cols[2 * s + 1] = 1.0
            else:
                cols[2 * s + y] = 1.0
        return cols

    for i in range(spec.p):
        for j in range(i + 1, spec.p):
            for k in range(spec.m):
                for l in range(spec.m):
                    mask = (states[:, i] == k) & (states[:, j] == l)
                    rows.append(atom_cols(mask))
                    rhs.append(marginals.xx[(i, j)][k, l])
    for i in range(spec.p):
        for k in range(spec.m):
            mask = states[:, i] == k
            for y in (0, 1):
                rows.append(atom_cols(mask, y))
                rhs.append(marginals.xy[i, k, y])
    rows.append(np.ones(n_atoms))
    rhs.append(1.0)

    lp = LinearProgram(
        objective=np.zeros(n_atoms),
        a_eq=np.array(rows),
        b_eq=np.array(rhs),
        bounds=(0.0, None),
    )
    status, point, _ = solve_lp(lp)
    if status != "Optimal":
        raise InconsistentMarginals(f"no joint realizes these marginals (LP status: {status})")
    prob = np.maximum(point, 0.0).reshape(n_states, 2)
    prob /= prob.sum()
    return DiscreteJoint(spec, prob, tol=INTERNAL_TOL)


# ---------------------------------------------------------------------------
# fixtures and synthetic joints
# ---------------------------------------------------------------------------


def uniform_joint(spec: AlphabetSpec) -> DiscreteJoint:
    """Every atom gets mass 1 / (2 m^p): features and target all independent."""
    spec.require_dense()
    prob = np.full((spec.n_states, 2), 1.0 / spec.n_atoms)
    return DiscreteJoint(spec, prob, tol=INTERNAL_TOL)


def perturb_joint(joint: DiscreteJoint, eps: float, seed) -> DiscreteJoint:
    """A valid joint within L1 distance ``eps`` of ``joint``.

    Adds a seeded zero-sum perturbation, rescaled (never clipped) so that no
    entry goes negative.  ``eps = 0`` returns the input unchanged.
    """
    if eps < 0:
        raise InvalidEpsilon(f"eps must be >= 0, got {eps}")
    if eps == 0:
        return joint
    rng = np.random.default_rng(seed)
    flat = joint.prob.reshape(-1)
    v = rng.standard_normal(flat.size)
    v -= v.mean()
    l1 = np.abs(v).sum()
    if l1 == 0:
        return joint
    scale = eps / l1
    neg = v < 0
    if np.any(neg):
        headroom = flat[neg] / -v[neg]
        scale = min(scale, float(headroom.min()))
    perturbed = np.maximum(flat + scale * v, 0.0)
    return DiscreteJoint(joint.spec, perturbed.reshape(joint.prob.shape), tol=INTERNAL_TOL)


def nonadditive_fixture() -> DiscreteJoint:
    """Two binary features whose pairwise marginals admit exactly one joint,
    and that joint's conditional mean E[Y|X] is not a sum f_1(X_1) + f_2(X_2).

    The canonical witness that the separable lower bound can be strict.
    """
    spec = AlphabetSpec(p=2, m=2)
    rows = [
        ((0, 0), 0, 0.0),
        ((0, 0), 1, 0.1),
        ((1, 0), 0, 0.2),
        ((1, 0), 1, 0.2),
        ((0, 1), 0, 0.1),
        ((0, 1), 1, 0.3),
        ((1, 1), 0, 0.1),
        ((1, 1), 1, 0.0),
    ]
    return joint_from_table(spec, rows)


def copy_fixture() -> DiscreteJoint:
    """Single binary feature with Y = X_1: maximal correlation 1."""
    spec = AlphabetSpec(p=1, m=2)
    return joint_from_table(spec, [((0,), 0, 0.5), ((1,), 1, 0.5)])


def additive_fixture(spec: AlphabetSpec, seed, delta: float = 0.05) -> DiscreteJoint:
    """Random joint with uniform X and a separable conditional mean.

    Draws per-feature tables f_i and rescales them so the total
    sum(f_i(x_i)) stays inside [delta, 1 - delta] over ALL states, keeping
    every conditional probability valid and the target non-degenerate.
    """
    if not 0 < delta < 0.5:
        raise ValidationError(f"delta must lie in (0, 0.5), got {delta}")
    spec.require_dense()
    rng = np.random.default_rng(seed)
    f = rng.uniform(0.0, 1.0, size=(spec.p, spec.m)) / spec.p
    lo = f.min(axis=1)
    span = float(f.max(axis=1).sum() - lo.sum())
    scale = (1.0 - 2.0 * delta) / span if span > 0 else 0.0
    f = scale * (f - lo[:, None]) + delta / spec.p

    states = spec.states()
    cond = f[np.arange(spec.p)[None, :], states].sum(axis=1)
    px = 1.0 / spec.n_states
    prob = np.stack([(1.0 - cond) * px, cond * px], axis=1)
    return DiscreteJoint(spec, prob, tol=INTERNAL_TOL)


def random_joint(spec: AlphabetSpec, seed, alpha: float = 1.0) -> DiscreteJoint:
    """Dirichlet(alpha) draw over all atoms; strictly positive a.s."""
    spec.require_dense()
    rng = np.random.default_rng(seed)
    prob = rng.dirichlet(np.full(spec.n_atoms, alpha)).reshape(spec.n_states, 2)
    return DiscreteJoint(spec, prob, tol=INTERNAL_TOL)


def sample_dataset(joint: DiscreteJoint, n: int, seed) -> Dataset:
    """n i.i.d. samples from a joint."""
    if n < 1:
        raise ValidationError("n must be >= 1")
    rng = np.random.default_rng(seed)
    flat = joint.prob.reshape(-1)
    draws = rng.choice(flat.size, size=n, p=flat / flat.sum())
    states = draws // 2
    ys = draws % 2
    spec = joint.spec
    cols = [(states // spec.m**i) % spec.m for i in range(spec.p)]
    rows = np.stack(cols + [ys], axis=1)
    return Dataset(spec, rows)


def permute_labels(joint: DiscreteJoint, feature: int, perm) -> DiscreteJoint:
    """Relabel feature ``feature`` by ``perm`` (new_label = perm[old_label])."""
    spec = joint.spec
    perm = np.asarray(perm, dtype=int)
    if sorted(perm.tolist()) != list(range(spec.m)):
        raise ValidationError(f"perm must be a permutation of 0..{spec.m - 1}")
    states = spec.states()
    new_states = states.copy()
    new_states[:, feature] = perm[states[:, feature]]
    new_idx = np.zeros(spec.n_states, dtype=np.int64)
    for i in range(spec.p):
        new_idx += new_states[:, i] * spec.m**i
    prob = np.zeros_like(joint.prob)
    prob[new_idx] = joint.prob
    return DiscreteJoint(spec, prob, tol=INTERNAL_TOL)
