"""Shared test helpers: independent brute-force oracles."""

import itertools

import numpy as np
import pytest

import maxcorr as mx


@pytest.fixture
def fixture_atoms():
    """The 8 hand-written atoms of the nonadditive singleton example."""
    return {
        (0, 0, 0): 0.0,
        (0, 0, 1): 0.1,
        (1, 0, 0): 0.2,
        (1, 0, 1): 0.2,
        (0, 1, 0): 0.1,
        (0, 1, 1): 0.3,
        (1, 1, 0): 0.1,
        (1, 1, 1): 0.0,
    }


def random_psd(n, seed, rank=None):
    """Random symmetric PSD matrix of the given size and rank."""
    rng = np.random.default_rng(seed)
    k = rank if rank is not None else n
    b = rng.standard_normal((n, k))
    return b @ b.T


def lp_vertex_oracle(c, a_ub=None, b_ub=None, a_eq=None, b_eq=None, bounds=None):
    """Exhaustive vertex enumeration for small bounded-feasible LPs.

    Collects every inequality (rows of a_ub, plus variable bounds) and every
    equality, then tries all active sets completing the equalities to n
    constraints.  Returns the best feasible vertex value, or None when no
    vertex is feasible.  Only meant for n <= 8 test problems with a bounded
    optimum attained at a vertex.
    """
    c = np.asarray(c, dtype=float)
    n = c.shape[0]
    ineqs = []
    if a_ub is not None:
        for row, rhs in zip(np.asarray(a_ub, dtype=float), np.asarray(b_ub, dtype=float)):
            ineqs.append((row, rhs))
    if bounds is not None:
        if isinstance(bounds, tuple):
            bounds = [bounds] * n
        for i, (lo, hi) in enumerate(bounds):
            e = np.zeros(n)
            e[i] = 1.0
            if lo is not None:
                ineqs.append((-e, -lo))
            if hi is not None:
                ineqs.append((e, hi))
    eqs = []
    if a_eq is not None:
        for row, rhs in zip(np.asarray(a_eq, dtype=float), np.asarray(b_eq, dtype=float)):
            eqs.append((row, rhs))

    best = None
    need = n - len(eqs)
    for combo in itertools.combinations(range(len(ineqs)), need):
        rows = [r for r, _ in eqs] + [ineqs[i][0] for i in combo]
        rhs = [v for _, v in eqs] + [ineqs[i][1] for i in combo]
        a = np.array(rows)
        if np.linalg.matrix_rank(a) < n:
            continue
        x = np.linalg.solve(a, np.array(rhs))
        feasible = all(row @ x <= val + 1e-9 for row, val in ineqs)
        feasible = feasible and all(abs(row @ x - val) <= 1e-9 for row, val in eqs)
        if feasible:
            value = float(c @ x)
            if best is None or value < best:
                best = value
    return best


def quadratic_grid_oracle(system, z_base, direction, half_range=5.0, points=100001):
    """min over the line z_base + t*direction of max(h(z), h(-z))."""
    spec = system.spec
    ts = np.linspace(-half_range, half_range, points)
    best = np.inf
    for t in ts:
        z = z_base + t * direction
        best = min(best, max(mx.h_value(z, spec), mx.h_value(-z, spec)))
    return best
