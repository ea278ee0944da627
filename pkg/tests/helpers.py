"""Shared generators and independent oracles for the test suite.

Everything here is deliberately dumb: brute-force vertex enumeration for
linear programs, Bloch-sphere grids and fixed-point iterations for
measurement optimization.  Slow and obvious beats clever when the job is
checking the fast code.
"""

import itertools
import math

import numpy as np

from qleak.divergences import ProbVector
from qleak.leakage import Ensemble
from qleak.linalg import HermitianOperator, operator_power, random_density


def brute_force_lp(cost, a_eq, b_eq, tol=1e-9):
    """Standard-form minimum by basic-solution enumeration.

    Assumes full row rank, so any finite optimum sits at a basic feasible
    solution.  Returns (status, value) with value = inf when infeasible.
    """
    a = np.asarray(a_eq, dtype=np.float64)
    b = np.asarray(b_eq, dtype=np.float64)
    c = np.asarray(cost, dtype=np.float64)
    m, n = a.shape
    best = math.inf
    feasible = False
    for cols in itertools.combinations(range(n), m):
        sub = a[:, cols]
        try:
            x = np.linalg.solve(sub, b)
        except np.linalg.LinAlgError:
            continue
        if float(np.max(np.abs(sub @ x - b))) > 1e-7:
            continue
        if float(np.min(x)) < -tol:
            continue
        feasible = True
        best = min(best, float(c[list(cols)] @ x))
    if not feasible:
        return "infeasible", math.inf
    return "optimal", best


def random_ensemble(dim, count, seed, uniform=False):
    """Mixed-rank random ensemble with a seeded, strictly positive prior."""
    rng = np.random.default_rng(seed)
    states = []
    for _ in range(count):
        rank = int(rng.integers(1, dim + 1))
        states.append(random_density(dim, rank, int(rng.integers(0, 2**31))))
    if uniform:
        return Ensemble.uniform(tuple(states))
    raw = rng.uniform(0.2, 1.0, size=count)
    return Ensemble(ProbVector(raw / raw.sum()), tuple(states))


def povm_payoff(e, elements):
    """sum_y max_x tr(rho_x F_y): the unweighted guessing payoff."""
    total = 0.0
    for f in elements:
        fm = f.mat if hasattr(f, "mat") else f
        total += max(float(np.einsum("ij,ji->", s.mat, fm).real) for s in e.states)
    return total


def fixed_point_payoff(e, iters=300):
    """Best guessing payoff from the discrimination fixed-point iteration.

    Updates M_x <- G^{-1/2} rho_x M_x rho_x G^{-1/2} with
    G = sum_x rho_x M_x rho_x, parking any support leftover in M_0 so the
    family stays a POVM.  Returns the largest payoff seen along the way.
    """
    d, m = e.dim, e.count
    mats = [s.mat for s in e.states]
    povm = [np.eye(d, dtype=np.complex128) / m for _ in range(m)]
    best = povm_payoff(e, povm)
    for _ in range(iters):
        g = sum(r @ f @ r for r, f in zip(mats, povm))
        root = operator_power(HermitianOperator(g), -0.5).mat
        povm = [root @ r @ f @ r @ root for r, f in zip(mats, povm)]
        leftover = np.eye(d, dtype=np.complex128) - sum(povm)
        povm[0] = povm[0] + leftover
        value = povm_payoff(e, povm)
        if value > best + 1e-14:
            best = value
        elif value < best - 1e-10:
            break
    return best


_PAULIS = (
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)


def bloch_grid_payoff(e, directions=10_000):
    """Best two-outcome projective payoff over a Fibonacci Bloch grid (d=2)."""
    assert e.dim == 2
    bloch = np.array(
        [[float(np.trace(s.mat @ pauli).real) for pauli in _PAULIS] for s in e.states]
    )
    idx = np.arange(directions)
    z = 1.0 - 2.0 * (idx + 0.5) / directions
    r = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    phi = idx * math.pi * (3.0 - math.sqrt(5.0))
    grid = np.stack([r * np.cos(phi), r * np.sin(phi), z])
    dots = bloch @ grid
    payoff = 1.0 + 0.5 * (np.max(dots, axis=0) + np.max(-dots, axis=0))
    return float(np.max(payoff))


def diagonal_weights_value(diags):
    """Weights-program optimum for commuting states, via the classical LP.

    In the common eigenbasis the program is min sum(c) subject to
    M c >= per-entry max, c >= 0, solved here by vertex enumeration on the
    slack-extended standard form.
    """
    m = len(diags)
    mat = np.array(diags, dtype=np.float64).T
    target = np.max(mat, axis=1)
    d = mat.shape[0]
    a_eq = np.hstack([mat, -np.eye(d)])
    cost = np.concatenate([np.ones(m), np.zeros(d)])
    status, value = brute_force_lp(cost, a_eq, target)
    assert status == "optimal"
    return value
