"""Information-leakage measures for ensembles of quantum states.

An ensemble pairs a strictly positive prior over a classical alphabet with
one density operator per symbol.  Three leakage measures are computed:

* maximal leakage Q: log2 of the optimal guessing-game payoff over all
  measurements, evaluated through the dominating-operator program;
* barycentric leakage B: log2 of the smallest total weight of a state
  mixture that dominates every ensemble member (the weights program);
* pairwise leakage R: the largest order-infinity sandwiched divergence
  between any two ensemble members, possibly infinite.

Q <= B <= R holds up to solver gaps, and the chain report checks it
together with the accessible-information and Holevo inequalities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .divergences import ORDER_INF, ProbVector, sandwiched_renyi
from .errors import ChainViolationError, DimensionMismatch, ValidationError
from .linalg import (
    PSD_TOL,
    DensityOperator,
    HermitianOperator,
    eig_hermitian,
    operator_power,
    random_unitary,
    von_neumann_entropy,
)
from .sdp import (
    DEFAULT_GAP_TOL,
    SdpSolution,
    dominating_program,
    solve,
    weights_program,
)

KIND_MAXIMAL = "maximal"
KIND_BARYCENTRIC = "barycentric"
KIND_PAIRWISE = "pairwise"
KIND_SANDWICHED_INF_MI = "sandwiched_inf_mi"

POVM_COMPLETENESS_ATOL = 1e-9
_CHAIN_SLACK = 1e-6


@dataclass(frozen=True)
class Ensemble:
    """A prior over symbols together with one quantum state per symbol."""

    prior: ProbVector
    states: tuple[DensityOperator, ...]

    def __post_init__(self):
        states = tuple(self.states)
        object.__setattr__(self, "states", states)
        if len(states) == 0:
            raise ValidationError("ensemble needs at least one state")
        if len(states) != len(self.prior):
            raise ValidationError(
                f"prior has {len(self.prior)} entries for {len(states)} states"
            )
        dim = states[0].dim
        for s in states[1:]:
            if s.dim != dim:
                raise DimensionMismatch(
                    f"states of dimension {dim} and {s.dim} in one ensemble"
                )
        if float(np.min(self.prior.probs)) <= 0.0:
            raise ValidationError("ensemble prior must be strictly positive")

    @property
    def dim(self) -> int:
        return self.states[0].dim

    @property
    def count(self) -> int:
        return len(self.states)

    @classmethod
    def uniform(cls, states) -> "Ensemble":
        states = tuple(states)
        prior = ProbVector(np.full(len(states), 1.0 / len(states)))
        return cls(prior, states)

    def average(self) -> DensityOperator:
        """The prior-weighted barycenter sum_x p(x) rho_x."""
        mat = sum(p * s.mat for p, s in zip(self.prior.probs, self.states))
        return DensityOperator.from_matrix(mat)


@dataclass(frozen=True)
class Povm:
    """A measurement: positive elements summing to the identity."""

    elements: tuple[HermitianOperator, ...]

    def __post_init__(self):
        elements = tuple(self.elements)
        object.__setattr__(self, "elements", elements)
        if len(elements) == 0:
            raise ValidationError("POVM needs at least one element")
        dim = elements[0].dim
        total = np.zeros((dim, dim), dtype=np.complex128)
        for f in elements:
            if f.dim != dim:
                raise DimensionMismatch("POVM elements of mixed dimension")
            w = eig_hermitian(f).eigenvalues
            scale = max(1.0, float(np.max(np.abs(w), initial=0.0)))
            if float(w[0]) < -PSD_TOL * scale:
                raise ValidationError(
                    f"POVM element has negative eigenvalue {float(w[0]):.3e}"
                )
            total += f.mat
        if float(np.max(np.abs(total - np.eye(dim)))) > POVM_COMPLETENESS_ATOL:
            raise ValidationError("POVM elements do not resolve the identity")

    @property
    def dim(self) -> int:
        return self.elements[0].dim

    @property
    def count(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class LeakageCertificate:
    """A leakage value in bits with its witness and certification gap.

    The witness depends on the kind: barycenter weights for the weights
    program, a dominating operator for the guessing-game value, and the
    arg-max pair of symbols for the pairwise measure.
    """

    value: float
    kind: str
    witness: object
    gap: float
    status: str

    def __post_init__(self):
        if not self.value >= -1e-9:
            raise ValidationError(f"leakage certificate value {self.value} < 0")
        if not self.gap >= 0.0:
            raise ValidationError(f"certificate gap {self.gap} is negative")


def pairwise_leakage(e: Ensemble) -> LeakageCertificate:
    """Largest order-infinity sandwiched divergence over ordered pairs.

    Infinite exactly when some state's support escapes another's; the
    witness names the offending (or maximising) pair.  The prior plays
    no role.
    """
    best = 0.0
    witness = (0, 0)
    for i, rho in enumerate(e.states):
        for j, sigma in enumerate(e.states):
            if i == j:
                continue
            v = sandwiched_renyi(rho, sigma, ORDER_INF)
            if v > best:
                best, witness = v, (i, j)
            if math.isinf(best):
                return LeakageCertificate(best, KIND_PAIRWISE, witness, 0.0, "optimal")
    return LeakageCertificate(max(best, 0.0), KIND_PAIRWISE, witness, 0.0, "optimal")


def _gap_bits(sol: SdpSolution) -> float:
    lower = max(float(sol.lower_bound), 1e-300)
    return max(0.0, math.log2(float(sol.upper_bound)) - math.log2(lower))


def barycentric_leakage(e: Ensemble, gap_tol: float = DEFAULT_GAP_TOL) -> LeakageCertificate:
    """log2 of the least total weight of a mixture dominating every state.

    The witness is the optimal barycenter prior.  On an iteration cap the
    partial bracket is reported through the gap instead of raising.
    """
    sol = solve(weights_program(list(e.states)), gap_tol=gap_tol)
    weights = np.clip(np.asarray(sol.primal, dtype=np.float64), 0.0, None)
    total = float(np.sum(weights))
    witness = weights / total if total > 0.0 else weights
    value = math.log2(max(float(sol.value), 1e-300))
    return LeakageCertificate(
        max(value, 0.0), KIND_BARYCENTRIC, witness, _gap_bits(sol), sol.status
    )


def _dominating_certificate(e: Ensemble, gap_tol: float, kind: str) -> LeakageCertificate:
    sol = solve(dominating_program(list(e.states)), gap_tol=gap_tol)
    value = math.log2(max(float(sol.value), 1e-300))
    return LeakageCertificate(max(value, 0.0), kind, sol.primal, _gap_bits(sol), sol.status)


def max_leakage(e: Ensemble, gap_tol: float = DEFAULT_GAP_TOL) -> LeakageCertificate:
    """Maximal leakage: log2 of the optimal guessing-game payoff.

    The supremum over measurements of the guessing payoff equals the
    minimal trace of an operator dominating every state (the programs
    are dual with a strictly feasible interior), so the dominating
    program computes it with a certified bracket.
    """
    return _dominating_certificate(e, gap_tol, KIND_MAXIMAL)


def sandwiched_inf_mutual_information(
    e: Ensemble, gap_tol: float = DEFAULT_GAP_TOL
) -> LeakageCertificate:
    """Order-infinity sandwiched mutual information of the CQ state.

    Shares the dominating program with max_leakage; it is reported as its
    own certificate because the two quantities arise from different
    definitions even though the programs coincide.
    """
    return _dominating_certificate(e, gap_tol, KIND_SANDWICHED_INF_MI)


def povm_leakage(e: Ensemble, m: Povm) -> float:
    """log2 sum_y max_x tr(rho_x F_y): the leakage of one fixed measurement."""
    if m.dim != e.dim:
        raise DimensionMismatch(
            f"POVM dimension {m.dim} does not match ensemble dimension {e.dim}"
        )
    total = 0.0
    for f in m.elements:
        total += max(float(np.einsum("ij,ji->", s.mat, f.mat).real) for s in e.states)
    return math.log2(max(total, 1e-300))


def square_root_measurement(e: Ensemble) -> Povm:
    """The square-root measurement S^-1/2 rho_x S^-1/2 with S = sum rho_x.

    When S is singular the elements only resolve the identity on its
    support; the remainder becomes an explicit null outcome.
    """
    s = HermitianOperator(sum(st.mat for st in e.states))
    root = operator_power(s, -0.5)
    elements = [HermitianOperator(root.mat @ st.mat @ root.mat) for st in e.states]
    resolved = sum(el.mat for el in elements)
    leftover = np.eye(e.dim) - resolved
    if float(np.max(np.abs(leftover))) > POVM_COMPLETENESS_ATOL:
        elements.append(HermitianOperator(leftover))
    return Povm(tuple(elements))


def holevo_information(e: Ensemble) -> float:
    """Holevo information: H(average) - sum_x p(x) H(rho_x), in bits."""
    chi = von_neumann_entropy(e.average())
    for p, s in zip(e.prior.probs, e.states):
        chi -= float(p) * von_neumann_entropy(s)
    return max(chi, 0.0)


def _measurement_kernel(e: Ensemble, frame: np.ndarray) -> np.ndarray:
    """Outcome distribution rows P(y|x) = u_y' rho_x u_y for frame columns."""
    k = np.empty((e.count, frame.shape[1]))
    for x, s in enumerate(e.states):
        k[x] = np.real(np.einsum("iy,ij,jy->y", np.conj(frame), s.mat, frame))
    return np.clip(k, 0.0, None)


def _mutual_information_bits(prior: np.ndarray, kernel: np.ndarray) -> float:
    joint = prior[:, None] * kernel
    py = np.sum(joint, axis=0)
    mask = joint > 1e-18
    denom = (prior[:, None] * py[None, :])[mask]
    return float(np.sum(joint[mask] * np.log2(joint[mask] / denom)))


def accessible_information_lower(
    e: Ensemble, restarts: int = 32, seed: int = 0
) -> tuple[float, Povm]:
    """Best mutual information found over rank-1 measurements.

    Frames start from the computational basis and `restarts` random
    unitaries, then climb by rotating column pairs through a coarse
    angle grid with local refinement.  The value is achieved by the
    returned POVM, so it is always a valid lower bound; optimality is
    never claimed.
    """
    prior = e.prior.probs
    d = e.dim

    def score(frame: np.ndarray) -> float:
        return _mutual_information_bits(prior, _measurement_kernel(e, frame))

    def rotate(frame: np.ndarray, k: int, l: int, theta: float, phi: float) -> np.ndarray:
        out = frame.copy()
        ck, cl = frame[:, k], frame[:, l]
        c, s = math.cos(theta), math.sin(theta)
        ph = complex(math.cos(phi), math.sin(phi))
        out[:, k] = c * ck + s * ph * cl
        out[:, l] = -s * np.conj(ph) * ck + c * cl
        return out

    thetas = np.linspace(0.0, math.pi / 2.0, 9)
    phis = np.linspace(0.0, 2.0 * math.pi, 8, endpoint=False)

    def ascend(frame: np.ndarray) -> tuple[float, np.ndarray]:
        best = score(frame)
        for _ in range(60):
            improved = False
            for k in range(d):
                for l in range(k + 1, d):
                    top, arg = best, None
                    for th in thetas:
                        for ph in phis:
                            v = score(rotate(frame, k, l, th, ph))
                            if v > top + 1e-12:
                                top, arg = v, (th, ph)
                    if arg is None:
                        continue
                    th, ph = arg
                    step_t, step_p = float(thetas[1]), float(phis[1])
                    for _ in range(20):
                        step_t *= 0.5
                        step_p *= 0.5
                        for dt in (-step_t, 0.0, step_t):
                            for dp in (-step_p, 0.0, step_p):
                                v = score(rotate(frame, k, l, th + dt, ph + dp))
                                if v > top + 1e-14:
                                    top, (th, ph) = v, (th + dt, ph + dp)
                    frame = rotate(frame, k, l, th, ph)
                    best = top
                    improved = True
            if not improved:
                break
        return best, frame

    rng = np.random.default_rng(seed)
    starts = [np.eye(d, dtype=np.complex128)]
    for _ in range(max(0, int(restarts))):
        starts.append(random_unitary(d, seed=int(rng.integers(0, 2**63 - 1))))
    best_val, best_frame = -1.0, starts[0]
    for u in starts:
        val, frame = ascend(u)
        if val > best_val + 1e-12:
            best_val, best_frame = val, frame
    elements = tuple(
        HermitianOperator(np.outer(best_frame[:, y], np.conj(best_frame[:, y])))
        for y in range(d)
    )
    return max(best_val, 0.0), Povm(elements)


@dataclass(frozen=True)
class ChainReport:
    """All leakage quantities of one ensemble plus the verified ordering.

    checks maps each inequality label to its slack (right side minus left
    side plus allowed tolerance); every slack is nonnegative, otherwise
    the report constructor refused to produce it.
    """

    accessible_lower: float
    holevo: float
    srm_povm_leakage: float
    sandwiched_inf: LeakageCertificate
    maximal: LeakageCertificate
    barycentric: LeakageCertificate
    pairwise: LeakageCertificate
    checks: dict


def inequality_chain_report(
    e: Ensemble,
    gap_tol: float = DEFAULT_GAP_TOL,
    restarts: int = 32,
    seed: int = 0,
) -> ChainReport:
    """Compute every measure and enforce the leakage ordering.

    Verifies accessible <= Holevo <= B <= R and measurement <= Q <= B,
    each padded by the operands' certified gaps plus a fixed slack; a
    violation is a solver bug, reported as ChainViolationError.
    """
    acc, _ = accessible_information_lower(e, restarts=restarts, seed=seed)
    chi = holevo_information(e)
    srm = povm_leakage(e, square_root_measurement(e))
    sol = solve(dominating_program(list(e.states)), gap_tol=gap_tol)
    vbits = max(math.log2(max(float(sol.value), 1e-300)), 0.0)
    gbits = _gap_bits(sol)
    q = LeakageCertificate(vbits, KIND_MAXIMAL, sol.primal, gbits, sol.status)
    mi_inf = LeakageCertificate(
        vbits, KIND_SANDWICHED_INF_MI, sol.primal, gbits, sol.status
    )
    b = barycentric_leakage(e, gap_tol=gap_tol)
    r = pairwise_leakage(e)

    checks = {
        "accessible<=holevo": chi - acc + _CHAIN_SLACK,
        "holevo<=barycentric": b.value + b.gap - chi + _CHAIN_SLACK,
        "barycentric<=pairwise": r.value - b.value + b.gap + _CHAIN_SLACK,
        "srm<=maximal": q.value + q.gap - srm + _CHAIN_SLACK,
        "maximal<=barycentric": b.value + b.gap - q.value + q.gap + _CHAIN_SLACK,
        "sandwiched<=barycentric": b.value + b.gap - mi_inf.value + mi_inf.gap + _CHAIN_SLACK,
    }
    for label, slack in checks.items():
        if math.isnan(slack) or slack < 0.0:
            raise ChainViolationError(
                f"leakage ordering {label} violated by {-slack:.3e} bits"
            )
    return ChainReport(
        accessible_lower=acc,
        holevo=chi,
        srm_povm_leakage=srm,
        sandwiched_inf=mi_inf,
        maximal=q,
        barycentric=b,
        pairwise=r,
        checks=checks,
    )
