"""Quantum channels, depolarizing noise, and differential-privacy checks.

Channels are Kraus sets.  The depolarizing factories realize the affine
map (1-p) rho + (p/d) I through a discrete Weyl twirl, globally on one
d-dimensional system or locally on every qubit of a register.  The
differential-privacy helpers evaluate the max-divergence consequence of
(epsilon, 0)-DP between neighbouring ensemble members: a necessary
condition, never a certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .divergences import ORDER_INF, sandwiched_renyi
from .errors import (
    ChainViolationError,
    DimensionMismatch,
    UnsupportedModeError,
    ValidationError,
)
from .leakage import (
    Ensemble,
    LeakageCertificate,
    barycentric_leakage,
    pairwise_leakage,
)
from .linalg import DensityOperator, HermitianOperator, operator_power, trace_distance
from .sdp import DEFAULT_GAP_TOL

_TP_ATOL = 1e-9
LOCAL_DIM_CAP = 64

FAMILY_DEPOLARIZING_GLOBAL = "depolarizing_global"
FAMILY_DEPOLARIZING_LOCAL = "depolarizing_local"


@dataclass(frozen=True)
class QuantumChannel:
    """A completely positive trace-preserving map as a Kraus family.

    family and noise carry provenance for maps built by the factories in
    this module (the depolarizing leakage bound needs to know p); hand
    built channels leave them unset.
    """

    kraus: tuple[np.ndarray, ...]
    family: str | None = None
    noise: float | None = None

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=np.complex128) for k in self.kraus)
        if len(ops) == 0:
            raise ValidationError("channel needs at least one Kraus operator")
        shape = ops[0].shape
        if len(shape) != 2:
            raise DimensionMismatch("Kraus operators must be matrices")
        for k in ops:
            if k.shape != shape:
                raise DimensionMismatch("Kraus operators of mixed shape")
            k.setflags(write=False)
        object.__setattr__(self, "kraus", ops)
        stacked = np.concatenate([k for k in ops], axis=0)
        total = stacked.conj().T @ stacked
        if float(np.max(np.abs(total - np.eye(shape[1])))) > _TP_ATOL:
            raise ValidationError("Kraus operators are not trace preserving")

    @property
    def in_dim(self) -> int:
        return self.kraus[0].shape[1]

    @property
    def out_dim(self) -> int:
        return self.kraus[0].shape[0]


def _apply_matrix(ch: QuantumChannel, mat: np.ndarray) -> np.ndarray:
    out = np.zeros((ch.out_dim, ch.out_dim), dtype=np.complex128)
    for k in ch.kraus:
        out += k @ mat @ k.conj().T
    return out


def apply(ch: QuantumChannel, rho: DensityOperator) -> DensityOperator:
    """Channel action sum_i K_i rho K_i'."""
    if rho.dim != ch.in_dim:
        raise DimensionMismatch(
            f"state dimension {rho.dim} does not fit channel input {ch.in_dim}"
        )
    return DensityOperator.from_matrix(_apply_matrix(ch, rho.mat))


def apply_ensemble(ch: QuantumChannel, e: Ensemble) -> Ensemble:
    """Push every ensemble state through the channel; prior unchanged."""
    return Ensemble(e.prior, tuple(apply(ch, s) for s in e.states))


def identity_channel(dim: int) -> QuantumChannel:
    return QuantumChannel((np.eye(dim, dtype=np.complex128),))


def _weyl_operators(d: int) -> list[np.ndarray]:
    """The d^2 discrete Weyl (shift/phase) unitaries."""
    omega = np.exp(2j * math.pi / d)
    shift = np.roll(np.eye(d, dtype=np.complex128), 1, axis=0)
    phase = np.diag(omega ** np.arange(d))
    ops = []
    xa = np.eye(d, dtype=np.complex128)
    for _ in range(d):
        zb = np.eye(d, dtype=np.complex128)
        for _ in range(d):
            ops.append(xa @ zb)
            zb = zb @ phase
        xa = xa @ shift
    return ops


def depolarizing_global(p: float, d: int) -> QuantumChannel:
    """The map rho -> (1-p) rho + (p/d) I as a Weyl-twirl Kraus family."""
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"depolarizing strength {p} outside [0, 1]")
    if d < 2:
        raise ValidationError(f"depolarizing dimension {d} < 2")
    keep = 1.0 - p + p / (d * d)
    mix = p / (d * d)
    kraus = []
    for idx, w in enumerate(_weyl_operators(d)):
        weight = keep if idx == 0 else mix
        kraus.append(math.sqrt(weight) * w)
    return QuantumChannel(tuple(kraus), family=FAMILY_DEPOLARIZING_GLOBAL, noise=p)


def depolarizing_local(p: float, k: int) -> QuantumChannel:
    """Single-qubit depolarizing noise on each of k qubits (4^k Kraus)."""
    if k < 1:
        raise ValidationError(f"qubit count {k} < 1")
    if 2**k > LOCAL_DIM_CAP:
        raise ValidationError(f"register dimension 2^{k} exceeds {LOCAL_DIM_CAP}")
    single = depolarizing_global(p, 2)
    ch = single
    for _ in range(k - 1):
        ch = tensor(ch, single)
    return QuantumChannel(ch.kraus, family=FAMILY_DEPOLARIZING_LOCAL, noise=p)


def compose(outer: QuantumChannel, inner: QuantumChannel) -> QuantumChannel:
    """The channel rho -> outer(inner(rho))."""
    if inner.out_dim != outer.in_dim:
        raise DimensionMismatch(
            f"cannot feed {inner.out_dim}-dim output into {outer.in_dim}-dim input"
        )
    kraus = tuple(a @ b for a in outer.kraus for b in inner.kraus)
    return QuantumChannel(kraus)


def tensor(a: QuantumChannel, b: QuantumChannel) -> QuantumChannel:
    """The product channel acting independently on two subsystems."""
    kraus = tuple(np.kron(ka, kb) for ka in a.kraus for kb in b.kraus)
    return QuantumChannel(kraus)


def random_channel(in_dim: int, out_dim: int | None = None, kraus_count: int | None = None, seed: int = 0) -> QuantumChannel:
    """A Haar-flavoured random channel: Gaussian Kraus, then normalized."""
    out_dim = in_dim if out_dim is None else out_dim
    kraus_count = in_dim if kraus_count is None else kraus_count
    rng = np.random.default_rng(seed)
    raw = [
        rng.normal(size=(out_dim, in_dim)) + 1j * rng.normal(size=(out_dim, in_dim))
        for _ in range(kraus_count)
    ]
    s = sum(g.conj().T @ g for g in raw)
    root = operator_power(HermitianOperator(s), -0.5).mat
    return QuantumChannel(tuple(g @ root for g in raw))


def dp_epsilon_bound_depolarizing(p: float, d: int) -> float:
    """ln(1 + 2(1-p)d/p): the pure-DP epsilon of depolarizing noise, in nats."""
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"depolarizing strength {p} outside [0, 1]")
    if d < 2:
        raise ValidationError(f"dimension {d} < 2")
    if p == 0.0:
        return math.inf
    return math.log1p(2.0 * (1.0 - p) * d / p)


@dataclass(frozen=True)
class AllPairs:
    """Every two distinct ensemble members are neighbours."""


@dataclass(frozen=True)
class TraceDistanceNeighbours:
    """Members within trace distance kappa are neighbours (kappa = 2 never excludes)."""

    kappa: float

    def __post_init__(self):
        if not self.kappa > 0.0:
            raise ValidationError(f"kappa must be positive, got {self.kappa}")


@dataclass(frozen=True)
class ExplicitPairs:
    """Neighbour relation given outright as ordered index pairs."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((int(a), int(b)) for a, b in self.pairs))


@dataclass(frozen=True)
class DpParams:
    """An (epsilon, delta) target plus the neighbouring relationship."""

    epsilon_nats: float
    delta: float = 0.0
    neighbouring: object = field(default_factory=AllPairs)

    def __post_init__(self):
        if not self.epsilon_nats >= 0.0:
            raise ValidationError(f"epsilon must be nonnegative, got {self.epsilon_nats}")
        if not 0.0 <= self.delta <= 1.0:
            raise ValidationError(f"delta {self.delta} outside [0, 1]")


@dataclass(frozen=True)
class DpPairResult:
    x: int
    x_prime: int
    divergence_bits: float
    passed: bool


@dataclass(frozen=True)
class DpCheckReport:
    """Outcome of the max-divergence consequence check for (epsilon, 0)-DP."""

    epsilon_nats: float
    epsilon_bits: float
    delta: float
    pairs: tuple[DpPairResult, ...]
    max_divergence_bits: float
    passed: bool
    note: str


def _neighbour_pairs(e: Ensemble, relation) -> list[tuple[int, int]]:
    if isinstance(relation, ExplicitPairs):
        for a, b in relation.pairs:
            if not (0 <= a < e.count and 0 <= b < e.count):
                raise ValidationError(f"pair ({a}, {b}) outside ensemble of {e.count}")
        return list(relation.pairs)
    pairs = [(i, j) for i in range(e.count) for j in range(e.count) if i != j]
    if isinstance(relation, TraceDistanceNeighbours):
        pairs = [
            (i, j)
            for i, j in pairs
            if trace_distance(e.states[i], e.states[j]) <= relation.kappa + 1e-12
        ]
    elif not isinstance(relation, AllPairs):
        raise UnsupportedModeError(f"unknown neighbouring relationship {relation!r}")
    if not pairs:
        # a lone state is its own neighbour; report the reflexive pair
        pairs = [(0, 0)]
    return pairs


def verify_dp_on_ensemble(ch: QuantumChannel, e: Ensemble, params: DpParams) -> DpCheckReport:
    """Check the divergence consequence of pure DP on every neighbour pair.

    Epsilon-DP with delta = 0 forces the order-infinity sandwiched
    divergence between channel outputs of neighbours to stay below
    epsilon/ln 2 bits.  Only that consequence is evaluated here; passing
    is necessary for DP but does not certify it.
    """
    if params.delta != 0.0:
        raise UnsupportedModeError(
            "delta > 0 has no max-divergence criterion; only (epsilon, 0) is checkable"
        )
    threshold = params.epsilon_nats / math.log(2.0)
    outputs = [apply(ch, s) for s in e.states]
    results = []
    worst = 0.0
    for i, j in _neighbour_pairs(e, params.neighbouring):
        div = sandwiched_renyi(outputs[i], outputs[j], ORDER_INF)
        worst = max(worst, div)
        results.append(DpPairResult(i, j, div, div <= threshold + 1e-9))
    return DpCheckReport(
        epsilon_nats=params.epsilon_nats,
        epsilon_bits=threshold,
        delta=params.delta,
        pairs=tuple(results),
        max_divergence_bits=worst,
        passed=all(r.passed for r in results),
        note=(
            "max-divergence consequence of (epsilon, 0)-DP; "
            "a pass is necessary for DP but does not certify it"
        ),
    )


def leakage_after_channel(
    ch: QuantumChannel, e: Ensemble, gap_tol: float = DEFAULT_GAP_TOL
) -> tuple[LeakageCertificate, LeakageCertificate]:
    """Barycentric and pairwise leakage of the channel-output ensemble.

    For the depolarizing families with p > 0 the outputs must respect
    log2(1 + 2(1-p)d/p); breaching it beyond the certified gap means a
    solver defect, reported as ChainViolationError.
    """
    noisy = apply_ensemble(ch, e)
    b = barycentric_leakage(noisy, gap_tol=gap_tol)
    r = pairwise_leakage(noisy)
    if (
        ch.family in (FAMILY_DEPOLARIZING_GLOBAL, FAMILY_DEPOLARIZING_LOCAL)
        and ch.noise is not None
        and ch.noise > 0.0
    ):
        bound = dp_epsilon_bound_depolarizing(ch.noise, ch.out_dim) / math.log(2.0)
        if b.value > bound + b.gap + 1e-6:
            raise ChainViolationError(
                f"barycentric leakage {b.value:.9f} exceeds depolarizing bound {bound:.9f}"
            )
        if r.value > bound + 1e-6:
            raise ChainViolationError(
                f"pairwise leakage {r.value:.9f} exceeds depolarizing bound {bound:.9f}"
            )
    return b, r
