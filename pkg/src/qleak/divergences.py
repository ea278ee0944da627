"""Classical and quantum Renyi divergences in bits.

Finite orders, the order-1 limit, and the order-infinity limit are all
first-class: functions take a RenyiOrder (or a plain float coerced to one)
and return an extended real, with math.inf signalling a support violation.
Singular second arguments follow the pseudo-power convention: powers act on
the support and the kernel stays put.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, ValidationError
from .linalg import (
    ENTROPY_FLOOR,
    PSD_TOL,
    SUPPORT_RTOL,
    DensityOperator,
    HermitianOperator,
    _as_matrix,
    eig_hermitian,
    operator_power,
    support_contained,
)

# Orders this close to 1 are evaluated through the order-1 limit formula,
# which is where the finite-order expression loses precision.
ORDER_ONE_WINDOW = 1e-6

# Eigenvector overlaps below this are treated as exact orthogonality when
# forming eigenvalue ratios at order infinity.
OVERLAP_TOL = 1e-12

_PROB_ATOL = 1e-10


@dataclass(frozen=True)
class RenyiOrder:
    """Order parameter alpha > 0; may be math.inf."""

    value: float

    def __post_init__(self) -> None:
        v = float(self.value)
        if not (v > 0.0):
            raise ValidationError(f"Renyi order must be positive, got {v!r}")
        object.__setattr__(self, "value", v)

    @property
    def is_one(self) -> bool:
        return abs(self.value - 1.0) < ORDER_ONE_WINDOW

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.value)


ORDER_ONE = RenyiOrder(1.0)
ORDER_INF = RenyiOrder(math.inf)


def _coerce_order(order) -> RenyiOrder:
    if isinstance(order, RenyiOrder):
        return order
    return RenyiOrder(float(order))


@dataclass(frozen=True)
class ProbVector:
    """A probability vector: nonnegative entries summing to one."""

    probs: np.ndarray

    def __post_init__(self) -> None:
        p = np.asarray(self.probs, dtype=np.float64).reshape(-1)
        if p.size == 0:
            raise ValidationError("empty probability vector")
        if float(np.min(p)) < -_PROB_ATOL:
            raise ValidationError(f"negative probability {float(np.min(p)):.3e}")
        total = float(np.sum(p))
        if abs(total - 1.0) > _PROB_ATOL:
            raise ValidationError(f"probabilities sum to {total!r}, not 1")
        p = np.clip(p, 0.0, None)
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    def __len__(self) -> int:
        return self.probs.size


@dataclass(frozen=True)
class ConditionalKernel:
    """Row-stochastic matrix: row x holds the distribution of Y given X = x."""

    rows: np.ndarray

    def __post_init__(self) -> None:
        k = np.asarray(self.rows, dtype=np.float64)
        if k.ndim != 2 or k.size == 0:
            raise ValidationError("kernel must be a nonempty 2-d array")
        for row in k:
            ProbVector(row)
        k = np.clip(k, 0.0, None)
        k.setflags(write=False)
        object.__setattr__(self, "rows", k)

    @property
    def inputs(self) -> int:
        return self.rows.shape[0]

    @property
    def outputs(self) -> int:
        return self.rows.shape[1]


def _logsumexp(terms: np.ndarray) -> float:
    if terms.size == 0:
        return -math.inf
    m = float(np.max(terms))
    if math.isinf(m):
        return m
    return m + math.log(float(np.sum(np.exp(terms - m))))


def _as_prob(p) -> np.ndarray:
    if isinstance(p, ProbVector):
        return p.probs
    return ProbVector(np.asarray(p, dtype=np.float64)).probs


def renyi_classical(p, q, order) -> float:
    """Classical Renyi divergence d_alpha(p || q) in bits.

    q may be any nonnegative vector (it is not renormalised); sums run over
    the support of q, and orders >= 1 return math.inf when supp(p) is not
    contained in supp(q).
    """
    alpha = _coerce_order(order)
    pv = _as_prob(p)
    qv = np.asarray(q, dtype=np.float64).reshape(-1)
    if qv.size != pv.size:
        raise DimensionMismatch(f"lengths {pv.size} and {qv.size} differ")
    if float(np.min(qv)) < -_PROB_ATOL:
        raise ValidationError("reference vector has a negative entry")
    qv = np.clip(qv, 0.0, None)
    psup = pv > 0.0
    qsup = qv > 0.0
    if (alpha.value >= 1.0 or alpha.is_one) and bool(np.any(psup & ~qsup)):
        return math.inf
    if alpha.is_one:
        on = psup & qsup
        return float(np.sum(pv[on] * np.log2(pv[on] / qv[on])))
    if alpha.is_infinite:
        on = psup & qsup
        if not np.any(on):
            return -math.inf if not np.any(psup) else math.inf
        return float(np.log2(np.max(pv[on] / qv[on])))
    a = alpha.value
    on = psup & qsup
    if not np.any(on):
        return math.inf
    terms = a * np.log(pv[on]) + (1.0 - a) * np.log(qv[on])
    return _logsumexp(terms) / ((a - 1.0) * math.log(2.0))


def sibson_information(prior, kernel: ConditionalKernel, order) -> float:
    """Sibson information I_alpha(X; Y) of a joint source in bits.

    Evaluated in closed form: for finite alpha != 1 this is
    (alpha/(alpha-1)) log2 sum_y ( sum_x p(x) P(y|x)^alpha )^(1/alpha),
    the value of the reference-distribution infimum.
    """
    alpha = _coerce_order(order)
    pv = _as_prob(prior)
    if not isinstance(kernel, ConditionalKernel):
        kernel = ConditionalKernel(np.asarray(kernel, dtype=np.float64))
    if kernel.inputs != pv.size:
        raise DimensionMismatch(
            f"prior length {pv.size} does not match kernel inputs {kernel.inputs}"
        )
    sup = pv > 0.0
    if not np.any(sup):
        raise ValidationError("prior has empty support")
    rows = kernel.rows[sup]
    weights = pv[sup]
    if alpha.is_infinite:
        return float(np.log2(np.sum(np.max(rows, axis=0))))
    if alpha.is_one:
        marg = weights @ rows
        on = rows > 0.0
        ratios = np.zeros_like(rows)
        ratios[on] = rows[on] / np.broadcast_to(marg, rows.shape)[on]
        terms = np.zeros_like(rows)
        terms[on] = rows[on] * np.log2(ratios[on])
        return float(np.sum(weights[:, None] * terms))
    a = alpha.value
    inner = np.sum(weights[:, None] * np.power(rows, a), axis=0)
    total = float(np.sum(np.power(inner, 1.0 / a)))
    return (a / (a - 1.0)) * math.log2(total)


def _psd_spectrum(name: str, h) -> tuple[np.ndarray, np.ndarray]:
    spec = eig_hermitian(h)
    w = spec.eigenvalues
    scale = float(np.max(np.abs(w))) if w.size else 0.0
    if w.size and float(w[0]) < -PSD_TOL * max(scale, 1.0):
        raise ValidationError(f"{name} is not PSD (min eigenvalue {float(w[0]):.3e})")
    return np.clip(w, 0.0, None), spec.eigenvectors


def _supports(rho, sigma):
    """Eigendata plus support masks for the (rho, sigma) pair."""
    rmat = _as_matrix(rho)
    smat = _as_matrix(sigma)
    if rmat.shape != smat.shape:
        raise DimensionMismatch(f"shapes {rmat.shape} and {smat.shape} differ")
    rw, rv = _psd_spectrum("first argument", rmat)
    sw, sv = _psd_spectrum("second argument", smat)
    ron = rw > SUPPORT_RTOL * float(np.max(rw, initial=0.0))
    son = sw > SUPPORT_RTOL * float(np.max(sw, initial=0.0))
    overlap = np.abs(rv.conj().T @ sv) ** 2
    return rw, sw, ron, son, overlap


def relative_entropy(rho, sigma) -> float:
    """Umegaki relative entropy D(rho || sigma) in bits; inf off support."""
    if not support_contained(rho, sigma):
        return math.inf
    rw, sw, ron, son, overlap = _supports(rho, sigma)
    ent = float(np.sum(rw[ron] * np.log2(rw[ron])))
    cross_w = overlap[np.ix_(ron, son)]
    cross = float(np.sum(rw[ron][:, None] * cross_w * np.log2(sw[son])[None, :]))
    return ent - cross


def petz_renyi(rho, sigma, order) -> float:
    """Petz Renyi divergence D_alpha(rho || sigma) in bits."""
    alpha = _coerce_order(order)
    if alpha.is_one:
        return relative_entropy(rho, sigma)
    if alpha.value > 1.0 and not support_contained(rho, sigma):
        return math.inf
    rw, sw, ron, son, overlap = _supports(rho, sigma)
    if alpha.is_infinite:
        pairs = overlap[np.ix_(ron, son)] > OVERLAP_TOL
        if not np.any(pairs):
            return math.inf
        ratios = rw[ron][:, None] / sw[son][None, :]
        return float(np.log2(np.max(np.where(pairs, ratios, 0.0))))
    a = alpha.value
    block = overlap[np.ix_(ron, son)]
    keep = block > 0.0
    if not np.any(keep):
        return math.inf
    logs = (
        a * np.log(rw[ron])[:, None]
        + (1.0 - a) * np.log(sw[son])[None, :]
        + np.log(np.where(keep, block, 1.0))
    )
    return _logsumexp(logs[keep]) / ((a - 1.0) * math.log(2.0))


def sandwiched_renyi(rho, sigma, order) -> float:
    """Sandwiched Renyi divergence in bits.

    Finite orders evaluate (1/(alpha-1)) log2 tr (sigma^b rho sigma^b)^alpha
    with b = (1-alpha)/(2 alpha); order infinity is the max-relative
    entropy log2 of the least mu with rho <= mu sigma.
    """
    alpha = _coerce_order(order)
    if alpha.is_one:
        return relative_entropy(rho, sigma)
    rmat = _as_matrix(rho)
    smat = _as_matrix(sigma)
    if rmat.shape != smat.shape:
        raise DimensionMismatch(f"shapes {rmat.shape} and {smat.shape} differ")
    _psd_spectrum("second argument", smat)
    if alpha.value > 1.0 and not support_contained(rmat, smat):
        return math.inf
    if alpha.is_infinite:
        root = operator_power(HermitianOperator(smat), -0.5).mat
        inner = HermitianOperator(root @ rmat @ root)
        w = eig_hermitian(inner).eigenvalues
        top = float(np.max(w))
        if top <= 0.0:
            return -math.inf
        return math.log2(top)
    a = alpha.value
    b = (1.0 - a) / (2.0 * a)
    conj = operator_power(HermitianOperator(smat), b).mat
    inner = HermitianOperator(conj @ rmat @ conj)
    w, _ = _psd_spectrum("sandwiched inner term", inner)
    top = float(np.max(w)) if w.size else 0.0
    if top <= 0.0:
        # Disjoint supports at alpha < 1: the trace vanishes.
        return math.inf
    on = w > SUPPORT_RTOL * top
    log_tr = a * math.log(top) + math.log(float(np.sum(np.power(w[on] / top, a))))
    return log_tr / ((a - 1.0) * math.log(2.0))
