"""Hermitian operator types and dense linear algebra for small dimensions.

All callers in this package work with operators of dimension at most 64,
so every routine here favours determinism and stability over asymptotic
speed.  The eigensolver is a cyclic Jacobi iteration for complex Hermitian
matrices; it is unconditionally stable at this scale and produces the same
result on every platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, EigenSolverError, ValidationError

# Shared numerical policy.
HERMITICITY_ATOL = 1e-12
PSD_TOL = 1e-10
TRACE_ATOL = 1e-10
SUPPORT_RTOL = 1e-9
ENTROPY_FLOOR = 1e-14
UNITARITY_ATOL = 1e-10

_JACOBI_SWEEP_CAP = 100
_JACOBI_OFF_RTOL = 1e-13

_LOG2 = math.log(2.0)


def _as_matrix(value) -> np.ndarray:
    if isinstance(value, HermitianOperator):
        return value.mat
    if isinstance(value, DensityOperator):
        return value.mat
    return np.asarray(value, dtype=np.complex128)


@dataclass(frozen=True)
class HermitianOperator:
    """A complex Hermitian matrix, symmetrised and frozen on construction."""

    mat: np.ndarray

    def __post_init__(self) -> None:
        a = np.asarray(self.mat, dtype=np.complex128)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
        gap = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
        if gap > HERMITICITY_ATOL * max(1.0, float(np.max(np.abs(a)))):
            raise ValidationError(f"matrix is not Hermitian (asymmetry {gap:.3e})")
        a = (a + a.conj().T) / 2.0
        a.setflags(write=False)
        object.__setattr__(self, "mat", a)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.mat).real)


@dataclass(frozen=True)
class DensityOperator:
    """A positive semidefinite Hermitian operator with unit trace."""

    op: HermitianOperator

    def __post_init__(self) -> None:
        op = self.op
        if not isinstance(op, HermitianOperator):
            op = HermitianOperator(_as_matrix(op))
            object.__setattr__(self, "op", op)
        tr = op.trace()
        if abs(tr - 1.0) > TRACE_ATOL:
            raise ValidationError(f"trace {tr!r} is not 1 within {TRACE_ATOL}")
        w = eig_hermitian(op).eigenvalues
        scale = float(np.max(np.abs(w))) if w.size else 0.0
        if w.size and w[0] < -PSD_TOL * max(scale, 1.0):
            raise ValidationError(f"matrix is not PSD (min eigenvalue {w[0]:.3e})")

    @property
    def mat(self) -> np.ndarray:
        return self.op.mat

    @property
    def dim(self) -> int:
        return self.op.dim

    @staticmethod
    def from_matrix(mat) -> "DensityOperator":
        return DensityOperator(HermitianOperator(_as_matrix(mat)))

    @staticmethod
    def pure(vec) -> "DensityOperator":
        v = np.asarray(vec, dtype=np.complex128).reshape(-1)
        nrm = float(np.linalg.norm(v))
        if nrm == 0.0:
            raise ValidationError("cannot build a state from the zero vector")
        v = v / nrm
        return DensityOperator.from_matrix(np.outer(v, v.conj()))

    @staticmethod
    def maximally_mixed(dim: int) -> "DensityOperator":
        return DensityOperator.from_matrix(np.eye(dim, dtype=np.complex128) / dim)


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in ascending order with a matching unitary eigenbasis."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self) -> None:
        self.eigenvalues.setflags(write=False)
        self.eigenvectors.setflags(write=False)

    @property
    def max(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def min(self) -> float:
        return float(self.eigenvalues[0])


def _off_norm(h: np.ndarray) -> float:
    off = h - np.diag(np.diag(h))
    return float(np.linalg.norm(off))


def _jacobi(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Diagonalise a Hermitian matrix by cyclic complex Jacobi rotations."""
    d = a.shape[0]
    h = np.array(a, dtype=np.complex128)
    v = np.eye(d, dtype=np.complex128)
    if d == 1:
        return np.array([h[0, 0].real]), v
    hnorm = float(np.linalg.norm(h))
    if hnorm == 0.0:
        return np.zeros(d), v
    thresh = _JACOBI_OFF_RTOL * hnorm
    # Rotations on elements already far below the target threshold are wasted;
    # leaving them in place cannot push the off-diagonal norm above thresh.
    skip = thresh / (d * d)
    converged = False
    for _ in range(_JACOBI_SWEEP_CAP):
        if _off_norm(h) <= thresh:
            converged = True
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = h[p, q]
                r = abs(apq)
                if r <= skip:
                    continue
                phase = apq / r
                tau = (h[q, q].real - h[p, p].real) / (2.0 * r)
                if tau == 0.0:
                    t = 1.0
                else:
                    t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                sp = s * np.conj(phase)
                cp = h[:, p].copy()
                cq = h[:, q].copy()
                h[:, p] = c * cp - sp * cq
                h[:, q] = s * cp + c * np.conj(phase) * cq
                rp = h[p, :].copy()
                rq = h[q, :].copy()
                h[p, :] = c * rp - s * phase * rq
                h[q, :] = s * rp + c * phase * rq
                h[p, q] = 0.0
                h[q, p] = 0.0
                h[p, p] = h[p, p].real
                h[q, q] = h[q, q].real
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - sp * vq
                v[:, q] = s * vp + c * np.conj(phase) * vq
    if not converged and _off_norm(h) > thresh:
        raise EigenSolverError(
            f"Jacobi sweep cap {_JACOBI_SWEEP_CAP} reached with off-diagonal norm "
            f"{_off_norm(h):.3e} on a matrix of Frobenius norm {hnorm:.3e}"
        )
    w = np.real(np.diag(h))
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def eig_hermitian(h) -> Spectrum:
    """Full eigendecomposition of a Hermitian operator.

    The reconstruction V diag(w) V' is verified against the input before the
    spectrum is returned, so a successful call certifies its own output.
    """
    a = _as_matrix(h)
    w, v = _jacobi(a)
    scale = max(1.0, float(np.linalg.norm(a)))
    recon = (v * w) @ v.conj().T
    err = float(np.linalg.norm(recon - a))
    if err > SUPPORT_RTOL * scale:
        raise EigenSolverError(f"eigendecomposition residual {err:.3e} exceeds tolerance")
    return Spectrum(eigenvalues=w, eigenvectors=v)


def _check_psd_spectrum(w: np.ndarray, what: str) -> None:
    scale = float(np.max(np.abs(w))) if w.size else 0.0
    if w.size and w[0] < -PSD_TOL * max(scale, 1.0):
        raise ValidationError(f"{what} is not PSD (min eigenvalue {w[0]:.3e})")


def operator_power(h, t: float) -> HermitianOperator:
    """Pseudo-power H^t of a PSD operator.

    Eigenvalues at or below SUPPORT_RTOL times the largest are treated as an
    exact kernel: they map to zero for every exponent, so negative powers act
    as powers of the pseudo-inverse on the support.
    """
    spec = eig_hermitian(h)
    w = spec.eigenvalues.copy()
    _check_psd_spectrum(w, "operator_power argument")
    wmax = float(np.max(w)) if w.size else 0.0
    cut = SUPPORT_RTOL * wmax
    powered = np.zeros_like(w)
    on = w > cut
    if t == 0.0:
        powered[on] = 1.0
    else:
        powered[on] = np.power(w[on], t)
    v = spec.eigenvectors
    return HermitianOperator((v * powered) @ v.conj().T)


def support_projector(h) -> HermitianOperator:
    """Projector onto the support of a PSD operator."""
    return operator_power(h, 0.0)


def support_contained(rho, sigma, tol: float = SUPPORT_RTOL) -> bool:
    """True iff supp(rho) lies inside supp(sigma) at the given threshold.

    Every eigenvector of sigma with eigenvalue at most tol times sigma's
    largest eigenvalue must carry at most tol weight under rho.
    """
    r = _as_matrix(rho)
    s = _as_matrix(sigma)
    if r.shape != s.shape:
        raise DimensionMismatch(f"shapes {r.shape} and {s.shape} differ")
    spec = eig_hermitian(s)
    wmax = float(np.max(spec.eigenvalues)) if spec.eigenvalues.size else 0.0
    kernel = spec.eigenvalues <= tol * max(wmax, 0.0)
    if not np.any(kernel):
        return True
    vk = spec.eigenvectors[:, kernel]
    weights = np.real(np.einsum("ik,ij,jk->k", vk.conj(), r, vk))
    return bool(np.all(weights <= tol))


def kron(a, b) -> HermitianOperator:
    return HermitianOperator(np.kron(_as_matrix(a), _as_matrix(b)))


def partial_trace(h, dims: tuple[int, ...], which: int) -> HermitianOperator:
    """Trace out subsystem `which` from an operator on a tensor product.

    `dims` lists every factor dimension in order; their product must match
    the operator dimension.
    """
    a = _as_matrix(h)
    n = len(dims)
    if which < 0 or which >= n:
        raise DimensionMismatch(f"subsystem {which} outside 0..{n - 1}")
    total = int(np.prod(dims))
    if a.shape[0] != total:
        raise DimensionMismatch(f"dims {dims} do not factor dimension {a.shape[0]}")
    tensor = a.reshape(*dims, *dims)
    reduced = np.trace(tensor, axis1=which, axis2=n + which)
    keep = int(total // dims[which])
    return HermitianOperator(reduced.reshape(keep, keep))


def trace_distance(rho, sigma) -> float:
    """Trace norm of the difference, sum of absolute eigenvalues of rho - sigma."""
    a = _as_matrix(rho)
    b = _as_matrix(sigma)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")
    w = eig_hermitian(HermitianOperator(a - b)).eigenvalues
    return float(np.sum(np.abs(w)))


def von_neumann_entropy(rho: DensityOperator) -> float:
    """Entropy in bits; eigenvalues at or below the floor contribute zero."""
    w = eig_hermitian(rho).eigenvalues
    on = w > ENTROPY_FLOOR
    h = -float(np.sum(w[on] * np.log2(w[on])))
    return max(h, 0.0)


def random_unitary(dim: int, seed: int) -> np.ndarray:
    """Haar-distributed unitary, deterministic in the seed."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    ph = np.diag(r).copy()
    ph = ph / np.abs(ph)
    u = q * ph
    if float(np.max(np.abs(u.conj().T @ u - np.eye(dim)))) > UNITARITY_ATOL:
        raise ValidationError("generated matrix failed the unitarity check")
    return u


def random_density(dim: int, rank: int, seed: int) -> DensityOperator:
    """Random density operator of the requested rank, deterministic in the seed."""
    if not 1 <= rank <= dim:
        raise ValidationError(f"rank {rank} outside 1..{dim}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    return DensityOperator.from_matrix(rho)
