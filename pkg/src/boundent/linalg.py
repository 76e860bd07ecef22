"""Dense complex linear algebra for small (16x16) matrices.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. The Hermitian
eigensolver is a cyclic complex Jacobi method; singular values, trace norms
and range bases are all derived from it so that every spectral quantity in
the package comes from one solver.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from boundent.errors import NoConvergence, NotHermitian, ZeroVector

HERMITIAN_TOL = 1e-12
OFFDIAG_TOL = 1e-14
MAX_SWEEPS = 100
DEFAULT_RANK_TOL = 1e-10


def as_matrix(M) -> np.ndarray:
    """Coerce ``M`` to a 2-D complex array, rejecting NaN/Inf."""
    M = np.asarray(M, dtype=complex)
    if M.ndim == 1:
        M = M.reshape(-1, 1)
    if M.ndim != 2:
        raise ValueError(f"expected a matrix, got array of shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix contains NaN or Inf entries")
    return M


def kron(A, B) -> np.ndarray:
    """Kronecker product; entry ``(i*p + k, j*q + l)`` equals ``A[i, j] * B[k, l]``.

    1-D inputs are treated as column vectors and a 1-D result is returned,
    so ``kron(e1, e2)`` is directly a state vector.
    """
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    return np.kron(A, B)


def dagger(M) -> np.ndarray:
    return np.conj(np.asarray(M)).T


def hermiticity_defect(M) -> float:
    M = np.asarray(M)
    return float(np.max(np.abs(M - dagger(M)))) if M.size else 0.0


@lru_cache(maxsize=None)
def _round_robin(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    # Circle-method tournament: every unordered pair appears once per sweep,
    # and the pairs within one round are disjoint so their rotations commute.
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for k in range(m // 2):
            i, j = players[k], players[m - 1 - k]
            if i < n and j < n:
                ps.append(min(i, j))
                qs.append(max(i, j))
        rounds.append((np.array(ps, dtype=int), np.array(qs, dtype=int)))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return tuple(rounds)


def _offdiag_norm(M: np.ndarray) -> float:
    off = M - np.diag(np.diagonal(M))
    return float(np.linalg.norm(off))


def hermitian_eig(M, max_sweeps: int = MAX_SWEEPS) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Parameters
    ----------
    M : array_like
        Square matrix, Hermitian to within ``1e-12`` (max entry of ``M - M^H``).
    max_sweeps : int
        Cap on full sweeps over all off-diagonal pairs.

    Returns
    -------
    eigenvalues : ndarray
        Real eigenvalues in ascending order.
    eigenvectors : ndarray
        Unitary matrix whose columns are the matching eigenvectors.

    Raises
    ------
    NotHermitian
        If the Hermiticity precondition fails.
    NoConvergence
        If the off-diagonal mass is still above ``1e-14 * ||M||_F`` after
        ``max_sweeps`` sweeps.
    """
    M = as_matrix(M)
    n, m = M.shape
    if n != m:
        raise NotHermitian(f"matrix is not square: {M.shape}")
    defect = hermiticity_defect(M)
    if defect > HERMITIAN_TOL:
        raise NotHermitian(f"max |M - M^H| = {defect:.3e} exceeds {HERMITIAN_TOL:g}")

    A = 0.5 * (M + dagger(M))
    V = np.eye(n, dtype=complex)
    if n < 2:
        return np.real(np.diagonal(A)).copy(), V

    peak = np.max(np.abs(A))
    if peak == 0.0:
        return np.zeros(n), V
    # two-step scaling: the Frobenius norm alone underflows near 1e-160
    A = A / peak
    fro = np.linalg.norm(A)
    A = A / fro
    scale = peak * fro
    # Pivots this small cannot affect the stopping rule; skipping them avoids
    # dividing by subnormal magnitudes.
    negligible = 1e-4 * OFFDIAG_TOL / n
    rounds = _round_robin(n)
    for _ in range(max_sweeps + 1):
        if _offdiag_norm(A) <= OFFDIAG_TOL:
            break
        for p, q in rounds:
            b = A[p, q]
            mag = np.abs(b)
            live = mag > negligible
            if not np.any(live):
                continue
            a_pp = A[p, p].real
            a_qq = A[q, q].real
            safe = np.where(live, mag, 1.0)
            tau = (a_qq - a_pp) / (2.0 * safe)
            sign = np.where(tau >= 0.0, 1.0, -1.0)
            t = np.where(live, sign / (np.abs(tau) + np.hypot(1.0, tau)), 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            phase = np.where(live, np.conj(b) / safe, 1.0)  # e^{-i arg b}

            G = np.eye(n, dtype=complex)
            G[p, p] = c
            G[p, q] = s
            G[q, p] = -s * phase
            G[q, q] = c * phase
            A = dagger(G) @ A @ G
            A[p, q] = 0.0
            A[q, p] = 0.0
            V = V @ G
        A = 0.5 * (A + dagger(A))
    else:
        raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")

    w = np.real(np.diagonal(A)) * scale
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def eigvalsh(M) -> np.ndarray:
    return hermitian_eig(M)[0]


def singular_values(M) -> np.ndarray:
    """Singular values of ``M`` in descending order.

    Computed from the eigenvectors ``v_i`` of ``M^H M`` as ``||M v_i||``,
    which keeps small singular values accurate to ``O(eps * ||M||)``
    instead of ``O(sqrt(eps) * ||M||)``.
    """
    M = as_matrix(M)
    if M.size == 0:
        return np.zeros(0)
    gram = dagger(M) @ M
    gram = 0.5 * (gram + dagger(gram))
    w, V = hermitian_eig(gram)
    if w.size and w[0] < -1e-12 * max(1.0, abs(w[-1])):
        raise NoConvergence(f"M^H M has a negative eigenvalue {w[0]:.3e}")
    sv = np.linalg.norm(M @ V, axis=0)
    sv = np.sort(sv)[::-1]
    return sv[: min(M.shape)]


def trace_norm(M) -> float:
    """Sum of singular values."""
    return float(np.sum(singular_values(M)))


@dataclass(frozen=True)
class RangeBasis:
    """Orthonormal basis (columns of ``vectors``) of a subspace of C^dim."""

    dim: int
    vectors: np.ndarray
    tol: float = DEFAULT_RANK_TOL

    @property
    def rank(self) -> int:
        return int(self.vectors.shape[1])

    def projector(self) -> np.ndarray:
        return self.vectors @ dagger(self.vectors)

    def orthonormality_defect(self) -> float:
        if self.rank == 0:
            return 0.0
        gram = dagger(self.vectors) @ self.vectors
        return float(np.max(np.abs(gram - np.eye(self.rank))))


def orthonormal_range(M, tol: float = DEFAULT_RANK_TOL) -> RangeBasis:
    """Eigenvectors of a PSD matrix whose eigenvalues exceed ``tol * max(1, lambda_max)``."""
    M = as_matrix(M)
    w, V = hermitian_eig(M)
    cutoff = tol * max(1.0, float(w[-1]) if w.size else 0.0)
    keep = w > cutoff
    return RangeBasis(dim=M.shape[0], vectors=V[:, keep], tol=tol)


def subspace_contains(
    basis: RangeBasis, v, tol: float = DEFAULT_RANK_TOL
) -> tuple[bool, float]:
    """Relative distance of ``v`` from the subspace.

    Returns ``(member, residual)`` with ``residual = ||v - P v|| / ||v||``.
    """
    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.shape[0] != basis.dim:
        raise ValueError(f"vector has dimension {v.shape[0]}, basis has {basis.dim}")
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise ZeroVector("cannot test membership of the zero vector")
    Q = basis.vectors
    r = v - Q @ (dagger(Q) @ v)
    residual = float(np.linalg.norm(r) / norm)
    return residual <= tol, residual


def span_of(
    vectors: Iterable[Sequence[complex]] | np.ndarray,
    tol: float = DEFAULT_RANK_TOL,
    dim: int | None = None,
) -> RangeBasis:
    """Orthonormal basis of the linear span of ``vectors``.

    Nonzero inputs are normalized first; the basis is the range of the
    (PSD) sum of their projectors.
    """
    vecs = [np.asarray(v, dtype=complex).reshape(-1) for v in vectors]
    if not vecs:
        if dim is None:
            raise ValueError("span of an empty list needs an explicit dim")
        return RangeBasis(dim=dim, vectors=np.zeros((dim, 0), dtype=complex), tol=tol)
    d = vecs[0].shape[0]
    if any(v.shape[0] != d for v in vecs):
        raise ValueError("vectors do not share a dimension")
    cols = [v / np.linalg.norm(v) for v in vecs if np.linalg.norm(v) > 0.0]
    if not cols:
        return RangeBasis(dim=d, vectors=np.zeros((d, 0), dtype=complex), tol=tol)
    W = np.stack(cols, axis=1)
    return orthonormal_range(W @ dagger(W), tol=tol)
