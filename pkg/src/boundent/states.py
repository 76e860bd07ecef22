"""Constructors for the 4x4 family of states.

Composite basis order is ``e1⊗e1, e1⊗e2, ..., e4⊗e4``; the amplitude of
``e_i⊗e_j`` (1-based) sits at 0-based index ``4*(i-1) + (j-1)``. All
matrices are 16x16 complex ``numpy`` arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from boundent.errors import NormalizationViolated
from boundent.linalg import hermitian_eig, hermiticity_defect

DIM = 4
DIMS = (DIM, DIM)
NORM_TOL = 1e-12

# 1-based composite positions e_i⊗e_i carried by the separable diagonal part.
DIAGONAL_POSITIONS = (1, 6, 11, 16)


def composite_index(i: int, j: int) -> int:
    """0-based array index of ``e_i⊗e_j`` for 1-based ``i, j``."""
    return DIM * (i - 1) + (j - 1)


def basis_vector(position: int, dim: int = DIM * DIM) -> np.ndarray:
    """Unit vector with a 1 at the 1-based ``position``."""
    v = np.zeros(dim, dtype=complex)
    v[position - 1] = 1.0
    return v


@dataclass(frozen=True)
class FamilyParams:
    """Amplitudes ``a, b, c, d`` and mixing weight ``eps`` of one family member.

    ``|a|^2 + |b|^2 + |c|^2 + |d|^2 = 1`` is enforced so that the entangled
    part has unit trace; use :meth:`normalized` to rescale arbitrary input.
    """

    a: complex
    b: complex
    c: complex
    d: complex
    eps: float

    def __post_init__(self):
        for name in "abcd":
            value = complex(getattr(self, name))
            if not np.isfinite(value):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, value)
        eps = float(self.eps)
        if not (0.0 <= eps <= 1.0):
            raise ValueError(f"eps must lie in [0, 1], got {eps!r}")
        object.__setattr__(self, "eps", eps)
        total = self.norm_squared
        if abs(total - 1.0) > NORM_TOL:
            raise NormalizationViolated(
                f"|a|^2+|b|^2+|c|^2+|d|^2 = {total!r}, must equal 1 within {NORM_TOL:g}"
            )

    @classmethod
    def normalized(cls, a, b, c, d, eps) -> "FamilyParams":
        amps = np.array([a, b, c, d], dtype=complex)
        norm = np.linalg.norm(amps)
        if norm == 0.0:
            raise NormalizationViolated("a, b, c, d are all zero")
        a, b, c, d = amps / norm
        return cls(a, b, c, d, eps)

    @classmethod
    def symmetric(cls, eps) -> "FamilyParams":
        return cls(0.5, 0.5, 0.5, 0.5, eps)

    @property
    def norm_squared(self) -> float:
        return float(sum(abs(x) ** 2 for x in (self.a, self.b, self.c, self.d)))

    @property
    def moduli_squared(self) -> tuple[float, float, float, float]:
        return tuple(abs(x) ** 2 for x in (self.a, self.b, self.c, self.d))

    def with_eps(self, eps) -> "FamilyParams":
        return FamilyParams(self.a, self.b, self.c, self.d, eps)


def pure_from_coeffs(A) -> np.ndarray:
    """Vectorize a 4x4 coefficient matrix row-major: amplitude of ``e_i⊗e_j`` is ``A[i, j]``."""
    A = np.asarray(A, dtype=complex)
    if A.shape != DIMS:
        raise ValueError(f"coefficient matrix must be 4x4, got {A.shape}")
    return A.reshape(-1).copy()


def antisym_A(a, c, d, b1, c1) -> np.ndarray:
    """The general antisymmetric coefficient matrix in five complex parameters."""
    return np.array(
        [
            [0, b1, a, -c],
            [-b1, 0, c, d],
            [-a, -c, 0, -c1],
            [c, -d, c1, 0],
        ],
        dtype=complex,
    )


def standard_form_1(lam1, lam2) -> np.ndarray:
    A = np.zeros(DIMS, dtype=complex)
    A[0, 1], A[1, 0] = lam1, -lam1
    A[2, 3], A[3, 2] = lam2, -lam2
    return A


def standard_form_2(lam1, lam2) -> np.ndarray:
    A = np.zeros(DIMS, dtype=complex)
    A[0, 2], A[2, 0] = lam1, -lam1
    A[1, 3], A[3, 1] = lam2, -lam2
    return A


def psi_b(sign: int, b, c) -> np.ndarray:
    """Unnormalized ``|psi_{±b}>`` from the first standard form with ``lam1 = ±b, lam2 = -c``."""
    return pure_from_coeffs(standard_form_1(sign * b, -c))


def psi_a(sign: int, a, d) -> np.ndarray:
    """Unnormalized ``|psi_{±a}>`` from the second standard form with ``lam1 = ±a, lam2 = d``."""
    return pure_from_coeffs(standard_form_2(sign * a, d))


def _even_mixture(plus: np.ndarray, minus: np.ndarray) -> np.ndarray:
    return 0.5 * (np.outer(plus, plus.conj()) + np.outer(minus, minus.conj()))


def rho_b(b, c) -> np.ndarray:
    """Equal mixture of the projectors onto ``|psi_{+b}>`` and ``|psi_{-b}>``.

    Trace is ``2(|b|^2 + |c|^2)``; the ``b``/``c`` cross terms cancel.
    """
    return _even_mixture(psi_b(+1, b, c), psi_b(-1, b, c))


def rho_a(a, d) -> np.ndarray:
    """Equal mixture of the projectors onto ``|psi_{+a}>`` and ``|psi_{-a}>``."""
    return _even_mixture(psi_a(+1, a, d), psi_a(-1, a, d))


def rho0(params: FamilyParams) -> np.ndarray:
    """The entangled (NPT) part: ``(rho_a + rho_b) / 2``."""
    return 0.5 * rho_a(params.a, params.d) + 0.5 * rho_b(params.b, params.c)


def diag_separable() -> np.ndarray:
    """Trace-one diagonal separable part ``(1/4) sum_i |e_i e_i><e_i e_i|``."""
    rho = np.zeros((DIM * DIM, DIM * DIM), dtype=complex)
    for pos in DIAGONAL_POSITIONS:
        rho[pos - 1, pos - 1] = 0.25
    return rho


def family_state(params: FamilyParams) -> np.ndarray:
    """``(1 - eps) * diag_separable() + eps * rho0(params)``."""
    eps = params.eps
    return (1.0 - eps) * diag_separable() + eps * rho0(params)


def symmetric_instance(eps) -> np.ndarray:
    """Family member with ``a = b = c = d = 1/2``."""
    return family_state(FamilyParams.symmetric(eps))


def entry_pattern(params: FamilyParams) -> np.ndarray:
    """Build the family state directly from its five distinct entries.

    Independent of the projector construction; used to cross-check it.
    """
    eps = params.eps
    alpha, beta, gamma, delta = params.moduli_squared
    x1 = (1.0 - eps) / 4.0
    x2, x3, x4, x5 = (eps / 2.0 * m for m in (alpha, beta, gamma, delta))
    rho = np.zeros((16, 16), dtype=complex)
    for pos in DIAGONAL_POSITIONS:
        rho[pos - 1, pos - 1] = x1
    for x, (p, q) in ((x3, (2, 5)), (x2, (3, 9)), (x5, (8, 14)), (x4, (12, 15))):
        rho[p - 1, p - 1] = rho[q - 1, q - 1] = x
        rho[p - 1, q - 1] = rho[q - 1, p - 1] = -x
    return rho


def check_density(rho, tol_herm: float = 1e-12, tol_trace: float = 1e-12,
                  tol_psd: float = 1e-10) -> None:
    """Raise ``ValueError`` unless ``rho`` is a 16x16 Hermitian, trace-1, PSD matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (16, 16):
        raise ValueError(f"density matrix must be 16x16, got {rho.shape}")
    defect = hermiticity_defect(rho)
    if defect > tol_herm:
        raise ValueError(f"not Hermitian: max |rho - rho^H| = {defect:.3e}")
    tr = np.trace(rho)
    if abs(tr - 1.0) > tol_trace:
        raise ValueError(f"trace is {tr.real:.15g}, expected 1")
    w = hermitian_eig(rho)[0]
    if w[0] < -tol_psd:
        raise ValueError(f"not positive semidefinite: min eigenvalue {w[0]:.3e}")
