"""Partial transpose, closed-form partial-transpose spectrum, PPT threshold
and the realignment (CCNR) map for the 4x4 family."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from boundent.errors import BadDims, NegativeRadicand
from boundent.linalg import hermitian_eig, trace_norm
from boundent.states import DIMS, FamilyParams

PPT_TOL = 1e-10
DETECTION_TOL = 1e-9


def _split(rho, dims) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    dA, dB = dims
    if rho.shape != (dA * dB, dA * dB):
        raise BadDims(f"matrix of shape {rho.shape} does not match dims {tuple(dims)}")
    return rho.reshape(dA, dB, dA, dB)


def partial_transpose(rho, subsystem: int = 2, dims=DIMS) -> np.ndarray:
    """Transpose the indices of one tensor factor.

    With ``rho[(i,j),(k,l)]`` the entry between ``e_i⊗e_j`` and ``e_k⊗e_l``,
    ``subsystem=2`` maps it to position ``((i,l),(k,j))`` and ``subsystem=1``
    to ``((k,j),(i,l))``.
    """
    t = _split(rho, dims)
    dA, dB = dims
    if subsystem == 2:
        out = t.transpose(0, 3, 2, 1)
    elif subsystem == 1:
        out = t.transpose(2, 1, 0, 3)
    else:
        raise BadDims(f"subsystem must be 1 or 2, got {subsystem!r}")
    return out.reshape(dA * dB, dA * dB)


def realignment(rho, dims=DIMS) -> np.ndarray:
    """Reshuffle ``R[(i,k),(j,l)] = rho[(i,j),(k,l)]``."""
    t = _split(rho, dims)
    dA, dB = dims
    return t.transpose(0, 2, 1, 3).reshape(dA * dA, dB * dB)


def inverse_realignment(R, dims=DIMS) -> np.ndarray:
    dA, dB = dims
    R = np.asarray(R, dtype=complex)
    if R.shape != (dA * dA, dB * dB):
        raise BadDims(f"matrix of shape {R.shape} is not a realigned {tuple(dims)} operator")
    return R.reshape(dA, dA, dB, dB).transpose(0, 2, 1, 3).reshape(dA * dB, dA * dB)


def min_pt_eigenvalue(rho, dims=DIMS) -> float:
    return float(hermitian_eig(partial_transpose(rho, 2, dims))[0][0])


# -- closed form --------------------------------------------------------------


def _moduli_sums(params: FamilyParams) -> tuple[float, float, float]:
    """Return ``(S, delta1, P)`` with ``S = sum |x|^4`` and ``P = |a|^2|d|^2 - |b|^2|c|^2``."""
    alpha, beta, gamma, delta = params.moduli_squared
    s = alpha**2 + beta**2 + gamma**2 + delta**2
    delta1 = ((alpha - delta) ** 2 + (beta + gamma) ** 2) * (
        (alpha + delta) ** 2 + (beta - gamma) ** 2
    )
    p = alpha * delta - beta * gamma
    return s, delta1, p


def listed_pt_eigenvalues(params: FamilyParams) -> np.ndarray:
    """The twelve eigenvalues of ``rho^T2`` outside the quartic block, ascending.

    ``0`` four times and ``eps |x|^2 / 2`` twice for each of ``x = a, b, c, d``.
    """
    half = params.eps / 2.0
    values = [0.0] * 4
    for m in params.moduli_squared:
        values += [half * m] * 2
    return np.sort(np.array(values))


def listed_multiset(params: FamilyParams) -> list[tuple[float, int]]:
    half = params.eps / 2.0
    return [(0.0, 4)] + [(half * m, 2) for m in params.moduli_squared]


def quartic_pt_roots(params: FamilyParams) -> np.ndarray:
    """Roots of the quartic factor of the characteristic polynomial of ``rho^T2``.

    ``(1-eps)/4 ± (eps/4) sqrt(2 [S ± sqrt(delta1)])``, ascending. The inner
    radicand ``S - sqrt(delta1)`` equals ``4 P^2 / (S + sqrt(delta1))`` and is
    evaluated in that form to avoid cancellation.
    """
    s, delta1, p = _moduli_sums(params)
    if delta1 < 0.0:
        raise NegativeRadicand(f"delta1 = {delta1!r} < 0")
    root_d1 = np.sqrt(delta1)
    direct = s - root_d1
    if direct < -1e-12 * max(s, 1.0):
        raise NegativeRadicand(f"S - sqrt(delta1) = {direct!r} < 0")
    denom = s + root_d1
    inner_minus = 4.0 * p * p / denom if denom > 0.0 else 0.0
    center = (1.0 - params.eps) / 4.0
    half_width = params.eps / 4.0
    outer = half_width * np.sqrt(2.0 * denom)
    inner = half_width * np.sqrt(2.0 * inner_minus)
    return np.sort(np.array([center - outer, center - inner, center + inner, center + outer]))


def closed_form_pt_spectrum(params: FamilyParams) -> np.ndarray:
    return np.sort(np.concatenate([listed_pt_eigenvalues(params), quartic_pt_roots(params)]))


def ppt_threshold(a, b, c, d) -> float:
    """Largest ``eps`` for which ``rho^T2`` stays positive semidefinite.

    ``1 / (1 + K)`` with ``K = sqrt(2 [S + sqrt(delta1)])``.
    """
    params = FamilyParams(a, b, c, d, 0.0)
    s, delta1, _ = _moduli_sums(params)
    k = np.sqrt(2.0 * (s + np.sqrt(delta1)))
    return float(1.0 / (1.0 + k))


@dataclass
class SpectrumReport:
    listed: list[tuple[float, int]]
    quartic_roots: list[float]
    s: float
    delta1: float
    min_eig: float
    is_ppt: bool
    threshold: float

    @property
    def eigenvalues(self) -> np.ndarray:
        vals = [v for v, m in self.listed for _ in range(m)] + list(self.quartic_roots)
        return np.sort(np.array(vals))

    def to_dict(self) -> dict:
        return asdict(self)


def spectrum_report(params: FamilyParams, tol: float = PPT_TOL) -> SpectrumReport:
    roots = quartic_pt_roots(params)
    listed = listed_multiset(params)
    s, delta1, _ = _moduli_sums(params)
    min_eig = float(min(roots[0], min(v for v, _ in listed)))
    return SpectrumReport(
        listed=[(float(v), m) for v, m in listed],
        quartic_roots=[float(r) for r in roots],
        s=float(s),
        delta1=float(delta1),
        min_eig=min_eig,
        is_ppt=min_eig >= -tol,
        threshold=ppt_threshold(params.a, params.b, params.c, params.d),
    )


# -- numeric criteria ---------------------------------------------------------


@dataclass
class CriterionReport:
    pt_trace_norm: float
    ccnr_trace_norm: float
    min_pt_eig: float
    ppt_verdict: bool
    detects_entanglement: dict[str, bool] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def criterion_report(rho, dims=DIMS, tol: float = DETECTION_TOL) -> CriterionReport:
    """Trace norms of the partial transpose and of the realigned matrix.

    Either exceeding 1 (beyond ``tol``) detects entanglement.
    """
    pt = partial_transpose(rho, 2, dims)
    pt_norm = trace_norm(pt)
    ccnr_norm = trace_norm(realignment(rho, dims))
    min_eig = float(hermitian_eig(pt)[0][0])
    return CriterionReport(
        pt_trace_norm=pt_norm,
        ccnr_trace_norm=ccnr_norm,
        min_pt_eig=min_eig,
        ppt_verdict=min_eig >= -PPT_TOL,
        detects_entanglement={
            "ppt": pt_norm > 1.0 + tol,
            "ccnr": ccnr_norm > 1.0 + tol,
        },
    )
