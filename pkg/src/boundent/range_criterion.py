"""Range-criterion machinery for the 4x4 family.

A separable state is a mixture of product vectors ``l⊗r`` lying in its
range, and the partially conjugated vectors ``l⊗conj(r)`` then lie in (and
span) the range of the partial transpose. This module

* describes the 8-dimensional range pattern of the family states,
* enumerates the product-vector families that fit it,
* spans the partial complex conjugates (PCC) of sampled family members, and
* tests the witness ``e1⊗e2`` against that span.

``product_search`` is an independent alternating-optimization oracle for
product vectors in an arbitrary subspace.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable

import numpy as np

from boundent.errors import DegenerateScalar, NoStabilization
from boundent.linalg import (
    DEFAULT_RANK_TOL,
    RangeBasis,
    dagger,
    hermitian_eig,
    kron,
    orthonormal_range,
    span_of,
    subspace_contains,
)
from boundent.ppt import PPT_TOL, partial_transpose
from boundent.states import DIM, FamilyParams, basis_vector, family_state

WITNESS_OUT_TOL = 1e-6

# symbol -> (1-based position, 1-based position of the negated partner or None)
RANGE_PATTERN: dict[str, tuple[int, int | None]] = {
    "A": (1, None),
    "B": (2, 5),
    "C": (3, 9),
    "D": (6, None),
    "E": (8, 14),
    "F": (11, None),
    "G": (12, 15),
    "H": (16, None),
}
FORCED_ZEROS = (4, 7, 10, 13)


def materialize_pattern(**symbols: complex) -> np.ndarray:
    """16-vector of the range pattern; unspecified symbols are zero."""
    unknown = set(symbols) - set(RANGE_PATTERN)
    if unknown:
        raise KeyError(f"unknown pattern symbols {sorted(unknown)}")
    v = np.zeros(DIM * DIM, dtype=complex)
    for name, value in symbols.items():
        pos, partner = RANGE_PATTERN[name]
        v[pos - 1] = value
        if partner is not None:
            v[partner - 1] = -value
    return v


def pattern_basis() -> RangeBasis:
    return span_of([materialize_pattern(**{s: 1.0}) for s in RANGE_PATTERN])


def range_pattern_check(rho, tol: float = DEFAULT_RANK_TOL) -> tuple[bool, int]:
    """Does the range of ``rho`` sit inside the 8-dimensional range pattern?

    Returns ``(fits, rank)``: ``fits`` is true when every range basis vector
    of ``rho`` lies in the pattern subspace within ``tol``.
    """
    rng = orthonormal_range(rho, tol)
    pattern = pattern_basis()
    if rng.rank > pattern.rank:
        return False, rng.rank
    fits = all(subspace_contains(pattern, rng.vectors[:, k], tol)[0] for k in range(rng.rank))
    return fits, rng.rank


# -- product vectors ----------------------------------------------------------


@dataclass(frozen=True)
class ProductVector:
    left: np.ndarray
    right: np.ndarray
    family_tag: int | None = None
    free_scalars: dict = field(default_factory=dict)

    @property
    def vector(self) -> np.ndarray:
        return kron(self.left, self.right)


def bilinear_residuals(pv: ProductVector) -> np.ndarray:
    """Residuals of the five bilinear constraint groups a range product must satisfy.

    Group 0 is ``max(|b1 c4|, |b2 c3|, |b3 c2|, |b4 c1|)``; groups 1-4 are
    ``|b1 c2 + b2 c1|``, ``|b1 c3 + b3 c1|``, ``|b2 c4 + b4 c2|``,
    ``|b3 c4 + b4 c3|``.
    """
    b = np.asarray(pv.left, dtype=complex)
    c = np.asarray(pv.right, dtype=complex)
    return np.array(
        [
            max(abs(b[0] * c[3]), abs(b[1] * c[2]), abs(b[2] * c[1]), abs(b[3] * c[0])),
            abs(b[0] * c[1] + b[1] * c[0]),
            abs(b[0] * c[2] + b[2] * c[0]),
            abs(b[1] * c[3] + b[3] * c[1]),
            abs(b[2] * c[3] + b[3] * c[2]),
        ]
    )


def _principal_sqrt(z: complex) -> complex:
    z = complex(z)
    # +0.0 clears signed zeros so -1-0j stays on the +i side of the cut
    return complex(np.sqrt(complex(z.real + 0.0, z.imag + 0.0)))


def _two_parameter(tag: int, slots: tuple[int, int], names: tuple[str, str], branch: int):
    # (1/X) [.. X .. -s*r ..] ⊗ [.. X .. s*r ..] with r = sqrt(-X Y), X at slots[0], r at slots[1]
    first, second = slots
    x_name, y_name = names

    def build(**scalars) -> ProductVector:
        x = complex(scalars[x_name])
        y = complex(scalars[y_name])
        if x == 0:
            raise DegenerateScalar(f"family ({tag}) needs {x_name} != 0")
        r = branch * _principal_sqrt(-x * y)
        left = np.zeros(DIM, dtype=complex)
        right = np.zeros(DIM, dtype=complex)
        left[first], left[second] = x, -r
        right[first], right[second] = x, r
        return ProductVector(left / x, right, tag, {x_name: x, y_name: y})

    return build


def _one_parameter(tag: int, slot: int, name: str):
    def build(**scalars) -> ProductVector:
        x = complex(scalars[name])
        unit = np.zeros(DIM, dtype=complex)
        unit[slot] = 1.0
        return ProductVector(x * unit, unit.copy(), tag, {name: x})

    return build


@dataclass(frozen=True)
class Family:
    """One parametric family of product vectors in the range pattern."""

    tag: int
    symbols: tuple[str, ...]
    build: Callable[..., ProductVector]
    paired_with: int | None = None

    def __call__(self, *values, **scalars) -> ProductVector:
        if values:
            scalars = dict(zip(self.symbols, values), **scalars)
        return self.build(**scalars)


_KEPT = (
    Family(12, ("A", "D"), _two_parameter(12, (0, 1), ("A", "D"), +1), paired_with=13),
    Family(14, ("A",), _one_parameter(14, 0, "A")),
    Family(15, ("A", "F"), _two_parameter(15, (0, 2), ("A", "F"), +1), paired_with=16),
    Family(19, ("D",), _one_parameter(19, 1, "D")),
    Family(22, ("D", "H"), _two_parameter(22, (1, 3), ("D", "H"), +1), paired_with=23),
    Family(24, ("F", "H"), _two_parameter(24, (2, 3), ("F", "H"), +1), paired_with=25),
    Family(26, ("F",), _one_parameter(26, 2, "F")),
    Family(27, ("H",), _one_parameter(27, 3, "H")),
)

_DISCARDED = (
    Family(13, ("A", "D"), _two_parameter(13, (0, 1), ("A", "D"), -1), paired_with=12),
    Family(16, ("A", "F"), _two_parameter(16, (0, 2), ("A", "F"), -1), paired_with=15),
    Family(23, ("D", "H"), _two_parameter(23, (1, 3), ("D", "H"), -1), paired_with=22),
    Family(25, ("F", "H"), _two_parameter(25, (2, 3), ("F", "H"), -1), paired_with=24),
)


def enumerate_families(include_discarded: bool = False) -> dict[int, Family]:
    """The eight kept product-vector families, keyed by tag.

    With ``include_discarded`` the four opposite-branch partners
    (13, 16, 23, 25) are added; they span nothing new.
    """
    fams = _KEPT + (_DISCARDED if include_discarded else ())
    return {f.tag: f for f in fams}


def pcc(pv: ProductVector) -> np.ndarray:
    """Partial complex conjugate ``left ⊗ conj(right)``."""
    return kron(pv.left, np.conj(pv.right))


def witness_vector() -> np.ndarray:
    """``e1⊗e2``."""
    return basis_vector(2)


# -- sampling the PCC span ----------------------------------------------------

SAMPLING_POLICIES = ("complex", "positive_real")

DETERMINISTIC_SCALARS = {
    "complex": (1.0, -1.0, 1j, 1.0 + 1.0j),
    "positive_real": (1.0, 0.5, 2.0, 3.0),
}


def _random_scalars(rng: np.random.Generator, n: int, sampling: str) -> np.ndarray:
    if sampling == "complex":
        return rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return np.exp(rng.standard_normal(n)).astype(complex)


def _deterministic_instances(families: Iterable[Family], sampling: str):
    values = DETERMINISTIC_SCALARS[sampling]
    for fam in families:
        for combo in itertools.product(values, repeat=len(fam.symbols)):
            yield fam, combo


def _random_instances(families, rng, batch: int, sampling: str):
    for fam in families:
        draws = _random_scalars(rng, batch * len(fam.symbols), sampling)
        for k in range(batch):
            yield fam, tuple(draws[k * len(fam.symbols):(k + 1) * len(fam.symbols)])


@dataclass
class PccSpanResult:
    basis: RangeBasis
    admitted: int
    rejected: int
    batches: int
    range_rho: RangeBasis
    range_pt: RangeBasis


def pcc_span_details(
    eps: float | None = None,
    sampling: str = "complex",
    seed: int = 0,
    params: FamilyParams | None = None,
    tol: float = DEFAULT_RANK_TOL,
    batch: int = 16,
    patience: int = 10,
    max_batches: int = 500,
) -> PccSpanResult:
    """Grow the span of PCC'd family members until its rank is stable.

    A sampled member ``v`` is admitted only when ``v`` lies in range(rho)
    and ``pcc(v)`` lies in range(rho^T2), both within ``tol``; only such
    vectors can appear in a separable decomposition. Sampling starts from a
    fixed scalar set and continues with batches of ``batch`` pseudo-random
    draws per family until ``patience`` consecutive batches add no rank.
    """
    if sampling not in SAMPLING_POLICIES:
        raise ValueError(f"sampling must be one of {SAMPLING_POLICIES}, got {sampling!r}")
    if params is None:
        if eps is None:
            raise ValueError("give eps or params")
        params = FamilyParams.symmetric(eps)
    elif eps is not None and eps != params.eps:
        params = params.with_eps(eps)

    rho = family_state(params)
    range_rho = orthonormal_range(rho, tol)
    range_pt = orthonormal_range(partial_transpose(rho), tol)
    families = list(enumerate_families().values())

    kept: list[np.ndarray] = []
    basis = span_of([], tol, dim=DIM * DIM)
    admitted = rejected = 0

    def absorb(instances) -> bool:
        nonlocal basis, admitted, rejected
        grew = False
        for fam, combo in instances:
            try:
                pv = fam(*combo)
            except DegenerateScalar:
                rejected += 1
                continue
            v = pv.vector
            if np.linalg.norm(v) == 0.0:
                rejected += 1
                continue
            w = pcc(pv)
            if not (subspace_contains(range_rho, v, tol)[0]
                    and subspace_contains(range_pt, w, tol)[0]):
                rejected += 1
                continue
            admitted += 1
            w = w / np.linalg.norm(w)
            kept.append(w)
            if basis.rank == 0 or not subspace_contains(basis, w, tol)[0]:
                basis = span_of(kept, tol)
                grew = True
                if basis.rank > range_pt.rank:
                    raise NoStabilization(
                        f"PCC span rank {basis.rank} exceeds rank(rho^T2) = {range_pt.rank}"
                    )
        return grew

    absorb(_deterministic_instances(families, sampling))
    rng = np.random.default_rng(seed)
    quiet = 0
    batches = 0
    while quiet < patience:
        if batches >= max_batches:
            raise NoStabilization(f"rank still growing after {max_batches} batches")
        batches += 1
        quiet = 0 if absorb(_random_instances(families, rng, batch, sampling)) else quiet + 1

    return PccSpanResult(basis, admitted, rejected, batches, range_rho, range_pt)


def pcc_span(eps: float, sampling: str = "complex", seed: int = 0, **kwargs) -> RangeBasis:
    """Orthonormal basis of the stabilized PCC span (see :func:`pcc_span_details`)."""
    return pcc_span_details(eps, sampling=sampling, seed=seed, **kwargs).basis


# -- independent product-vector search ----------------------------------------


def _normalize(x: np.ndarray) -> np.ndarray:
    return x / np.linalg.norm(x)


def _top_eigvec(M: np.ndarray) -> np.ndarray:
    # 4x4 steps use LAPACK, keeping the oracle independent of the Jacobi solver.
    return np.linalg.eigh(0.5 * (M + dagger(M)))[1][:, -1]


def product_search(
    basis: RangeBasis,
    restarts: int = 1000,
    seed: int = 0,
    tol: float = 1e-8,
    max_iter: int = 2000,
    dims=(DIM, DIM),
) -> list[ProductVector]:
    """Search for product vectors inside a subspace by alternating maximization.

    Each restart draws a random left factor, then alternately replaces the
    right (left) factor by the top eigenvector of the compressed projector
    with the other factor fixed. Candidates whose relative distance from the
    subspace is at most ``tol`` are returned as unit product vectors.
    Deterministic given ``seed``; restarts use independent child streams.
    """
    dA, dB = dims
    if basis.dim != dA * dB:
        raise ValueError(f"basis dimension {basis.dim} does not match dims {tuple(dims)}")
    Q = basis.vectors
    P = (Q @ dagger(Q)).reshape(dA, dB, dA, dB)
    hits: list[ProductVector] = []
    if basis.rank == 0:
        return hits

    def residual(left, right):
        v = kron(left, right)
        return float(np.linalg.norm(v - Q @ (dagger(Q) @ v)))

    children = np.random.SeedSequence(seed).spawn(restarts)
    for child in children:
        rng = np.random.default_rng(child)
        left = _normalize(rng.standard_normal(dA) + 1j * rng.standard_normal(dA))
        right = _normalize(rng.standard_normal(dB) + 1j * rng.standard_normal(dB))
        best = np.inf
        stall = 0
        for _ in range(max_iter):
            right = _top_eigvec(np.einsum("i,ikjl,j->kl", left.conj(), P, left))
            left = _top_eigvec(np.einsum("k,ikjl,l->ij", right.conj(), P, right))
            res = residual(left, right)
            if res <= tol * 1e-3:
                break
            if res < best * (1.0 - 1e-6):
                best = res
                stall = 0
            else:
                stall += 1
                if stall >= 20:
                    break
        res = residual(left, right)
        if res <= tol:
            hits.append(ProductVector(left, right))
    return hits


def match_family(
    pv: ProductVector, tol: float = 1e-6, families: dict[int, Family] | None = None
) -> int | None:
    """Tag of an enumerated family reproducing ``pv`` up to a global scalar.

    Free scalars are read off the pattern positions of ``pv.vector`` and the
    family is instantiated from them; a match needs the two unit vectors to
    agree up to phase within ``tol``. Opposite-branch partners are included.
    """
    if families is None:
        families = enumerate_families(include_discarded=True)
    v = pv.vector
    u = v / np.linalg.norm(v)
    read = {name: u[pos - 1] for name, (pos, _) in RANGE_PATTERN.items()}
    scale = np.max(np.abs(u))
    for tag, fam in sorted(families.items()):
        scalars = {s: read[s] for s in fam.symbols}
        if abs(scalars[fam.symbols[0]]) <= 1e-9 * scale:
            continue
        w = fam(**scalars).vector
        nw = np.linalg.norm(w)
        if nw == 0.0:
            continue
        overlap = abs(np.vdot(w / nw, u))
        if np.sqrt(max(2.0 - 2.0 * overlap, 0.0)) <= tol:
            return tag
    return None


# -- certificate ---------------------------------------------------------------


class Verdict(str, enum.Enum):
    BOUND_ENTANGLED = "bound_entangled"
    NPT = "npt"
    INCONCLUSIVE = "inconclusive"


@dataclass
class Certificate:
    eps: float
    rank_rho: int
    rank_pt: int
    pcc_span_rank: int | None
    witness_in_range_pt: float
    witness_in_pcc_span: float | None
    min_pt_eig: float
    is_ppt: bool
    pattern_ok: bool
    verdict: Verdict
    seed: int = 0
    sampling: str = "complex"

    def to_dict(self) -> dict:
        out = asdict(self)
        out["verdict"] = self.verdict.value
        return out


def certify(
    params: FamilyParams,
    seed: int = 0,
    tol: float = DEFAULT_RANK_TOL,
    sampling: str = "complex",
) -> Certificate:
    """Run the range-criterion test on one family member.

    ``NPT`` if the partial transpose has an eigenvalue below ``-1e-10``;
    ``BOUND_ENTANGLED`` if the state is PPT and the witness ``e1⊗e2`` lies
    in range(rho^T2) but at least ``1e-6`` away from the PCC span;
    ``INCONCLUSIVE`` otherwise.
    """
    rho = family_state(params)
    pt = partial_transpose(rho)
    min_eig = float(hermitian_eig(pt)[0][0])
    is_ppt = min_eig >= -PPT_TOL
    range_pt = orthonormal_range(pt, tol)
    range_rho = orthonormal_range(rho, tol)
    pattern_ok, _ = range_pattern_check(rho, tol)
    witness = witness_vector()
    _, in_pt = subspace_contains(range_pt, witness, tol)

    span_rank = None
    in_span = None
    if is_ppt:
        span = pcc_span_details(params=params, sampling=sampling, seed=seed, tol=tol).basis
        span_rank = span.rank
        in_span = subspace_contains(span, witness, tol)[1] if span.rank else 1.0

    if not is_ppt:
        verdict = Verdict.NPT
    elif in_pt <= tol and in_span is not None and in_span >= WITNESS_OUT_TOL:
        verdict = Verdict.BOUND_ENTANGLED
    else:
        verdict = Verdict.INCONCLUSIVE

    return Certificate(
        eps=params.eps,
        rank_rho=range_rho.rank,
        rank_pt=range_pt.rank,
        pcc_span_rank=span_rank,
        witness_in_range_pt=in_pt,
        witness_in_pcc_span=in_span,
        min_pt_eig=min_eig,
        is_ppt=is_ppt,
        pattern_ok=pattern_ok,
        verdict=verdict,
        seed=seed,
        sampling=sampling,
    )
