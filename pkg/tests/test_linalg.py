import itertools

import numpy as np
import pytest
from numpy.testing import assert_allclose

from boundent.errors import NoConvergence, NotHermitian, ZeroVector
from boundent.linalg import (
    hermitian_eig,
    kron,
    orthonormal_range,
    singular_values,
    span_of,
    subspace_contains,
    trace_norm,
)
from boundent.ppt import partial_transpose
from boundent.range_criterion import enumerate_families
from boundent.states import basis_vector, symmetric_instance

from conftest import random_hermitian, random_unitary


def e(k, n=4):
    v = np.zeros(n)
    v[k - 1] = 1
    return v


def block_spectrum_oracle(M, tol=0.0):
    """Eigenvalues of a matrix whose nonzero pattern splits into 1x1 and 2x2 blocks.

    Each 2x2 block is solved from its characteristic polynomial
    ``x^2 - (p + s) x + (p s - |q|^2)`` with the quadratic formula.
    """
    n = M.shape[0]
    seen = set()
    values = []
    for i in range(n):
        if i in seen:
            continue
        partners = [j for j in range(n) if j != i and abs(M[i, j]) > tol]
        assert len(partners) <= 1, "oracle only handles 2x2 blocks"
        if not partners:
            values.append(M[i, i].real)
            seen.add(i)
            continue
        j = partners[0]
        p, s, q = M[i, i].real, M[j, j].real, M[i, j]
        tr, det = p + s, p * s - abs(q) ** 2
        disc = np.sqrt(tr * tr - 4 * det)
        values += [(tr - disc) / 2, (tr + disc) / 2]
        seen |= {i, j}
    return np.sort(values)


class TestKron:
    def test_identity(self):
        assert_allclose(kron(np.eye(2), np.eye(2)), np.eye(4))

    def test_basis_bookkeeping(self):
        assert_allclose(kron(e(1), e(2)), basis_vector(2))

    def test_index_formula(self, rng):
        A = rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))
        B = rng.standard_normal((4, 5))
        K = kron(A, B)
        assert K.shape == (8, 15)
        for i, j, k, l in itertools.product(range(2), range(3), range(4), range(5)):
            assert K[i * 4 + k, j * 5 + l] == A[i, j] * B[k, l]

    def test_family_12_expansion(self):
        # (1/A)[A, -r, 0, 0] ⊗ [A, r, 0, 0] with r^2 = -A D
        A, D = 2.0 + 1j, -0.5 + 3j
        r = np.sqrt(-A * D)
        v = kron(np.array([A, -r, 0, 0]) / A, np.array([A, r, 0, 0]))
        expected = np.zeros(16, dtype=complex)
        expected[[0, 1, 4, 5]] = [A, r, -r, D]
        assert_allclose(v, expected, atol=1e-14)


class TestHermitianEig:
    def test_diagonal(self):
        w, V = hermitian_eig(np.diag([3.0, 1.0, 2.0]))
        assert_allclose(w, [1, 2, 3])
        assert_allclose(np.abs(V.conj().T @ V), np.eye(3), atol=1e-15)

    def test_two_by_two_block(self):
        x = 0.37
        w, _ = hermitian_eig([[x, -x], [-x, x]])
        assert_allclose(w, [0, 2 * x], atol=1e-15)

    @pytest.mark.parametrize("scale", [1e-300, 1e-160, 1e150])
    def test_extreme_scales(self, rng, scale):
        H = random_hermitian(rng, 6)
        w, V = hermitian_eig(scale * H)
        assert_allclose(w / scale, np.linalg.eigvalsh(H), atol=1e-12 * np.abs(H).max())
        assert_allclose(V.conj().T @ V, np.eye(6), atol=1e-13)

    def test_zero_matrix(self):
        w, V = hermitian_eig(np.zeros((4, 4)))
        assert_allclose(w, 0)
        assert_allclose(V, np.eye(4))

    def test_symmetric_state_spectrum(self):
        rho = symmetric_instance(0.4)
        w, V = hermitian_eig(rho)
        assert_allclose(w, block_spectrum_oracle(rho), atol=1e-15)
        assert_allclose(w, [0] * 8 + [0.1] * 4 + [0.15] * 4, atol=1e-15)
        assert_allclose(V @ np.diag(w) @ V.conj().T, rho, atol=1e-15)

    def test_complex_entries(self):
        M = np.array([[1.0, 2 - 1j], [2 + 1j, -1.0]])
        w, V = hermitian_eig(M)
        assert_allclose(w, [-np.sqrt(6), np.sqrt(6)], atol=1e-14)
        assert_allclose(M @ V, V * w, atol=1e-14)

    def test_reconstruction_on_random_inputs(self, rng):
        worst = 0.0
        for _ in range(1000):
            M = random_hermitian(rng)
            w, V = hermitian_eig(M)
            scale = max(1.0, np.max(np.abs(w)))
            worst = max(worst, np.max(np.abs(M - (V * w) @ V.conj().T)) / scale)
            assert abs(w.sum() - np.trace(M).real) <= 1e-10 * max(1.0, abs(np.trace(M)))
            assert np.all(np.diff(w) >= 0)
        assert worst <= 1e-10

    def test_not_hermitian(self):
        with pytest.raises(NotHermitian):
            hermitian_eig([[1.0, 1.0], [0.0, 1.0]])
        with pytest.raises(NotHermitian):
            hermitian_eig(np.ones((2, 3)))

    def test_tiny_asymmetry_is_accepted(self):
        M = np.array([[1.0, 0.5 + 1e-13], [0.5, 2.0]])
        hermitian_eig(M)

    def test_sweep_cap(self, rng):
        with pytest.raises(NoConvergence):
            hermitian_eig(random_hermitian(rng, 6), max_sweeps=1)

    def test_zero_and_scalar(self):
        w, V = hermitian_eig(np.zeros((4, 4)))
        assert_allclose(w, 0)
        w, _ = hermitian_eig([[2.5]])
        assert_allclose(w, [2.5])


class TestSingularValues:
    def test_identity(self):
        assert_allclose(singular_values(np.eye(4)), [1, 1, 1, 1])

    def test_absolute_values(self):
        assert_allclose(singular_values(np.diag([-2.0, 3.0])), [3, 2])

    def test_against_lapack(self, rng):
        M = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
        assert_allclose(singular_values(M), np.linalg.svd(M, compute_uv=False), rtol=1e-12)

    def test_rectangular(self, rng):
        M = rng.standard_normal((3, 5))
        assert_allclose(singular_values(M), np.linalg.svd(M, compute_uv=False), rtol=1e-12)

    def test_small_singular_values_resolved(self):
        M = np.diag([1.0, 1e-12, 0.0])
        assert_allclose(singular_values(M), [1.0, 1e-12, 0.0], atol=1e-20)


class TestTraceNorm:
    def test_zero(self):
        assert trace_norm(np.zeros((5, 5))) == 0.0

    def test_unitary_invariance(self, rng):
        for _ in range(20):
            M = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
            U, W = random_unitary(rng), random_unitary(rng)
            assert abs(trace_norm(U @ M @ W) - trace_norm(M)) <= 1e-9

    def test_pt_of_symmetric_state(self):
        assert abs(trace_norm(partial_transpose(symmetric_instance(0.5))) - 1.0) <= 1e-9

    def test_npt_part_exceeds_one(self):
        assert trace_norm(partial_transpose(symmetric_instance(1.0))) > 1.0 + 1e-6


class TestOrthonormalRange:
    def test_projector(self):
        basis = orthonormal_range(np.diag([1.0, 0, 0, 0]))
        assert basis.rank == 1
        assert_allclose(np.abs(basis.vectors[:, 0]), [1, 0, 0, 0])

    def test_state_rank(self):
        assert orthonormal_range(symmetric_instance(0.3)).rank == 8

    def test_pt_rank(self):
        assert orthonormal_range(partial_transpose(symmetric_instance(0.3))).rank == 12

    def test_orthonormal(self):
        basis = orthonormal_range(partial_transpose(symmetric_instance(0.3)))
        assert basis.orthonormality_defect() <= 1e-12

    @pytest.mark.parametrize("eps", [0.1, 0.2, 0.3, 0.4])
    def test_rank_stable_under_tol_and_permutation(self, eps, rng):
        for M, expected in ((symmetric_instance(eps), 8),
                            (partial_transpose(symmetric_instance(eps)), 12)):
            perm = rng.permutation(16)
            for tol in (1e-11, 1e-10, 1e-9):
                assert orthonormal_range(M, tol).rank == expected
                assert orthonormal_range(M[np.ix_(perm, perm)], tol).rank == expected


class TestSubspaceContains:
    def test_basis_vector(self):
        basis = orthonormal_range(symmetric_instance(0.3))
        for k in range(basis.rank):
            member, res = subspace_contains(basis, basis.vectors[:, k])
            assert member and res <= 1e-12

    def test_witness_in_pt_range(self):
        basis = orthonormal_range(partial_transpose(symmetric_instance(0.3)))
        member, res = subspace_contains(basis, basis_vector(2))
        assert member and res <= 1e-10

    def test_non_member(self):
        basis = orthonormal_range(symmetric_instance(0.3))
        member, res = subspace_contains(basis, basis_vector(4))
        assert not member
        assert_allclose(res, 1.0)

    def test_zero_vector(self):
        with pytest.raises(ZeroVector):
            subspace_contains(orthonormal_range(np.eye(3)), np.zeros(3))


class TestSpanOf:
    def test_parallel(self):
        assert span_of([e(1), 2 * e(1)]).rank == 1

    def test_dependent_triple(self):
        assert span_of([e(1), e(2), e(1) + e(2)]).rank == 2

    def test_eight_family_vectors(self):
        vecs = []
        for fam in enumerate_families().values():
            vecs.append(fam(*([1.0] * len(fam.symbols))).vector)
        G = np.array([[np.vdot(u, v) for v in vecs] for u in vecs])
        # Gram-matrix rank through LAPACK, independent of the Jacobi path.
        assert np.linalg.matrix_rank(G, tol=1e-10) == 8
        assert span_of(vecs).rank == 8

    def test_order_independent(self, rng):
        vecs = [rng.standard_normal(16) for _ in range(5)]
        vecs += [vecs[0] + vecs[1], 3 * vecs[2]]
        for _ in range(5):
            order = rng.permutation(len(vecs))
            assert span_of([vecs[k] for k in order]).rank == 5

    def test_empty(self):
        assert span_of([], dim=16).rank == 0
        with pytest.raises(ValueError):
            span_of([])
