import numpy as np
import pytest

from qsep import linalg
from qsep.exceptions import ConvergenceError


def random_hermitian(rng, n, batch=None):
    shape = (n, n) if batch is None else (batch, n, n)
    m = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    return (m + np.conj(np.swapaxes(m, -1, -2))) / 2


class TestHermitianEigenvalues:
    def test_uniform_identity(self):
        vals = linalg.hermitian_eigenvalues(np.eye(8) / 8)
        assert np.allclose(vals, np.full(8, 1 / 8), atol=1e-14)

    def test_pure_ghz_spectrum(self):
        # (3 + 21g - 3w)/24 = 1 at g=1 and seven zeros
        from qsep import states

        rho = states.build_rho(states.SimplexPoint(1.0, 0.0))
        vals = linalg.hermitian_eigenvalues(rho)
        assert abs(vals[0] - 1.0) < 1e-12
        assert np.all(np.abs(vals[1:]) < 1e-12)

    def test_interior_point_closed_forms(self):
        from qsep import states

        g, w = 0.3, 0.4
        rho = states.build_rho(states.SimplexPoint(g, w))
        vals = linalg.hermitian_eigenvalues(rho)
        expected = np.sort(
            [(3 + 21 * g - 3 * w) / 24, (3 - 3 * g + 21 * w) / 24]
            + [(3 - 3 * g - 3 * w) / 24] * 6
        )[::-1]
        assert np.max(np.abs(vals - expected)) < 1e-13

    def test_matches_lapack_on_random_batch(self):
        rng = np.random.default_rng(7)
        for n in (2, 4, 8, 16):
            h = random_hermitian(rng, n, batch=20)
            mine = linalg.hermitian_eigenvalues(h)
            ref = np.sort(np.linalg.eigvalsh(h), axis=-1)[:, ::-1]
            assert np.max(np.abs(mine - ref)) < 1e-12

    def test_rejects_non_hermitian(self):
        a = np.array([[0.0, 1.0], [0.0, 0.0]])
        with pytest.raises(ValueError, match="not Hermitian"):
            linalg.hermitian_eigenvalues(a)

    def test_eigenvalue_sum_equals_trace(self):
        rng = np.random.default_rng(3)
        h = random_hermitian(rng, 8, batch=50)
        vals = linalg.hermitian_eigenvalues(h)
        traces = np.einsum("bii->b", h).real
        assert np.max(np.abs(vals.sum(axis=1) - traces)) < 1e-10

    def test_sweep_cap_reported(self):
        rng = np.random.default_rng(21)
        h = random_hermitian(rng, 8)
        with pytest.raises(ConvergenceError, match="off-diagonal"):
            linalg.jacobi_eigh(h, max_sweeps=1)

    def test_dimension_cap(self):
        with pytest.raises(ValueError, match="cap"):
            linalg.jacobi_eigh(np.eye(65))


class TestSingularValues:
    def test_zero_matrix(self):
        assert np.all(linalg.singular_values(np.zeros((4, 16))) == 0.0)

    def test_white_noise_reshuffle(self):
        from qsep import states

        r = states.reshuffle_24(states.SimplexPoint(0.0, 0.0))
        svs = linalg.singular_values(r)
        expected = np.array([1 / (2 * np.sqrt(2)), 0.0, 0.0, 0.0])
        assert np.max(np.abs(svs - expected)) < 1e-12

    def test_pure_ghz_reshuffle(self):
        from qsep import states

        r = states.reshuffle_24(states.SimplexPoint(1.0, 0.0))
        assert np.max(np.abs(linalg.singular_values(r) - 0.5)) < 1e-12

    def test_adjoint_invariance(self):
        rng = np.random.default_rng(11)
        a = rng.normal(size=(4, 16)) + 1j * rng.normal(size=(4, 16))
        s1 = linalg.singular_values(a)
        s2 = linalg.singular_values(np.conj(a.T))
        assert np.max(np.abs(s1 - s2)) < 1e-12

    def test_matches_lapack(self):
        rng = np.random.default_rng(5)
        a = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
        ref = np.linalg.svd(a, compute_uv=False)
        assert np.max(np.abs(linalg.singular_values(a) - ref)) < 1e-11


class TestTraceNorm:
    def test_density_matrix_is_one(self):
        from qsep import states

        for g, w in ((0.0, 0.0), (0.3, 0.2), (1.0, 0.0)):
            rho = states.build_rho(states.SimplexPoint(g, w))
            assert abs(linalg.trace_norm(rho) - 1.0) < 1e-12

    def test_reshuffle_222_white_noise(self):
        from qsep import states

        r = states.reshuffle_222(states.SimplexPoint(0.0, 0.0))
        assert abs(linalg.trace_norm(r) - 0.5) < 1e-12

    def test_reshuffle_222_pure_ghz(self):
        from qsep import states

        r = states.reshuffle_222(states.SimplexPoint(1.0, 0.0))
        assert abs(linalg.trace_norm(r) - 2.0) < 1e-12

    def test_invariant_under_permutations(self):
        rng = np.random.default_rng(13)
        a = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
        base = linalg.trace_norm(a)
        for _ in range(5):
            pu = rng.permutation(8)
            pv = rng.permutation(8)
            assert abs(linalg.trace_norm(a[np.ix_(pu, pv)]) - base) < 1e-11


class TestPsdSqrt:
    def test_identity(self):
        assert np.allclose(linalg.psd_sqrt(np.eye(4)), np.eye(4), atol=1e-13)

    def test_diagonal(self):
        b = linalg.psd_sqrt(np.diag([4.0, 1.0, 0.0, 0.0]))
        assert np.allclose(b, np.diag([2.0, 1.0, 0.0, 0.0]), atol=1e-12)

    def test_round_trip(self):
        rng = np.random.default_rng(17)
        m = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        a = m @ np.conj(m.T)
        b = linalg.psd_sqrt(a)
        assert np.max(np.abs(b @ b - a)) < 1e-9
        assert linalg.hermiticity_defect(b) < 1e-12

    def test_marginal_round_trip(self):
        from qsep import states

        rho23, _ = states.marginals(states.SimplexPoint(0.0, 1.0))
        b = linalg.psd_sqrt(rho23)
        assert np.max(np.abs(b @ b - rho23)) < 1e-9

    def test_rejects_negative(self):
        with pytest.raises(ValueError, match="not PSD"):
            linalg.psd_sqrt(np.diag([1.0, -1e-6]))

    def test_qsep_tol_env_override(self, monkeypatch):
        slightly_negative = np.diag([1.0, -5e-7])
        with pytest.raises(ValueError):
            linalg.psd_sqrt(slightly_negative)
        monkeypatch.setenv("QSEP_TOL", "1e-6")
        root = linalg.psd_sqrt(slightly_negative)
        assert np.allclose(root, np.diag([1.0, 0.0]), atol=1e-12)


class TestRank:
    def test_full_rank_interior(self):
        from qsep import states

        rho = states.build_rho(states.SimplexPoint(0.3, 0.4))
        assert linalg.rank_with_tolerance(rho) == 8

    def test_pure_ghz(self):
        from qsep import states

        rho = states.build_rho(states.SimplexPoint(1.0, 0.0))
        assert linalg.rank_with_tolerance(rho) == 1

    def test_ghz_w_mixture(self):
        from qsep import states

        rho = states.build_rho(states.SimplexPoint(0.5, 0.5))
        assert linalg.rank_with_tolerance(rho) == 2


class TestPermuteIndices:
    def test_identity(self):
        from qsep import states

        rho = states.build_rho(states.SimplexPoint(0.2, 0.2))
        assert np.array_equal(linalg.permute_indices(rho, linalg.IDENTITY_PERM), rho)

    def test_transpose_first_matches_pattern(self):
        from qsep import states

        p = states.SimplexPoint(0.25, 0.35)
        rho = states.build_rho(p)
        pt = linalg.permute_indices(rho, linalg.TRANSPOSE_1_PERM)
        template = states.partial_transpose_1_grid(np.array([p.g]), np.array([p.w]))[0]
        assert np.max(np.abs(pt - template)) < 1e-14

    def test_reshuffle_23_matches_pattern(self):
        from qsep import states

        p = states.SimplexPoint(0.15, 0.45)
        rho = states.build_rho(p)
        rp = linalg.permute_indices(rho, linalg.RESHUFFLE_23_PERM)
        template = states.reshuffle_222_grid(np.array([p.g]), np.array([p.w]))[0]
        assert np.max(np.abs(rp - template)) < 1e-14

    def test_composition(self):
        rng = np.random.default_rng(23)
        a = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
        for _ in range(10):
            pi = tuple(rng.permutation(6))
            sigma = tuple(rng.permutation(6))
            left = linalg.permute_indices(linalg.permute_indices(a, sigma), pi)
            right = linalg.permute_indices(a, linalg.compose_perms(pi, sigma))
            assert np.array_equal(left, right)

    def test_rejects_malformed(self):
        with pytest.raises(ValueError, match="permutation"):
            linalg.permute_indices(np.eye(8), (0, 0, 1, 2, 3, 4))
