"""Tests for the small dense kernels against numpy.linalg oracles."""
import math

import numpy as np
import pytest

from crouzeix_lab import dense_small as ds
from crouzeix_lab.core_matrix import build_A, build_A_rho
from crouzeix_lab.errors import DomainError, SingularMatrixError


def rand_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


class TestHermitianEigenvalues:
    def test_random_hermitian_vs_numpy(self):
        rng = np.random.default_rng(42)
        for _ in range(500):
            X = rand_complex(rng, 3, 3)
            H = (X + X.conj().T) / 2
            w_np = np.linalg.eigvalsh(H)
            w_me = ds.eigvalsh_3x3(H)
            scale = 1 + np.abs(w_np).max()
            for a, b in zip(w_np, w_me):
                assert abs(a - b) < 1e-12 * scale

    def test_near_degenerate_pairs(self):
        # the trig closed form loses half the digits when a pair coalesces
        # (error ~ sqrt(eps) * scale), so the clustered bound is 5e-8
        rng = np.random.default_rng(43)
        for _ in range(500):
            U, _ = np.linalg.qr(rand_complex(rng, 3, 3))
            lam = np.array([1.0, 1.0 + 10.0 ** rng.uniform(-15, -3), rng.uniform(-2, 2)])
            H = (U * lam) @ U.conj().T
            H = (H + H.conj().T) / 2
            w_np = np.linalg.eigvalsh(H)
            w_me = ds.eigvalsh_3x3(H)
            scale = 1 + np.abs(w_np).max()
            for a, b in zip(w_np, w_me):
                assert abs(a - b) < 5e-8 * scale

    def test_ascending_order(self):
        rng = np.random.default_rng(44)
        X = rand_complex(rng, 3, 3)
        w = ds.eigvalsh_3x3((X + X.conj().T) / 2)
        assert w[0] <= w[1] <= w[2]


class TestGeneralEigenvalues:
    def test_random_complex_vs_numpy(self):
        rng = np.random.default_rng(45)
        key = lambda z: (z.real, z.imag)
        for _ in range(500):
            M = rand_complex(rng, 3, 3)
            w_np = sorted(np.linalg.eigvals(M), key=key)
            w_me = sorted(ds.eigvals_3x3(M), key=key)
            scale = 1 + max(abs(z) for z in w_np)
            for a, b in zip(w_np, w_me):
                assert abs(a - b) < 1e-10 * scale

    def test_family_spectrum(self):
        # the family matrix has spectrum {1, 0, -1} by construction
        w = sorted(ds.eigvals_3x3(build_A(0.8, 0.6)), key=lambda z: z.real)
        assert abs(w[0] + 1) < 1e-14
        assert abs(w[1]) < 1e-14
        assert abs(w[2] - 1) < 1e-14


class TestSolveInverse:
    def test_inverse_residual(self):
        rng = np.random.default_rng(46)
        for _ in range(200):
            n = int(rng.integers(2, 9))
            M = rand_complex(rng, n, n)
            E = ds.inverse(M) @ M - np.eye(n)
            assert np.abs(E).max() < 1e-11

    def test_solve_matches_inverse(self):
        rng = np.random.default_rng(47)
        for _ in range(100):
            n = int(rng.integers(2, 9))
            M = rand_complex(rng, n, n)
            B = rand_complex(rng, n, 2)
            X = ds.solve(M, B)
            assert np.abs(M @ X - B).max() < 1e-10

    def test_singular_raises(self):
        M = np.array([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [0.0, 0.0, 1.0]])
        with pytest.raises(SingularMatrixError):
            ds.inverse(M)


class TestOperatorNorm:
    def test_closed_form_vs_numpy_3x3(self):
        rng = np.random.default_rng(48)
        for _ in range(300):
            M = rand_complex(rng, 3, 3)
            n_np = np.linalg.norm(M, 2)
            assert abs(ds.operator_norm(M) - n_np) < 1e-11 * n_np

    def test_power_agrees_with_closed(self):
        rng = np.random.default_rng(49)
        for _ in range(100):
            M = rand_complex(rng, 3, 3)
            n_cl = ds.operator_norm(M, method="closed")
            n_pw = ds.operator_norm(M, method="power")
            assert abs(n_cl - n_pw) < 1e-9 * n_cl

    def test_larger_sizes_vs_numpy(self):
        rng = np.random.default_rng(50)
        for _ in range(150):
            n = int(rng.integers(4, 9))
            M = rand_complex(rng, n, n)
            n_np = np.linalg.norm(M, 2)
            assert abs(ds.operator_norm(M) - n_np) < 1e-9 * n_np

    def test_size_cap(self):
        with pytest.raises(ValueError):
            ds.operator_norm(np.eye(9))


class TestConditionNumber:
    def test_vs_numpy(self):
        rng = np.random.default_rng(51)
        for _ in range(200):
            n = int(rng.integers(2, 9))
            M = rand_complex(rng, n, n)
            c_np = np.linalg.cond(M, 2)
            assert abs(ds.condition_number(M) - c_np) < 1e-7 * c_np

    def test_unitary_is_one(self):
        rng = np.random.default_rng(52)
        U, _ = np.linalg.qr(rand_complex(rng, 3, 3))
        assert abs(ds.condition_number(U) - 1.0) < 1e-12

    def test_singular_raises(self):
        M = np.array([[1.0, 1.0], [1.0, 1.0]])
        with pytest.raises(SingularMatrixError):
            ds.condition_number(M)


class TestSchur:
    def test_unitary_triangular_reconstruction(self):
        rng = np.random.default_rng(53)
        for _ in range(300):
            M = rand_complex(rng, 3, 3)
            Q, U = ds.schur_3x3(M)
            assert np.abs(Q @ Q.conj().T - np.eye(3)).max() < 1e-13
            assert np.abs(Q @ U @ Q.conj().T - M).max() < 1e-11
            assert max(abs(U[1, 0]), abs(U[2, 0]), abs(U[2, 1])) < 1e-13

    def test_eig_order_on_family(self):
        # conjugated family members come back with diagonal (1, 0, -1)
        rng = np.random.default_rng(54)
        for _ in range(300):
            q = 10 ** rng.uniform(-2, 1)
            r = rng.uniform(0.05, 1.0)
            A = build_A(q, r)
            Uu, _ = np.linalg.qr(rand_complex(rng, 3, 3))
            M = Uu @ A @ Uu.conj().T
            Q, U = ds.schur_3x3(M, eig_order=(1.0, 0.0, -1.0))
            d = np.diagonal(U)
            assert abs(d[0] - 1) < 1e-10
            assert abs(d[1]) < 1e-10
            assert abs(d[2] + 1) < 1e-10
            assert np.abs(Q @ U @ Q.conj().T - M).max() < 1e-11


class TestBatchedJacobi:
    def test_vs_numpy_eigvalsh(self):
        rng = np.random.default_rng(55)
        for _ in range(50):
            n = int(rng.integers(2, 9))
            batch = int(rng.integers(1, 30))
            X = rand_complex(rng, batch, n, n)
            H = (X + np.conj(np.transpose(X, (0, 2, 1)))) / 2
            w_np = np.linalg.eigvalsh(H)
            w_me, V = ds.eigh_batched(H)
            scale = 1 + np.abs(w_np).max()
            assert np.abs(w_np - w_me).max() < 1e-11 * scale
            # eigenvector residual H v = w v
            res = H @ V - V * w_me[:, None, :]
            assert np.abs(res).max() < 1e-11 * scale

    def test_values_only(self):
        rng = np.random.default_rng(56)
        X = rand_complex(rng, 4, 5, 5)
        H = (X + np.conj(np.transpose(X, (0, 2, 1)))) / 2
        w, V = ds.eigh_batched(H, with_vectors=False)
        assert V is None
        assert np.abs(w - np.linalg.eigvalsh(H)).max() < 1e-11


class TestSupportFunction:
    def test_vs_numpy_hermitian_part(self):
        rng = np.random.default_rng(57)
        for _ in range(100):
            n = int(rng.integers(2, 9))
            M = rand_complex(rng, n, n)
            th = rng.uniform(0, 2 * np.pi)
            K = (np.exp(-1j * th) * M + np.exp(1j * th) * M.conj().T) / 2
            h_np = np.linalg.eigvalsh(K)[-1]
            assert abs(ds.support_function(M, th) - h_np) < 1e-11 * (1 + abs(h_np))

    def test_family_support_is_ellipse(self):
        # h(theta) = sqrt(a^2 cos^2 + b^2 sin^2) with a, b the semi-axes
        rng = np.random.default_rng(58)
        for _ in range(100):
            rho = 10 ** rng.uniform(0.02, 1.2)
            r = rng.uniform(1 / math.sqrt(rho) + 1e-6, 1.0)
            A = build_A_rho(rho, r)
            aa = (rho + 1 / rho) / 2
            bb = (rho - 1 / rho) / 2
            th = rng.uniform(0, 2 * np.pi)
            h_exact = math.sqrt(aa**2 * math.cos(th) ** 2 + bb**2 * math.sin(th) ** 2)
            assert abs(ds.support_function(A, th) - h_exact) < 1e-9 * max(1, h_exact)

    def test_grid_matches_scalar(self):
        rng = np.random.default_rng(59)
        M = rand_complex(rng, 4, 4)
        thetas = np.linspace(0, 2 * np.pi, 37)
        h = ds.support_function_grid(M, thetas)
        for k, th in enumerate(thetas):
            assert abs(h[k] - ds.support_function(M, th)) < 1e-11


class TestPolynomialsAndCalculus:
    def test_eval_poly_vs_powers(self):
        rng = np.random.default_rng(60)
        for _ in range(100):
            n = int(rng.integers(2, 9))
            M = rand_complex(rng, n, n) * 0.5
            cs = rand_complex(rng, 7)
            direct = sum(c * np.linalg.matrix_power(M, k) for k, c in enumerate(cs))
            assert np.abs(ds.eval_poly(M, cs) - direct).max() < 1e-10 * (1 + np.abs(direct).max())

    def test_holomorphic_exp_vs_diagonalization(self):
        rng = np.random.default_rng(61)
        done = 0
        while done < 100:
            M = rand_complex(rng, 3, 3)
            w = np.linalg.eigvals(M)
            gaps = [abs(w[i] - w[j]) for i in range(3) for j in range(i + 1, 3)]
            if min(gaps) < 1e-2:
                continue
            done += 1
            F_me = ds.holomorphic_calc(M, np.exp)
            wv, Z = np.linalg.eig(M)
            F_np = Z @ np.diag(np.exp(wv)) @ np.linalg.inv(Z)
            assert np.abs(F_me - F_np).max() < 1e-9 * np.abs(F_np).max()

    def test_identity_polynomial(self):
        M = build_A(1.0, 0.9)
        assert np.abs(ds.eval_poly(M, [0.0, 1.0]) - M).max() == 0.0
