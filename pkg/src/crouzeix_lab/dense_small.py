"""Self-contained dense linear algebra for very small complex matrices.

Everything here is hand-rolled so that the 3x3 results used by the
certification pipeline do not depend on an external eigensolver: closed-form
(trigonometric) eigenvalues for Hermitian 3x3 matrices, Cardano's formula for
general 3x3 spectra, Gauss-Jordan inverses, power iteration for operator
norms above 3x3, batched cyclic Jacobi sweeps for Hermitian eigensystems up
to the 8x8 cap, a small Schur decomposition, and a polynomial/holomorphic
functional calculus.

Matrices are numpy arrays used as containers; the 3x3 kernels extract plain
Python scalars so the certification sweep stays cheap on a single core.
"""

from __future__ import annotations

import cmath
import itertools
import math
from typing import Callable, Sequence

import numpy as np

from .errors import ClusteredSpectrumError, SingularMatrixError

__all__ = [
    "MAX_N",
    "condition_number",
    "eigen_decomposition_3x3",
    "eigvals_3x3",
    "eigvalsh_3x3",
    "eigh_batched",
    "eval_poly",
    "holomorphic_calc",
    "inverse",
    "operator_norm",
    "schur_3x3",
    "solve",
    "support_function",
    "support_function_grid",
]

MAX_N = 8

_TWO_PI_3 = 2.0 * math.pi / 3.0
_RESTART_SEED = 0x5EED


def _as_square(M: np.ndarray) -> np.ndarray:
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if A.shape[0] > MAX_N:
        raise ValueError(f"matrices above {MAX_N}x{MAX_N} are out of scope here")
    return A


# ---------------------------------------------------------------------------
# closed-form 3x3 spectra


def _eigvalsh3_scalars(
    h00: float,
    h11: float,
    h22: float,
    h01: complex,
    h02: complex,
    h12: complex,
) -> tuple[float, float, float]:
    """Ascending eigenvalues of a Hermitian 3x3 from its six defining entries.

    Trigonometric solution of the characteristic cubic (the Hermitian case
    guarantees three real roots), followed by a guarded Newton polish.
    """
    p1 = abs(h01) ** 2 + abs(h02) ** 2 + abs(h12) ** 2
    if p1 == 0.0:
        a, b, c = sorted((h00, h11, h22))
        return a, b, c
    q = (h00 + h11 + h22) / 3.0
    p2 = (h00 - q) ** 2 + (h11 - q) ** 2 + (h22 - q) ** 2 + 2.0 * p1
    p = math.sqrt(p2 / 6.0)
    b00, b11, b22 = (h00 - q) / p, (h11 - q) / p, (h22 - q) / p
    b01, b02, b12 = h01 / p, h02 / p, h12 / p
    # det(B) is real for Hermitian B; assemble it from scalars
    det_b = (
        b00 * (b11 * b22 - abs(b12) ** 2)
        - b11 * abs(b02) ** 2
        - b22 * abs(b01) ** 2
        + 2.0 * (b01 * b12 * b02.conjugate()).real
    )
    r = det_b / 2.0
    r = min(1.0, max(-1.0, r))
    phi = math.acos(r) / 3.0
    w2 = q + 2.0 * p * math.cos(phi)
    w0 = q + 2.0 * p * math.cos(phi + _TWO_PI_3)
    w1 = 3.0 * q - w0 - w2

    # characteristic coefficients for the polish: l^3 - tr l^2 + s2 l - det
    tr = h00 + h11 + h22
    s2 = (
        h00 * h11
        - abs(h01) ** 2
        + h00 * h22
        - abs(h02) ** 2
        + h11 * h22
        - abs(h12) ** 2
    )
    det = (
        h00 * (h11 * h22 - abs(h12) ** 2)
        - h11 * abs(h02) ** 2
        - h22 * abs(h01) ** 2
        + 2.0 * (h01 * h12 * h02.conjugate()).real
    )
    scale = 1.0 + max(abs(w0), abs(w2))
    out = []
    for w in (w0, w1, w2):
        for _ in range(2):
            pw = ((w - tr) * w + s2) * w - det
            dpw = (3.0 * w - 2.0 * tr) * w + s2
            if abs(dpw) < 1e-8 * scale * scale:
                break
            step = pw / dpw
            if abs(step) > 0.1 * scale:
                break
            w -= step
        out.append(w)
    out.sort()
    return out[0], out[1], out[2]


def eigvalsh_3x3(H: np.ndarray) -> tuple[float, float, float]:
    """Ascending eigenvalues of a Hermitian 3x3 matrix (closed form)."""
    A = _as_square(H)
    if A.shape[0] != 3:
        raise ValueError("eigvalsh_3x3 needs a 3x3 matrix")
    return _eigvalsh3_scalars(
        A[0, 0].real,
        A[1, 1].real,
        A[2, 2].real,
        complex(A[0, 1]),
        complex(A[0, 2]),
        complex(A[1, 2]),
    )


def _cubic_roots(c2: complex, c1: complex, c0: complex) -> tuple[complex, complex, complex]:
    """Roots of l^3 + c2 l^2 + c1 l + c0 by Cardano with a Newton polish."""
    p = c1 - c2 * c2 / 3.0
    q = c0 - c1 * c2 / 3.0 + 2.0 * c2**3 / 27.0
    shift = -c2 / 3.0
    if p == 0 and q == 0:
        return shift, shift, shift
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    sq = cmath.sqrt(disc)
    u3a = -q / 2.0 + sq
    u3b = -q / 2.0 - sq
    u3 = u3a if abs(u3a) >= abs(u3b) else u3b
    u = u3 ** (1.0 / 3.0)
    v = -p / (3.0 * u) if u != 0 else 0.0 + 0.0j
    w = complex(-0.5, math.sqrt(3.0) / 2.0)
    roots = [u + v + shift, w * u + w.conjugate() * v + shift, w.conjugate() * u + w * v + shift]
    scale = 1.0 + max(abs(r) for r in roots)
    polished = []
    for r in roots:
        for _ in range(2):
            pr = ((r + c2) * r + c1) * r + c0
            dpr = (3.0 * r + 2.0 * c2) * r + c1
            if abs(dpr) < 1e-8 * scale * scale:
                break
            step = pr / dpr
            if abs(step) > 0.1 * scale:
                break
            r -= step
        polished.append(r)
    return polished[0], polished[1], polished[2]


def eigvals_3x3(M: np.ndarray) -> tuple[complex, complex, complex]:
    """Eigenvalues of a general complex 3x3 matrix via the characteristic cubic."""
    A = _as_square(M)
    if A.shape[0] != 3:
        raise ValueError("eigvals_3x3 needs a 3x3 matrix")
    m = [[complex(A[i, j]) for j in range(3)] for i in range(3)]
    tr = m[0][0] + m[1][1] + m[2][2]
    s2 = (
        m[0][0] * m[1][1]
        - m[0][1] * m[1][0]
        + m[0][0] * m[2][2]
        - m[0][2] * m[2][0]
        + m[1][1] * m[2][2]
        - m[1][2] * m[2][1]
    )
    det = (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )
    return _cubic_roots(-tr, s2, -det)


# ---------------------------------------------------------------------------
# solves and inverses


def solve(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Solve A X = B by Gauss-Jordan elimination with partial pivoting."""
    M = _as_square(A).copy()
    n = M.shape[0]
    rhs = np.asarray(B, dtype=complex)
    vec = rhs.ndim == 1
    R = rhs.reshape(n, -1).copy()
    if R.shape[0] != n:
        raise ValueError("right-hand side has incompatible shape")
    for k in range(n):
        piv = k + int(np.argmax(np.abs(M[k:, k])))
        if abs(M[piv, k]) < 1e-300:
            raise SingularMatrixError("pivot vanished during elimination")
        if piv != k:
            M[[k, piv]] = M[[piv, k]]
            R[[k, piv]] = R[[piv, k]]
        inv_p = 1.0 / M[k, k]
        M[k] *= inv_p
        R[k] *= inv_p
        for i in range(n):
            if i != k and M[i, k] != 0:
                f = M[i, k]
                M[i] -= f * M[k]
                R[i] -= f * R[k]
    return R[:, 0] if vec else R


def inverse(M: np.ndarray) -> np.ndarray:
    """Matrix inverse through the Gauss-Jordan solver."""
    A = _as_square(M)
    return solve(A, np.eye(A.shape[0], dtype=complex))


# ---------------------------------------------------------------------------
# operator norm and condition number


def _sigma_sq_max_power(M: np.ndarray) -> float:
    """Largest eigenvalue of M*M by power iteration.

    Deterministic all-ones start, then one seeded random restart; the max of
    the two Rayleigh limits is returned.  Relative stopping tolerance 1e-12.
    """
    n = M.shape[0]
    H = M.conj().T @ M
    best = 0.0
    starts = [np.ones(n, dtype=complex) / math.sqrt(n)]
    rng = np.random.default_rng(_RESTART_SEED)
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    starts.append(z / math.sqrt(float(np.vdot(z, z).real)))
    for v in starts:
        lam_prev = -1.0
        hits = 0
        lam = 0.0
        for _ in range(10000):
            w = H @ v
            lam = float(np.vdot(v, w).real)
            nw = math.sqrt(float(np.vdot(w, w).real))
            if nw == 0.0:
                lam = 0.0
                break
            v = w / nw
            if lam_prev >= 0.0 and abs(lam - lam_prev) <= 1e-12 * max(lam, 1e-300):
                hits += 1
                if hits >= 2:
                    break
            else:
                hits = 0
            lam_prev = lam
        best = max(best, lam)
    return best


def _sigma_bounds_closed(M: np.ndarray) -> tuple[float, float]:
    """(sigma_max, sigma_min) of an n<=3 matrix from closed-form Gram spectra."""
    n = M.shape[0]
    if n == 1:
        s = abs(complex(M[0, 0]))
        return s, s
    if n == 2:
        a, b = complex(M[0, 0]), complex(M[0, 1])
        c, d = complex(M[1, 0]), complex(M[1, 1])
        h00 = abs(a) ** 2 + abs(c) ** 2
        h11 = abs(b) ** 2 + abs(d) ** 2
        h01 = a.conjugate() * b + c.conjugate() * d
        mean = (h00 + h11) / 2.0
        rad = math.sqrt(((h00 - h11) / 2.0) ** 2 + abs(h01) ** 2)
        return math.sqrt(max(mean + rad, 0.0)), math.sqrt(max(mean - rad, 0.0))
    m = [[complex(M[i, j]) for j in range(3)] for i in range(3)]
    h = [[sum(m[k][i].conjugate() * m[k][j] for k in range(3)) for j in range(3)] for i in range(3)]
    w0, _, w2 = _eigvalsh3_scalars(h[0][0].real, h[1][1].real, h[2][2].real, h[0][1], h[0][2], h[1][2])
    return math.sqrt(max(w2, 0.0)), math.sqrt(max(w0, 0.0))


def operator_norm(M: np.ndarray, method: str = "auto") -> float:
    """Spectral norm ||M||_2.

    Closed-form singular values for n <= 3 (characteristic cubic of M*M);
    power iteration on M*M for 4 <= n <= 8.  ``method`` forces a path:
    "closed" (n <= 3 only), "power", or "auto".
    """
    A = _as_square(M)
    n = A.shape[0]
    if method not in ("auto", "closed", "power"):
        raise ValueError(f"unknown method {method!r}")
    if method == "closed" and n > 3:
        raise ValueError("closed-form norm is only available for n <= 3")
    if method == "power" or (method == "auto" and n > 3):
        return math.sqrt(max(_sigma_sq_max_power(A), 0.0))
    return _sigma_bounds_closed(A)[0]


def condition_number(M: np.ndarray) -> float:
    """2-norm condition number sigma_max / sigma_min.

    Raises SingularMatrixError when sigma_min <= 1e-14 sigma_max.
    """
    A = _as_square(M)
    n = A.shape[0]
    if n <= 3:
        smax, smin = _sigma_bounds_closed(A)
    else:
        smax = operator_norm(A, method="power")
        try:
            smin_inv = operator_norm(inverse(A), method="power")
        except SingularMatrixError:
            raise SingularMatrixError("matrix is singular; condition number undefined")
        smin = 1.0 / smin_inv if smin_inv > 0 else 0.0
    if smin <= 1e-14 * smax:
        raise SingularMatrixError("matrix is numerically singular; condition number undefined")
    return smax / smin


# ---------------------------------------------------------------------------
# polynomial and holomorphic functional calculus


def eval_poly(M: np.ndarray, coeffs: Sequence[complex]) -> np.ndarray:
    """Evaluate p(M) by Horner's rule; coeffs ascending, p(z) = sum c_k z^k."""
    A = _as_square(M)
    cs = [complex(c) for c in coeffs]
    if not cs:
        raise ValueError("need at least one coefficient")
    n = A.shape[0]
    I = np.eye(n, dtype=complex)
    R = cs[-1] * I
    for c in reversed(cs[:-1]):
        R = R @ A + c * I
    return R


def _eigvec_3x3(A: np.ndarray, lam: complex) -> np.ndarray:
    """Unit eigenvector for eigenvalue lam of a 3x3 matrix.

    Cross products of rows of (A - lam I) span the null direction for a
    rank-2 shifted matrix; one inverse-iteration step cleans up rounding.
    """
    S = A - lam * np.eye(3, dtype=complex)
    rows = [S[0], S[1], S[2]]
    best = None
    best_norm = -1.0
    for i, j in ((0, 1), (0, 2), (1, 2)):
        # bilinear cross product: orthogonal to both rows without conjugation
        r, s = rows[i], rows[j]
        v = np.array(
            [
                r[1] * s[2] - r[2] * s[1],
                r[2] * s[0] - r[0] * s[2],
                r[0] * s[1] - r[1] * s[0],
            ],
            dtype=complex,
        )
        nv = math.sqrt(float(np.vdot(v, v).real))
        if nv > best_norm:
            best, best_norm = v, nv
    scale = float(np.max(np.abs(A))) + abs(lam) + 1.0
    if best_norm <= 1e-14 * scale * scale:
        best = np.array([1.0, 0.0, 0.0], dtype=complex)
        best_norm = 1.0
    v = best / best_norm
    delta = 1e-14 * scale
    for bump in (delta, 1e3 * delta, 1e6 * delta):
        try:
            w = solve(A - (lam + bump) * np.eye(3, dtype=complex), v)
            nw = math.sqrt(float(np.vdot(w, w).real))
            if nw > 0 and np.all(np.isfinite(w)):
                v = w / nw
            break
        except SingularMatrixError:
            continue
    return v


def eigen_decomposition_3x3(M: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(values, vectors) with unit eigenvector columns, Rayleigh-refined values."""
    A = _as_square(M)
    if A.shape[0] != 3:
        raise ValueError("eigen_decomposition_3x3 needs a 3x3 matrix")
    vals = list(eigvals_3x3(A))
    vecs = []
    out_vals = []
    for lam in vals:
        v = _eigvec_3x3(A, lam)
        lam_r = complex(np.vdot(v, A @ v))
        out_vals.append(lam_r)
        vecs.append(v)
    return np.array(out_vals), np.column_stack(vecs)


def holomorphic_calc(M: np.ndarray, fn: Callable[[complex], complex]) -> np.ndarray:
    """f(M) = Z f(L) Z^-1 through the 3x3 eigendecomposition.

    Requires a simple, well-separated spectrum: raises ClusteredSpectrumError
    when two eigenvalues are closer than 1e-8 (relative to the spectral scale).
    """
    A = _as_square(M)
    if A.shape[0] != 3:
        raise ValueError("holomorphic_calc needs a 3x3 matrix")
    vals, Z = eigen_decomposition_3x3(A)
    scale = 1.0 + max(abs(v) for v in vals)
    for i in range(3):
        for j in range(i + 1, 3):
            if abs(vals[i] - vals[j]) < 1e-8 * scale:
                raise ClusteredSpectrumError(
                    f"eigenvalues {vals[i]:.3g} and {vals[j]:.3g} are too close for the eigenvector calculus"
                )
    F = np.diag([complex(fn(complex(v))) for v in vals])
    return Z @ F @ inverse(Z)


# ---------------------------------------------------------------------------
# Schur form for 3x3


def _householder_from_e0(v: np.ndarray) -> np.ndarray:
    """Unitary Q with Q e_0 = v for a unit vector v."""
    n = v.shape[0]
    sigma = v[0] / abs(v[0]) if v[0] != 0 else 1.0 + 0.0j
    w = v.copy()
    w[0] += sigma
    ww = float(np.vdot(w, w).real)
    P = np.eye(n, dtype=complex) - (2.0 / ww) * np.outer(w, w.conj())
    Q = P.copy()
    Q[:, 0] *= -sigma
    return Q


def schur_3x3(M: np.ndarray, eig_order: Sequence[complex] | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Unitary Q and upper-triangular U with M = Q U Q*.

    ``eig_order`` prescribes the diagonal of U: computed eigenvalues are
    matched to the given targets by the assignment of least total distance.
    """
    A = _as_square(M)
    if A.shape[0] != 3:
        raise ValueError("schur_3x3 needs a 3x3 matrix")
    vals = list(eigvals_3x3(A))
    if eig_order is not None:
        targets = [complex(t) for t in eig_order]
        if len(targets) != 3:
            raise ValueError("eig_order must list three targets")
        best_perm = None
        best_cost = math.inf
        for perm in itertools.permutations(range(3)):
            cost = sum(abs(vals[perm[k]] - targets[k]) for k in range(3))
            if cost < best_cost:
                best_cost = cost
                best_perm = perm
        vals = [vals[best_perm[k]] for k in range(3)]

    lam0 = vals[0]
    v0 = _eigvec_3x3(A, lam0)
    Q1 = _householder_from_e0(v0)
    B = Q1.conj().T @ A @ Q1
    lam0 = complex(B[0, 0])
    B[1:, 0] = 0.0

    # 2x2 tail: pick the eigenvalue matching the requested order
    a, b = complex(B[1, 1]), complex(B[1, 2])
    c, d = complex(B[2, 1]), complex(B[2, 2])
    tr = a + d
    disc = cmath.sqrt((a - d) ** 2 + 4.0 * b * c)
    mu1 = (tr + disc) / 2.0
    mu2 = (tr - disc) / 2.0
    if abs(mu1 - vals[1]) + abs(mu2 - vals[2]) <= abs(mu2 - vals[1]) + abs(mu1 - vals[2]):
        lam1 = mu1
    else:
        lam1 = mu2
    w1 = np.array([b, lam1 - a], dtype=complex)
    w2 = np.array([lam1 - d, c], dtype=complex)
    w = w1 if float(np.vdot(w1, w1).real) >= float(np.vdot(w2, w2).real) else w2
    nw = math.sqrt(float(np.vdot(w, w).real))
    if nw < 1e-150:
        w = np.array([1.0, 0.0], dtype=complex)
        nw = 1.0
    Q2 = np.eye(3, dtype=complex)
    Q2[1:, 1:] = _householder_from_e0(w / nw)
    Q = Q1 @ Q2
    U = Q.conj().T @ A @ Q
    U[1, 0] = U[2, 0] = U[2, 1] = 0.0
    return Q, U


# ---------------------------------------------------------------------------
# Hermitian eigensystems up to 8x8 (batched cyclic Jacobi)


def eigh_batched(H: np.ndarray, with_vectors: bool = True, sweeps: int = 30) -> tuple[np.ndarray, np.ndarray | None]:
    """Eigen-decomposition of a batch of Hermitian matrices by cyclic Jacobi.

    H has shape (..., n, n) with n <= 8.  Returns (w, V) with eigenvalues
    ascending along the last axis and V[..., :, k] the matching eigenvectors
    (V is None when with_vectors is False).  Sweeps stop once the off-diagonal
    mass is at rounding level, which Jacobi reaches quadratically.
    """
    A = np.array(H, dtype=complex)
    if A.ndim < 2 or A.shape[-1] != A.shape[-2]:
        raise ValueError(f"expected (..., n, n), got {A.shape}")
    n = A.shape[-1]
    if n > MAX_N:
        raise ValueError(f"matrices above {MAX_N}x{MAX_N} are out of scope here")
    batch_shape = A.shape[:-2]
    A = A.reshape(-1, n, n)
    B = A.shape[0]
    V = np.tile(np.eye(n, dtype=complex), (B, 1, 1)) if with_vectors else None
    if n == 1:
        w = A[:, 0, 0].real.reshape(*batch_shape, 1)
        return w, (V.reshape(*batch_shape, 1, 1) if with_vectors else None)

    fro2 = np.sum(np.abs(A) ** 2, axis=(1, 2))
    stop = 1e-30 * np.maximum(fro2, 1e-300)
    diag_idx = np.arange(n)
    for _ in range(sweeps):
        # off-diagonal mass summed directly (a total-minus-diagonal difference
        # would cancel catastrophically near convergence)
        sq = np.abs(A) ** 2
        sq[:, diag_idx, diag_idx] = 0.0
        off2 = np.sum(sq, axis=(1, 2))
        if np.all(off2 <= stop):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[:, p, q]
                mod = np.abs(apq)
                active = mod > 1e-300
                if not np.any(active):
                    continue
                app = A[:, p, p].real
                aqq = A[:, q, q].real
                phase = np.where(active, apq / np.where(active, mod, 1.0), 1.0 + 0.0j)
                tau = np.where(active, (aqq - app) / np.where(active, 2.0 * mod, 1.0), 0.0)
                t = np.where(
                    active,
                    np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau)),
                    0.0,
                )
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # rotation J = [[c, s], [-s pc, c pc]] on coordinates (p, q),
                # pc = conj(phase); A <- J* A J diagonalizes the (p, q) block
                s_pc = s * np.conj(phase)
                s_ph = s * phase
                colp = A[:, :, p].copy()
                colq = A[:, :, q].copy()
                A[:, :, p] = c[:, None] * colp - s_pc[:, None] * colq
                A[:, :, q] = s[:, None] * colp + c[:, None] * np.conj(phase)[:, None] * colq
                rowp = A[:, p, :].copy()
                rowq = A[:, q, :].copy()
                A[:, p, :] = c[:, None] * rowp - s_ph[:, None] * rowq
                A[:, q, :] = s[:, None] * rowp + c[:, None] * phase[:, None] * rowq
                if with_vectors:
                    vp = V[:, :, p].copy()
                    vq = V[:, :, q].copy()
                    V[:, :, p] = c[:, None] * vp - s_pc[:, None] * vq
                    V[:, :, q] = s[:, None] * vp + c[:, None] * np.conj(phase)[:, None] * vq
    w = np.diagonal(A, axis1=1, axis2=2).real.copy()
    order = np.argsort(w, axis=1)
    w = np.take_along_axis(w, order, axis=1)
    if with_vectors:
        V = np.take_along_axis(V, order[:, None, :], axis=2)
        V = V.reshape(*batch_shape, n, n)
    return w.reshape(*batch_shape, n), V


# ---------------------------------------------------------------------------
# numerical-range support function


def _hermitian_parts(M: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    Hr = (M + M.conj().T) / 2.0
    Hi = 1j * (M.conj().T - M) / 2.0
    return Hr, Hi


def support_function(M: np.ndarray, theta: float) -> float:
    """h(theta) = max eigenvalue of the Hermitian part of e^{-i theta} M.

    This is the support function of the numerical range W(M) in direction
    e^{i theta}; W(M) = intersection of the half-planes it defines.
    """
    A = _as_square(M)
    n = A.shape[0]
    Hr, Hi = _hermitian_parts(A)
    K = math.cos(theta) * Hr + math.sin(theta) * Hi
    if n <= 3:
        if n == 1:
            return K[0, 0].real
        if n == 2:
            h00, h11 = K[0, 0].real, K[1, 1].real
            mean = (h00 + h11) / 2.0
            rad = math.sqrt(((h00 - h11) / 2.0) ** 2 + abs(complex(K[0, 1])) ** 2)
            return mean + rad
        return _eigvalsh3_scalars(
            K[0, 0].real, K[1, 1].real, K[2, 2].real, complex(K[0, 1]), complex(K[0, 2]), complex(K[1, 2])
        )[2]
    w, _ = eigh_batched(K[None, :, :], with_vectors=False)
    return float(w[0, -1])


def support_function_grid(M: np.ndarray, thetas: np.ndarray, with_vectors: bool = False):
    """Support function on a grid of directions in one batched eigen-solve.

    Returns h (len(thetas),) or, with vectors, (h, V_top) where V_top[k] is a
    unit top eigenvector of the Hermitian part in direction thetas[k].
    """
    A = _as_square(M)
    th = np.asarray(thetas, dtype=float)
    Hr, Hi = _hermitian_parts(A)
    K = np.cos(th)[:, None, None] * Hr[None, :, :] + np.sin(th)[:, None, None] * Hi[None, :, :]
    w, V = eigh_batched(K, with_vectors=with_vectors)
    h = w[:, -1]
    if not with_vectors:
        return h
    return h, V[:, :, -1]
