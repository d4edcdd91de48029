"""Dense complex-matrix numerics: Hermitian eigensolver, operator norm, rank.

Everything here is deterministic by construction: the eigensolver is a cyclic
Jacobi sweep in a fixed pivot order, and the operator norm runs power iteration
from a fixed seeded start vector with a Jacobi fallback when convergence
stalls.  No BLAS-level reductions whose order depends on thread count are used
in a way that affects the returned digits.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, NotFinite, NotHermitian

HERMITIAN_TOL = 1e-10
JACOBI_OFF_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100

_POWER_SEED = 0x7515
_POWER_MAXIT = 5000
_POWER_STALL_ITERS = 200
_POWER_REL_TOL = 5e-14


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NotFinite("matrix has non-finite entries")
    return a


def require_hermitian(a: np.ndarray, tol: float = HERMITIAN_TOL) -> None:
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"matrix is {a.shape[0]}x{a.shape[1]}, not square")
    scale = max(np.max(np.abs(a)), 1e-300)
    dev = np.max(np.abs(a - a.conj().T))
    if dev > tol * scale:
        raise NotHermitian(f"asymmetry {dev:.3e} exceeds {tol:.1e} * max|A| = {tol * scale:.3e}")


def _eig2(a: float, b: float, g: complex):
    """Eigenpairs of the Hermitian 2x2 block [[a, g], [conj(g), b]].

    Returns (lo, hi, R) with R unitary, columns = eigenvectors for (lo, hi).
    """
    half = 0.5 * (a - b)
    r = np.hypot(half, abs(g))
    mid = 0.5 * (a + b)
    lo, hi = mid - r, mid + r
    # use the eigenvalue far from a, so the second vector component -half -/+ r
    # never suffers cancellation
    if half >= 0.0:
        vx, vy = g, -half - r  # eigenvector for lo
        far_is_lo = True
    else:
        vx, vy = g, -half + r  # eigenvector for hi
        far_is_lo = False
    nrm = np.hypot(abs(vx), abs(vy))
    if nrm == 0.0:
        return lo, hi, np.eye(2, dtype=np.complex128)
    vx, vy = vx / nrm, vy / nrm
    # orthogonal complement of (vx, vy) is (-conj(vy), conj(vx))
    if far_is_lo:
        R = np.array([[vx, -np.conj(vy)], [vy, np.conj(vx)]], dtype=np.complex128)
    else:
        R = np.array([[-np.conj(vy), vx], [np.conj(vx), vy]], dtype=np.complex128)
    return lo, hi, R


def hermitian_eigen(m, tol: float = HERMITIAN_TOL):
    """Full eigendecomposition of a Hermitian matrix by cyclic Jacobi.

    Returns (w, V) with w real ascending and V unitary, columns matching w.
    Eigenvector phases are fixed (largest-modulus entry real nonnegative) so
    the output is reproducible.
    """
    a = as_matrix(m)
    require_hermitian(a, tol)
    n = a.shape[0]
    A = a.copy()
    V = np.eye(n, dtype=np.complex128)
    if n == 1:
        return np.array([A[0, 0].real]), V

    fro = np.linalg.norm(A)
    stop = JACOBI_OFF_TOL * max(fro, 1e-300)
    for _ in range(JACOBI_MAX_SWEEPS):
        off = np.sqrt((np.abs(A - np.diag(np.diag(A))) ** 2).sum())
        if off <= stop:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                g = A[p, q]
                if abs(g) <= 1e-300:
                    continue
                _, _, R = _eig2(A[p, p].real, A[q, q].real, g)
                cols = A[:, [p, q]] @ R
                A[:, p], A[:, q] = cols[:, 0], cols[:, 1]
                rows = R.conj().T @ A[[p, q], :]
                A[p, :], A[q, :] = rows[0], rows[1]
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                vc = V[:, [p, q]] @ R
                V[:, p], V[:, q] = vc[:, 0], vc[:, 1]

    w = np.diag(A).real.copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    V = V[:, order]
    # deterministic phase: biggest entry of every column made real >= 0
    for j in range(n):
        k = int(np.argmax(np.abs(V[:, j])))
        z = V[k, j]
        if abs(z) > 0:
            V[:, j] *= np.conj(z) / abs(z)
    return w, V


def operator_norm(m) -> float:
    """Largest singular value, via power iteration on m* m with Jacobi fallback."""
    a = as_matrix(m)
    if a.size == 0:
        return 0.0
    scale = np.max(np.abs(a))
    if scale == 0.0:
        return 0.0
    A = a.conj().T @ a
    n = A.shape[0]
    rng = np.random.default_rng(_POWER_SEED)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    lam = 0.0
    good = 0
    for it in range(_POWER_MAXIT):
        w = A @ v
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
        new = float(np.real(np.vdot(v, A @ v)))
        rel = abs(new - lam) / max(abs(new), 1e-300)
        lam = new
        if rel < _POWER_REL_TOL:
            good += 1
            if good >= 3:
                return float(np.sqrt(max(lam, 0.0)))
        else:
            good = 0
        if it == _POWER_STALL_ITERS and rel > 1e-9:
            break
    # stalled: the spectrum of m*m has a tiny top gap, fall back to Jacobi
    w, _ = hermitian_eigen(A, tol=1e-8)
    return float(np.sqrt(max(w[-1], 0.0)))


def singular_values(m) -> np.ndarray:
    """All singular values, descending, via eigenvalues of m* m."""
    a = as_matrix(m)
    if a.size == 0:
        return np.zeros(0)
    A = a.conj().T @ a
    w, _ = hermitian_eigen(A, tol=1e-8)
    return np.sqrt(np.clip(w, 0.0, None))[::-1]


def rank_eps(m, eps: float):
    """Number of singular values strictly above eps."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    return int(np.count_nonzero(singular_values(m) > eps))


def gauss_solve(a, b) -> np.ndarray:
    """Solve a x = b by Gaussian elimination with partial pivoting."""
    A = as_matrix(a).copy()
    n = A.shape[0]
    if A.shape[1] != n:
        raise DimensionMismatch("gauss_solve needs a square system")
    x = np.asarray(b, dtype=np.complex128).copy()
    vec = x.ndim == 1
    if vec:
        x = x[:, None]
    for k in range(n):
        piv = k + int(np.argmax(np.abs(A[k:, k])))
        if abs(A[piv, k]) < 1e-300:
            raise DimensionMismatch("singular system in gauss_solve")
        if piv != k:
            A[[k, piv]] = A[[piv, k]]
            x[[k, piv]] = x[[piv, k]]
        f = A[k + 1:, k] / A[k, k]
        A[k + 1:, k:] -= f[:, None] * A[k, k:]
        x[k + 1:] -= f[:, None] * x[k]
    for k in range(n - 1, -1, -1):
        x[k] = (x[k] - A[k, k + 1:] @ x[k + 1:]) / A[k, k]
    return x[:, 0] if vec else x
