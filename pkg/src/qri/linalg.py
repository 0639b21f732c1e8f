"""Small dense complex linear algebra (d <= 8 or so).

Vectors are 1-D complex ``ndarray``s, matrices are 2-D complex ``ndarray``s.
The eigensolver is a cyclic complex Jacobi iteration; everything else is a
thin layer over numpy array arithmetic.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, ValidationError

JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100
HERMITIAN_TOL = 1e-10
DEPENDENCE_TOL = 1e-10


def as_cvec(v) -> np.ndarray:
    arr = np.asarray(v, dtype=complex)
    if arr.ndim != 1:
        raise ValidationError(f"expected a vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("non-finite entries")
    return arr


def as_cmat(m) -> np.ndarray:
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("non-finite entries")
    return arr


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def inner(u, v) -> complex:
    """<u|v>, conjugate-linear in ``u``."""
    u = as_cvec(u)
    v = as_cvec(v)
    if u.shape != v.shape:
        raise DimensionMismatch(f"inner: dims {u.shape[0]} and {v.shape[0]}")
    return complex(np.vdot(u, v))


def gram_schmidt(vs) -> list[np.ndarray]:
    """Orthonormalize ``vs`` in order (modified Gram-Schmidt, two passes).

    Raises ValidationError when a vector is (numerically) in the span of the
    ones before it.
    """
    vecs = [as_cvec(v) for v in vs]
    if not vecs:
        return []
    d = vecs[0].shape[0]
    if any(v.shape[0] != d for v in vecs):
        raise DimensionMismatch("gram_schmidt: vectors of different dimension")
    out: list[np.ndarray] = []
    for k, v in enumerate(vecs):
        scale = max(np.linalg.norm(v), 1.0)
        w = v.copy()
        # second pass restores orthogonality lost to cancellation
        for _ in range(2):
            for e in out:
                w = w - np.vdot(e, w) * e
        norm = np.linalg.norm(w)
        if norm <= DEPENDENCE_TOL * scale:
            raise ValidationError(f"gram_schmidt: vector {k} is linearly dependent")
        out.append(w / norm)
    return out


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def hermitian_eig(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(w, v)`` with eigenvalues ``w`` in descending order and the
    matching orthonormal eigenvectors as the columns of ``v``.
    """
    a = as_cmat(m).copy()
    if np.max(np.abs(a - dagger(a)), initial=0.0) > HERMITIAN_TOL:
        raise ValidationError("not Hermitian")
    a = 0.5 * (a + dagger(a))
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    tol = JACOBI_TOL * max(1.0, float(np.linalg.norm(a)))

    for _ in range(JACOBI_MAX_SWEEPS):
        if _off_norm(a) < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                phase = apq / mag
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # J acts on the (p, q) plane; it zeroes a[p, q] in J^dag a J
                j = np.array([[c, s * phase], [-s * np.conj(phase), c]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ j
                a[idx, :] = dagger(j) @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ j

    w = np.real(np.diag(a))
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def tensor(a, b) -> np.ndarray:
    """Kronecker product of two vectors or two matrices."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != b.ndim:
        raise DimensionMismatch("tensor: cannot mix a vector and a matrix")
    return np.kron(a, b)


def haar_unitary(d: int, seed) -> np.ndarray:
    """Haar-random d x d unitary.

    Columns are the Gram-Schmidt orthonormalization of a complex Gaussian
    matrix, which is QR with a positive real R diagonal. ``seed`` may be an
    int, a ``SeedSequence`` or an existing ``Generator``.
    """
    if d < 2:
        raise ValidationError("haar_unitary: d must be >= 2")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    cols = gram_schmidt(z.T)
    return np.column_stack(cols)
