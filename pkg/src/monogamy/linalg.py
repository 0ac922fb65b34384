"""Dense complex linear algebra for small multiqubit systems.

Matrices are plain ``numpy`` arrays. Subsystem layouts are sequences of
local dimensions with subsystem 0 as the most significant index of the
row-major basis ordering, so ``|q0 q1 ... q_{n-1}>`` maps to the integer
with binary digits ``q0 q1 ... q_{n-1}``.

Eigenvalues come from a cyclic Jacobi sweep over complex Hermitian
matrices, which is accurate to a few ulps for the sizes used here
(at most 32 x 32).
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence

import numpy as np

HERMITIAN_TOL = 1e-12
CLAMP_TOL = 1e-12
PSD_ERROR_TOL = 1e-9
MAX_DIM = 32

_MAX_SWEEPS = 60


class LayoutError(ValueError):
    """A matrix does not match the subsystem layout it was given."""


class ContractError(ValueError):
    """An input violates a documented precondition."""


class NotPSDError(ContractError):
    """A matrix expected to be positive semidefinite has a negative eigenvalue."""


def _as_square(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ContractError(f"expected a square matrix, got shape {a.shape}")
    return a


def check_layout(dims: Sequence[int], dim: int | None = None) -> tuple[int, ...]:
    """Validate a layout and return it as a tuple of ints."""
    dims = tuple(int(d) for d in dims)
    if not dims:
        raise LayoutError("layout must contain at least one subsystem")
    if any(d < 2 for d in dims):
        raise LayoutError(f"local dimensions must be >= 2, got {dims}")
    if dim is not None and math.prod(dims) != dim:
        raise LayoutError(f"layout {dims} has total dimension {math.prod(dims)}, matrix has {dim}")
    return dims


def _index_set(idx, n: int) -> list[int]:
    if isinstance(idx, (int, np.integer)):
        idx = [int(idx)]
    out = sorted({int(i) for i in idx})
    if any(i < 0 or i >= n for i in out):
        raise LayoutError(f"subsystem indices {out} out of range for {n} subsystems")
    return out


def is_hermitian(h, tol: float = HERMITIAN_TOL) -> bool:
    a = np.asarray(h)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    return bool(np.max(np.abs(a - a.conj().T), initial=0.0) <= tol * scale)


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product ``a (x) b``; ``a`` occupies the more significant index."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace(rho, dims: Sequence[int], keep: int | Iterable[int]) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    ``keep`` may be empty, in which case the 1 x 1 matrix ``[[tr rho]]`` is
    returned. Kept subsystems stay in ascending order.
    """
    rho = _as_square(rho)
    dims = check_layout(dims, rho.shape[0])
    n = len(dims)
    keep = _index_set(keep, n)
    traced = [i for i in range(n) if i not in keep]

    t = rho.reshape(dims + dims)
    # trace one subsystem at a time, highest index first so axis numbers stay valid
    n_left = n
    for i in reversed(traced):
        t = np.trace(t, axis1=i, axis2=i + n_left)
        n_left -= 1
    d_keep = math.prod(dims[i] for i in keep) if keep else 1
    return t.reshape(d_keep, d_keep)


def partial_transpose(rho, dims: Sequence[int], subsystem: int | Iterable[int]) -> np.ndarray:
    """Transpose the indices of the given subsystem(s), leaving the rest alone."""
    rho = _as_square(rho)
    dims = check_layout(dims, rho.shape[0])
    n = len(dims)
    sub = _index_set(subsystem, n)
    if not sub:
        raise LayoutError("partial transpose needs at least one subsystem")
    axes = list(range(2 * n))
    for i in sub:
        axes[i], axes[i + n] = axes[i + n], axes[i]
    return rho.reshape(dims + dims).transpose(axes).reshape(rho.shape)


def _jacobi(h: np.ndarray, want_vectors: bool):
    a = h.copy()
    n = a.shape[0]
    v = np.eye(n, dtype=complex) if want_vectors else None
    scale = float(np.linalg.norm(a)) or 1.0

    for _ in range(_MAX_SWEEPS):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= 1e-17 * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 1e-300:
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                # phase u makes the (p, q) entry real before the real rotation
                u = np.conj(apq) / mag
                theta = (aqq - app) / (2.0 * mag)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c

                col_p = a[:, p].copy()
                col_q = a[:, q]
                a[:, p] = c * col_p - s * u * col_q
                a[:, q] = s * col_p + c * u * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :]
                a[p, :] = c * row_p - s * np.conj(u) * row_q
                a[q, :] = s * row_p + c * np.conj(u) * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = app - t * mag
                a[q, q] = aqq + t * mag

                if v is not None:
                    vp = v[:, p].copy()
                    vq = v[:, q]
                    v[:, p] = c * vp - s * u * vq
                    v[:, q] = s * vp + c * u * vq
    else:  # pragma: no cover - Jacobi converges quadratically, never seen in practice
        raise RuntimeError("Jacobi eigensolver did not converge")

    w = np.diag(a).real.copy()
    order = np.argsort(-w, kind="stable")
    return w[order], (v[:, order] if v is not None else None)


def _check_hermitian(h) -> np.ndarray:
    a = _as_square(h)
    if a.shape[0] > MAX_DIM:
        raise ContractError(f"matrix dimension {a.shape[0]} exceeds {MAX_DIM}")
    if not is_hermitian(a):
        raise ContractError("matrix is not Hermitian within tolerance")
    # drop the anti-Hermitian rounding residue
    return 0.5 * (a + a.conj().T)


def hermitian_eigenvalues(h) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix in descending order."""
    return _jacobi(_check_hermitian(h), want_vectors=False)[0]


def hermitian_eigh(h) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and matching orthonormal eigenvectors as columns."""
    return _jacobi(_check_hermitian(h), want_vectors=True)


def singular_values(m) -> np.ndarray:
    """Singular values (descending) with absolute accuracy ~ eps * ||m||.

    Computed as the nonnegative half of the spectrum of the Hermitian
    dilation ``[[0, m], [m^H, 0]]``, which avoids the square-root loss of
    diagonalizing ``m m^H``.
    """
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ContractError(f"expected a matrix, got shape {a.shape}")
    p, q = a.shape
    if p + q > 2 * MAX_DIM:
        raise ContractError(f"matrix shape {a.shape} exceeds {MAX_DIM} x {MAX_DIM}")
    if not a.size:
        return np.zeros(0)
    dil = np.zeros((p + q, p + q), dtype=complex)
    dil[:p, p:] = a
    dil[p:, :p] = a.conj().T
    w = _jacobi(dil, want_vectors=False)[0]
    r = min(p, q)
    return np.maximum(w[:r], 0.0)


def clamp_psd(w: np.ndarray) -> np.ndarray:
    """Clamp rounding-level negative eigenvalues to zero.

    Raises NotPSDError for anything below ``-PSD_ERROR_TOL``.
    """
    w = np.asarray(w, dtype=float)
    if w.size and w.min() < -PSD_ERROR_TOL:
        raise NotPSDError(f"eigenvalue {w.min():.3e} is below -{PSD_ERROR_TOL:g}")
    return np.where(w < 0.0, 0.0, w)


def psd_sqrt(rho) -> np.ndarray:
    w, v = hermitian_eigh(rho)
    w = clamp_psd(w)
    out = (v * np.sqrt(w)) @ v.conj().T
    return 0.5 * (out + out.conj().T)


def trace_norm(m) -> float:
    """Sum of singular values of ``m``."""
    a = _as_square(m)
    if not a.size:
        return 0.0
    if is_hermitian(a):
        return float(np.sum(np.abs(hermitian_eigenvalues(a))))
    return float(np.sum(singular_values(a)))
