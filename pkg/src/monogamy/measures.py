"""Bipartite entanglement measures on qubit states.

States are numpy arrays: a pure state is a length-``2**n`` amplitude vector,
a density matrix is ``2**n x 2**n``. A cut is given by the qubit indices on
side A; side B is the complement.

Negativity uses the unhalved convention ``||rho^{T_A}|| - 1`` so that a Bell
state has negativity 1 and, for pure states with a single-qubit side A, the
negativity coincides with the concurrence.
"""

from __future__ import annotations

import math
from collections.abc import Iterable

import numpy as np

from .linalg import (
    CLAMP_TOL,
    ContractError,
    LayoutError,
    clamp_psd,
    hermitian_eigenvalues,
    hermitian_eigh,
    partial_trace,
    partial_transpose,
    singular_values,
    trace_norm,
)

NORM_TOL = 1e-12
RANK_TOL = 1e-14

_SIGMA_Y = np.array([[0, -1j], [1j, 0]])
_YY = np.kron(_SIGMA_Y, _SIGMA_Y)


class UnsupportedMeasureError(NotImplementedError):
    """The requested measure has no tractable evaluation for this input."""


def num_qubits(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if n < 1 or 1 << n != dim:
        raise LayoutError(f"dimension {dim} is not a power of two >= 2")
    return n


def as_pure_state(psi) -> np.ndarray:
    """Validate a normalized qubit amplitude vector."""
    v = np.asarray(psi, dtype=complex).ravel()
    num_qubits(v.size)
    norm2 = float(np.vdot(v, v).real)
    if abs(norm2 - 1.0) > NORM_TOL:
        raise ContractError(f"state norm^2 is {norm2!r}, expected 1")
    return v


def density_matrix(psi) -> np.ndarray:
    v = as_pure_state(psi)
    return np.outer(v, v.conj())


def check_cut(side_a: Iterable[int], n: int) -> list[int]:
    side = sorted({int(i) for i in side_a})
    if not side or len(side) >= n or side[0] < 0 or side[-1] >= n:
        raise LayoutError(f"side A {side} is not a nonempty proper subset of {n} qubits")
    return side


def _clamp(x: float) -> float:
    if -CLAMP_TOL <= x < 0.0:
        return 0.0
    return x


def reduced_state(psi, side_a: Iterable[int]) -> np.ndarray:
    """Marginal density matrix of side A for a pure state."""
    v = as_pure_state(psi)
    n = num_qubits(v.size)
    side = check_cut(side_a, n)
    return partial_trace(np.outer(v, v.conj()), [2] * n, side)


def concurrence_pure(psi, side_a: Iterable[int] = (0,)) -> float:
    """``sqrt(2 (1 - tr rho_A^2))`` across the cut ``side_a | rest``."""
    rho_a = reduced_state(psi, side_a)
    purity = float(np.sum(np.abs(rho_a) ** 2))
    return math.sqrt(max(0.0, _clamp(2.0 * (1.0 - purity))))


def _check_two_qubit(rho) -> np.ndarray:
    r = np.asarray(rho, dtype=complex)
    if r.shape != (4, 4):
        raise LayoutError(f"expected a 4 x 4 two-qubit density matrix, got shape {r.shape}")
    return r


def _wootters(vectors: np.ndarray) -> float:
    # columns of `vectors` form any ensemble with rho = sum_i v_i v_i^H;
    # the singular values of tau are the square roots of the spectrum of rho * rho_tilde
    tau = vectors.T @ _YY @ vectors
    s = singular_values(tau)
    return float(max(0.0, s[0] - np.sum(s[1:])))


def concurrence_two_qubit(rho) -> float:
    """Closed-form convex-roof concurrence of a two-qubit density matrix.

    Equals ``max(0, s1 - s2 - s3 - s4)`` with ``s_i`` the square roots of the
    eigenvalues of ``rho (Y(x)Y) rho* (Y(x)Y)``. They are obtained as singular
    values of ``tau = Psi^T (Y(x)Y) Psi`` for the eigen-ensemble ``Psi`` of
    ``rho``; eigenvalues at or below ``RANK_TOL`` are treated as exact zeros.
    """
    r = _check_two_qubit(rho)
    w, v = hermitian_eigh(r)
    w = clamp_psd(w)
    keep = w > RANK_TOL
    if not keep.any():
        return 0.0
    return _wootters(v[:, keep] * np.sqrt(w[keep]))


def pair_concurrence(psi, a: int, b: int) -> float:
    """Concurrence of the two-qubit marginal of a pure state on qubits ``a``, ``b``.

    Uses the unnormalized conditional states of the pair as the ensemble, so
    no eigendecomposition is involved.
    """
    v = as_pure_state(psi)
    n = num_qubits(v.size)
    if a == b or not (0 <= a < n and 0 <= b < n):
        raise LayoutError(f"invalid qubit pair ({a}, {b}) for {n} qubits")
    pair = sorted((a, b))
    rest = [i for i in range(n) if i not in pair]
    t = v.reshape([2] * n).transpose(pair + rest).reshape(4, -1)
    return _wootters(t)


def negativity(rho, dims, side_a: Iterable[int]) -> float:
    """``||rho^{T_A}||_1 - 1`` for the cut ``side_a | rest``."""
    r = np.asarray(rho, dtype=complex)
    dims = tuple(dims)
    side = sorted({int(i) for i in side_a})
    if not side or len(side) >= len(dims):
        raise LayoutError(f"side A {side} is not a nonempty proper subset of {len(dims)} subsystems")
    value = trace_norm(partial_transpose(r, dims, side)) - 1.0
    return max(0.0, _clamp(value))


def negativity_pure(psi, side_a: Iterable[int] = (0,)) -> float:
    """``(tr sqrt(rho_A))^2 - 1`` for a pure state."""
    rho_a = reduced_state(psi, side_a)
    w = clamp_psd(hermitian_eigenvalues(rho_a))
    return max(0.0, _clamp(float(np.sum(np.sqrt(w))) ** 2 - 1.0))


def cren_two_qubit(rho) -> float:
    """Convex-roof extended negativity of a two-qubit state (equals its concurrence)."""
    return concurrence_two_qubit(rho)


def cren(rho, dims) -> float:
    """CREN for the first subsystem against the rest.

    Only two-qubit inputs and rank-one inputs are supported; the general
    convex roof is refused rather than approximated.
    """
    r = np.asarray(rho, dtype=complex)
    dims = tuple(dims)
    if dims == (2, 2):
        return cren_two_qubit(r)
    w = hermitian_eigenvalues(r)
    if abs(w[1]) <= 1e-12:
        # rank one: the convex roof is the pure-state value, equal to the negativity
        return negativity(r, dims, [0])
    raise UnsupportedMeasureError("CREN of a mixed state beyond two qubits is not supported")


def pair_state(psi, a: int, b: int) -> np.ndarray:
    """Two-qubit marginal on qubits ``a`` and ``b`` (kept in ascending order)."""
    v = as_pure_state(psi)
    n = num_qubits(v.size)
    if a == b:
        raise LayoutError("pair needs two distinct qubits")
    return partial_trace(np.outer(v, v.conj()), [2] * n, [a, b])


def tripartite_measures(psi, measure: str = "concurrence") -> dict[str, float]:
    """Pairwise and ``A|BC`` values of a three-qubit pure state.

    ``measure`` is ``"concurrence"`` or ``"negativity"`` (CREN on the pairs,
    negativity on the pure ``A|BC`` cut).
    """
    v = as_pure_state(psi)
    if v.size != 8:
        raise LayoutError("tripartite measures need a three-qubit state")
    rho_ab = pair_state(v, 0, 1)
    rho_ac = pair_state(v, 0, 2)
    if measure == "concurrence":
        return {
            "AB": concurrence_two_qubit(rho_ab),
            "AC": concurrence_two_qubit(rho_ac),
            "A|BC": concurrence_pure(v, [0]),
        }
    if measure == "negativity":
        return {
            "AB": cren_two_qubit(rho_ab),
            "AC": cren_two_qubit(rho_ac),
            "A|BC": negativity(np.outer(v, v.conj()), [2, 2, 2], [0]),
        }
    raise ValueError(f"unknown measure {measure!r}")
