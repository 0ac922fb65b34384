"""Independent reference computations used only by the tests."""

import math

import numpy as np


def kron_by_index(a, b):
    a = np.asarray(a)
    b = np.asarray(b)
    p, q = b.shape
    out = np.zeros((a.shape[0] * p, a.shape[1] * q), dtype=complex)
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            for k in range(p):
                for l in range(q):
                    out[p * i + k, q * j + l] = a[i, j] * b[k, l]
    return out


def random_unitary(rng, n):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density(rng, n, rank=None):
    rank = rank or n
    g = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def lemma2_step(big, small, M, beta):
    """One application of the three-party bound: big^b + [M - (small/big)^b] small^b."""
    if big == 0.0:
        return 0.0
    return big ** beta + (M - (small / big) ** beta) * small ** beta


def chain_recursion(pairwise, tails, M, beta, m):
    """Step-by-step nested recursion, evaluated from the last party upwards.

    Tail steps: t_j^b >= Q_j e_j^b + t_{j+1}^b.
    Head steps: t_i^b >= e_i^b + M_i * (lower bound on t_{i+1}^b).
    """
    n = len(pairwise)
    lower = pairwise[-1] ** beta
    for j in range(n - 2, m - 1, -1):
        q = M - (pairwise[j] / tails[j + 1]) ** beta
        lower = q * pairwise[j] ** beta + lower
    for i in range(m - 1, -1, -1):
        mi = M - (tails[i + 1] / pairwise[i]) ** beta
        lower = pairwise[i] ** beta + mi * lower
    return lower


def wootters_reference(rho):
    """Textbook form via numpy's non-Hermitian eigensolver (loose accuracy)."""
    y = np.array([[0, -1j], [1j, 0]])
    yy = np.kron(y, y)
    r = rho @ yy @ rho.conj() @ yy
    ev = np.sort(np.abs(np.linalg.eigvals(r).real))[::-1]
    s = np.sqrt(ev)
    return max(0.0, s[0] - s[1] - s[2] - s[3])


def haar_purity_mean(da, db):
    return (da + db) / (da * db + 1)


def M_direct(k, beta):
    x = beta / 2
    return ((1 + k) ** x - 1) / k ** x + k ** x


def close(a, b, tol):
    return math.isclose(a, b, rel_tol=0.0, abs_tol=tol)
