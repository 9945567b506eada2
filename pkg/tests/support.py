"""Random inputs shared by the test modules."""

import numpy as np

from antitri.matgen import MurnaghanSpec, generate

EPS = np.finfo(float).eps


def random_skew(rng, n, scale=1.0):
    B = rng.standard_normal((n, n)) * scale
    return B - B.T


def random_low_rank_skew(rng, n, r=None, sweeps=None):
    """Skew matrix of Murnaghan rank ``2r`` with block values in [0.1, 1]."""
    if r is None:
        r = int(rng.integers(0, n // 2 + 1))
    lambdas = rng.uniform(0.1, 1.0, size=r)
    spec = MurnaghanSpec(n, lambdas, seed=int(rng.integers(2**31)))
    return generate(spec, sweeps=sweeps), 2 * r


def rel_sv_gap(s1, s2):
    """Largest singular-value difference relative to the largest singular value."""
    s1 = np.sort(np.asarray(s1))[::-1]
    s2 = np.sort(np.asarray(s2))[::-1]
    top = max(s1[0], s2[0]) if s1.size else 0.0
    gap = float(np.max(np.abs(s1 - s2))) if s1.size else 0.0
    return gap / top if top else gap


def random_skew_hermitian(rng, n, mu):
    """``U diag(i mu) U*`` with Haar-ish unitary ``U``."""
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    U, R = np.linalg.qr(Z)
    U = U * (np.diag(R) / np.abs(np.diag(R)))
    A = U @ np.diag(1j * np.asarray(mu, dtype=float)) @ U.conj().T
    return (A - A.conj().T) / 2
