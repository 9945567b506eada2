"""Test matrices with a prescribed skew-symmetric spectrum.

A Murnaghan block-diagonal matrix ``D`` is mixed by random Householder
similarities in the style of LAPACK's ``dlarge``.  The arithmetic is
carried out in double-double (error-free transformations) and rounded to
float64 once at the end, so the generated matrix is within about half an
ulp per entry of an exact congruence of ``D``: its rank is that of ``D``
up to a single final rounding.

Random numbers come from :func:`numpy.random.default_rng` (PCG64), seeded
with ``[seed, stream]`` so that suite members are independent and
reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .matcore import validate_skew

DEFAULT_SEED = 20180903


@dataclass
class MurnaghanSpec:
    """Order ``n``, positive ``lambdas`` (one 2x2 block each) and an RNG seed."""

    n: int
    lambdas: Sequence[float] = field(default_factory=list)
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        self.lambdas = [float(x) for x in self.lambdas]
        if self.n < 1:
            raise ValueError("order must be positive")
        if 2 * len(self.lambdas) > self.n:
            raise ValueError(f"{len(self.lambdas)} blocks do not fit in order {self.n}")
        if any(not (x > 0) for x in self.lambdas):
            raise ValueError("all lambdas must be positive")

    @property
    def rank(self) -> int:
        return 2 * len(self.lambdas)


def murnaghan(spec: MurnaghanSpec) -> np.ndarray:
    """Block diagonal ``diag([[0, l1], [-l1, 0]], ..., 0, ..., 0)``."""
    D = np.zeros((spec.n, spec.n))
    for j, lam in enumerate(spec.lambdas):
        D[2 * j, 2 * j + 1] = lam
        D[2 * j + 1, 2 * j] = -lam
    return D


def ladder(r: int) -> List[float]:
    """``[1, 1/2, 1/4, ..., 2**-(r-1)]``."""
    return [2.0 ** -j for j in range(r)]


# -- double-double kernels ---------------------------------------------------

_SPLIT = 134217729.0  # 2**27 + 1


def _two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def _split(a):
    t = _SPLIT * a
    hi = t - (t - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


def _dd_scale(hi, lo, c):
    p, e = _two_prod(hi, c)
    e = e + lo * c
    return _two_sum(p, e)


def _dd_add(ahi, alo, bhi, blo):
    s, e = _two_sum(ahi, bhi)
    e = e + (alo + blo)
    return _two_sum(s, e)


def _dd_sum(hi, lo):
    # pairwise (tree) double-double reduction along the last axis
    while hi.shape[-1] > 1:
        if hi.shape[-1] % 2:
            pad = [(0, 0)] * (hi.ndim - 1) + [(0, 1)]
            hi = np.pad(hi, pad)
            lo = np.pad(lo, pad)
        hi, lo = _dd_add(hi[..., 0::2], lo[..., 0::2], hi[..., 1::2], lo[..., 1::2])
    return hi[..., 0], lo[..., 0]


def _dd_update(hi, lo, u, beta, start):
    # A <- H A H with H = I - beta u u^T acting on indices start..n-1.  For a
    # skew A, u^T A u = 0 and H A H = A + u w^T - w u^T with w = beta A u.
    p, e = _two_prod(hi[:, start:], u)
    e = e + lo[:, start:] * u
    whi, wlo = _dd_sum(p, e)
    whi, wlo = _dd_scale(whi, wlo, beta)
    xhi, xlo = _two_prod(u[:, None], whi[None, :])
    xlo = xlo + u[:, None] * wlo[None, :]
    hi, lo = hi.copy(), lo.copy()
    hi[start:, :], lo[start:, :] = _dd_add(hi[start:, :], lo[start:, :], xhi, xlo)
    hi[:, start:], lo[:, start:] = _dd_add(hi[:, start:], lo[:, start:], -xhi.T, -xlo.T)
    return hi, lo


def random_orthogonal_similarity(D, sweeps: Optional[int] = None, seed: int = DEFAULT_SEED, stream: int = 0) -> np.ndarray:
    """Return ``Q D Q^T`` for a random orthogonal ``Q = Q_1 ... Q_sweeps``.

    ``Q_t`` is a Householder reflector built from a standard normal vector
    that acts on the trailing ``t`` indices (cycling through orders
    ``1 .. n``), as in LAPACK's ``dlarge``; with ``sweeps = n`` the product
    is Haar distributed.  ``sweeps`` defaults to the order of ``D`` and
    ``sweeps=0`` returns ``D``.  The output is exactly skew-symmetric and
    bit-reproducible for a given ``(seed, stream)``.
    """
    D = validate_skew(D, tol=0.0)
    n = D.shape[0]
    sweeps = n if sweeps is None else int(sweeps)
    if sweeps < 0:
        raise ValueError("sweeps must be nonnegative")
    if sweeps == 0:
        return D
    rng = np.random.default_rng([int(seed), int(stream)])
    hi = D.copy()
    lo = np.zeros_like(hi)
    for t in range(sweeps):
        m = t % n + 1
        start = n - m
        u = rng.standard_normal(m)
        # reflector sending e_1 to -sign(x_1) x/||x||, uniform on the sphere
        u[0] += np.copysign(np.linalg.norm(u), u[0])
        beta = 2.0 / np.dot(u, u)
        hi, lo = _dd_update(hi, lo, u, beta, start)
    A = hi + lo
    A = (A - A.T) / 2
    np.fill_diagonal(A, 0.0)
    return A


def generate(spec: MurnaghanSpec, sweeps: Optional[int] = None, stream: int = 0) -> np.ndarray:
    """Murnaghan matrix of ``spec`` after :func:`random_orthogonal_similarity`."""
    return random_orthogonal_similarity(murnaghan(spec), sweeps=sweeps, seed=spec.seed, stream=stream)


def rank_experiment_suite(n: int = 108, seed: int = DEFAULT_SEED, sweeps: Optional[int] = None) -> List[Tuple[int, np.ndarray]]:
    """Matrices of order ``n`` and ranks ``2, 4, ..., n`` with the halving ladder.

    Member ``r`` has nonzero eigenvalues ``+-i * 2**-(j-1)``, ``j = 1..r``.
    """
    if n % 2:
        raise ValueError("the rank experiment needs an even order")
    out = []
    for r in range(1, n // 2 + 1):
        spec = MurnaghanSpec(n, ladder(r), seed)
        out.append((2 * r, generate(spec, sweeps=sweeps, stream=r)))
    return out
