"""Block antitriangular form of Hermitian and skew-Hermitian matrices.

For a Hermitian ``H`` with inertia ``(n-, n0, n+)`` let ``n1 = min(n-, n+)``
and ``n2 = max(n-, n+) - n1``.  A unitary ``Q`` brings ``H`` to

    M = Q* H Q = [[0, 0, 0, 0 ],
                  [0, 0, 0, Y*],
                  [0, 0, X, Z*],
                  [0, Y, Z, W ]]

with block orders ``n0, n1, n2, n1``, ``Y`` nonsingular lower antitriangular
and ``X`` definite.  ``Q`` is assembled from an eigendecomposition: every
negative eigenvalue is paired with a positive one and the two eigenvectors
are combined into a neutral vector ``u`` (``u* H u = 0``) and a complement
``w``.  With this construction ``Y`` is antidiagonal and ``Z = 0``.

A skew-Hermitian ``A`` is handled through the Hermitian ``iA``, and the
result is scaled by ``-i``.  Inertia of skew-Hermitian matrices is counted
along the imaginary axis: ``n-`` eigenvalues ``i*mu`` with ``mu < 0``, etc.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import ConvergenceError, DefiniteMatrixError, NotHermitianError, NotSkewSymmetricError
from .matcore import EPS

__all__ = [
    "Inertia",
    "BlockAtfResult",
    "validate_hermitian",
    "validate_skew_hermitian",
    "hermitian_eigensolve",
    "default_inertia_tol",
    "inertia_hermitian",
    "inertia_skew_hermitian",
    "block_atf_hermitian",
    "block_atf_skew_hermitian",
    "block_pattern_ok",
]


@dataclass(frozen=True)
class Inertia:
    """Eigenvalue counts ``(n_minus, n_zero, n_plus)``."""

    n_minus: int
    n_zero: int
    n_plus: int

    @property
    def n(self) -> int:
        return self.n_minus + self.n_zero + self.n_plus

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.n_minus, self.n_zero, self.n_plus)

    def skew_label(self) -> str:
        """The ``i(n-, n0, n+)`` notation used for skew-Hermitian matrices."""
        return f"i({self.n_minus}, {self.n_zero}, {self.n_plus})"


def _as_complex(A) -> np.ndarray:
    A = np.array(A, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if A.shape[0] < 1:
        raise ValueError("matrix order must be positive")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def _default_check_tol(A: np.ndarray) -> float:
    scale = float(np.max(np.abs(A))) if A.size else 0.0
    return 10.0 * A.shape[0] * EPS * scale


def validate_hermitian(H, tol: Optional[float] = None) -> np.ndarray:
    """Return an exactly Hermitian copy of ``H`` or raise :class:`NotHermitianError`."""
    H = _as_complex(H)
    tol = _default_check_tol(H) if tol is None else tol
    dev = float(np.max(np.abs(H - H.conj().T)))
    if dev > tol:
        raise NotHermitianError(f"matrix is not Hermitian: max |H - H*| = {dev:.3g} > {tol:.3g}")
    H = (H + H.conj().T) / 2
    H[np.diag_indices_from(H)] = H.diagonal().real
    return H


def validate_skew_hermitian(A, tol: Optional[float] = None) -> np.ndarray:
    """Return an exactly skew-Hermitian copy of ``A`` or raise :class:`NotSkewSymmetricError`."""
    A = _as_complex(A)
    tol = _default_check_tol(A) if tol is None else tol
    dev = float(np.max(np.abs(A + A.conj().T)))
    if dev > tol:
        raise NotSkewSymmetricError(f"matrix is not skew-Hermitian: max |A + A*| = {dev:.3g} > {tol:.3g}")
    A = (A - A.conj().T) / 2
    A[np.diag_indices_from(A)] = 1j * A.diagonal().imag
    return A


def _jacobi_plane(app: float, aqq: float, apq: complex) -> Tuple[float, float, complex]:
    # Unitary V = [[c, s], [-s*conj(ph), c*conj(ph)]], ph = apq/|apq|, with
    # V* [[app, apq], [conj(apq), aqq]] V diagonal.
    r = abs(apq)
    ph = apq / r
    tau = (aqq - app) / (2.0 * r)
    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.hypot(1.0, tau))
    c = 1.0 / np.hypot(1.0, t)
    return c, t * c, ph


def hermitian_eigensolve(H, *, max_sweeps: int = 60) -> Tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and unitary eigenvectors by cyclic Jacobi.

    Each sweep visits all pairs ``p < q`` in row order.  Iteration stops once
    the off-diagonal Frobenius norm is at most ``eps * ||H||_F`` or a sweep
    finds nothing worth rotating.
    """
    H = validate_hermitian(H)
    n = H.shape[0]
    V = np.eye(n, dtype=np.complex128)
    scale = np.linalg.norm(H)
    if scale == 0.0:
        return np.zeros(n), V
    negligible = EPS * scale / n
    for _ in range(max_sweeps):
        off = np.linalg.norm(H - np.diag(H.diagonal()))
        if off <= EPS * scale:
            break
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = H[p, q]
                if abs(apq) <= negligible:
                    continue
                c, s, ph = _jacobi_plane(H[p, p].real, H[q, q].real, apq)
                J = np.array([[c, s], [-s * np.conj(ph), c * np.conj(ph)]])
                idx = [p, q]
                H[:, idx] = H[:, idx] @ J
                H[idx, :] = J.conj().T @ H[idx, :]
                H[p, q] = H[q, p] = 0.0
                H[p, p] = H[p, p].real
                H[q, q] = H[q, q].real
                V[:, idx] = V[:, idx] @ J
                rotated = True
        if not rotated:
            break
    else:
        raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")
    lam = H.diagonal().real
    order = np.argsort(lam, kind="stable")
    return lam[order], V[:, order]


def default_inertia_tol(H) -> float:
    """``n * eps * ||H||_F``: eigenvalues within this of zero count as zero."""
    H = np.asarray(H)
    return H.shape[0] * EPS * float(np.linalg.norm(H))


def _classify(lam: np.ndarray, tol: float) -> Inertia:
    return Inertia(int(np.sum(lam < -tol)), int(np.sum(np.abs(lam) <= tol)), int(np.sum(lam > tol)))


def inertia_hermitian(H, tol: Optional[float] = None) -> Inertia:
    H = validate_hermitian(H)
    tol = default_inertia_tol(H) if tol is None else tol
    lam, _ = hermitian_eigensolve(H)
    return _classify(lam, tol)


def inertia_skew_hermitian(A, tol: Optional[float] = None) -> Inertia:
    """Imaginary-axis inertia of skew-Hermitian ``A``, computed from ``iA``.

    An eigenvalue ``i*mu`` of ``A`` is the eigenvalue ``-mu`` of ``iA``, so
    the outer counts trade places.
    """
    A = validate_skew_hermitian(A)
    h = inertia_hermitian(1j * A, tol)
    return Inertia(h.n_plus, h.n_zero, h.n_minus)


@dataclass
class BlockAtfResult:
    """Block antitriangular factorization ``M = Q* A Q``.

    Block orders along the diagonal are ``n0, n1, n2, n1``.
    ``neutral_residual`` is the largest entry of the structurally zero
    blocks before they were set to zero.
    """

    m: np.ndarray
    q: np.ndarray
    n0: int
    n1: int
    n2: int
    inertia: Inertia
    tol: float
    neutral_residual: float
    skew: bool = False

    @property
    def n(self) -> int:
        return self.m.shape[0]

    def _rows(self, block: int) -> slice:
        edges = np.cumsum([0, self.n0, self.n1, self.n2, self.n1])
        return slice(int(edges[block]), int(edges[block + 1]))

    @property
    def Y(self) -> np.ndarray:
        return self.m[self._rows(3), self._rows(1)]

    @property
    def X(self) -> np.ndarray:
        return self.m[self._rows(2), self._rows(2)]

    @property
    def Z(self) -> np.ndarray:
        return self.m[self._rows(3), self._rows(2)]

    @property
    def W(self) -> np.ndarray:
        return self.m[self._rows(3), self._rows(3)]


def _zero_mask(n0: int, n1: int, n2: int) -> np.ndarray:
    # positions that must vanish: everything except X, Y, Y*, Z, Z*, W, and
    # inside Y (and Y*) the part strictly above the antidiagonal
    n = n0 + 2 * n1 + n2
    keep = np.zeros((n, n), dtype=bool)
    a, b, c = n0, n0 + n1, n0 + n1 + n2
    keep[b:c, b:c] = True  # X
    keep[c:, b:c] = True  # Z
    keep[b:c, c:] = True  # Z*
    keep[c:, c:] = True  # W
    i, j = np.indices((n1, n1))
    lower_anti = i + j >= n1 - 1
    keep[c:, a:b] = lower_anti  # Y
    keep[a:b, c:] = lower_anti.T  # Y*
    return ~keep


def block_pattern_ok(M, n0: int, n1: int, n2: int, *, skew: bool = False) -> bool:
    """Exact check of the block antitriangular pattern.

    Zero blocks must be exactly zero, ``Y`` exactly lower antitriangular,
    and the block above ``W`` exactly ``Y*`` (``-Y*`` when ``skew``).
    """
    M = np.asarray(M)
    n = n0 + 2 * n1 + n2
    if M.shape != (n, n):
        return False
    if np.any(M[_zero_mask(n0, n1, n2)]):
        return False
    a, b, c = n0, n0 + n1, n0 + n1 + n2
    Y = M[c:, a:b]
    mirror = M[a:b, c:]
    want = -Y.conj().T if skew else Y.conj().T
    return bool(np.array_equal(mirror, want))


def block_atf_hermitian(H, tol: Optional[float] = None) -> BlockAtfResult:
    """Block antitriangular form of a Hermitian matrix.

    Definite and zero inputs are allowed and give ``n1 = 0``.  ``tol``
    (default :func:`default_inertia_tol`) separates zero eigenvalues from
    the rest.
    """
    H = validate_hermitian(H)
    n = H.shape[0]
    tol = default_inertia_tol(H) if tol is None else float(tol)
    lam, V = hermitian_eigensolve(H)
    inertia = _classify(lam, tol)
    neg = np.flatnonzero(lam < -tol)  # most negative first
    pos = np.flatnonzero(lam > tol)[::-1]  # most positive first
    zero = np.flatnonzero(np.abs(lam) <= tol)
    n1 = min(neg.size, pos.size)
    n2 = max(neg.size, pos.size) - n1
    n0 = zero.size
    assert n0 + 2 * n1 + n2 == n

    lm, lp = lam[neg[:n1]], lam[pos[:n1]]
    alpha = np.sqrt(-lm / (lp - lm))
    beta = np.sqrt(lp / (lp - lm))
    vp, vm = V[:, pos[:n1]], V[:, neg[:n1]]
    U = vp * alpha + vm * beta  # neutral: u* H u = 0
    Wv = vp * beta - vm * alpha
    surplus = pos[n1:] if pos.size > neg.size else neg[n1:]
    Q = np.hstack([V[:, zero], U[:, ::-1], V[:, surplus], Wv])

    M = Q.conj().T @ H @ Q
    M = (M + M.conj().T) / 2
    M[np.diag_indices_from(M)] = M.diagonal().real
    mask = _zero_mask(n0, n1, n2)
    residual = float(np.max(np.abs(M[mask]))) if mask.any() else 0.0
    M[mask] = 0.0
    return BlockAtfResult(m=M, q=Q, n0=n0, n1=n1, n2=n2, inertia=inertia, tol=tol, neutral_residual=residual)


def block_atf_skew_hermitian(A, tol: Optional[float] = None) -> BlockAtfResult:
    """Block antitriangular form of a skew-Hermitian matrix.

    The Hermitian form of ``H = iA`` is computed and scaled: ``M = -i M_H``
    with the same ``Q``.  Raises :class:`DefiniteMatrixError` when all
    eigenvalues lie on one open half of the imaginary axis, since then
    ``Q* A Q`` can never acquire a zero block (think of ``A = a i I``).
    """
    A = validate_skew_hermitian(A)
    n = A.shape[0]
    res = block_atf_hermitian(1j * A, tol)
    h = res.inertia
    inertia = Inertia(h.n_plus, h.n_zero, h.n_minus)
    if inertia.n_minus == n or inertia.n_plus == n:
        raise DefiniteMatrixError(
            f"skew-Hermitian matrix with inertia {inertia.skew_label()} is definite; "
            "no unitary similarity yields a block antitriangular form"
        )
    res.m = -1j * res.m
    res.inertia = inertia
    res.skew = True
    return res
