"""Antitriangular reduction of skew-symmetric matrices by Givens rotations.

The reduction annihilates one antidiagonal after another, starting in the
top-left corner, and produces a *lower* antitriangular ``M`` (zeros for
``i + j < n - 1``, 0-based).  Rank-deficient matrices are then deflated
antidiagonal by antidiagonal until the first nontrivial antidiagonal is
completely nonzero; its length is the rank.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import StructureError
from .matcore import (
    EPS,
    AtfResult,
    _rotate,
    _rotate_columns,
    as_matrix,
    givens_from_pair,
    is_lower_antitriangular,
    is_upper_antitriangular,
    validate_skew,
)


@dataclass(frozen=True)
class AntidiagonalProfile:
    """Summary of the leading antidiagonals of a lower antitriangular matrix.

    Antidiagonal ``t`` (1 = main) holds the positions with ``i + j = n + t - 2``
    (0-based).  ``first_nontrivial`` is ``None`` for the zero matrix.
    """

    n: int
    first_nontrivial: Optional[int]
    nonzero_count: int

    @property
    def length(self) -> int:
        if self.first_nontrivial is None:
            return 0
        return self.n - self.first_nontrivial + 1

    @property
    def full(self) -> bool:
        """Every entry of the first nontrivial antidiagonal exceeds the tolerance."""
        return self.first_nontrivial is not None and self.nonzero_count == self.length


def _annihilate(M: np.ndarray, Q: Optional[np.ndarray], row: int, col: int) -> None:
    # Zero M[row, col] (and its mirror) by a rotation in plane (col, col + 1).
    a = M[row, col]
    if a == 0.0:
        return
    c, s = givens_from_pair(a, M[row, col + 1])
    _rotate(M, col, col + 1, c, s)
    M[row, col] = 0.0
    M[col, row] = 0.0
    if Q is not None:
        _rotate_columns(Q, col, col + 1, c, s)


def _antidiagonal(M: np.ndarray, offset: int) -> np.ndarray:
    """Entries ``M[offset + r, n - 1 - r]`` for ``r = 0 .. n - 1 - offset``."""
    n = M.shape[0]
    r = np.arange(n - offset)
    return M[offset + r, n - 1 - r]


def antidiagonal_profile(M, tol: float = 0.0) -> AntidiagonalProfile:
    """Locate the first antidiagonal with an entry ``> tol`` and count such entries."""
    M = np.asarray(M)
    n = M.shape[0]
    for offset in range(n):
        mags = np.abs(_antidiagonal(M, offset))
        count = int(np.count_nonzero(mags > tol))
        if count:
            return AntidiagonalProfile(n, offset + 1, count)
    return AntidiagonalProfile(n, None, 0)


def _flush_leading(M: np.ndarray, offset: int) -> None:
    # Everything in rows/columns before `offset` is at most tol; make it exact.
    M[:offset, :] = 0.0
    M[:, :offset] = 0.0


def _deflate_window(M: np.ndarray, Q: Optional[np.ndarray], d: int, tol: float) -> bool:
    """One deflation pass on the trailing window ``M[d:, d:]``.

    Returns ``False`` (no-op) when the window antidiagonal is already full.
    """
    n = M.shape[0]
    m = n - d
    # local row r <-> global row d + r; its antidiagonal partner column is n - 1 - r
    diag = _antidiagonal(M, d)
    small = np.abs(diag) <= tol
    if m % 2 == 0 and not np.any(small):
        return False
    for r in np.flatnonzero(small):
        M[d + r, n - 1 - r] = 0.0
        M[n - 1 - r, d + r] = 0.0
    if m % 2 == 1:
        ell = m // 2  # structural zero in the middle
    else:
        # skew-symmetry makes `small` palindromic; take the zero nearest the middle
        ell = int(np.flatnonzero(small[: m // 2]).max())
        # phase 1: clear the antidiagonal between that zero and the middle
        for r in range(ell + 1, m // 2):
            _annihilate(M, Q, d + r, n - 1 - r)
    # phase 2: sweep outwards to the corner with rotations in planes (r, r+1)
    for r in range(ell - 1, -1, -1):
        _annihilate(M, Q, n - 1 - r, d + r)
    return True


def antidiagonal_deflate(M, Q=None, tol: float = 0.0) -> Tuple[np.ndarray, Optional[np.ndarray], AntidiagonalProfile]:
    """Annihilate the first nontrivial antidiagonal of a lower antitriangular ``M``.

    The zero pair nearest the middle of that antidiagonal (odd order always
    has one) is propagated inwards and then outwards with rotations of
    neighbouring planes, so the first nontrivial antidiagonal moves one step
    deeper.  Entries with magnitude ``<= tol`` count as zero and are set to
    exactly zero.  ``Q`` is updated so that ``M' = Q'^T A Q'`` still holds.

    When the first nontrivial antidiagonal is already full the inputs are
    returned unchanged; check ``profile.full``.
    """
    M = np.array(M, dtype=np.float64)
    Q = None if Q is None else np.array(Q, dtype=np.float64)
    if not is_lower_antitriangular(M):
        raise StructureError("antidiagonal_deflate expects a lower antitriangular matrix")
    prof = antidiagonal_profile(M, tol)
    if prof.first_nontrivial is None:
        M[...] = 0.0
        return M, Q, prof
    d = prof.first_nontrivial - 1
    _flush_leading(M, d)
    if _deflate_window(M, Q, d, tol):
        _flush_leading(M, d + 1)
        prof = antidiagonal_profile(M, tol)
    return M, Q, prof


def givens_default_tol(A) -> float:
    """``n * eps * ||A||_F``.

    The Givens sweep does no pivoting, so the rounding left on the
    antidiagonal scales with the whole matrix rather than its largest
    column; the column-based tolerance of the Householder path is too tight
    here.
    """
    A = np.asarray(A, dtype=np.float64)
    return A.shape[0] * EPS * float(np.linalg.norm(A))


def reduce_givens(A, tol: Optional[float] = None, *, deflate: bool = True, compute_q: bool = True) -> AtfResult:
    """Reduce skew-symmetric ``A`` to lower antitriangular ``M = Q^T A Q``.

    Antidiagonal ``k`` (positions ``i + j = k``) is cleared from the top row
    inwards: ``(0, k)`` with a rotation in plane ``(k, k + 1)``, then
    ``(1, k - 1)`` in plane ``(k - 1, k)`` and so on.  Targets that are
    already exactly zero are skipped.

    With ``deflate`` the result is further deflated until the first
    nontrivial antidiagonal is full and ``rank`` is its length; otherwise
    ``rank`` just counts the main antidiagonal entries above ``tol``.
    ``tol`` defaults to :func:`givens_default_tol`.
    """
    M = validate_skew(A)
    n = M.shape[0]
    if tol is None:
        tol = givens_default_tol(M)
    Q = np.eye(n) if compute_q else None
    for k in range(1, n - 1):
        i = 0
        while i < k - i:
            _annihilate(M, Q, i, k - i)
            i += 1
    if deflate:
        M, Q, prof = _deflate_all(M, Q, tol)
        rank = prof.nonzero_count
    else:
        rank = rank_antitriangular(M, tol)
    return AtfResult(m=M, q=Q, rank=rank, tol=float(tol), odd_order=bool(n % 2))


def _deflate_all(M, Q, tol):
    n = M.shape[0]
    while True:
        prof = antidiagonal_profile(M, tol)
        if prof.first_nontrivial is None:
            M[...] = 0.0
            return M, Q, prof
        d = prof.first_nontrivial - 1
        _flush_leading(M, d)
        if not _deflate_window(M, Q, d, tol):
            return M, Q, prof
        _flush_leading(M, d + 1)
        if d + 1 >= n:
            return M, Q, AntidiagonalProfile(n, None, 0)


def _check_antitriangular(M: np.ndarray) -> None:
    if not (is_lower_antitriangular(M) or is_upper_antitriangular(M)):
        raise StructureError("matrix is not antitriangular")


def det_antitriangular(M) -> float:
    """Determinant of a skew-symmetric antitriangular matrix.

    Even order ``2p``: ``prod_{l < p} M[l, n-1-l]**2``.  Odd order: ``0.0``.
    """
    M = as_matrix(M, copy=False)
    _check_antitriangular(M)
    n = M.shape[0]
    if n % 2:
        return 0.0
    anti = M[np.arange(n // 2), n - 1 - np.arange(n // 2)]
    return float(np.prod(anti * anti))


def rank_antitriangular(M, tol: float = 0.0) -> int:
    """Number of entries ``> tol`` on the first antidiagonal that has any."""
    return antidiagonal_profile(np.asarray(M), tol).nonzero_count
