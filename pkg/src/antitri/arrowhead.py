"""Multi-arrowhead form of a lower antitriangular skew-symmetric matrix.

A symmetric permutation that interleaves indices around the middle turns a
lower antitriangular ``M`` into ``S = P^T M P`` whose nonzeros (above the
diagonal) sit only in the columns of one parity: ``S[a, b]`` with ``a < b``
can be nonzero only when ``b`` has the parity of ``n`` (1-based).  Every
such column is the shaft of an arrow, hence the name.

For odd order the first row of ``S`` has the same sparsity as every
even-numbered row, so a sweep of rotations in planes ``(1, 2j)`` clears it
without fill.
"""

from __future__ import annotations

from typing import Tuple

import numpy as np

from .errors import StructureError
from .matcore import _rotate, _rotate_columns, as_matrix, givens_from_pair, is_lower_antitriangular

__all__ = [
    "arrowhead_permutation",
    "permutation_matrix",
    "to_multi_arrowhead",
    "from_multi_arrowhead",
    "arrowhead_mask",
    "arrowhead_pattern_ok",
    "zero_first_row_odd",
]


def arrowhead_permutation(n: int) -> np.ndarray:
    """Column order of ``P`` as 0-based source indices.

    With ``k = ceil(n / 2)`` (1-based) the order is ``k, k-1, k+1, k-2, ...``
    for odd ``n`` and ``k, k+1, k-1, k+2, ...`` for even ``n``; both end in
    ``1, n``.  For ``n = 5`` this is ``[2, 1, 3, 0, 4]``.
    """
    n = int(n)
    if n < 1:
        raise ValueError("order must be positive")
    k = (n + 1) // 2 - 1  # 0-based middle (left of the two for even n)
    step = (-1, 1) if n % 2 else (1, -1)
    out = [k]
    for d in range(1, n):
        out.extend(k + sgn * d for sgn in step if 0 <= k + sgn * d < n)
    return np.array(out, dtype=int)


def permutation_matrix(perm) -> np.ndarray:
    """``P`` with ``P[:, t] = e_{perm[t]}``."""
    perm = np.asarray(perm, dtype=int)
    P = np.zeros((perm.size, perm.size))
    P[perm, np.arange(perm.size)] = 1.0
    return P


def to_multi_arrowhead(M) -> Tuple[np.ndarray, np.ndarray]:
    """Return ``(S, perm)`` with ``S = P^T M P``, computed by indexing only.

    ``M`` must be lower antitriangular (as produced by the Givens path or a
    flipped Householder result).  ``M = P S P^T`` recovers the input; see
    :func:`from_multi_arrowhead`.
    """
    M = as_matrix(M, copy=False)
    if not is_lower_antitriangular(M):
        raise StructureError("multi-arrowhead conversion needs a lower antitriangular matrix")
    perm = arrowhead_permutation(M.shape[0])
    return M[np.ix_(perm, perm)].copy(), perm


def from_multi_arrowhead(S, perm) -> np.ndarray:
    """Inverse of :func:`to_multi_arrowhead`."""
    S = as_matrix(S, copy=False)
    perm = np.asarray(perm, dtype=int)
    M = np.empty_like(S)
    M[np.ix_(perm, perm)] = S
    return M


def arrowhead_mask(n: int) -> np.ndarray:
    """Boolean mask of positions allowed to be nonzero in the multi-arrowhead form."""
    a = np.arange(1, n + 1)[:, None]
    b = np.arange(1, n + 1)[None, :]
    upper = (a < b) & (b % 2 == n % 2)
    return upper | upper.T


def arrowhead_pattern_ok(S) -> bool:
    """True iff every entry outside :func:`arrowhead_mask` is exactly zero."""
    S = np.asarray(S)
    return not np.any(S[~arrowhead_mask(S.shape[0])])


def zero_first_row_odd(S, tol: float = 0.0) -> Tuple[np.ndarray, np.ndarray]:
    """Clear row and column 0 of an odd-order multi-arrowhead matrix.

    For ``j = 1, 2, ...`` (1-based) a rotation in plane ``(1, 2j)`` removes
    ``S[1, 2j+1]`` against the partner ``S[2j, 2j+1]``.  Targets with
    magnitude ``<= tol`` are skipped.  Returns ``(S', Q)`` with
    ``S' = Q^T S Q``; row and column 0 of ``S'`` are exactly zero.
    """
    S = as_matrix(S)
    n = S.shape[0]
    if n % 2 == 0:
        raise StructureError("first-row elimination is defined for odd order only")
    if not arrowhead_pattern_ok(S):
        raise StructureError("input is not in multi-arrowhead form")
    Q = np.eye(n)
    for t in range(2, n, 2):  # 0-based targets (t, 0), partner column t-1
        a = S[t, 0]
        if abs(a) <= tol:
            S[t, 0] = S[0, t] = 0.0
            continue
        c, s = givens_from_pair(a, S[t, t - 1])
        _rotate(S, 0, t - 1, c, s)
        _rotate_columns(Q, 0, t - 1, c, s)
        S[t, 0] = S[0, t] = 0.0
    # whatever rounding left in the first row is below the working precision
    S[0, :] = 0.0
    S[:, 0] = 0.0
    return S, Q
