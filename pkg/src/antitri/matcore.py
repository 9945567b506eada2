"""Dense storage helpers and the two orthogonal primitives.

All routines work on ``numpy`` float64 arrays of shape ``(n, n)`` and use
0-based indices.  Orthogonal factors follow the convention ``M = Q^T A Q``
(equivalently ``A = Q M Q^T``); every transformation ``T`` applied as a
similarity ``A <- T^T A T`` is accumulated as ``Q <- Q T``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

import numpy as np

from .errors import DegenerateInputError, NotSkewSymmetricError, StructureError

EPS = np.finfo(np.float64).eps


def as_matrix(A, copy: bool = True) -> np.ndarray:
    """Return ``A`` as a square, finite float64 array.

    Raises
    ------
    StructureError
        If ``A`` is not a non-empty square 2-D array or holds NaN/Inf.
    """
    M = np.array(A, dtype=np.float64) if copy else np.asarray(A, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 1:
        raise StructureError(f"expected a non-empty square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise StructureError("matrix has non-finite entries")
    return M


def skew_check(A, tol: float = 0.0) -> Tuple[bool, Tuple[int, int, float]]:
    """Test ``max |A[i, j] + A[j, i]| <= tol``.

    Returns
    -------
    ok : bool
    worst : (i, j, magnitude)
        The pair with the largest violation (0-based).  For ties the first
        pair in row-major order wins, with ``i >= j`` preferred so that the
        reported entry is the lower-triangle one.
    """
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise StructureError(f"expected a square matrix, got shape {A.shape}")
    viol = np.abs(A + A.T)
    viol = np.tril(viol)
    flat = int(np.argmax(viol))
    i, j = divmod(flat, A.shape[0])
    mag = float(viol[i, j])
    return mag <= tol, (i, j, mag)


def skew_symmetrize(A, start: int = 0, stop: Optional[int] = None) -> np.ndarray:
    """Return a copy of ``A`` with the window ``A[start:stop, start:stop]``
    replaced by its skew-symmetric part; the window diagonal is exactly zero."""
    M = np.array(A, dtype=np.float64)
    n = M.shape[0]
    stop = n if stop is None else stop
    if not (0 <= start <= stop <= n):
        raise IndexError(f"window [{start}, {stop}) outside 0..{n}")
    _symmetrize_window(M, start, stop)
    return M


def _symmetrize_window(M: np.ndarray, start: int, stop: int) -> None:
    W = M[start:stop, start:stop]
    W[...] = (W - W.T) / 2
    np.fill_diagonal(W, 0.0)


def validate_skew(A, tol: Optional[float] = None) -> np.ndarray:
    """Check ``A`` is skew-symmetric and return an exactly skew copy.

    The default tolerance is ``10 * n * eps * max|A|``: text round trips and
    the usual ``(X - X^T)/2`` constructions pass, genuine non-skew input
    does not.
    """
    M = as_matrix(A)
    n = M.shape[0]
    if tol is None:
        tol = 10 * n * EPS * float(np.max(np.abs(M)))
    ok, (i, j, mag) = skew_check(M, tol)
    if not ok:
        raise NotSkewSymmetricError(
            f"matrix is not skew-symmetric: |A[{i},{j}] + A[{j},{i}]| = {mag:.3e} > {tol:.3e}"
        )
    _symmetrize_window(M, 0, n)
    return M


def norm2(x) -> float:
    """Euclidean norm with scaling by the largest magnitude (no overflow)."""
    x = np.asarray(x, dtype=np.float64)
    scale = float(np.max(np.abs(x))) if x.size else 0.0
    if scale == 0.0:
        return 0.0
    y = x / scale
    return scale * float(np.sqrt(np.dot(y, y)))


def column_norms(X) -> np.ndarray:
    """Scaled 2-norms of the columns of ``X``."""
    X = np.asarray(X, dtype=np.float64)
    if X.shape[0] == 0:
        return np.zeros(X.shape[1])
    scale = np.max(np.abs(X), axis=0)
    safe = np.where(scale > 0, scale, 1.0)
    Y = X / safe
    return scale * np.sqrt(np.einsum("ij,ij->j", Y, Y))


def default_tol(A) -> float:
    """Rank tolerance ``n * eps * max_k ||A[:, k]||_2``."""
    A = np.asarray(A, dtype=np.float64)
    n = A.shape[0]
    return n * EPS * float(np.max(column_norms(A)))


# --------------------------------------------------------------------------
# Givens rotations
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class GivensRotation:
    """Plane rotation in plane ``(i, j)``, ``i < j``.

    Equal to the identity except ``G[i, i] = G[j, j] = c``,
    ``G[i, j] = -s`` and ``G[j, i] = s``.
    """

    i: int
    j: int
    c: float
    s: float

    def matrix(self, n: int) -> np.ndarray:
        G = np.eye(n)
        G[self.i, self.i] = G[self.j, self.j] = self.c
        G[self.i, self.j] = -self.s
        G[self.j, self.i] = self.s
        return G


def givens_from_pair(a: float, b: float) -> Tuple[float, float]:
    """Cosine and sine with ``a*c + b*s = 0``, ``c**2 + s**2 = 1`` and ``s >= 0``.

    ``a`` is the entry to annihilate, ``b`` its partner in the neighbouring
    column.  Equivalent to ``cot(phi) = -b/a`` without forming the quotient.
    """
    a = float(a)
    b = float(b)
    if a == 0.0 and b == 0.0:
        raise DegenerateInputError("cannot build a rotation from (0, 0); skip the step instead")
    r = float(np.hypot(a, b))
    s = abs(a) / r
    c = -np.copysign(1.0, a) * b / r
    if c == 0.0:
        c = 0.0  # drop the sign of zero
    return c, s


def _rotate(A: np.ndarray, i: int, j: int, c: float, s: float) -> None:
    # Two-sided G^T A G on a skew-symmetric A; rows are copied from the
    # columns so skew-symmetry stays exact, and the (i, j) block is invariant.
    aij = A[i, j]
    ci = A[:, i].copy()
    cj = A[:, j]
    A[:, i] = c * ci + s * cj
    A[:, j] = c * cj - s * ci
    A[i, :] = -A[:, i]
    A[j, :] = -A[:, j]
    A[i, i] = A[j, j] = 0.0
    A[i, j] = aij
    A[j, i] = -aij


def _rotate_columns(Q: np.ndarray, i: int, j: int, c: float, s: float) -> None:
    qi = Q[:, i].copy()
    qj = Q[:, j]
    Q[:, i] = c * qi + s * qj
    Q[:, j] = c * qj - s * qi


def _check_plane(n: int, i: int, j: int) -> None:
    if not (0 <= i < j < n):
        raise IndexError(f"rotation plane ({i}, {j}) invalid for order {n}")


def apply_givens_similarity(A: np.ndarray, g: GivensRotation) -> np.ndarray:
    """Replace skew-symmetric ``A`` by ``G^T A G`` in place and return it.

    Only rows and columns ``g.i`` and ``g.j`` change.
    """
    _check_plane(A.shape[0], g.i, g.j)
    _rotate(A, g.i, g.j, g.c, g.s)
    return A


# --------------------------------------------------------------------------
# Householder reflectors
# --------------------------------------------------------------------------


@dataclass
class HouseholderReflector:
    """Reflector ``I - beta * v v^T`` acting on indices ``offset .. offset+len(v)-1``.

    ``alpha`` is the value the generating column is mapped to in its first
    slot (``sigma * ||x||``).
    """

    offset: int
    v: np.ndarray
    beta: float
    alpha: float = 0.0

    @property
    def size(self) -> int:
        return len(self.v)

    def apply(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        return x - self.beta * self.v * np.dot(self.v, x)

    def matrix(self, n: int) -> np.ndarray:
        H = np.eye(n)
        sl = slice(self.offset, self.offset + self.size)
        H[sl, sl] -= self.beta * np.outer(self.v, self.v)
        return H


def householder_from_column(x, offset: int = 0) -> HouseholderReflector:
    """Reflector mapping ``x`` to ``sigma * ||x|| * e_1`` with ``sigma = -sign(x[0])``.

    ``sigma = -1`` when ``x[0] == 0``.  Raises :class:`DegenerateInputError`
    for the zero vector.
    """
    x = np.asarray(x, dtype=np.float64)
    nrm = norm2(x)
    if nrm == 0.0:
        raise DegenerateInputError("cannot build a reflector from the zero vector")
    sigma = -1.0 if x[0] >= 0 else 1.0
    v = x.copy()
    v[0] = x[0] - sigma * nrm  # same sign as x[0]: no cancellation
    beta = 1.0 / (nrm * abs(v[0]))
    return HouseholderReflector(offset=offset, v=v, beta=beta, alpha=sigma * nrm)


def _window(h: HouseholderReflector, n: int) -> slice:
    if h.offset < 0 or h.offset + h.size > n:
        raise IndexError(f"reflector window [{h.offset}, {h.offset + h.size}) outside order {n}")
    return slice(h.offset, h.offset + h.size)


def apply_householder_left(A: np.ndarray, h: HouseholderReflector, cols: slice = slice(None)) -> np.ndarray:
    """``A[win, cols] <- H A[win, cols]`` in place; ``win`` is the reflector window."""
    win = _window(h, A.shape[0])
    if h.beta == 0.0:
        return A
    B = A[win, cols]
    B -= np.outer(h.beta * h.v, h.v @ B)
    return A


def apply_householder_right(A: np.ndarray, h: HouseholderReflector, rows: slice = slice(None)) -> np.ndarray:
    """``A[rows, win] <- A[rows, win] H`` in place."""
    win = _window(h, A.shape[1])
    if h.beta == 0.0:
        return A
    B = A[rows, win]
    B -= np.outer(B @ h.v, h.beta * h.v)
    return A


# --------------------------------------------------------------------------
# Accumulation and flips
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Swap:
    """Transposition of indices ``i`` and ``j`` (a symmetric permutation)."""

    i: int
    j: int


Transform = Union[GivensRotation, HouseholderReflector, Swap]


def accumulate(Q: np.ndarray, transform: Transform) -> np.ndarray:
    """``Q <- Q T`` in place, so that ``Q^T A Q`` tracks the reduced matrix."""
    if isinstance(transform, GivensRotation):
        _check_plane(Q.shape[1], transform.i, transform.j)
        _rotate_columns(Q, transform.i, transform.j, transform.c, transform.s)
    elif isinstance(transform, HouseholderReflector):
        apply_householder_right(Q, transform)
    elif isinstance(transform, Swap):
        Q[:, [transform.i, transform.j]] = Q[:, [transform.j, transform.i]]
    else:
        raise TypeError(f"unsupported transform {type(transform).__name__}")
    return Q


def flip_antitriangular(M) -> Tuple[np.ndarray, np.ndarray]:
    """Return ``(J M J, J)`` with ``J`` the exchange matrix.

    Upper antitriangular input becomes lower antitriangular and vice versa.
    """
    M = np.asarray(M)
    n = M.shape[0]
    J = np.eye(n)[::-1].copy()
    return M[::-1, ::-1].copy(), J


def is_lower_antitriangular(M) -> bool:
    """True when ``M[i, j] == 0`` exactly for all ``i + j < n - 1`` (0-based)."""
    n = M.shape[0]
    i, j = np.indices((n, n))
    return not np.any(M[i + j < n - 1])


def is_upper_antitriangular(M) -> bool:
    """True when ``M[i, j] == 0`` exactly for all ``i + j > n - 1`` (0-based)."""
    n = M.shape[0]
    i, j = np.indices((n, n))
    return not np.any(M[i + j > n - 1])


@dataclass
class AtfResult:
    """Outcome of an antitriangular reduction, ``M = Q^T A Q``.

    ``q`` is ``None`` when accumulation was disabled; the applied transforms
    are then available in ``reflectors`` / ``pivots`` (Householder path).
    """

    m: np.ndarray
    q: Optional[np.ndarray]
    rank: int
    tol: float
    terminated_step: Optional[int] = None
    pivots: list = field(default_factory=list)
    reflectors: list = field(default_factory=list)
    deflation_reflectors: list = field(default_factory=list)
    discarded_norms: Optional[np.ndarray] = None
    odd_order: bool = False
