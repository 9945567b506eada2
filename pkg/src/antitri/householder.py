"""Pivoted Householder reduction to upper antitriangular form.

Step ``t`` (0-based) works on the window ``i1 = t .. i2 = n - 1 - t``.  The
column of largest norm inside the window is swapped (symmetrically) into
position ``i2`` and a reflector collapses ``A[i1:i2, i2]`` onto ``A[i1, i2]``.
The result is upper antitriangular: ``M[i, j] == 0`` for ``i + j > n - 1``.

:func:`atf_rank_revealing` stops as soon as the pivot norm drops to the
tolerance, discards the remaining window and then compacts the reduced
part so the nonzeros form a leading block of order ``rank`` with a full
antidiagonal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .errors import DegenerateInputError
from .matcore import (
    AtfResult,
    HouseholderReflector,
    Swap,
    _symmetrize_window,
    accumulate,
    apply_householder_left,
    apply_householder_right,
    column_norms,
    default_tol,
    householder_from_column,
    validate_skew,
)

__all__ = [
    "PivotRecord",
    "CompactReflectors",
    "default_tol",
    "atf_pivoted",
    "atf_rank_revealing",
    "store_reflectors",
    "reconstruct_q",
]


@dataclass(frozen=True)
class PivotRecord:
    """Pivot chosen at ``step`` (0-based); ``norm`` is its window column norm."""

    step: int
    imax: int
    swapped: bool
    norm: float


def _swap(A: np.ndarray, i: int, j: int) -> None:
    A[:, [i, j]] = A[:, [j, i]]
    A[[i, j], :] = A[[j, i], :]


def _reduce(A: np.ndarray, Q: Optional[np.ndarray], tol: float, stop_early: bool, max_steps: Optional[int]):
    n = A.shape[0]
    pivots: List[PivotRecord] = []
    reflectors: List[Optional[HouseholderReflector]] = []
    terminated = None
    discarded = None
    nsteps = n // 2 if max_steps is None else min(n // 2, max_steps)
    for t in range(nsteps):
        i1, i2 = t, n - 1 - t
        norms = column_norms(A[i1 : i2 + 1, i1 : i2 + 1])
        k = int(np.argmax(norms))  # first maximal: smallest index on ties
        imax = i1 + k
        nmax = float(norms[k])
        swapped = imax != i2
        if swapped:
            _swap(A, imax, i2)
            if Q is not None:
                accumulate(Q, Swap(imax, i2))
        pivots.append(PivotRecord(t, imax, swapped, nmax))
        if nmax <= tol:
            if stop_early:
                terminated = t
                discarded = np.sort(norms)[::-1]
                A[i1 : i2 + 1, i1 : i2 + 1] = 0.0
                break
            # the whole pivot column is negligible: flush it (a perturbation <= tol)
            A[i1 : i2 + 1, i2] = 0.0
            A[i2, i1 : i2 + 1] = 0.0
            reflectors.append(None)
            continue
        # A[i2, i2] == 0, so the reflector only needs rows i1 .. i2-1
        h = householder_from_column(A[i1:i2, i2], offset=i1)
        apply_householder_left(A, h, cols=slice(0, i2 + 1))
        A[i1, i2] = h.alpha
        A[i1 + 1 : i2, i2] = 0.0
        apply_householder_right(A, h, rows=slice(0, i2 + 1))
        A[i2, i1] = -h.alpha
        A[i2, i1 + 1 : i2] = 0.0
        _symmetrize_window(A, i1, i2 + 1)
        if Q is not None:
            accumulate(Q, h)
        reflectors.append(h)
    return pivots, reflectors, terminated, discarded


def atf_pivoted(A, tol: Optional[float] = None, *, compute_q: bool = True, max_steps: Optional[int] = None) -> AtfResult:
    """Reduce skew-symmetric ``A`` to upper antitriangular ``M = Q^T A Q``.

    Every step runs; a step whose pivot norm is ``<= tol`` applies no
    reflector (the symmetric swap is still performed) and sets the
    negligible pivot column and row to exact zeros.  ``rank`` is twice
    the number of steps before the first such skipped step.  ``max_steps``
    truncates the loop, which is mostly useful for inspecting intermediates.

    The per-step :class:`PivotRecord` list is in ``result.pivots`` and the
    reflectors (``None`` for skipped steps) in ``result.reflectors``.
    """
    M = validate_skew(A)
    if tol is None:
        tol = default_tol(M)
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    n = M.shape[0]
    Q = np.eye(n) if compute_q else None
    pivots, refl, _, _ = _reduce(M, Q, tol, stop_early=False, max_steps=max_steps)
    _symmetrize_window(M, 0, n)
    skipped = [p.step for p, h in zip(pivots, refl) if h is None]
    first_skip = skipped[0] if skipped else None
    rank = 2 * (first_skip if first_skip is not None else len(pivots))
    return AtfResult(
        m=M,
        q=Q,
        rank=rank,
        tol=float(tol),
        terminated_step=first_skip,
        pivots=pivots,
        reflectors=refl,
        odd_order=bool(n % 2),
    )


def _compact(A: np.ndarray, Q: Optional[np.ndarray], k: int) -> List[HouseholderReflector]:
    # After k reduced steps and a zeroed window, push column l's tail onto
    # row 2k-1-l (0-based) for l = k-1 .. 0.  Only the left transformation is
    # applied; the rows are refreshed from the columns by skew-symmetry.
    n = A.shape[0]
    out = []
    for ell in range(k - 1, -1, -1):
        p1 = 2 * k - 1 - ell
        p2 = n - 1 - ell  # includes the antidiagonal entry of column ell
        x = A[p1 : p2 + 1, ell]
        try:
            h = householder_from_column(x, offset=p1)
        except DegenerateInputError:
            continue
        apply_householder_left(A, h, cols=slice(0, ell + 1))
        A[p1, ell] = h.alpha
        A[p1 + 1 : p2 + 1, ell] = 0.0
        A[: ell + 1, p1 : p2 + 1] = -A[p1 : p2 + 1, : ell + 1].T
        if Q is not None:
            accumulate(Q, h)
        out.append(h)
    return out


def atf_rank_revealing(A, *, compute_q: bool = True) -> AtfResult:
    """Rank-revealing upper antitriangular reduction.

    The tolerance is :func:`default_tol` of the input.  If the pivot norm
    at step ``s`` (0-based) is ``<= tol`` the remaining window is set to
    zero, the loop stops, and the reduced part is compacted so that ``M``
    is zero outside its leading ``2s x 2s`` block, which is upper
    antitriangular with a full antidiagonal.  ``rank = 2s``; without early
    termination ``rank = 2 * (n // 2)`` (odd orders are compacted around
    their structurally zero middle entry).
    """
    M = validate_skew(A)
    n = M.shape[0]
    tol = default_tol(M)
    Q = np.eye(n) if compute_q else None
    pivots, refl, terminated, discarded = _reduce(M, Q, tol, stop_early=True, max_steps=None)
    deflation = []
    if terminated is not None:
        k = terminated
        deflation = _compact(M, Q, k)
        rank = 2 * k
    else:
        rank = 2 * (n // 2)
        if n % 2:
            # the 1x1 middle window is structurally zero: compact as if stopped there
            deflation = _compact(M, Q, n // 2)
    _symmetrize_window(M, 0, n)
    return AtfResult(
        m=M,
        q=Q,
        rank=rank,
        tol=float(tol),
        terminated_step=terminated,
        pivots=pivots,
        reflectors=refl,
        deflation_reflectors=deflation,
        discarded_norms=discarded,
        odd_order=bool(n % 2),
    )


@dataclass
class CompactReflectors:
    """Factorization stored LAPACK-style in one array.

    The upper triangle of ``packed`` (diagonal included) is the upper
    triangle of ``M``; the strictly lower triangle holds the scaled
    generating vectors ``u`` (``H = I - u u^T``) of the main-loop
    reflectors, the one from step ``t`` in column ``t``, rows
    ``t+1 .. n-1-t``.  ``pivots[t]`` is the column swapped into
    ``n-1-t`` at step ``t``.  Compaction reflectors do not fit the free
    triangle and are kept as ``(offset, u)`` pairs.
    """

    packed: np.ndarray
    pivots: List[int]
    deflation: List[tuple]

    @property
    def steps(self) -> int:
        return len(self.pivots)

    def m(self) -> np.ndarray:
        U = np.triu(self.packed)
        return U - U.T


def store_reflectors(result: AtfResult) -> CompactReflectors:
    """Pack the reflectors of a Householder-path result below the diagonal of ``M``."""
    M = result.m
    n = M.shape[0]
    packed = np.triu(M)
    used = np.zeros((n, n), dtype=bool)
    for t, h in enumerate(result.reflectors):
        if h is None:
            continue
        assert h.offset == t and h.size == n - 1 - 2 * t
        rows = slice(t + 1, t + 1 + h.size)
        assert not used[rows, t].any(), "reflector slot collision"
        used[rows, t] = True
        packed[rows, t] = np.sqrt(h.beta) * h.v
    deflation = [(h.offset, np.sqrt(h.beta) * h.v) for h in result.deflation_reflectors]
    return CompactReflectors(packed=packed, pivots=[p.imax for p in result.pivots], deflation=deflation)


def reconstruct_q(compact: CompactReflectors) -> np.ndarray:
    """Rebuild the orthogonal factor from :func:`store_reflectors` output."""
    n = compact.packed.shape[0]
    Q = np.eye(n)
    for t, imax in enumerate(compact.pivots):
        i2 = n - 1 - t
        if imax != i2:
            accumulate(Q, Swap(imax, i2))
        u = compact.packed[t + 1 : n - t, t]
        if np.any(u):
            accumulate(Q, HouseholderReflector(offset=t, v=u.copy(), beta=1.0))
    for offset, u in compact.deflation:
        accumulate(Q, HouseholderReflector(offset=offset, v=u, beta=1.0))
    return Q
