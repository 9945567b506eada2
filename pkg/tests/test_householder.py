import numpy as np
import pytest

from antitri.errors import NotSkewSymmetricError
from antitri.householder import (
    CompactReflectors,
    atf_pivoted,
    atf_rank_revealing,
    reconstruct_q,
    store_reflectors,
)
from antitri.matcore import column_norms, default_tol, is_upper_antitriangular
from antitri.matgen import MurnaghanSpec, generate, ladder
from oracles import jacobi_singular_values, oracle_rank
from support import EPS, random_low_rank_skew, random_skew, rel_sv_gap


def check_factorization(A, res):
    n = A.shape[0]
    assert np.linalg.norm(res.q @ res.m @ res.q.T - A) <= 50 * n * EPS * np.linalg.norm(A)
    assert np.linalg.norm(res.q.T @ res.q - np.eye(n)) <= 50 * n * EPS
    assert np.array_equal(res.m, -res.m.T)


class TestPivoted:
    def test_order_two(self):
        A = np.array([[0.0, 3.0], [-3.0, 0.0]])
        res = atf_pivoted(A)
        assert abs(res.m[0, 1]) == 3.0 and res.rank == 2
        check_factorization(A, res)

    def test_order_three_pattern(self, rng):
        A = random_skew(rng, 3)
        res = atf_pivoted(A)
        assert res.m[2, 1] == res.m[2, 2] == res.m[1, 2] == 0.0
        assert res.m[1, 1] == 0.0  # middle antidiagonal entry of odd order
        assert rel_sv_gap(jacobi_singular_values(res.m), jacobi_singular_values(A)) <= 1e-12

    @pytest.mark.parametrize("n", [1, 2, 5, 8, 11, 20])
    def test_structure(self, rng, n):
        A = random_skew(rng, n)
        res = atf_pivoted(A)
        assert is_upper_antitriangular(res.m)
        check_factorization(A, res)

    def test_first_entry_dominates(self, rng):
        # after the first step the new corner entry is the largest in magnitude
        for _ in range(100):
            n = int(rng.integers(2, 16))
            A = random_skew(rng, n) * 10.0 ** rng.uniform(-2, 2, size=n)
            A = (A - A.T) / 2
            r1 = atf_pivoted(A, max_steps=1)
            H = r1.reflectors[0].matrix(n)
            left_only = r1.m @ H  # H P A P^T, since H is an involution
            assert np.max(np.abs(left_only)) <= abs(left_only[0, n - 1]) * (1 + 1e-12)
            assert np.max(np.abs(r1.m)) <= abs(r1.m[0, n - 1]) * (1 + 1e-12)

    def test_pivot_records(self, rng):
        n = 9
        res = atf_pivoted(random_skew(rng, n))
        assert len(res.pivots) == n // 2
        for p in res.pivots:
            assert p.step <= p.imax <= n - 1 - p.step
            assert p.swapped == (p.imax != n - 1 - p.step)

    def test_active_window_norm_nonincreasing(self, rng):
        # individual pivot norms may grow (the right update mixes columns),
        # but each window is a principal block of an orthogonal similarity
        # of the previous one
        for _ in range(50):
            n = int(rng.integers(4, 16))
            A = random_skew(rng, n)
            prev = np.linalg.norm(A)
            for t in range(1, n // 2):
                M = atf_pivoted(A, max_steps=t).m
                w = np.linalg.norm(M[t : n - t, t : n - t])
                assert w <= prev * (1 + 50 * n * EPS)
                prev = w

    def test_skipped_step(self):
        A = np.zeros((4, 4))
        A[0, 1], A[1, 0] = 1.0, -1.0
        res = atf_pivoted(A, tol=1e-12)
        assert res.rank == 2 and res.reflectors[1] is None and res.terminated_step == 1

    def test_bad_inputs(self):
        with pytest.raises(ValueError):
            atf_pivoted(np.zeros((3, 3)), tol=-1.0)
        with pytest.raises(NotSkewSymmetricError):
            atf_pivoted(np.ones((3, 3)))


class TestRankRevealing:
    def test_zero(self):
        res = atf_rank_revealing(np.zeros((6, 6)))
        assert res.rank == 0 and not np.any(res.m)

    def test_rank_four_order_ten(self):
        A = generate(MurnaghanSpec(10, [1.0, 0.5]))
        res = atf_rank_revealing(A)
        assert res.rank == 4 == oracle_rank(A, default_tol(A))
        check_factorization(A, res)

    @pytest.mark.parametrize("n", [1, 3, 4, 7, 10, 12])
    def test_compacted_layout(self, rng, n):
        for _ in range(10):
            A, r = random_low_rank_skew(rng, n)
            res = atf_rank_revealing(A)
            assert res.rank == r
            check_factorization(A, res)
            M = res.m
            assert not np.any(M[r:, :]) and not np.any(M[:, r:])
            lead = M[:r, :r]
            assert is_upper_antitriangular(lead)
            assert np.all(lead[np.arange(r), r - 1 - np.arange(r)] != 0)

    def test_termination_soundness(self, rng):
        for _ in range(30):
            n = int(rng.integers(3, 13))
            A, r = random_low_rank_skew(rng, n)
            res = atf_rank_revealing(A)
            if res.terminated_step is not None:
                assert res.discarded_norms is not None
                assert np.all(res.discarded_norms <= res.tol)

    def test_suite_member_rank_twenty(self):
        A = generate(MurnaghanSpec(108, ladder(10)), stream=10)
        assert atf_rank_revealing(A, compute_q=False).rank == 20


class TestStorage:
    def test_first_reflector_slots(self, rng):
        A = random_skew(rng, 5)
        res = atf_pivoted(A, max_steps=1)
        c = store_reflectors(res)
        h = res.reflectors[0]
        assert h.size == 4  # generated from rows 0..3 of the last column, stored in rows 1..4 of column 0
        assert np.allclose(c.packed[1:5, 0], np.sqrt(h.beta) * h.v)

    def test_length_three_reflector(self, rng):
        # order 4: the step-1 reflector has length 3 and fills rows 1..3 of column 0
        res = atf_pivoted(random_skew(rng, 4), max_steps=1)
        c = store_reflectors(res)
        assert res.reflectors[0].size == 3
        assert np.all(c.packed[1:4, 0] != 0)

    @pytest.mark.parametrize("n", [2, 5, 8, 13])
    def test_reconstruct_matches(self, rng, n):
        for A in (random_skew(rng, n), random_low_rank_skew(rng, n)[0]):
            for fn in (atf_pivoted, atf_rank_revealing):
                res = fn(A)
                c = store_reflectors(res)
                Q = reconstruct_q(c)
                assert np.linalg.norm(Q - res.q) <= 50 * n * EPS
                assert np.array_equal(c.m(), np.triu(res.m) - np.triu(res.m).T)

    def test_zero_steps(self):
        res = atf_pivoted(np.zeros((1, 1)))
        c = store_reflectors(res)
        assert isinstance(c, CompactReflectors) and c.steps == 0 and not np.any(c.packed)
