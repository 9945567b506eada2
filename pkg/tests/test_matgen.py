import numpy as np
import pytest

from antitri.matcore import skew_check
from antitri.matgen import (
    DEFAULT_SEED,
    MurnaghanSpec,
    _dd_sum,
    _two_prod,
    _two_sum,
    generate,
    ladder,
    murnaghan,
    random_orthogonal_similarity,
    rank_experiment_suite,
)
from oracles import jacobi_singular_values, oracle_rank
from support import EPS, rel_sv_gap


def test_murnaghan_small():
    assert np.array_equal(murnaghan(MurnaghanSpec(2, [1.0])), [[0.0, 1.0], [-1.0, 0.0]])
    D = murnaghan(MurnaghanSpec(5, [1.0, 0.5]))
    assert oracle_rank(D, 0.0) == 4 and not np.any(D[4]) and D[2, 3] == 0.5


def test_eigenvalues_are_ladder():
    D = murnaghan(MurnaghanSpec(12, ladder(5)))
    ev = np.sort(np.linalg.eigvals(D).imag)
    expected = np.sort(np.concatenate([ladder(5), -np.array(ladder(5)), np.zeros(2)]))
    assert np.allclose(ev, expected, atol=1e-15)


@pytest.mark.parametrize("n,lams", [(3, [1.0, 1.0]), (4, [0.0]), (4, [-1.0]), (0, [])])
def test_spec_validation(n, lams):
    with pytest.raises(ValueError):
        MurnaghanSpec(n, lams)


def test_ladder():
    assert ladder(3) == [1.0, 0.5, 0.25]


def test_error_free_kernels(rng):
    a, b = rng.standard_normal(100), rng.standard_normal(100) * 1e-9
    s, e = _two_sum(a, b)
    p, f = _two_prod(a, b)
    from fractions import Fraction

    for k in range(5):
        assert Fraction(s[k]) + Fraction(e[k]) == Fraction(a[k]) + Fraction(b[k])
        assert Fraction(p[k]) + Fraction(f[k]) == Fraction(a[k]) * Fraction(b[k])
    x = rng.standard_normal((2, 7))
    hi, lo = _dd_sum(x, np.zeros_like(x))
    for r in range(2):
        exact = sum(Fraction(v) for v in x[r])
        assert abs(float(exact - Fraction(hi[r]) - Fraction(lo[r]))) <= 1e-30


def test_zero_sweeps_identity():
    D = murnaghan(MurnaghanSpec(6, [1.0, 0.25]))
    assert np.array_equal(random_orthogonal_similarity(D, sweeps=0), D)


@pytest.mark.parametrize("n", [4, 9, 16, 32])
def test_spectrum_fidelity(rng, n):
    lams = rng.uniform(0.1, 1.0, size=n // 3)
    A = generate(MurnaghanSpec(n, lams, seed=7))
    assert skew_check(A, 0.0)[0] and not np.any(np.diag(A))
    assert rel_sv_gap(jacobi_singular_values(A), jacobi_singular_values(murnaghan(MurnaghanSpec(n, lams)))) <= 1e-12


def test_mixing_spreads_mass():
    A = generate(MurnaghanSpec(40, [1.0]))
    assert np.count_nonzero(np.abs(A) > 1e-3) > 0.5 * A.size


def test_deterministic():
    spec = MurnaghanSpec(10, [1.0, 0.5], seed=123)
    assert np.array_equal(generate(spec), generate(spec))
    assert not np.array_equal(generate(spec, stream=1), generate(spec))
    assert not np.array_equal(generate(spec), generate(MurnaghanSpec(10, [1.0, 0.5], seed=124)))


def test_suite():
    suite = rank_experiment_suite(12)
    assert [r for r, _ in suite] == [2, 4, 6, 8, 10, 12]
    for r, A in suite:
        assert skew_check(A, 0.0)[0]
        assert oracle_rank(A, 12 * EPS * np.linalg.norm(A)) == r
    with pytest.raises(ValueError):
        rank_experiment_suite(11)


def test_full_suite_length():
    suite = rank_experiment_suite(108, sweeps=1)
    assert len(suite) == 54 and suite[0][0] == 2 and suite[-1][0] == 108
    assert DEFAULT_SEED == 20180903
