import numpy as np
import pytest

from entcheck import (
    CoeffTensor,
    Outcome,
    gen_product_state,
    gen_random_state,
    numeric_rank,
    oracle_factorized,
    schmidt,
    sum_test,
    unfold,
)

EX1 = CoeffTensor([[4, -3j, 5], [-8, 6j, -10], [12, -9j, 15]])


def ghz():
    c = np.zeros((2, 2, 2), dtype=complex)
    c[0, 0, 0] = 1
    c[1, 1, 1] = 1
    return CoeffTensor(c)


def test_unfold_matrix_modes():
    t = CoeffTensor([[1, 2], [3, 4]])
    np.testing.assert_array_equal(unfold(t, 1), t.array)
    np.testing.assert_array_equal(unfold(t, 2), t.array.T)
    with pytest.raises(IndexError):
        unfold(t, 3)


def test_unfold_ghz_mode_one():
    np.testing.assert_array_equal(
        unfold(ghz(), 1), [[1, 0, 0, 0], [0, 0, 0, 1]]
    )


def test_numeric_rank_examples():
    assert numeric_rank(EX1.array) == 1
    assert numeric_rank(np.diag([1.0, 1.0])) == 2
    assert numeric_rank([[1, -1, 0, 0], [0, 0, 1, -1]]) == 2


def test_numeric_rank_zero_matrix_rejected():
    with pytest.raises(ValueError):
        numeric_rank(np.zeros((3, 3)))


def test_numeric_rank_matches_svd_rank():
    rng = np.random.default_rng(5)
    for _ in range(100):
        m, n = rng.integers(2, 8, size=2)
        r = int(rng.integers(1, min(m, n) + 1))
        mat = sum(
            np.outer(
                rng.normal(size=m) + 1j * rng.normal(size=m),
                rng.normal(size=n) + 1j * rng.normal(size=n),
            )
            for _ in range(r)
        )
        s = np.linalg.svd(mat, compute_uv=False)
        svd_rank = int(np.count_nonzero(s > 1e-10 * s[0]))
        assert numeric_rank(mat) == svd_rank


def test_oracle_factorized_cases():
    assert oracle_factorized(EX1)
    assert not oracle_factorized(ghz())
    assert oracle_factorized(gen_product_state((2, 3, 2), 1))


def test_schmidt_worked_example():
    form = schmidt(EX1)
    assert form.rank == 1
    # single weight = ||(1,-2,3)|| * ||(4,-3i,5)||
    assert form.values[0] == pytest.approx(np.sqrt(700))


def test_schmidt_diagonal():
    form = schmidt(CoeffTensor(np.diag([3.0, 4.0])))
    assert form.rank == 2
    np.testing.assert_allclose(form.values, [4.0, 3.0])


def test_schmidt_rank_one_with_zero_sum():
    form = schmidt(CoeffTensor([[1, -1], [-1, 1]]))
    assert form.rank == 1
    assert form.values[0] == pytest.approx(2.0)


def test_schmidt_reconstruction_and_orthonormality():
    rng = np.random.default_rng(19)
    for _ in range(200):
        m, n = rng.integers(2, 9, size=2)
        t = CoeffTensor(rng.normal(size=(m, n)) + 1j * rng.normal(size=(m, n)))
        form = schmidt(t)
        assert np.abs(form.matrix() - t.array).max() <= 100e-9 * max(1.0, t.max_abs)
        gram_l = form.left_vectors.conj() @ form.left_vectors.T
        gram_r = form.right_vectors.conj() @ form.right_vectors.T
        np.testing.assert_allclose(gram_l, np.eye(form.rank), atol=1e-9)
        np.testing.assert_allclose(gram_r, np.eye(form.rank), atol=1e-9)
        assert form.rank == numeric_rank(unfold(t, 1))


def test_diagonal_replay():
    # diagonal coefficient matrices with k >= 2 positive weights are
    # entangled, and the rank oracle confirms the count
    rng = np.random.default_rng(29)
    for k in range(2, 9):
        lam = rng.uniform(0.5, 2.0, size=k)
        t = CoeffTensor(np.diag(lam).astype(complex))
        v = sum_test(t)
        assert v.outcome is Outcome.ENTANGLED
        assert numeric_rank(unfold(t, 1)) == k


def test_generator_contracts():
    for seed in range(100):
        assert oracle_factorized(gen_product_state((2, 2), seed))
        assert oracle_factorized(gen_product_state((2, 2, 2), seed))
    entangled = sum(
        numeric_rank(unfold(gen_random_state((3, 3), seed), 1)) >= 2
        for seed in range(200)
    )
    assert entangled >= 199


def test_generators_deterministic():
    a = gen_product_state((2, 3), 7, zero_avoidance=True)
    b = gen_product_state((2, 3), 7, zero_avoidance=True)
    assert a == b
    assert gen_random_state((3, 3), 7) == gen_random_state((3, 3), 7)
