import numpy as np
import pytest

from entcheck import (
    CoeffTensor,
    LocalFactors,
    Outcome,
    equivalence_scalar,
    gen_product_state,
    multiparty_sum_test,
    numeric_rank,
    reconstruct,
    sum_test,
    unfold,
)

EX1 = CoeffTensor([[4, -3j, 5], [-8, 6j, -10], [12, -9j, 15]])


def ghz():
    c = np.zeros((2, 2, 2), dtype=complex)
    c[0, 0, 0] = 1
    c[1, 1, 1] = 1
    return CoeffTensor(c)


def test_uniform_product_state():
    v = multiparty_sum_test(CoeffTensor(np.ones((2, 2, 2))))
    assert v.outcome is Outcome.FACTORIZED
    np.testing.assert_allclose(v.factors.outer(), np.ones((2, 2, 2)), atol=1e-12)


def test_ghz_entangled():
    t = ghz()
    v = multiparty_sum_test(t)
    assert v.outcome is Outcome.ENTANGLED
    assert v.witness.index == (0, 0, 0)
    assert v.witness.residual == pytest.approx(3.0)
    # every mode unfolding of this tensor has rank 2
    assert all(numeric_rank(unfold(t, k)) == 2 for k in (1, 2, 3))


def test_two_party_specialization_on_worked_example():
    v2 = sum_test(EX1)
    vr = multiparty_sum_test(EX1)
    assert vr.outcome is v2.outcome is Outcome.FACTORIZED
    assert equivalence_scalar(v2.factors, vr.factors) is not None


def test_two_party_specialization_random():
    rng = np.random.default_rng(31)
    for _ in range(100):
        m, n = rng.integers(2, 5, size=2)
        t = CoeffTensor(rng.normal(size=(m, n)) + 1j * rng.normal(size=(m, n)))
        if abs(t.array.sum()) <= 1e-9 * t.max_abs:
            continue
        assert multiparty_sum_test(t).outcome is sum_test(t).outcome


def test_degenerate_sum_is_inconclusive():
    c = np.zeros((2, 2, 2), dtype=complex)
    c[0, 0, 0] = 1
    c[1, 1, 1] = -1
    assert multiparty_sum_test(CoeffTensor(c)).outcome is Outcome.INCONCLUSIVE


def test_reconstruct_examples():
    f = LocalFactors(([1, 2], [3, 4]))
    np.testing.assert_allclose(reconstruct(f).array, [[3, 4], [6, 8]])
    f1 = LocalFactors(([1, -2, 3], [4, -3j, 5]))
    np.testing.assert_allclose(reconstruct(f1).array, EX1.array, atol=1e-12)
    ones = LocalFactors(([1, 1], [1, 1], [1, 1]))
    np.testing.assert_allclose(reconstruct(ones).array, np.ones((2, 2, 2)))


def test_completeness_on_random_products():
    for r, dims in ((3, (2, 3, 2)), (4, (2, 2, 3, 2))):
        for seed in range(100):
            t = gen_product_state(dims, seed, zero_avoidance=True)
            v = multiparty_sum_test(t)
            assert v.outcome is Outcome.FACTORIZED, (r, seed)
            assert np.abs(v.factors.outer() - t.array).max() <= 1e-8


def test_entangled_verdicts_agree_with_unfolding_rank():
    rng = np.random.default_rng(13)
    for _ in range(100):
        dims = tuple(rng.integers(2, 4, size=3))
        t = CoeffTensor(rng.normal(size=dims) + 1j * rng.normal(size=dims))
        v = multiparty_sum_test(t)
        if v.outcome is Outcome.ENTANGLED:
            ranks = [numeric_rank(unfold(t, k)) for k in range(1, 4)]
            assert max(ranks) >= 2
