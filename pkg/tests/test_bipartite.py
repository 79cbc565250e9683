import numpy as np
import pytest

from entcheck import (
    CoeffTensor,
    LocalFactors,
    Outcome,
    PreconditionError,
    equivalence_scalar,
    extract_local_factors,
    gen_product_state,
    numeric_rank,
    sign_flip_recover,
    sum_test,
    unfold,
    vanishing_sum_test,
)

EX1 = CoeffTensor([[4, -3j, 5], [-8, 6j, -10], [12, -9j, 15]])
PSI = CoeffTensor([[1, -1], [-1, 1]])          # degenerate but factorized
PSI_PRIME = CoeffTensor([[1, -1, 0, 0], [0, 0, 1, -1]])  # degenerate and entangled


def test_sum_test_worked_example():
    v = sum_test(EX1)
    assert v.outcome is Outcome.FACTORIZED
    assert v.decided_by == "sum"
    a, b = v.factors.vectors
    np.testing.assert_allclose(a, [0.5, -1.0, 1.5], atol=1e-12)
    np.testing.assert_allclose(b, [8, -6j, 10], atol=1e-12)
    np.testing.assert_allclose(v.factors.outer(), EX1.array, atol=1e-12)


def test_sum_test_elementary_product():
    v = sum_test(CoeffTensor([[1, 0], [0, 0]]))
    assert v.outcome is Outcome.FACTORIZED
    np.testing.assert_allclose(v.factors.vectors[0], [1, 0], atol=1e-12)
    np.testing.assert_allclose(v.factors.vectors[1], [1, 0], atol=1e-12)


def test_sum_test_diagonal_entangled_witness():
    v = sum_test(CoeffTensor(np.diag([1.0, 1.0])))
    assert v.outcome is Outcome.ENTANGLED
    assert v.witness.index == (0, 1)
    assert v.witness.residual > 0


def test_sum_test_degenerate_cases():
    for t in (PSI, PSI_PRIME):
        v = sum_test(t)
        assert v.outcome is Outcome.INCONCLUSIVE
        assert v.decided_by == "degenerate"


def test_vanishing_sum_test_guard():
    with pytest.raises(PreconditionError):
        vanishing_sum_test(CoeffTensor([[1, 1], [-1, 1]]))


def test_vanishing_sum_test_inconclusive_on_product():
    # (1,1) x (1,-1): total sum 0 and all row/column sum products 0
    t = CoeffTensor([[1, -1], [1, -1]])
    assert vanishing_sum_test(t).outcome is Outcome.INCONCLUSIVE
    assert numeric_rank(unfold(t, 1)) == 1


def test_vanishing_sum_test_entangled():
    t = CoeffTensor([[2, -1], [-1, 0]])
    v = vanishing_sum_test(t)
    assert v.outcome is Outcome.ENTANGLED
    assert v.decided_by == "sum-product"
    assert v.witness.index == (0, 0)
    assert numeric_rank(unfold(t, 1)) == 2


def test_extract_local_factors_scalar_case():
    v = extract_local_factors(CoeffTensor([[6.0]]))
    np.testing.assert_allclose(v.vectors[0], [1.0])
    np.testing.assert_allclose(v.vectors[1], [6.0])


def test_extract_local_factors_random_products():
    for seed in range(50):
        t = gen_product_state((3, 4), seed, zero_avoidance=True)
        f = extract_local_factors(t)
        np.testing.assert_allclose(f.outer(), t.array, atol=1e-8)


def test_equivalence_scalar_worked_example():
    f1 = LocalFactors(([0.5, -1, 1.5], [8, -6j, 10]))
    f2 = LocalFactors(([1, -2, 3], [4, -3j, 5]))
    assert equivalence_scalar(f1, f2) == pytest.approx(2.0)


def test_equivalence_scalar_identity():
    f = LocalFactors(([1, 2j], [3, 4]))
    assert equivalence_scalar(f, f) == pytest.approx(1.0)


def test_equivalence_scalar_requires_reciprocal():
    f1 = LocalFactors(([1, 0], [1, 1]))
    f2 = LocalFactors(([2, 0], [1, 1]))
    assert equivalence_scalar(f1, f2) is None


def test_local_factors_reject_zero_vector():
    with pytest.raises(ValueError):
        LocalFactors(([0, 0], [1, 1]))


def test_sign_flip_recovers_entanglement():
    v = sign_flip_recover(PSI_PRIME)
    assert v.outcome is Outcome.ENTANGLED
    assert v.witness.index == (1, 2)
    assert "negated" in v.reason


def test_sign_flip_stays_inconclusive():
    # all four single flips keep the total sum at zero
    assert sign_flip_recover(PSI).outcome is Outcome.INCONCLUSIVE


def test_sign_flip_factor_mapping():
    # (1,-2) x (3,1) has total sum -4; negating row 1 keeps it decidable,
    # so the mapped-back factors must still rebuild the original matrix
    t = CoeffTensor(np.outer([1, -2], [3, 1]))
    v = sign_flip_recover(t)
    if v.outcome is Outcome.FACTORIZED:
        np.testing.assert_allclose(v.factors.outer(), t.array, atol=1e-12)


def test_entangled_verdicts_agree_with_rank():
    rng = np.random.default_rng(42)
    for _ in range(200):
        m, n = rng.integers(2, 5, size=2)
        t = CoeffTensor(rng.normal(size=(m, n)) + 1j * rng.normal(size=(m, n)))
        v = sum_test(t)
        if v.outcome is Outcome.ENTANGLED:
            assert numeric_rank(unfold(t, 1)) >= 2


def test_factorized_verdicts_reconstruct():
    for seed in range(200):
        t = gen_product_state((4, 5), seed, zero_avoidance=True)
        v = sum_test(t)
        assert v.outcome is Outcome.FACTORIZED
        assert np.abs(v.factors.outer() - t.array).max() <= 1e-8


def test_reciprocal_scaling_round_trip():
    rng = np.random.default_rng(3)
    for seed in range(100):
        t = gen_product_state((3, 3), seed, zero_avoidance=True)
        f = extract_local_factors(t)
        lam = complex(rng.normal(), rng.normal())
        if abs(lam) < 1e-3:
            continue
        scaled = LocalFactors((lam * f.vectors[0], f.vectors[1] / lam))
        assert equivalence_scalar(f, scaled) == pytest.approx(lam)


def test_transpose_symmetry():
    rng = np.random.default_rng(9)
    for _ in range(100):
        m, n = rng.integers(2, 5, size=2)
        t = CoeffTensor(rng.normal(size=(m, n)) + 1j * rng.normal(size=(m, n)))
        assert sum_test(t).outcome is sum_test(CoeffTensor(t.array.T)).outcome
    for seed in range(50):
        t = gen_product_state((3, 4), seed, zero_avoidance=True)
        assert sum_test(t).outcome is sum_test(CoeffTensor(t.array.T)).outcome
