"""Amplifications, the R/P/U constructions, and their factorizations."""

import itertools

import numpy as np
import pytest

from conftest import braided_presets, example3, free_spec, qccr, qij
from wickfock import model, tensorops
from wickfock.model import TensorOperator


def qfactorial(q: float, n: int) -> float:
    """[n]_q! with [k]_q = 1 + q + ... + q^(k-1)."""
    total = 1.0
    for k in range(1, n + 1):
        total *= sum(q**j for j in range(k))
    return total


def permutation_matrix(perm_of_slots, d: int) -> np.ndarray:
    """Operator sending e_{i_1} (x) ... (x) e_{i_n} to the tensor with slot t
    holding the old slot perm_of_slots[t] (0-based slots)."""
    n = len(perm_of_slots)
    dim = d**n
    mat = np.zeros((dim, dim), dtype=complex)
    for src in itertools.product(range(d), repeat=n):
        dst = tuple(src[perm_of_slots[t]] for t in range(n))
        p = sum(i * d ** (n - 1 - t) for t, i in enumerate(src))
        r = sum(i * d ** (n - 1 - t) for t, i in enumerate(dst))
        mat[r, p] = 1.0
    return mat


def test_amplify_scalar_case():
    T = model.build_T(qccr(1, 0.5))
    for n in (2, 3, 4):
        for i in range(1, n):
            assert tensorops.amplify(T, i, n).mat[0, 0] == 0.5


def test_amplify_flip_is_slot_swap():
    # oracle: explicit basis-vector permutation of the first two slots
    flip = model.build_T(qccr(2, 1.0))
    expected = permutation_matrix((1, 0, 2), 2)
    assert np.array_equal(tensorops.amplify(flip, 1, 3).mat.real, expected.real)
    expected23 = permutation_matrix((0, 2, 1), 2)
    assert np.array_equal(tensorops.amplify(flip, 2, 3).mat.real, expected23.real)


def test_amplify_commutes_at_distance_exactly():
    for _, spec in braided_presets():
        T = model.build_T(spec)
        t1 = tensorops.amplify(T, 1, 4).mat
        t3 = tensorops.amplify(T, 3, 4).mat
        assert np.array_equal(t1 @ t3, t3 @ t1)


def test_amplify_position_errors():
    T = model.build_T(qccr(2, 0.5))
    with pytest.raises(ValueError):
        tensorops.amplify(T, 0, 3)
    with pytest.raises(ValueError):
        tensorops.amplify(T, 3, 3)
    with pytest.raises(ValueError):
        tensorops.amplify(TensorOperator.identity(2, 3), 1, 4)


def test_braid_residual_presets_and_zero():
    for label, spec in braided_presets():
        assert tensorops.braid_residual(model.build_T(spec)) <= 1e-12, label
    assert tensorops.braid_residual(model.build_T(free_spec())) == 0.0


def test_braid_residual_detects_perturbation():
    # q-ccr q=0.5 with M[(1,1),(2,2)] and its adjoint partner set to 0.1
    M = model.build_T(qccr(2, 0.5)).mat.copy()
    M[0, 3] = 0.1
    M[3, 0] = 0.1
    residual = tensorops.braid_residual(TensorOperator(2, 2, M))
    assert residual > 1e-3


def test_braid_relation_at_every_position():
    for label, spec in braided_presets():
        T = model.build_T(spec)
        for n in range(3, 7):
            for i in range(1, n - 1):
                ti = tensorops.amplify(T, i, n).mat
                tj = tensorops.amplify(T, i + 1, n).mat
                assert np.linalg.norm(ti @ tj @ ti - tj @ ti @ tj, 2) <= 1e-12, (label, n, i)
    T3 = model.build_T(qccr(3, 0.5))
    for n in (3, 4):
        for i in range(1, n - 1):
            ti = tensorops.amplify(T3, i, n).mat
            tj = tensorops.amplify(T3, i + 1, n).mat
            assert np.linalg.norm(ti @ tj @ ti - tj @ ti @ tj, 2) <= 1e-12


def test_build_R_scalar_geometric():
    T = model.build_T(qccr(1, 0.5))
    # oracle: geometric sum 1 + q + q^2
    assert abs(tensorops.build_R(T, 3).mat[0, 0] - 1.75) <= 1e-15
    assert abs(tensorops.build_R(T, 3).mat[0, 0] - sum(0.5**j for j in range(3))) <= 1e-15


def test_build_R_zero_and_low_levels():
    T = model.build_T(free_spec(2))
    for n in (0, 1, 2, 4):
        assert np.array_equal(tensorops.build_R(T, n).mat, np.eye(2**n))
    Tq = model.build_T(qccr(2, 0.5))
    assert np.array_equal(tensorops.build_R(Tq, 0).mat, np.eye(1))
    assert np.array_equal(tensorops.build_R(Tq, 1).mat, np.eye(2))


def test_build_R_flip_spectrum():
    # oracle: symmetric/antisymmetric split of H (x) H
    flip = model.build_T(qccr(2, 1.0))
    evals = sorted(np.linalg.eigvalsh(tensorops.build_R(flip, 2).mat).real)
    assert np.allclose(evals, [0.0, 2.0, 2.0, 2.0], atol=1e-12)


def test_build_Rtilde():
    T1 = model.build_T(qccr(1, 0.5))
    assert abs(tensorops.build_Rtilde(T1, 3, 3).mat[0, 0] - 1.75) <= 1e-15
    T0 = model.build_T(free_spec(2))
    assert np.array_equal(tensorops.build_Rtilde(T0, 3, 4).mat, np.eye(16))
    for _, spec in braided_presets():
        T = model.build_T(spec)
        lhs = tensorops.build_Rtilde(T, 2, 2).mat
        assert np.allclose(lhs, tensorops.build_R(T, 2).mat, atol=1e-15)
    with pytest.raises(ValueError):
        tensorops.build_Rtilde(T1, 1, 3)
    with pytest.raises(ValueError):
        tensorops.build_Rtilde(T1, 4, 3)


def test_build_P_scalar_qfactorial():
    T = model.build_T(qccr(1, 0.5))
    assert abs(tensorops.build_P(T, 3).mat[0, 0] - 2.625) <= 1e-15
    for n in range(7):
        expected = qfactorial(0.5, n)
        assert abs(tensorops.build_P(T, n).mat[0, 0] - expected) <= 1e-12 * max(1, expected)


def test_build_P_zero_is_identity():
    T = model.build_T(free_spec(2))
    for n in (0, 1, 2, 3, 4):
        assert np.array_equal(tensorops.build_P(T, n).mat, np.eye(2**n))


def test_build_P_flip_is_symmetrizer_sum():
    # oracle: sum over the 6 slot-permutation matrices of S_3
    flip = model.build_T(qccr(2, 1.0))
    expected = np.zeros((8, 8), dtype=complex)
    for perm in itertools.permutations(range(3)):
        expected += permutation_matrix(perm, 2)
    P3 = tensorops.build_P(flip, 3).mat
    assert np.allclose(P3, expected, atol=1e-12)
    evals = sorted(np.linalg.eigvalsh(P3).real)
    assert np.allclose(evals, [0, 0, 0, 0, 6, 6, 6, 6], atol=1e-10)


def test_build_P_selfadjoint_for_braided_presets():
    for label, spec in braided_presets():
        T = model.build_T(spec)
        for n in range(2, 6):
            P = tensorops.build_P(T, n).mat
            assert np.linalg.norm(P - P.conj().T, 2) <= 1e-10, (label, n)


def test_build_P_positive_for_contractive_presets():
    for label, spec in braided_presets():
        T = model.build_T(spec)
        assert tensorops.op_norm(T) <= 1.0 + 1e-12
        for n in range(2, 6):
            P = tensorops.build_P(T, n).mat
            min_eig = np.linalg.eigvalsh((P + P.conj().T) / 2)[0]
            assert min_eig >= -1e-10, (label, n)


def test_build_PDm_scalar_decomposition():
    T = model.build_T(qccr(1, 0.5))
    assert abs(tensorops.build_PDm(T, 1, 2).mat[0, 0] - 1.75) <= 1e-15
    p3 = tensorops.build_P(T, 3).mat[0, 0]
    p2 = tensorops.build_P(T, 2).mat[0, 0]
    assert abs(p3 - 1.75 * p2) <= 1e-15
    assert abs(p3 - 2.625) <= 1e-15


def test_build_PDm_argument_guards():
    T = model.build_T(qccr(2, 0.5))
    with pytest.raises(ValueError):
        tensorops.build_PDm(T, 0, 2)
    with pytest.raises(ValueError):
        tensorops.build_PDm(T, 1, 1)


def test_factorization_m_form():
    T0 = model.build_T(free_spec(2))
    assert tensorops.factorization_check(T0, 1, m=2)["residual"] == 0.0
    flip = model.build_T(qccr(2, 1.0))
    assert tensorops.factorization_check(flip, 1, m=2)["residual"] <= 1e-10
    Tq = model.build_T(qij(-1.0))
    for n, m in [(1, 2), (2, 2), (1, 3)]:
        rep = tensorops.factorization_check(Tq, n, m=m)
        assert rep["braided"] and rep["residual"] <= 1e-10, (n, m)


def test_factorization_J_form():
    T = model.build_T(qccr(2, 0.5))
    rep = tensorops.factorization_check(T, 3, J={1})
    assert rep["residual"] <= 1e-10
    rep = tensorops.factorization_check(T, 2, J=set())
    assert rep["residual"] <= 1e-10


def test_factorization_flags_non_braided():
    M = model.build_T(qccr(2, 0.5)).mat.copy()
    M[0, 3] = 0.1
    M[3, 0] = 0.1
    rep = tensorops.factorization_check(TensorOperator(2, 2, M), 1, m=2)
    assert not rep["braided"]
    assert rep["braid_residual"] > 1e-3


def test_factorization_argument_guards():
    T = model.build_T(qccr(2, 0.5))
    with pytest.raises(ValueError):
        tensorops.factorization_check(T, 2)
    with pytest.raises(ValueError):
        tensorops.factorization_check(T, 2, m=2, J={1})


def test_build_U_scalar_and_zero():
    T = model.build_T(qccr(1, 0.5))
    assert abs(tensorops.build_U(T, 2).mat[0, 0] - 0.125) <= 1e-15
    T0 = model.build_T(free_spec(2))
    for n in (1, 2, 3):
        assert np.array_equal(tensorops.build_U(T0, n).mat, np.zeros((2 ** (n + 1),) * 2))


def test_build_U_flip_is_reversal():
    # oracle: the explicit order-reversing slot permutation on 3 slots
    flip = model.build_T(qccr(2, 1.0))
    expected = permutation_matrix((2, 1, 0), 2)
    assert np.allclose(tensorops.build_U(flip, 2).mat, expected, atol=1e-12)


def test_build_U_selfadjoint_contraction():
    for label, spec in braided_presets():
        T = model.build_T(spec)
        for n in range(1, 5):
            U = tensorops.build_U(T, n).mat
            assert np.linalg.norm(U - U.conj().T, 2) <= 1e-10, (label, n)
            assert tensorops.op_norm(U) <= 1.0 + 1e-10, (label, n)


def test_telescoping_identity():
    for label, spec in braided_presets():
        T = model.build_T(spec)
        for n in range(1, 5):
            assert tensorops.telescoping_residual(T, n) <= 1e-10, (label, n)
    T1 = model.build_T(qccr(1, 0.5))
    # scalar oracle: 1 - q^(n(n+1)) telescopes through the q powers
    assert tensorops.telescoping_residual(T1, 3) <= 1e-15


def test_op_norm_conventions():
    T = model.build_T(qccr(2, 0.5))
    assert abs(tensorops.op_norm(T) - 0.5) <= 1e-12
    assert tensorops.op_norm(np.zeros((3, 3))) == 0.0
    assert abs(tensorops.op_norm(np.diag([1.0, -3.0])) - 3.0) <= 1e-12
