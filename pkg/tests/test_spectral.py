"""Kernels, subspace arithmetic, and the certification reports."""

import math

import numpy as np
import pytest

from conftest import braided_presets, example3, free_spec, qccr, qij
from wickfock import model, spectral, tensorops
from wickfock.model import TensorOperator


def test_kernel_of_identity_is_zero():
    K = spectral.kernel(TensorOperator.identity(2, 2))
    assert K.dim == 0


def test_kernel_rejects_non_selfadjoint():
    upper = np.zeros((4, 4), dtype=complex)
    upper[0, 1] = 1.0
    with pytest.raises(ValueError, match="self-adjoint"):
        spectral.kernel(TensorOperator(2, 2, upper))


def test_kernel_of_1_plus_T_qij():
    # spanned by a unit multiple of e2 (x) e1 - lam12 * e1 (x) e2
    lam12 = -1.0
    T = model.build_T(qij(lam12))
    K = spectral.kernel(TensorOperator(2, 2, np.eye(4) + T.mat))
    assert K.dim == 1
    v = np.zeros(4, dtype=complex)
    v[1 * 2 + 0] = 1.0
    v[0 * 2 + 1] = -lam12
    v /= np.linalg.norm(v)
    assert abs(abs(np.vdot(K.basis[:, 0], v)) - 1.0) <= 1e-12


def test_kernel_of_1_plus_flip_is_antisymmetric_line():
    flip = model.build_T(qccr(2, 1.0))
    K = spectral.kernel(TensorOperator(2, 2, np.eye(4) + flip.mat))
    assert K.dim == 1
    v = np.zeros(4, dtype=complex)
    v[1] = 1.0
    v[2] = -1.0
    v /= np.sqrt(2)
    assert abs(abs(np.vdot(K.basis[:, 0], v)) - 1.0) <= 1e-12


def test_nullspace_svd_of_zero_and_full_rank():
    zero = TensorOperator(2, 2, np.zeros((4, 4)))
    assert spectral.nullspace_svd(zero).dim == 4
    assert spectral.nullspace_svd(TensorOperator.identity(2, 2)).dim == 0


def test_subspace_sum_idempotent():
    flip = model.build_T(qccr(2, 1.0))
    K = spectral.kernel(TensorOperator(2, 2, np.eye(4) + flip.mat))
    S = spectral.subspace_sum([K, K])
    assert S.dim == K.dim
    assert spectral.subspace_distance(S, K) <= 1e-12


def test_subspace_sum_flip_level3():
    # oracle: d^n - C(d+n-1, n) = 8 - 4, the non-symmetric complement
    flip = model.build_T(qccr(2, 1.0))
    eye = np.eye(8, dtype=complex)
    parts = [
        spectral.kernel(TensorOperator(2, 3, eye + tensorops.amplify(flip, k, 3).mat))
        for k in (1, 2)
    ]
    S = spectral.subspace_sum(parts)
    assert S.dim == 2**3 - math.comb(2 + 3 - 1, 3)
    kerP = spectral.kernel(tensorops.build_P(flip, 3))
    assert spectral.subspace_distance(kerP, S) <= 1e-8
    # every summand basis vector stays inside the sum
    proj = S.projector()
    for part in parts:
        for col in range(part.dim):
            b = part.basis[:, col]
            assert np.linalg.norm(proj @ b - b) <= 1e-10


def test_subspace_mismatch_errors():
    a = spectral.Subspace(2, 2, np.zeros((4, 0)), 1e-8)
    b = spectral.Subspace(2, 3, np.zeros((8, 0)), 1e-8)
    with pytest.raises(ValueError, match="mismatch"):
        spectral.subspace_distance(a, b)
    with pytest.raises(ValueError, match="orthonormal"):
        spectral.Subspace(2, 2, np.ones((4, 2)), 1e-8)


def test_kernel_theorem_flip_dims():
    # oracle: 2^k - (k+1), the complement of the symmetric tensors
    spec = qccr(2, 1.0)
    for level in (2, 3, 4):
        rep = spectral.kernel_theorem_check(spec, level - 1)
        assert rep["status"] == "pass"
        assert rep["dim_ker_P"] == rep["dim_sum"] == 2**level - (level + 1)
        assert rep["distance"] <= 1e-8
        assert rep["inclusion_margin"] <= 1e-8


def test_kernel_theorem_antiflip_dims():
    # oracle: d^k - C(d, k), the complement of the antisymmetric tensors
    spec = qccr(2, -1.0)
    for level in (2, 3, 4):
        rep = spectral.kernel_theorem_check(spec, level - 1)
        assert rep["status"] == "pass"
        assert rep["dim_ker_P"] == rep["dim_sum"] == 2**level - math.comb(2, level)


def test_kernel_theorem_example3_trivial_kernels():
    spec = example3(2, 0.5)
    for level in (2, 3, 4):
        rep = spectral.kernel_theorem_check(spec, level - 1)
        assert rep["status"] == "pass"
        assert rep["dim_ker_P"] == rep["dim_sum"] == 0


def test_kernel_theorem_qij():
    for lam in (-1.0, 1.0):
        spec = qij(lam)
        for level in (2, 3, 4):
            rep = spectral.kernel_theorem_check(spec, level - 1)
            assert rep["status"] == "pass"
            assert rep["dim_ker_P"] == rep["dim_sum"]
            assert rep["distance"] <= 1e-8


def test_kernel_theorem_inapplicable_beyond_norm_bound():
    # 1.5 * flip is braided but not a contraction
    entries = []
    for i in (1, 2):
        for j in (1, 2):
            entries.append({"i": i, "j": j, "k": i, "l": j, "re": 1.5, "im": 0.0})
    spec = model.load_spec({"d": 2, "coefficients": entries})
    rep = spectral.kernel_theorem_check(spec, 2)
    assert not rep["hypotheses"]["applicable"]
    assert rep["status"] == "inapplicable"


def test_easy_inclusion_margin_across_presets():
    for label, spec in braided_presets():
        for level in range(2, 7):
            rep = spectral.kernel_theorem_check(spec, level - 1)
            assert rep["inclusion_margin"] <= 1e-8, (label, level)


def test_kernel_equality_across_dimensions():
    def qij_d3(sign):
        lam = [[1.0 if r == c else sign for c in range(3)] for r in range(3)]
        return model.preset("qij-ccr", 3, qs=[0.5, 0.5, 0.5], lam=lam)

    cases = [
        (qccr(2, 1.0), 5), (qccr(2, -1.0), 5),
        (qij(-1.0), 5), (qij(1.0), 5),
        (qccr(3, 1.0), 4), (qccr(3, -1.0), 4),
        (qij_d3(-1.0), 4), (qij_d3(1.0), 4),
    ]
    for spec, max_level in cases:
        for level in range(2, max_level + 1):
            rep = spectral.kernel_theorem_check(spec, level - 1)
            assert rep["status"] == "pass", (spec.source, level)
            assert rep["dim_ker_P"] == rep["dim_sum"], (spec.source, level)
            assert rep["distance"] <= 1e-8, (spec.source, level)


def test_positivity_classifications():
    rep = spectral.positivity_check(qccr(2, 0.5), 4)
    assert rep["classification"] == "strictly positive"
    rep = spectral.positivity_check(qccr(2, 1.0), 3)
    assert rep["classification"] == "positive semidefinite"
    assert abs(rep["min_eig"]) <= 1e-10
    rep = spectral.positivity_check(qccr(1, -1.0), 2)
    assert rep["classification"] == "positive semidefinite"
    assert abs(rep["min_eig"]) <= 1e-15


def test_positivity_strict_for_open_range_presets():
    for spec in (qccr(2, 0.99), qccr(2, -0.99), example3(2, 0.5)):
        for n in range(2, 6):
            rep = spectral.positivity_check(spec, n)
            assert rep["classification"] == "strictly positive", (spec.source, n)


def test_un_checks():
    rep = spectral.un_checks(qccr(1, 0.7), 2)
    assert rep["invariance_residual"] <= 1e-15
    assert rep["commutation_residual"] <= 1e-15
    rep = spectral.un_checks(qccr(2, 1.0), 2)
    assert rep["invariance_residual"] <= 1e-10
    rep = spectral.un_checks(qccr(2, 1.0), 3)
    assert rep["commutation_residual"] <= 1e-10
    for label, spec in braided_presets():
        for n in range(1, 5):
            rep = spectral.un_checks(spec, n)
            assert rep["status"] == "pass", (label, n)


def test_wick_ideal_checks_free():
    rep = spectral.wick_ideal_checks(free_spec(2), 3)
    assert rep["dim_ker_P"] == 0
    assert rep["intertwining_residual"] == 0.0
    assert rep["status"] == "pass"


def test_wick_ideal_checks_flip_exact():
    rep = spectral.wick_ideal_checks(qccr(2, 1.0), 2)
    assert rep["dim_ker_P"] == 1
    assert rep["annihilation_residual"] <= 1e-12
    assert rep["status"] == "pass"


def test_wick_ideal_checks_qij():
    rep = spectral.wick_ideal_checks(qij(-1.0), 3)
    assert rep["status"] == "pass"
    assert max(
        rep["annihilation_residual"],
        rep["coaction_residual"],
        rep["intertwining_residual"],
        rep["kerR_inclusion_margin"],
    ) <= 1e-8


def test_ker_R_inside_ker_P_across_presets():
    for label, spec in braided_presets():
        for n in range(2, 6):
            rep = spectral.wick_ideal_checks(spec, n)
            assert rep["kerR_inclusion_margin"] <= 1e-8, (label, n)


def test_kernel_1mU2_vacuous_cases():
    rep = spectral.kernel_1mU2_diag(example3(2, 0.5), 2)
    assert rep["dim_intersection"] == 0
    assert rep["status"] == "pass"
    rep = spectral.kernel_1mU2_diag(qccr(1, 0.5), 2)
    assert rep["dim_ker_1mU2"] == 0
    assert rep["status"] == "pass"


def test_kernel_1mU2_flip():
    rep = spectral.kernel_1mU2_diag(qccr(2, 1.0), 2)
    assert rep["dim_ker_1mU2"] == 8
    assert rep["dim_intersection"] == 4
    assert rep["involution_residual"] <= 1e-10
    assert rep["status"] == "pass"
