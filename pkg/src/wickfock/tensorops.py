"""Derived operators on tensor powers of H.

Everything here is assembled from the level-2 operator by amplification
(identity factors on the untouched slots) and by the product/sum recursions

    R_n  = 1 + T_1 + T_1 T_2 + ... + T_1 T_2 ... T_{n-1}
    Rt_k = 1 + T_{k-1} + T_{k-2} T_{k-1} + ... + T_1 T_2 ... T_{k-1}
    P_2  = R_2,   P_{n+1} = (1 (x) P_n) R_{n+1}
    U_n  = (T_1 ... T_n)(T_1 ... T_{n-1}) ... (T_1 T_2) T_1

Products and sums accumulate left to right in exactly this written order so
residuals are bit-reproducible run to run.  Matrices are dense; desk scale
is d <= 3, level <= 6.
"""

from __future__ import annotations

import numpy as np

from .model import TensorOperator

__all__ = [
    "op_norm",
    "amplify",
    "braid_residual",
    "is_braided",
    "build_R",
    "build_Rtilde",
    "build_P",
    "build_PDm",
    "build_U",
    "chain",
    "factorization_check",
    "telescoping_residual",
]

BRAID_TOL = 1e-8


def _norm2(m: np.ndarray) -> float:
    """Operator norm: largest singular value, via eigendecomposition of the
    self-adjoint square m^H m."""
    if m.size == 0:
        return 0.0
    ev = np.linalg.eigvalsh(m.conj().T @ m)
    return float(np.sqrt(max(ev[-1], 0.0)))


def op_norm(op: TensorOperator | np.ndarray) -> float:
    return _norm2(op.mat if isinstance(op, TensorOperator) else np.asarray(op))


def _require_level2(T: TensorOperator) -> None:
    if T.level != 2:
        raise ValueError(f"expected a level-2 operator, got level {T.level}")


def _amp(T: TensorOperator, i: int, n: int) -> np.ndarray:
    d = T.d
    left = np.eye(d ** (i - 1), dtype=np.complex128)
    right = np.eye(d ** (n - i - 1), dtype=np.complex128)
    return np.kron(np.kron(left, T.mat), right)


def amplify(T: TensorOperator, i: int, n: int) -> TensorOperator:
    """T_i = 1 (x) ... (x) 1 (x) T (x) 1 (x) ... (x) 1 on H^(x)n, acting on
    slots i, i+1 (positions are 1-based, 1 <= i <= n-1)."""
    _require_level2(T)
    if n < 2:
        raise ValueError(f"amplification needs level n >= 2, got {n}")
    if not 1 <= i <= n - 1:
        raise ValueError(f"position i={i} out of range 1..{n - 1}")
    return TensorOperator(T.d, n, _amp(T, i, n))


def braid_residual(T: TensorOperator) -> float:
    """|| T_1 T_2 T_1 - T_2 T_1 T_2 ||_2 on H^(x)3."""
    _require_level2(T)
    t1 = _amp(T, 1, 3)
    t2 = _amp(T, 2, 3)
    return _norm2(t1 @ t2 @ t1 - t2 @ t1 @ t2)


def is_braided(T: TensorOperator, tol: float = BRAID_TOL) -> bool:
    return braid_residual(T) <= tol


def build_R(T: TensorOperator, n: int) -> TensorOperator:
    """R_n = 1 + T_1 + T_1 T_2 + ... + T_1 ... T_{n-1}; R_0 = R_1 = 1."""
    _require_level2(T)
    if n < 0:
        raise ValueError(f"level n must be >= 0, got {n}")
    d = T.d
    total = np.eye(d**n, dtype=np.complex128)
    if n >= 2:
        term = np.eye(d**n, dtype=np.complex128)
        for i in range(1, n):
            term = term @ _amp(T, i, n)
            total = total + term
    return TensorOperator(d, n, total)


def build_Rtilde(T: TensorOperator, k: int, n: int) -> TensorOperator:
    """Rt_k = 1 + T_{k-1} + T_{k-2}T_{k-1} + ... + T_1 T_2 ... T_{k-1},
    with the T_i amplified into level n (2 <= k <= n)."""
    _require_level2(T)
    if not 2 <= k <= n:
        raise ValueError(f"position k={k} out of range 2..{n}")
    d = T.d
    total = np.eye(d**n, dtype=np.complex128)
    term = np.eye(d**n, dtype=np.complex128)
    for j in range(k - 1, 0, -1):
        term = _amp(T, j, n) @ term
        total = total + term
    return TensorOperator(d, n, total)


def build_P(T: TensorOperator, n: int) -> TensorOperator:
    """P_n via the recursion P_2 = R_2, P_{n+1} = (1 (x) P_n) R_{n+1}.

    P_0 = P_1 = 1 by convention.  For braided self-adjoint T the result is
    self-adjoint up to accumulation noise (asserted by the test suite, not
    enforced here, so non-braided inputs can still be explored).
    """
    _require_level2(T)
    if n < 0:
        raise ValueError(f"level n must be >= 0, got {n}")
    d = T.d
    if n < 2:
        return TensorOperator(d, n, np.eye(d**n, dtype=np.complex128))
    P = np.eye(d, dtype=np.complex128)
    for m in range(2, n + 1):
        P = np.kron(np.eye(d, dtype=np.complex128), P) @ build_R(T, m).mat
    return TensorOperator(d, n, P)


def build_PDm(T: TensorOperator, n: int, m: int) -> TensorOperator:
    """P(D_m) = Rt_{n+m} Rt_{n+m-1} ... Rt_{m+1} on H^(x)(n+m).

    Satisfies P_{n+m} = P(D_m) (P_m (x) 1_n) for braided T; see
    :func:`factorization_check`.
    """
    _require_level2(T)
    if m < 2 or n < 1:
        raise ValueError(f"need m >= 2 and n >= 1, got n={n}, m={m}")
    d = T.d
    level = n + m
    acc = np.eye(d**level, dtype=np.complex128)
    for k in range(level, m, -1):
        acc = acc @ build_Rtilde(T, k, level).mat
    return TensorOperator(d, level, acc)


def chain(T: TensorOperator, m: int, level: int) -> TensorOperator:
    """The product T_1 T_2 ... T_m amplified into the given level
    (identity when m = 0)."""
    _require_level2(T)
    if m < 0 or level < max(m + 1, 1):
        raise ValueError(f"need 0 <= m < level, got m={m}, level={level}")
    d = T.d
    acc = np.eye(d**level, dtype=np.complex128)
    for i in range(1, m + 1):
        acc = acc @ _amp(T, i, level)
    return TensorOperator(d, level, acc)


def _U_mat(T: TensorOperator, n: int, level: int) -> np.ndarray:
    """U_n as a matrix at an ambient level >= n+1 (U_0 = identity)."""
    d = T.d
    acc = np.eye(d**level, dtype=np.complex128)
    for m in range(n, 0, -1):
        acc = acc @ chain(T, m, level).mat
    return acc


def build_U(T: TensorOperator, n: int) -> TensorOperator:
    """U_n = (T_1 ... T_n)(T_1 ... T_{n-1}) ... (T_1 T_2) T_1 on H^(x)(n+1).

    Self-adjoint for braided self-adjoint T (image of the longest group
    element under the quasimultiplicative map).
    """
    _require_level2(T)
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    return TensorOperator(T.d, n + 1, _U_mat(T, n, n + 1))


def factorization_check(
    T: TensorOperator,
    n: int,
    m: int | None = None,
    J: frozenset[int] | set[int] | None = None,
) -> dict:
    """Residual of one of the two product factorizations of P.

    With ``m`` given:  || P_{n+m} - P(D_m) (P_m (x) 1_n) ||_2, both sides
    built independently (recursion vs. the Rt product).
    With ``J`` given:  || P_{n+1} - P(D_J) P(W_J) ||_2, the right side from
    the Coxeter descent-class sums.

    Non-braided input is not rejected; the report flags the residual as
    unreliable instead.
    """
    _require_level2(T)
    if (m is None) == (J is None):
        raise ValueError("exactly one of m, J must be given")
    br = braid_residual(T)
    report: dict = {
        "braid_residual": br,
        "braided": br <= BRAID_TOL,
    }
    d = T.d
    if m is not None:
        lhs = build_P(T, n + m).mat
        rhs = build_PDm(T, n, m).mat @ np.kron(
            build_P(T, m).mat, np.eye(d**n, dtype=np.complex128)
        )
        report["kind"] = "P(Dm)(Pm x 1)"
        report["params"] = {"n": n, "m": m}
    else:
        from . import coxeter

        data = coxeter.descent_data(n, J)
        lhs = build_P(T, n + 1).mat
        rhs = (
            coxeter.partial_sum(T, data.D_J, force=True).mat
            @ coxeter.partial_sum(T, data.W_J, force=True).mat
        )
        report["kind"] = "P(DJ)P(WJ)"
        report["params"] = {"n": n, "J": sorted(J)}
    report["residual"] = _norm2(lhs - rhs)
    return report


def telescoping_residual(T: TensorOperator, n: int) -> float:
    """Residual of the telescoping expansion of 1 - U_n^2 on H^(x)(n+1):

    (1 - T_1^2) + T_1 (1 - T_2^2) T_1 + ... +
    T_1...T_{n-1} (1 - T_n^2) T_{n-1}...T_1 +
    T_1...T_n (1 - U_{n-1}^2) T_n...T_1.
    """
    _require_level2(T)
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    d = T.d
    level = n + 1
    eye = np.eye(d**level, dtype=np.complex128)
    Un = _U_mat(T, n, level)
    lhs = eye - Un @ Un

    def reversed_chain(m: int) -> np.ndarray:
        acc = np.eye(d**level, dtype=np.complex128)
        for i in range(m, 0, -1):
            acc = acc @ _amp(T, i, level)
        return acc

    rhs = np.zeros_like(eye)
    for k in range(1, n + 1):
        tk = _amp(T, k, level)
        rhs = rhs + chain(T, k - 1, level).mat @ (eye - tk @ tk) @ reversed_chain(k - 1)
    Um1 = _U_mat(T, n - 1, level)
    rhs = rhs + chain(T, n, level).mat @ (eye - Um1 @ Um1) @ reversed_chain(n)
    return _norm2(lhs - rhs)
