"""Information-geometric measures: variance, f-variance, metric adjusted
skew information, the U quantity, and the monotone-metric Fisher structure.

All spectral sums run over ordered eigenvalue pairs (i, j).  Pairs with both
eigenvalues zero never contribute (every weight vanishes there), so the sums
are organized around the support of the density matrix; this keeps rank-one
states at large dimension cheap without a second code path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linops import (
    DensityMatrix,
    DimensionMismatchError,
    ValidationError,
    entries_of,
)
from .monotone import ScalarFunction, f_tilde, mean_matrix


class SingularMetricError(ValidationError):
    """The monotone metric is singular for this (state, operator) pair."""


def _check_dims(rho: DensityMatrix, x) -> np.ndarray:
    m = entries_of(x)
    if m.shape != (rho.dim, rho.dim):
        raise DimensionMismatchError(
            f"operator shape {m.shape} does not match state dim {rho.dim}"
        )
    return m


def _support_rows(rho: DensityMatrix, x: np.ndarray):
    """Eigenbasis matrix elements X[i, j] for all rows i and support columns j.

    Returns (support indices, G) with G[i, k] = <i|X|sup[k]> in the eigenbasis
    of rho.  Cost O(n^2 * rank), so rank-one states stay cheap.
    """
    p = rho.eigenvalues
    v = rho.eigenvectors
    sup = np.flatnonzero(p > 0.0)
    g = v.conj().T @ (x @ v[:, sup])
    return sup, g


def _pair_quadratic_sum(rho: DensityMatrix, x: np.ndarray, weight) -> float:
    """Sum_{i,j} w(p_i, p_j) |<i|X|j>|^2 for Hermitian X.

    ``weight(p_rows, p_cols)`` must return the matrix w[i, j] and must vanish
    when both arguments are zero.  Ordered pairs (i, j) with j in the support
    come from G directly; pairs with i in the support and j in the kernel use
    |X_ij| = |X_ji|; kernel-kernel pairs contribute nothing.
    """
    p = rho.eigenvalues
    sup, g = _support_rows(rho, x)
    if sup.size == 0:
        return 0.0
    absq = np.abs(g) ** 2
    total = float(np.sum(weight(p, p[sup]) * absq))
    ker = np.flatnonzero(p == 0.0)
    if ker.size:
        w_i0 = weight(p[sup], np.zeros(1))[:, 0]
        total += float(np.sum(w_i0 * np.sum(absq[ker, :], axis=0)))
    return total


def variance(rho: DensityMatrix, a) -> float:
    """V(A) = Tr[rho A^2] - Tr[rho A]^2."""
    m = _check_dims(rho, a)
    p = rho.eigenvalues
    sup, g = _support_rows(rho, m)
    ps = p[sup]
    second = float(np.sum(ps * np.sum(np.abs(g) ** 2, axis=0)))
    first = float(np.real(np.sum(ps * g[sup, np.arange(sup.size)])))
    return second - first * first


def expectation(rho: DensityMatrix, a) -> float:
    m = _check_dims(rho, a)
    return float(np.real(np.sum(rho.entries * m.T)))


def f_variance(rho: DensityMatrix, a, f: ScalarFunction) -> float:
    """V^f(A) = sum_ij m_f(p_i, p_j) |<i|A_0|j>|^2 with A_0 = A - <A> 1.

    Coincides with the ordinary variance when f is the arithmetic mean
    ('sld'); never exceeds it for the built-in functions.
    """
    m = _check_dims(rho, a)
    a0 = m - expectation(rho, a) * np.eye(rho.dim)
    return _pair_quadratic_sum(rho, a0, lambda pr, pc: mean_matrix(f, pr, pc))


def _skew_weight(f: ScalarFunction):
    """w(x, y) = (f0/2) (x-y)^2 / m_f(x, y), with the exact boundary value
    w(x, 0) = x/2 (independent of f) and w(0, 0) = 0."""
    f0 = f.f0

    def weight(pr, pc):
        x = np.asarray(pr, dtype=float)[:, None]
        y = np.asarray(pc, dtype=float)[None, :]
        mf = mean_matrix(f, pr, pc)
        with np.errstate(divide="ignore", invalid="ignore"):
            w = 0.5 * f0 * (x - y) ** 2 / mf
        boundary = np.where(x + y > 0, (x + y) / 2.0, 0.0)
        return np.where(mf > 0, w, np.where(x * y == 0, boundary, 0.0))

    return weight


def skew_information(rho: DensityMatrix, a, f: ScalarFunction) -> float:
    """Metric adjusted skew information
    I^f(A) = (f(0)/2) sum_ij (p_i - p_j)^2 / m_f(p_i, p_j) |<i|A|j>|^2.

    Vanishes when [rho, A] = 0 and equals the variance on pure states.
    """
    m = _check_dims(rho, a)
    return _pair_quadratic_sum(rho, m, _skew_weight(f))


def u_quantity(rho: DensityMatrix, a, f: ScalarFunction) -> float:
    """U^f(A) = sqrt(V^2 - (V - I^f)^2)."""
    v = variance(rho, a)
    i = skew_information(rho, a, f)
    radicand = v * v - (v - i) ** 2
    if radicand < -1e-10:
        raise ValidationError(
            f"U^f radicand {radicand!r} below -1e-10; upstream numerical failure"
        )
    return float(np.sqrt(max(radicand, 0.0)))


def u_quantity_via_identity(rho: DensityMatrix, a, f: ScalarFunction) -> float:
    """Independent route U^f = sqrt(I^f (V + V^{f~})) used as a cross-check."""
    i = skew_information(rho, a, f)
    v = variance(rho, a)
    vt = f_variance(rho, a, f_tilde(f))
    return float(np.sqrt(max(i * (v + vt), 0.0)))


# ---------------------------------------------------------------------------
# monotone-metric Fisher structure


def tangent(rho: DensityMatrix, a) -> np.ndarray:
    """d/dt e^{-iAt} rho e^{iAt} at t = 0, i.e. -i[A, rho]."""
    m = _check_dims(rho, a)
    r = rho.entries
    return -1j * (m @ r - r @ m)


def l_operator(rho: DensityMatrix, a, f: ScalarFunction) -> np.ndarray:
    """Solve m_f(L_rho, R_rho)(L) = -i[A, rho] for L.

    In the eigenbasis L_ij = -i (p_j - p_i) A_ij / m_f(p_i, p_j); entries with
    p_i = p_j are zero.  Raises SingularMetricError if A couples directions
    where the mean vanishes but the eigenvalues differ (possible only when
    f(0) = 0).
    """
    m = _check_dims(rho, a)
    p = rho.eigenvalues
    v = rho.eigenvectors
    ae = v.conj().T @ m @ v
    mf = mean_matrix(f, p, p)
    diff = p[None, :] - p[:, None]
    scale = max(1.0, float(np.max(np.abs(ae))))
    singular = (mf == 0.0) & (diff != 0.0) & (np.abs(ae) > 1e-14 * scale)
    if np.any(singular):
        i, j = np.argwhere(singular)[0]
        raise SingularMetricError(
            f"metric vanishes on coupled eigenvalue pair ({p[i]!r}, {p[j]!r})"
        )
    with np.errstate(divide="ignore", invalid="ignore"):
        le = -1j * diff * ae / mf
    le = np.where((diff != 0.0) & (mf > 0.0), le, 0.0)
    return v @ le @ v.conj().T


def fisher_inner(rho: DensityMatrix, x, y, f: ScalarFunction) -> complex:
    """Monotone-metric inner product <X, Y> = Tr[X^dag m_f(L,R)(Y)],
    evaluated as sum_ij m_f(p_i, p_j) conj(X_ij) Y_ij in the eigenbasis."""
    mx = _check_dims(rho, x)
    my = _check_dims(rho, y)
    p = rho.eigenvalues
    v = rho.eigenvectors
    xe = v.conj().T @ mx @ v
    ye = v.conj().T @ my @ v
    mf = mean_matrix(f, p, p)
    return complex(np.sum(mf * np.conj(xe) * ye))


def fisher_information(rho: DensityMatrix, a, f: ScalarFunction) -> float:
    """F^f = <L, L> along the unitary family generated by A.

    Satisfies I^f = (f(0)/2) F^f; both sides are computed through different
    paths so the identity stays a meaningful check.
    """
    l = l_operator(rho, a, f)
    return float(np.real(fisher_inner(rho, l, l, f)))


# ---------------------------------------------------------------------------
# report type


@dataclass(frozen=True)
class MeasureReport:
    """Variance, f-variance, skew information, and U for one (rho, A, f)."""

    v: float
    vf: float
    skew: float
    u: float
    f_name: str

    def to_json(self) -> dict:
        return {
            "v": self.v,
            "vf": self.vf,
            "skew": self.skew,
            "u": self.u,
            "f_name": self.f_name,
        }


def measure_report(rho: DensityMatrix, a, f: ScalarFunction) -> MeasureReport:
    """Compute all four measures and enforce their mutual orderings."""
    v = variance(rho, a)
    vf = f_variance(rho, a, f)
    skew = skew_information(rho, a, f)
    u = u_quantity(rho, a, f)
    if not (-1e-10 <= skew <= v + 1e-10):
        raise ValidationError(f"skew information {skew!r} outside [0, V={v!r}]")
    if vf > v + 1e-10:
        raise ValidationError(f"f-variance {vf!r} exceeds variance {v!r}")
    if u < skew - 1e-10:
        raise ValidationError(f"U quantity {u!r} below skew information {skew!r}")
    return MeasureReport(v=v, vf=vf, skew=skew, u=u, f_name=f.name)
