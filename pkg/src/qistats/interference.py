"""The interference functional and its exact ensemble statistics.

The interference of an ``N x N`` unitary (or orthogonal) operator is

    I(U) = N - sum_{i,k} |U_ik|**4,

bounded by ``0 <= I <= N - 1``: zero for permutations of the computational
basis, maximal when every basis state is spread equally over all basis
states.  This module also provides the exact Haar-measure moments of
matrix-element monomials for both circular ensembles, the closed-form
mean/variance of the interference distribution, and the analytic N=2
density/CDF pairs used as references for empirical distributions.
"""

from __future__ import annotations

from math import exp, lgamma, log, pi

import numpy as np

__all__ = [
    "interference",
    "z_cue",
    "z_hoe",
    "exact_mean",
    "exact_variance",
    "second_moment_s",
    "analytic_density_n2",
    "analytic_cdf_n2",
]

_ENSEMBLES = ("cue", "hoe")


def _check_ensemble(ensemble: str) -> str:
    kind = ensemble.lower()
    if kind not in _ENSEMBLES:
        raise ValueError(f"ensemble must be one of {_ENSEMBLES}, got {ensemble!r}")
    return kind


def interference(u: np.ndarray) -> float:
    """Interference ``N - sum |U_ik|**4`` of a square operator.

    Works for complex and real matrices alike (for real entries the
    modulus is the plain fourth power).
    """
    a = np.asarray(u)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("operator must be a square matrix")
    if np.iscomplexobj(a):
        m2 = a.real * a.real + a.imag * a.imag
    else:
        m2 = a * a
    return float(a.shape[0] - np.sum(m2 * m2))


def _check_moment_triple(m1: int, m2: int, m3: int) -> None:
    for m in (m1, m2, m3):
        if m != int(m) or m < 0:
            raise ValueError("moment orders must be non-negative integers")


def z_cue(dim: int, m1: int, m2: int, m3: int) -> float:
    """Haar moment ``<|U_{i1 j1}|^{2 m1} |U_{i1 j2}|^{2 m2} |U_{i2 j2}|^{2 m3}>`` over U(dim).

    Evaluated in log-gamma space so that large dimensions and orders do
    not overflow.  Requires ``dim >= 2``.
    """
    _check_moment_triple(m1, m2, m3)
    if dim < 2:
        raise ValueError("dim must be at least 2")
    log_val = (
        lgamma(m1 + 1)
        + lgamma(m2 + 1)
        + lgamma(m3 + 1)
        + lgamma(dim - 1)
        + lgamma(dim)
        + lgamma(dim + m1 + m3 - 1)
        - lgamma(dim + m1 - 1)
        - lgamma(dim + m3 - 1)
        - lgamma(dim + m1 + m2 + m3)
    )
    return exp(log_val)


def z_hoe(dim: int, m1: int, m2: int, m3: int) -> float:
    """Haar moment ``<O_{i1 j1}^{m1} O_{i1 j2}^{m2} O_{i2 j2}^{m3}>`` over O(dim).

    All three orders must be even (odd moments vanish by symmetry and the
    closed form does not cover them).  Requires ``dim >= 2``.
    """
    _check_moment_triple(m1, m2, m3)
    if m1 % 2 or m2 % 2 or m3 % 2:
        raise ValueError("orthogonal-ensemble moment orders must all be even")
    if dim < 2:
        raise ValueError("dim must be at least 2")
    log_val = (
        (2 - dim) * log(2.0)
        + lgamma((1 + m1) / 2)
        + lgamma((1 + m2) / 2)
        + lgamma((1 + m3) / 2)
        + lgamma(dim - 1)
        + lgamma((dim + m1 + m3 - 1) / 2)
        - log(pi)
        - lgamma((dim + m1 - 1) / 2)
        - lgamma((dim + m3 - 1) / 2)
        - lgamma((dim + m1 + m2 + m3) / 2)
    )
    return exp(log_val)


def exact_mean(ensemble: str, dim: int) -> float:
    """Exact ensemble average of the interference.

    ``N (1 - 2/(N+1))`` for CUE and ``N (1 - 3/(N+2))`` for HOE; both tend
    to ``N - 2`` and ``N - 3`` respectively for large ``N``.
    """
    kind = _check_ensemble(ensemble)
    if dim < 1:
        raise ValueError("dim must be at least 1")
    if kind == "cue":
        return dim * (1.0 - 2.0 / (dim + 1))
    return dim * (1.0 - 3.0 / (dim + 2))


def exact_variance(ensemble: str, dim: int) -> float:
    """Exact ensemble variance of the interference.

    ``4 (N-1) / ((N+1)^2 (N+3))`` for CUE and
    ``24 N (N-1) / ((N+2)^2 (N^2 + 7N + 6))`` for HOE.
    """
    kind = _check_ensemble(ensemble)
    if dim < 1:
        raise ValueError("dim must be at least 1")
    n = float(dim)
    if kind == "cue":
        return 4.0 * (n - 1) / ((n + 1) ** 2 * (n + 3))
    return 24.0 * n * (n - 1) / ((n + 2) ** 2 * (n * n + 7 * n + 6))


def second_moment_s(ensemble: str, dim: int) -> float:
    """Exact second moment of ``sum_{i,k} |U_ik|**4`` over the ensemble.

    ``4 (N^2 + 2N - 1) / ((N+1)(N+3))`` for CUE and
    ``3N (-4 + 3N(N+5)) / ((N+1)(N+2)(N+6))`` for HOE.
    """
    kind = _check_ensemble(ensemble)
    if dim < 1:
        raise ValueError("dim must be at least 1")
    n = float(dim)
    if kind == "cue":
        return 4.0 * (n * n + 2 * n - 1) / ((n + 1) * (n + 3))
    return 3.0 * n * (-4 + 3 * n * (n + 5)) / ((n + 1) * (n + 2) * (n + 6))


def _checked_unit_interval(value, allow_endpoints: bool):
    v = np.asarray(value, dtype=float)
    if np.any(v < 0.0) or np.any(v > 1.0):
        raise ValueError("interference value outside [0, 1]")
    if not allow_endpoints:
        return v  # caller screens the singular endpoints itself
    return v


def analytic_density_n2(ensemble: str, value) -> np.ndarray | float:
    """Exact interference density at ``N = 2``.

    ``1 / (2 sqrt(1 - I))`` for CUE, ``1 / (pi sqrt(I (1 - I)))`` for HOE.
    The singular endpoints (``I = 1`` for CUE, ``I in {0, 1}`` for HOE)
    are rejected rather than mapped to infinity.
    """
    kind = _check_ensemble(ensemble)
    v = _checked_unit_interval(value, allow_endpoints=False)
    if kind == "cue":
        if np.any(v == 1.0):
            raise ValueError("CUE N=2 density is singular at I = 1")
        out = 0.5 / np.sqrt(1.0 - v)
    else:
        if np.any(v == 0.0) or np.any(v == 1.0):
            raise ValueError("HOE N=2 density is singular at I = 0 and I = 1")
        out = 1.0 / (np.pi * np.sqrt(v * (1.0 - v)))
    return float(out) if np.isscalar(value) else out


def analytic_cdf_n2(ensemble: str, value) -> np.ndarray | float:
    """Exact interference CDF at ``N = 2``.

    ``1 - sqrt(1 - I)`` for CUE and ``(2/pi) arcsin(sqrt(I))`` for HOE;
    both are the antiderivatives of the corresponding densities and cover
    the endpoints.
    """
    kind = _check_ensemble(ensemble)
    v = _checked_unit_interval(value, allow_endpoints=True)
    if kind == "cue":
        out = 1.0 - np.sqrt(1.0 - v)
    else:
        out = (2.0 / np.pi) * np.arcsin(np.sqrt(v))
    return float(out) if np.isscalar(value) else out
