"""Samplers for matrices flat with respect to the Haar measure.

Two ensembles are provided: unitary matrices drawn uniformly from U(N)
(the circular unitary ensemble, CUE) and orthogonal matrices drawn
uniformly from O(N) (the Haar orthogonal ensemble, HOE), together with
the 2x2 unitary sampler used as the single-qubit gate of random circuits
and the Gaussian symmetric matrices (GOE) underlying the HOE construction.

CUE sampling uses QR orthonormalization of a complex Ginibre matrix with
the standard phase correction: column ``j`` of ``Q`` is multiplied by the
unit phase of ``R[j, j]``, which makes the factorization the unique one
with positive diagonal ``R`` and therefore distributes ``Q`` with Haar
measure.  HOE sampling diagonalizes a GOE matrix and randomizes the sign
of each eigenvector column; without the sign randomization the
eigensolver's deterministic sign convention would bias the measure.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

__all__ = [
    "UNITARITY_TOL",
    "unitarity_residual",
    "orthogonality_residual",
    "assert_unitary",
    "assert_orthogonal",
    "draw_u2_angles",
    "u2_from_angles",
    "sample_u2",
    "sample_cue",
    "sample_goe",
    "sample_hoe",
]

#: Largest acceptable max-norm of U^dagger U - I for a sampled operator.
UNITARITY_TOL = 1e-12


def unitarity_residual(u: np.ndarray) -> float:
    """Max-norm of ``U^dagger U - I``."""
    u = np.asarray(u)
    n = u.shape[0]
    return float(np.max(np.abs(u.conj().T @ u - np.eye(n))))


def orthogonality_residual(o: np.ndarray) -> float:
    """Max-norm of ``O^T O - I`` for a real matrix."""
    o = np.asarray(o)
    if np.iscomplexobj(o):
        raise ValueError("orthogonal operators must be real")
    n = o.shape[0]
    return float(np.max(np.abs(o.T @ o - np.eye(n))))


def assert_unitary(u: np.ndarray, tol: float = UNITARITY_TOL) -> None:
    """Raise ``ValueError`` unless ``u`` is unitary within ``tol``."""
    r = unitarity_residual(u)
    if not r <= tol:
        raise ValueError(f"unitarity residual {r:.3e} exceeds tolerance {tol:.1e}")


def assert_orthogonal(o: np.ndarray, tol: float = UNITARITY_TOL) -> None:
    """Raise ``ValueError`` unless ``o`` is real orthogonal within ``tol``."""
    r = orthogonality_residual(o)
    if not r <= tol:
        raise ValueError(f"orthogonality residual {r:.3e} exceeds tolerance {tol:.1e}")


def draw_u2_angles(stream: np.random.Generator) -> tuple[float, float, float, float]:
    """Draw ``(alpha, psi, chi, phi)`` for a Haar-distributed 2x2 unitary.

    ``alpha``, ``psi``, ``chi`` are uniform on ``[0, 2*pi)`` and
    ``phi = arcsin(sqrt(xi))`` with ``xi`` uniform on ``[0, 1)``.
    """
    alpha, psi, chi = 2.0 * np.pi * stream.random(3)
    xi = stream.random()
    phi = float(np.arcsin(np.sqrt(xi)))
    return float(alpha), float(psi), float(chi), phi


def u2_from_angles(alpha: float, psi: float, chi: float, phi: float) -> np.ndarray:
    """Build the 2x2 unitary with the four-angle parametrization.

    Returns ``exp(i*alpha) * [[cos(phi) e^{i psi},  sin(phi) e^{i chi}],
    [-sin(phi) e^{-i chi}, cos(phi) e^{-i psi}]]``.
    """
    c, s = math.cos(phi), math.sin(phi)
    ga = cmath.exp(1j * alpha)
    ep, ec = cmath.exp(1j * psi), cmath.exp(1j * chi)
    return np.array(
        [
            [ga * (c * ep), ga * (s * ec)],
            [ga * (-s * ec.conjugate()), ga * (c * ep.conjugate())],
        ]
    )


def sample_u2(stream: np.random.Generator) -> np.ndarray:
    """Sample a 2x2 unitary flat with respect to the Haar measure of U(2)."""
    return u2_from_angles(*draw_u2_angles(stream))


def sample_cue(dim: int, stream: np.random.Generator) -> np.ndarray:
    """Sample an ``dim x dim`` unitary from the Haar measure of U(dim).

    Parameters
    ----------
    dim : int
        Matrix dimension, at least 1.
    stream : numpy.random.Generator
        Source of randomness; consumes ``2*dim**2`` standard normals.
    """
    if dim < 1:
        raise ValueError("dimension must be at least 1")
    z = stream.standard_normal((dim, dim)) + 1j * stream.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    # Make the decomposition the unique one with positive diagonal R.
    q = q * (d / np.abs(d))
    return q


def sample_goe(dim: int, stream: np.random.Generator) -> np.ndarray:
    """Sample a real symmetric matrix ``(G + G^T) / 2`` with standard normal G."""
    if dim < 1:
        raise ValueError("dimension must be at least 1")
    g = stream.standard_normal((dim, dim))
    return (g + g.T) / 2.0


def sample_hoe(dim: int, stream: np.random.Generator) -> np.ndarray:
    """Sample an ``dim x dim`` orthogonal matrix from the Haar measure of O(dim).

    The eigenvector matrix of a GOE sample is orthogonal; each column is
    then multiplied by an independent random sign.  Eigenvalue ordering
    needs no shuffling (column permutations are absorbed by the right
    invariance of the Haar measure), but the sign randomization is
    mandatory.  Eigensolver non-convergence surfaces as
    ``numpy.linalg.LinAlgError``.
    """
    a = sample_goe(dim, stream)
    _, vectors = np.linalg.eigh(a)
    signs = stream.integers(0, 2, size=dim) * 2 - 1
    return vectors * signs
