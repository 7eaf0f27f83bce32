"""Eigenphase spectra, nearest-neighbor spacings, and reference laws.

Spacings are taken on the circle: an ``N``-phase spectrum yields exactly
``N`` gaps including the wrap-around gap, rescaled by ``N / (2 pi)`` so the
mean spacing is exactly one.  No spectral unfolding is performed; with a
handful of gates the eigenphase density is already flat, and degenerate
phases are kept as zero spacings because the weight at ``s = 0`` is part of
the signal for shallow circuits.

The Wigner surmise ``P_W(s) = (32 s^2 / pi^2) exp(-4 s^2 / pi)`` (with its
closed-form CDF) and the Poisson law ``exp(-s)`` serve as the spacing
references for the circular ensembles and for uncorrelated phases.
"""

from __future__ import annotations

import numpy as np
from scipy.special import erf

__all__ = [
    "eigenphases",
    "spacings",
    "wigner_surmise",
    "wigner_cdf",
    "poisson_law",
    "Histogram",
]

_TWO_PI = 2.0 * np.pi


def eigenphases(u: np.ndarray, modulus_tol: float = 1e-8) -> np.ndarray:
    """Sorted eigenvalue phases of a unitary matrix, each in ``[0, 2 pi)``.

    Uses the dense non-symmetric eigensolver (Hessenberg reduction plus QR
    iteration).  Raises ``ValueError`` if any eigenvalue modulus deviates
    from 1 by more than ``modulus_tol``, which signals a non-unitary
    input; eigensolver non-convergence raises ``numpy.linalg.LinAlgError``.
    """
    eigenvalues = np.linalg.eigvals(np.asarray(u))
    worst = float(np.max(np.abs(np.abs(eigenvalues) - 1.0)))
    if worst > modulus_tol:
        raise ValueError(
            f"eigenvalue modulus deviates from 1 by {worst:.3e}; input is not unitary"
        )
    phases = np.mod(np.angle(eigenvalues), _TWO_PI)
    # mod can round angles just below zero up to the full period
    phases[phases >= _TWO_PI] -= _TWO_PI
    phases.sort()
    return phases


def spacings(phases: np.ndarray) -> np.ndarray:
    """Circular nearest-neighbor gaps of a sorted phase spectrum, unit mean.

    Returns ``N`` spacings whose sum is exactly ``N`` up to rounding; the
    last entry is the wrap-around gap ``phases[0] + 2 pi - phases[-1]``.
    """
    ph = np.asarray(phases, dtype=float)
    n = ph.size
    if n < 2:
        raise ValueError("need at least two phases for spacings")
    gaps = np.empty(n)
    gaps[:-1] = np.diff(ph)
    gaps[-1] = ph[0] + _TWO_PI - ph[-1]
    return gaps * (n / _TWO_PI)


def _check_nonnegative(s) -> np.ndarray:
    arr = np.asarray(s, dtype=float)
    if np.any(arr < 0.0):
        raise ValueError("spacings are non-negative")
    return arr


def wigner_surmise(s) -> np.ndarray:
    """Wigner surmise density ``(32 s^2 / pi^2) exp(-4 s^2 / pi)``."""
    arr = _check_nonnegative(s)
    return (32.0 / np.pi**2) * arr**2 * np.exp(-4.0 * arr**2 / np.pi)


def wigner_cdf(s) -> np.ndarray:
    """Closed-form antiderivative of the Wigner surmise, 0 at 0 and 1 at infinity.

    ``erf(2 s / sqrt(pi)) - (4 s / pi) exp(-4 s^2 / pi)``.
    """
    arr = _check_nonnegative(s)
    return erf(2.0 * arr / np.sqrt(np.pi)) - (4.0 * arr / np.pi) * np.exp(-4.0 * arr**2 / np.pi)


def poisson_law(s) -> np.ndarray:
    """Spacing density ``exp(-s)`` of uncorrelated phases."""
    return np.exp(-_check_nonnegative(s))


class Histogram:
    """Fixed-binning histogram of real values, mergeable across workers.

    Values are tallied into ``bins`` equal-width bins on
    ``[lower, upper]`` (the last bin includes the upper edge); values
    outside the range are counted separately so that the density view
    integrates to the in-range fraction of the total.
    """

    def __init__(self, lower: float, upper: float, bins: int):
        if not upper > lower:
            raise ValueError("upper bound must exceed lower bound")
        if bins < 1:
            raise ValueError("need at least one bin")
        self.lower = float(lower)
        self.upper = float(upper)
        self.bins = int(bins)
        self.counts = np.zeros(self.bins, dtype=np.int64)
        self.out_of_range = 0

    @property
    def edges(self) -> np.ndarray:
        return np.linspace(self.lower, self.upper, self.bins + 1)

    @property
    def bin_width(self) -> float:
        return (self.upper - self.lower) / self.bins

    @property
    def total(self) -> int:
        """All accumulated samples, including out-of-range ones."""
        return int(self.counts.sum()) + self.out_of_range

    def add(self, values) -> "Histogram":
        """Tally ``values`` (any shape) into the histogram."""
        arr = np.asarray(values, dtype=float).ravel()
        counts, _ = np.histogram(arr, bins=self.bins, range=(self.lower, self.upper))
        self.counts += counts
        self.out_of_range += int(arr.size - counts.sum())
        return self

    def same_binning(self, other: "Histogram") -> bool:
        return (
            self.bins == other.bins
            and self.lower == other.lower
            and self.upper == other.upper
        )

    def merge(self, other: "Histogram") -> "Histogram":
        """Fold another histogram with identical binning into this one."""
        if not self.same_binning(other):
            raise ValueError("cannot merge histograms with different binning")
        self.counts += other.counts
        self.out_of_range += other.out_of_range
        return self

    def probabilities(self) -> np.ndarray:
        """Per-bin probability mass (relative to the full total)."""
        if self.total == 0:
            raise ValueError("histogram is empty")
        return self.counts / self.total

    def densities(self) -> np.ndarray:
        """Per-bin density; integrates to the in-range mass fraction."""
        return self.probabilities() / self.bin_width

    def to_csv(self, path, metadata: dict | None = None) -> None:
        """Write ``bin_lower,bin_upper,count,density`` rows with provenance comments.

        ``path`` may also be an open file object.
        """
        edges = self.edges
        if self.total > 0:
            density = self.densities()
        else:
            density = np.zeros(self.bins)
        lines = [
            f"# lower={self.lower!r}",
            f"# upper={self.upper!r}",
            f"# bins={self.bins}",
            f"# out_of_range={self.out_of_range}",
            f"# total={self.total}",
        ]
        for key, value in (metadata or {}).items():
            lines.append(f"# {key}={value}")
        lines.append("bin_lower,bin_upper,count,density")
        for b in range(self.bins):
            lines.append(
                f"{float(edges[b])!r},{float(edges[b + 1])!r},{self.counts[b]},{float(density[b])!r}"
            )
        text = "\n".join(lines) + "\n"
        if hasattr(path, "write"):
            path.write(text)
        else:
            with open(path, "w", newline="") as fh:
                fh.write(text)

    @classmethod
    def from_csv(cls, path) -> "Histogram":
        """Rebuild a histogram written by :meth:`to_csv`."""
        comments: dict[str, str] = {}
        rows: list[tuple[float, float, int]] = []
        with open(path, newline="") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    key, _, value = line[1:].strip().partition("=")
                    comments[key.strip()] = value.strip()
                    continue
                if line.startswith("bin_lower"):
                    continue
                lo, hi, count, _ = line.split(",")
                rows.append((float(lo), float(hi), int(count)))
        if not rows:
            raise ValueError(f"no histogram rows in {path}")
        hist = cls(rows[0][0], rows[-1][1], len(rows))
        hist.counts = np.array([r[2] for r in rows], dtype=np.int64)
        hist.out_of_range = int(comments.get("out_of_range", 0))
        return hist
