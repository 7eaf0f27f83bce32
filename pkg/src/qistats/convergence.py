"""Distribution distances and convergence-rate fits for circuit ensembles.

The distance between an empirical distribution and its reference is the
squared Hellinger-type quantity

    F = 2 (1 - sum_b sqrt(p_b q_b)),

computed over a common binning and ranging from 0 (identical) to 2
(disjoint).  Analytic references (the Wigner surmise for spacings, the
exact N=2 interference laws) enter through exact per-bin CDF integrals,
never midpoint evaluations.

Convergence of a distance curve ``F(n_g)`` toward zero is quantified by
two fit protocols: spacing distances decay exponentially, so ``ln F`` is
fit linearly in ``n_g`` over the window ``2 >= F >= 0.1``; interference
distances decay like a Gaussian, so ``ln F`` is fit linearly in ``n_g**2``
over ``2 >= F >= 0.01``.  Points below the window (the saturation floor
set by finite sampling) are excluded automatically.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .spectral import Histogram, wigner_cdf

__all__ = [
    "EXPONENTIAL_WINDOW",
    "GAUSSIAN_WINDOW",
    "hellinger_sq",
    "hellinger_sq_stderr",
    "cdf_bin_masses",
    "spacing_distance",
    "interference_distance",
    "DistanceCurve",
    "RateFit",
    "fit_exponential_rate",
    "fit_gaussian_rate",
]

#: Fit windows as (F_high, F_low).
EXPONENTIAL_WINDOW = (2.0, 0.1)
GAUSSIAN_WINDOW = (2.0, 0.01)

#: Default binning for spacing distances.
SPACING_RANGE = (0.0, 5.0)
DEFAULT_BINS = 100


def _bin_masses(dist, other: Histogram | None = None) -> np.ndarray:
    if isinstance(dist, Histogram):
        if other is not None and isinstance(other, Histogram) and not dist.same_binning(other):
            raise ValueError("histograms must share identical binning")
        return dist.probabilities()
    masses = np.asarray(dist, dtype=float)
    if masses.ndim != 1:
        raise ValueError("bin masses must be a 1-d array")
    if np.any(masses < 0) or masses.sum() > 1.0 + 1e-9:
        raise ValueError("bin masses must be non-negative and sum to at most 1")
    return masses


def hellinger_sq(p, q) -> float:
    """Squared Hellinger-type distance ``2 (1 - sum sqrt(p_b q_b))``.

    Arguments may be :class:`Histogram` instances with identical binning
    or plain arrays of per-bin probability masses (each summing to at
    most 1, the deficit being out-of-range mass).
    """
    pm = _bin_masses(p, q if isinstance(q, Histogram) else None)
    qm = _bin_masses(q, p if isinstance(p, Histogram) else None)
    if pm.size != qm.size:
        raise ValueError("bin counts differ")
    value = 2.0 * (1.0 - np.sum(np.sqrt(pm * qm)))
    return float(min(max(value, 0.0), 2.0))


def hellinger_sq_stderr(p, q, n_p: int, n_q: int | None = None) -> float:
    """Delta-method standard error of :func:`hellinger_sq` under multinomial sampling.

    ``n_p`` is the sample count behind ``p``; pass ``n_q`` as well when
    ``q`` is itself empirical rather than an exact reference.
    """
    pm = _bin_masses(p)
    qm = _bin_masses(q)
    affinity = float(np.sum(np.sqrt(pm * qm)))
    var = max(float(qm.sum()) - affinity**2, 0.0) / n_p
    if n_q is not None:
        var += max(float(pm.sum()) - affinity**2, 0.0) / n_q
    return float(np.sqrt(var))


def cdf_bin_masses(cdf, edges: np.ndarray) -> np.ndarray:
    """Exact per-bin masses of an analytic law from its CDF at the bin edges."""
    values = np.asarray(cdf(np.asarray(edges, dtype=float)))
    return np.diff(values)


def spacing_distance(spacing_values, bins: int = DEFAULT_BINS) -> float:
    """Distance of a spacing sample from the Wigner surmise.

    Bins the pooled spacings on ``[0, 5]`` (surmise mass beyond 5 is
    ~2e-14 and lands in the out-of-range deficit) and compares against
    the exact per-bin surmise integrals.  Requires at least 1000 values.
    """
    values = np.asarray(spacing_values, dtype=float).ravel()
    if values.size < 1000:
        raise ValueError(f"need at least 1000 spacing values, got {values.size}")
    hist = Histogram(*SPACING_RANGE, bins)
    hist.add(values)
    reference = cdf_bin_masses(wigner_cdf, hist.edges)
    return hellinger_sq(hist, reference)


def interference_distance(circuit_hist: Histogram, reference_hist: Histogram) -> float:
    """Distance between empirical interference histograms with shared binning."""
    return hellinger_sq(circuit_hist, reference_hist)


@dataclass
class DistanceCurve:
    """Distance values ``F`` against gate count ``n_g`` for one ensemble."""

    points: list[tuple[int, float]]
    metadata: dict = field(default_factory=dict)
    stderrs: list[float] | None = None

    def __post_init__(self):
        gate_counts = [p[0] for p in self.points]
        if any(b <= a for a, b in zip(gate_counts, gate_counts[1:])):
            raise ValueError("gate counts must be strictly increasing")
        for _, f in self.points:
            if not 0.0 <= f <= 2.0:
                raise ValueError(f"distance {f} outside [0, 2]")
        if self.stderrs is not None and len(self.stderrs) != len(self.points):
            raise ValueError("one stderr per point required")

    def gate_counts(self) -> np.ndarray:
        return np.array([p[0] for p in self.points])

    def distances(self) -> np.ndarray:
        return np.array([p[1] for p in self.points])

    def to_csv(self, path, metadata: dict | None = None) -> None:
        """Write ``n_g,F,stderr`` rows with provenance comments."""
        comments = dict(self.metadata)
        comments.update(metadata or {})
        errs = self.stderrs if self.stderrs is not None else [float("nan")] * len(self.points)
        lines = [f"# {k}={v}" for k, v in comments.items()]
        lines.append("n_g,F,stderr")
        for (n_g, f), err in zip(self.points, errs):
            lines.append(f"{int(n_g)},{float(f)!r},{float(err)!r}")
        with open(path, "w", newline="") as fh:
            fh.write("\n".join(lines) + "\n")

    @classmethod
    def from_csv(cls, path) -> "DistanceCurve":
        metadata: dict = {}
        points: list[tuple[int, float]] = []
        stderrs: list[float] = []
        with open(path, newline="") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    key, _, value = line[1:].strip().partition("=")
                    metadata[key.strip()] = value.strip()
                    continue
                if line.startswith("n_g"):
                    continue
                n_g, f, err = line.split(",")
                points.append((int(n_g), float(f)))
                stderrs.append(float(err))
        return cls(points, metadata, stderrs)


@dataclass
class RateFit:
    """Result of a log-linear decay fit of a distance curve.

    ``rate`` is the decay constant (the exponential rate for spacing
    curves, the Gaussian rate for interference curves) and ``intercept``
    the fitted ``ln F`` at zero gates.  ``residual`` is the RMS of the
    ``ln F`` residuals over the ``points_used`` in-window points and
    ``window`` records ``(F_high, F_low)``.
    """

    kind: str
    intercept: float
    rate: float
    rate_stderr: float
    residual: float
    points_used: int
    window: tuple[float, float]

    def to_csv(self, path, metadata: dict | None = None) -> None:
        """Write a ``kind,param1,param2,residual,points_used,F_high,F_low`` row."""
        lines = [f"# {k}={v}" for k, v in (metadata or {}).items()]
        lines.append("kind,param1,param2,residual,points_used,F_high,F_low")
        lines.append(
            f"{self.kind},{float(self.intercept)!r},{float(self.rate)!r},{float(self.residual)!r},"
            f"{self.points_used},{float(self.window[0])!r},{float(self.window[1])!r}"
        )
        with open(path, "w", newline="") as fh:
            fh.write("\n".join(lines) + "\n")


def _least_squares_line(x: np.ndarray, y: np.ndarray):
    """Slope/intercept fit with the standard parameter error and RMS residual."""
    design = np.column_stack([np.ones(x.size), x])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ coef
    rms = float(np.sqrt(np.mean(resid**2)))
    if x.size > 2:
        sigma2 = float(resid @ resid) / (x.size - 2)
        cov = sigma2 * np.linalg.inv(design.T @ design)
        slope_stderr = float(np.sqrt(cov[1, 1]))
    else:
        slope_stderr = 0.0
    return float(coef[1]), float(coef[0]), slope_stderr, rms


def _windowed_fit(curve: DistanceCurve, window, transform, kind: str) -> RateFit:
    f_high, f_low = window
    gate_counts = curve.gate_counts()
    distances = curve.distances()
    mask = (distances >= f_low) & (distances <= f_high)
    if int(mask.sum()) < 2:
        raise ValueError(
            f"need at least 2 points with F in [{f_low}, {f_high}], got {int(mask.sum())}"
        )
    x = transform(gate_counts[mask].astype(float))
    y = np.log(distances[mask])
    slope, intercept, slope_stderr, rms = _least_squares_line(x, y)
    return RateFit(
        kind=kind,
        intercept=intercept,
        rate=-slope,
        rate_stderr=slope_stderr,
        residual=rms,
        points_used=int(mask.sum()),
        window=(f_high, f_low),
    )


def fit_exponential_rate(curve: DistanceCurve) -> RateFit:
    """Fit ``ln F = intercept - rate * n_g`` over the window ``2 >= F >= 0.1``."""
    return _windowed_fit(curve, EXPONENTIAL_WINDOW, lambda g: g, "exponential")


def fit_gaussian_rate(curve: DistanceCurve) -> RateFit:
    """Fit ``ln F = intercept - rate * n_g**2`` over the window ``2 >= F >= 0.01``."""
    return _windowed_fit(curve, GAUSSIAN_WINDOW, lambda g: g**2, "gaussian")
