"""Interference and eigenphase-spacing statistics of random quantum circuits.

The package samples random operators from four ensembles — Haar-flat
unitary (CUE) and orthogonal (HOE) matrices, and random gate-sequence
circuits converging to them (UCE, OCE) — and measures their interference
and nearest-neighbor eigenphase spacings.  Exact closed forms (ensemble
moments, the N=2 interference laws, the Wigner surmise) serve as
references, and squared Hellinger distances with exponential/Gaussian
rate fits quantify how quickly the circuit ensembles converge to the
circular ones.  The ``qistats`` command line exposes the whole pipeline
with reproducible seeded output.
"""

from .circuits import (
    CircuitEnsembleConfig,
    CircuitSpec,
    CnotGate,
    HadamardGate,
    ToffoliGate,
    U2Gate,
    apply_gate_in_place,
    circuit_from_text,
    circuit_to_text,
    draw_circuit,
    realize_circuit,
)
from .convergence import (
    DistanceCurve,
    RateFit,
    cdf_bin_masses,
    fit_exponential_rate,
    fit_gaussian_rate,
    hellinger_sq,
    interference_distance,
    spacing_distance,
)
from .haar import (
    assert_orthogonal,
    assert_unitary,
    orthogonality_residual,
    sample_cue,
    sample_goe,
    sample_hoe,
    sample_u2,
    u2_from_angles,
    unitarity_residual,
)
from .interference import (
    analytic_cdf_n2,
    analytic_density_n2,
    exact_mean,
    exact_variance,
    interference,
    second_moment_s,
    z_cue,
    z_hoe,
)
from .spectral import Histogram, eigenphases, poisson_law, spacings, wigner_cdf, wigner_surmise
from .streams import substream

__version__ = "0.1.0"

__all__ = [
    "CircuitEnsembleConfig",
    "CircuitSpec",
    "CnotGate",
    "DistanceCurve",
    "HadamardGate",
    "Histogram",
    "RateFit",
    "ToffoliGate",
    "U2Gate",
    "analytic_cdf_n2",
    "analytic_density_n2",
    "apply_gate_in_place",
    "assert_orthogonal",
    "assert_unitary",
    "cdf_bin_masses",
    "circuit_from_text",
    "circuit_to_text",
    "draw_circuit",
    "eigenphases",
    "exact_mean",
    "exact_variance",
    "fit_exponential_rate",
    "fit_gaussian_rate",
    "hellinger_sq",
    "interference",
    "interference_distance",
    "orthogonality_residual",
    "poisson_law",
    "realize_circuit",
    "sample_cue",
    "sample_goe",
    "sample_hoe",
    "sample_u2",
    "second_moment_s",
    "spacing_distance",
    "spacings",
    "substream",
    "u2_from_angles",
    "unitarity_residual",
    "wigner_cdf",
    "wigner_surmise",
    "z_cue",
    "z_hoe",
]
