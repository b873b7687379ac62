"""Driven two-level atom in a thermal reservoir.

Closed-form Bloch dynamics, emission spectra, intensity correlations and
dipole squeezing, each cross-checked against an independent master-equation
oracle.  See the ``qdl`` command-line tool for figure replication, parameter
sweeps and the verification suite.
"""

from .core import (
    BlochVector,
    DensityMatrix,
    EigenTriple,
    ExponentialSum,
    Mode,
    SystemParams,
    bloch_from_density,
    density_from_bloch,
    eigentriple,
    validate,
)
from .correlators import (
    G2Curve,
    RegressionProblem,
    StatisticsReport,
    classify_statistics,
    dipole_correlator,
    g2,
    g2_strong,
    regression_solve,
)
from .dynamics import (
    BlochGenerator,
    SteadyState,
    bloch_generator,
    paper_dipole_moment,
    paper_inversion,
    steady_state,
    transient,
)
from .oracle import (
    IntegratorConfig,
    correlator_numeric,
    evolve,
    fourier_numeric,
    lindblad_rhs,
    liouvillian_matrix,
    steady_numeric,
)
from .spectrum import (
    Peak,
    SpectrumDecomposition,
    decompose,
    evaluate,
    incoherent_power,
    mollow_strong,
    peaks,
)
from .squeezing import (
    QuadratureReport,
    UncertaintyRecord,
    quadrature_variances,
    squeezing_scan,
    uncertainty_check,
)

__version__ = "0.1.0"

__all__ = [
    "BlochGenerator",
    "BlochVector",
    "DensityMatrix",
    "EigenTriple",
    "ExponentialSum",
    "G2Curve",
    "IntegratorConfig",
    "Mode",
    "Peak",
    "QuadratureReport",
    "RegressionProblem",
    "SpectrumDecomposition",
    "StatisticsReport",
    "SteadyState",
    "SystemParams",
    "UncertaintyRecord",
    "bloch_from_density",
    "bloch_generator",
    "classify_statistics",
    "correlator_numeric",
    "decompose",
    "density_from_bloch",
    "dipole_correlator",
    "eigentriple",
    "evaluate",
    "evolve",
    "fourier_numeric",
    "g2",
    "g2_strong",
    "incoherent_power",
    "lindblad_rhs",
    "liouvillian_matrix",
    "mollow_strong",
    "paper_dipole_moment",
    "paper_inversion",
    "peaks",
    "quadrature_variances",
    "regression_solve",
    "squeezing_scan",
    "steady_numeric",
    "steady_state",
    "transient",
    "uncertainty_check",
    "validate",
    "__version__",
]
