"""Coulomb gas (log-gas) simulation under weakly confining potentials.

The package covers the desk-scale study of a gas of n particles on the
line or the plane with pairwise logarithmic repulsion at inverse
temperature beta and external potential V:

* model        gas models, potentials, configurations, discrete measures
* geometry     projection onto the Riemann sphere and its exact identities
* energy       pair kernels, discrete energies, Gibbs log-densities
* equilibrium  closed-form limiting laws, grid minimization, optimality
* sampler      Metropolis chains and exact beta = 2 matrix-model samplers
* analysis     goodness-of-fit distances and rate-function gaps
* cli          reproducible runs: sample | equilibrium | verify | analyze
"""

__version__ = "0.1.0"

from .analysis import FitReport, angular_ks_distance, ks_distance, radial_cdf_distance, rate_gap
from .energy import (
    DiagonalPolicy,
    EnergyReport,
    align_measures,
    config_energy,
    kernel_planar,
    kernel_sphere,
    log_density,
    log_density_sphere,
    measure_energy,
    signed_log_energy,
)
from .equilibrium import (
    ClosedFormLaw,
    GridMinimizeReport,
    GridSpec,
    cauchy_law,
    circle_uniform_law,
    closed_form,
    closed_form_cell_masses,
    el_residual,
    fekete_descent,
    grid_minimize,
    reference_energy,
    sphere_uniform_law,
    spherical_law,
)
from .errors import (
    BackendUnavailable,
    CoincidentPoints,
    EmptySample,
    InadmissibleModel,
    LogGasError,
    MismatchedSupports,
    MissingBetaPrime,
    NoClosedForm,
    NoReference,
    ParseError,
    PoleNotInvertible,
    QuadratureFailure,
    ValidationError,
)
from .geometry import (
    POLE,
    CompactifiedPotential,
    SpherePoint,
    chordal_distance,
    compactified_potential,
    project,
    project_array,
    pushforward,
    unproject,
    unproject_array,
)
from .model import (
    Admissibility,
    AdmissibilityReport,
    Configuration,
    DiscreteMeasure,
    GasModel,
    PotentialSpec,
    Support,
    admissibility_check,
    cauchy_potential,
    custom_potential,
    empirical_measure,
    quadratic_potential,
    spherical_potential,
    validate_configuration,
)
from .sampler import (
    ChainParams,
    ChainStats,
    chain_seed,
    mh_chain,
    proposal_log_ratio,
    sample_cauchy_ensemble,
    sample_spherical_ensemble,
    set_eig_backend,
)
from .verify import run_identity_suites
