"""Qubit-qutrit dissipative dynamics and entanglement sudden death analysis."""

from .dynamics import (
    DecayRates,
    MixedFamilyParams,
    StateFamily,
    Trajectory,
    asymptotic_state,
    dissipator,
    evolve_mixed_analytic,
    evolve_numeric,
    evolve_phi1_analytic,
    evolve_phi2_analytic,
    interference_k,
    lindblad_superoperator,
    mixed_family_density,
    negativity_mixed_closed,
    negativity_phi1_closed,
    negativity_phi2_closed,
)
from .esd import (
    ASYMPTOTIC,
    INITIALLY_SEPARABLE,
    SUDDEN_DEATH,
    BoundaryScan,
    EsdReport,
    NonmonotoneScanError,
    RevivalError,
    classify,
    death_time,
    scan_beta_boundary,
    scan_c_boundary,
)
from .states import (
    BASIS_LABELS,
    DIM,
    SchmidtForm,
    basis_index,
    hermitian_eigenvalues,
    is_separable,
    negativity,
    negativity_invariant,
    partial_transpose,
    pure_pt_spectrum,
    pure_to_density,
    schmidt_decompose,
)

__version__ = "0.1.0"

__all__ = [
    "ASYMPTOTIC",
    "BASIS_LABELS",
    "BoundaryScan",
    "DecayRates",
    "DIM",
    "EsdReport",
    "INITIALLY_SEPARABLE",
    "MixedFamilyParams",
    "NonmonotoneScanError",
    "RevivalError",
    "SchmidtForm",
    "StateFamily",
    "SUDDEN_DEATH",
    "Trajectory",
    "asymptotic_state",
    "basis_index",
    "classify",
    "death_time",
    "dissipator",
    "evolve_mixed_analytic",
    "evolve_numeric",
    "evolve_phi1_analytic",
    "evolve_phi2_analytic",
    "hermitian_eigenvalues",
    "interference_k",
    "is_separable",
    "lindblad_superoperator",
    "mixed_family_density",
    "negativity",
    "negativity_invariant",
    "negativity_mixed_closed",
    "negativity_phi1_closed",
    "negativity_phi2_closed",
    "partial_transpose",
    "pure_pt_spectrum",
    "pure_to_density",
    "scan_beta_boundary",
    "scan_c_boundary",
    "schmidt_decompose",
]
