"""Numerical laboratory for the hidden conjugate problem.

Builds the coset-state density families of a subgroup's conjugates on
desk-scale finite groups, constructs the pretty good measurement, certifies
its optimality through the semidefinite measurement conditions, and
reproduces the closed-form success probabilities and multiregister bounds.
"""

from .analysis import (
    MultiregisterBound,
    Prediction,
    affine_closed_form,
    core_bound_single,
    dihedral_closed_form,
    multiregister_bound,
    predict,
    predicted_success_single,
)
from .gelfand import HeckeAlgebra, conjugate_stability_check, hecke_algebra, is_gelfand
from .groups import (
    ConjugateFamily,
    DimensionGuardError,
    Group,
    GroupSpecError,
    Subgroup,
    conjugate_family,
    conjugate_subgroup,
    double_cosets,
    group_power,
    left_cosets,
    load_group_json,
    make_group,
    normal_core,
    normalizer,
    parse_subgroup_spec,
    subgroup_generate,
    subgroup_power,
)
from .linalg import (
    eig_hermitian,
    kron,
    loewner_geq,
    power_mean_gap,
    psd_sqrt_pinv,
    rank_eps,
)
from .pgm import (
    POVM,
    OptimalityReport,
    build_pgm,
    capacity_check,
    coarse_family,
    coarse_grain,
    confusion_matrix,
    mixture_eigenblocks,
    success_probability,
    uniform_guess_povm,
    verify_optimality,
)
from .reps import IrrepTable, irrep_table, plancherel_SH, weak_sampling_distribution
from .states import DensityFamily, Mixture, conjugate_density, coset_state, density_family, mixture

__all__ = [
    "MultiregisterBound",
    "Prediction",
    "affine_closed_form",
    "core_bound_single",
    "dihedral_closed_form",
    "multiregister_bound",
    "predict",
    "predicted_success_single",
    "HeckeAlgebra",
    "conjugate_stability_check",
    "hecke_algebra",
    "is_gelfand",
    "ConjugateFamily",
    "DimensionGuardError",
    "Group",
    "GroupSpecError",
    "Subgroup",
    "conjugate_family",
    "conjugate_subgroup",
    "double_cosets",
    "group_power",
    "left_cosets",
    "load_group_json",
    "make_group",
    "normal_core",
    "normalizer",
    "parse_subgroup_spec",
    "subgroup_generate",
    "subgroup_power",
    "eig_hermitian",
    "kron",
    "loewner_geq",
    "power_mean_gap",
    "psd_sqrt_pinv",
    "rank_eps",
    "POVM",
    "OptimalityReport",
    "build_pgm",
    "capacity_check",
    "coarse_family",
    "coarse_grain",
    "confusion_matrix",
    "mixture_eigenblocks",
    "success_probability",
    "uniform_guess_povm",
    "verify_optimality",
    "IrrepTable",
    "irrep_table",
    "plancherel_SH",
    "weak_sampling_distribution",
    "DensityFamily",
    "Mixture",
    "conjugate_density",
    "coset_state",
    "density_family",
    "mixture",
]

__version__ = "0.1.0"
