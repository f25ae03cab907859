"""Range-space bases and full-rank factorizations of rational matrices
via descriptor state-space realizations."""

from .exceptions import (
    BoundaryError,
    EvaluationError,
    FactorizationError,
    InputError,
    ParseError,
    RmfactError,
    StructureError,
    VerificationError,
)
from .numkernel import ToleranceConfig, OrderedSchurResult, ordered_generalized_schur, pivoted_qr, rank_revealing_svd
from .dss import (
    DescriptorSystem,
    EigenvalueList,
    conjugate,
    evaluate,
    frequency_grid,
    irreducible_realization,
    make_dss,
    mcmillan_degree,
    normal_rank,
    poles,
    random_nonpole_points,
    series,
    stack_horizontal,
    stack_vertical,
    transpose,
    zeros,
)
from .klf import (
    KlfResult,
    RegionPartition,
    SpecialKlf,
    all_finite_region,
    classify_eigenvalue,
    custom_region,
    kronecker_like_form,
    region_none,
    special_klf,
    stability_region,
)
from .rangebasis import RangeOptions, RangeResult, cofactor, inner_enforcing_gains, range_basis
from .fact import (
    FactorizationResult,
    dual_full_rank_factorize,
    full_rank_factorize,
    inner_outer,
    nrcf,
    pseudo_inverse,
)
from .gallery import polynomial_rank2_discrete, stable_rank2_continuous
from .io import parse_system_file, system_from_dict, system_to_dict, write_system_file

__all__ = [
    "BoundaryError",
    "EvaluationError",
    "FactorizationError",
    "InputError",
    "ParseError",
    "RmfactError",
    "StructureError",
    "VerificationError",
    "ToleranceConfig",
    "OrderedSchurResult",
    "ordered_generalized_schur",
    "pivoted_qr",
    "rank_revealing_svd",
    "DescriptorSystem",
    "EigenvalueList",
    "conjugate",
    "evaluate",
    "frequency_grid",
    "irreducible_realization",
    "make_dss",
    "mcmillan_degree",
    "normal_rank",
    "poles",
    "random_nonpole_points",
    "series",
    "stack_horizontal",
    "stack_vertical",
    "transpose",
    "zeros",
    "KlfResult",
    "RegionPartition",
    "SpecialKlf",
    "all_finite_region",
    "classify_eigenvalue",
    "custom_region",
    "kronecker_like_form",
    "region_none",
    "special_klf",
    "stability_region",
    "RangeOptions",
    "RangeResult",
    "cofactor",
    "inner_enforcing_gains",
    "range_basis",
    "FactorizationResult",
    "dual_full_rank_factorize",
    "full_rank_factorize",
    "inner_outer",
    "nrcf",
    "pseudo_inverse",
    "polynomial_rank2_discrete",
    "stable_rank2_continuous",
    "parse_system_file",
    "system_from_dict",
    "system_to_dict",
    "write_system_file",
]

__version__ = "0.1.0"
