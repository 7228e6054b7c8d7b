"""Compatibility radii of qubit POVMs and LHS models for Werner states."""

from .bloch import (
    Assemblage,
    QubitEffect,
    QubitPOVM,
    ValidationReport,
    rank1_reduce,
    symmetric_extension,
    validate_povm,
    werner_assemblage,
)
from .bounds import (
    BoundReport,
    fit_scaling_exponent,
    planar_cost_bounds,
    planar_radius_upper,
    simplex_radius_cap,
)
from .constructions import (
    PlatonicKind,
    ThomsonConfig,
    platonic,
    rotsym_planar,
    rotsym_planar_radius_closed_form,
    thomson,
)
from .geometry import OracleConfig, facet_candidates, facet_candidates_planar, objective, sampled_min
from .lhs import LHSModel, build_lhs_werner, decompose_child, planar_response, verify_lhs
from .radius import RadiusResult, compat_radius, compat_radius_sym, inradius_chain_check
from .search import SearchConfig, SearchResult, maximize_radius, sample_povm

__version__ = "0.1.0"

__all__ = [
    "Assemblage", "BoundReport", "LHSModel", "OracleConfig", "PlatonicKind", "QubitEffect",
    "QubitPOVM", "RadiusResult", "SearchConfig", "SearchResult", "ThomsonConfig",
    "ValidationReport", "build_lhs_werner", "compat_radius", "compat_radius_sym",
    "decompose_child", "facet_candidates", "facet_candidates_planar", "fit_scaling_exponent",
    "inradius_chain_check", "maximize_radius", "objective", "planar_cost_bounds",
    "planar_radius_upper", "planar_response", "platonic", "rank1_reduce", "rotsym_planar",
    "rotsym_planar_radius_closed_form", "sample_povm", "sampled_min", "simplex_radius_cap",
    "symmetric_extension", "thomson", "validate_povm", "verify_lhs", "werner_assemblage",
]
