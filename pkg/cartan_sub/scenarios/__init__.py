"""Curvature dictionaries, certificates and theorem verifiers."""
from .certificate import (
    check_certificate,
    finish,
    linear_system,
    load_certificate,
    replay_certificate,
    write_certificate,
)
from .dictionary import (
    CONTRACTIONS,
    WEYL_TRIVIAL,
    CurvatureDictionary,
    born_rigid_dictionary,
    contractions,
    curvature_dictionary,
    fluid_lines,
    random_assignment_oracle,
    scale_curvature_contraction,
    verify_dictionary_consistency,
    weyl_component,
)
from .ellis import ellis_geodesic, ellis_irrotational
from .herglotz import herglotz_noether_conformal, herglotz_noether_homogeneous, nonzero_for_all_n
from .killing import (
    ChainResult,
    derivation_chain,
    killing_chain,
    killing_criteria,
    semi_killing_chain,
    semi_killing_lift,
)
from .shear_free import ShearFreeReduction, shear_free_reduction

THEOREMS = {
    "herglotz-homogeneous": herglotz_noether_homogeneous,
    "herglotz-conformal": herglotz_noether_conformal,
    "ellis-irrotational": ellis_irrotational,
    "ellis-geodesic": ellis_geodesic,
}

__all__ = [
    # Certificates
    "check_certificate",
    "finish",
    "linear_system",
    "load_certificate",
    "replay_certificate",
    "write_certificate",

    # Dictionaries
    "CONTRACTIONS",
    "WEYL_TRIVIAL",
    "CurvatureDictionary",
    "born_rigid_dictionary",
    "contractions",
    "curvature_dictionary",
    "fluid_lines",
    "random_assignment_oracle",
    "scale_curvature_contraction",
    "verify_dictionary_consistency",
    "weyl_component",

    # Theorems
    "THEOREMS",
    "ellis_geodesic",
    "ellis_irrotational",
    "herglotz_noether_conformal",
    "herglotz_noether_homogeneous",
    "nonzero_for_all_n",

    # Killing fields
    "ChainResult",
    "derivation_chain",
    "killing_chain",
    "killing_criteria",
    "semi_killing_chain",
    "semi_killing_lift",
    "ShearFreeReduction",
    "shear_free_reduction",
]
