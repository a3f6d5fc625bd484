"""Principal bundles with finite structure group over finite simplicial complexes."""
from .bundles import (
    Cocycle,
    CocycleError,
    apply_gauge,
    gauge_equivalent,
    holonomy,
    pullback,
    pushforward,
    total_space,
    validate_cocycle,
)
from .classifying import (
    algebraically_equivalent,
    classify_bundles,
    classifying_map,
    classifying_stage,
    counit,
    extend_classifying_map,
    milnor_join,
    omega_on_map,
    verify_naturality,
)
from .complex import DeltaComplex, SimplicialComplex, SimplicialMap, are_contiguous, join, quotient_by_action
from .groups import FiniteGroup, FinitelyPresentedGroup, GroupHom, are_conjugate, enumerate_homs
from .kernels import BACKEND
from .loops import EdgePath, edge_path_group, loop_word, reduce, universal_cocycle

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Cocycle", "CocycleError", "DeltaComplex", "EdgePath", "FiniteGroup", "FinitelyPresentedGroup",
    "GroupHom", "SimplicialComplex", "SimplicialMap", "algebraically_equivalent", "apply_gauge",
    "are_conjugate", "are_contiguous", "classify_bundles", "classifying_map", "classifying_stage", "counit",
    "edge_path_group", "enumerate_homs", "extend_classifying_map", "gauge_equivalent", "holonomy", "join",
    "loop_word", "milnor_join", "omega_on_map", "pullback", "pushforward", "quotient_by_action", "reduce",
    "total_space", "universal_cocycle", "validate_cocycle", "verify_naturality",
]
