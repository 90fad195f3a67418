from .category import (
    CategoryError,
    FinCategory,
    FunctorData,
    build_category,
    identity_functor,
    is_filtered,
    is_groupoid,
    opposite,
    validate_category,
)
from .io import (
    category_from_dict,
    category_to_dict,
    functor_from_dict,
    functor_to_dict,
    load_category,
    save_category,
)
from .limits import (
    DiagramOracle,
    PullbackSquare,
    PushoutSquare,
    has_all_pullbacks,
    has_all_pushouts,
    limit_of_diagram,
    mediating_from_cocone,
    pullback,
    pushout,
)
from .poset import (
    FinPoset,
    chain_poset,
    poset_as_category,
    poset_from_leq_pairs,
)

__all__ = [
    "CategoryError", "FinCategory", "FunctorData", "build_category",
    "identity_functor", "is_filtered", "is_groupoid", "opposite",
    "validate_category", "category_from_dict", "category_to_dict",
    "functor_from_dict", "functor_to_dict", "load_category", "save_category",
    "DiagramOracle", "PullbackSquare", "PushoutSquare", "has_all_pullbacks",
    "has_all_pushouts", "limit_of_diagram", "mediating_from_cocone",
    "pullback", "pushout", "FinPoset", "chain_poset", "poset_as_category",
    "poset_from_leq_pairs",
]
