from .engine import (
    DEFAULT_BOUNDARY_CAP,
    PosetBattery,
    enumerate_cat_functors,
    enumerate_poset_functors,
    extend_functor,
    fibrancy_report,
    horn_zero_category,
    rlp_via_kcone,
)
from .kernel import JIT_ENABLED, search_kernel, search_kernel_py
from .problem import (
    BUDGET,
    DEFAULT_BUDGET,
    EXHAUSTED,
    FILLED,
    FibrancyReport,
    HornReport,
    LiftReport,
    LiftingProblem,
)

__all__ = [
    "DEFAULT_BOUNDARY_CAP", "PosetBattery", "enumerate_cat_functors",
    "enumerate_poset_functors", "extend_functor", "fibrancy_report",
    "horn_zero_category", "rlp_via_kcone", "JIT_ENABLED", "search_kernel",
    "search_kernel_py", "BUDGET", "DEFAULT_BUDGET", "EXHAUSTED", "FILLED",
    "FibrancyReport", "HornReport", "LiftReport", "LiftingProblem",
]
