"""Feasibility checks, synthesis and simulation of unitary comparators and sorters."""

from .errors import QOrderError
from .feasibility import (
    FeasibilityReport,
    PartialIsometrySpec,
    Verdict,
    Violation,
    comparator_feasible,
    sorter_feasible,
    unitary_extension_feasible,
)
from .linalg import (
    GramMatrix,
    StateVector,
    UnitaryMatrix,
    complete_to_unitary,
    gram_matrix,
    inner_product,
    is_unitary,
    tensor,
)
from .ordering import OrderedStateSet, Ordering, SetClass, Valuation, classify_set, compare_by_index, valuation
from .simulator import (
    CompositeState,
    apply,
    apply_local,
    decode_register,
    flag_distribution,
    run_compare,
    run_sort,
    simulate_sort,
)
from .synthesis import ComparatorCircuit, SorterCircuit, build_compare_swap, build_comparator, build_sorter

__version__ = "0.1.0"
