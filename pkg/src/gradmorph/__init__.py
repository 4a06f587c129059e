"""Gradual transformation planners for graph solutions.

Plans bounded-phase transformations between matchings (cardinality and
weight) and spanning forests, verifies them by replay, wraps dynamic
matching algorithms to bound their worst-case recourse, and generates
adversarial update streams witnessing the matching recourse lower bound.
"""

from .graph import (BudgetError, ContractError, DataError, DeltaReport,
                    Error, Graph, Matching, SolutionStats, SpanningForest,
                    UpdateEvent, ValidityReport, edge_set_stats,
                    solution_stats, validate_forest, validate_matching)
from .script import (Boundary, ChangeOp, GuaranteeResult, Phase,
                     ReplayReport, TransformationScript, check_guarantee,
                     replay)
from .mcm import EdgeClassification, classify, plan_mcm, MCM_PHASE_BUDGET
from .mwm import (AlternatingComponent, decompose, mwm_phase_budget,
                  order_components, plan_mwm, plan_mwm_auto,
                  prefix_min_index, replace_blue_red)
from .msf import (CrossEdgeHeap, TreeTransformState, min_weight_cross_edge,
                  plan_msf, plan_tree, MSF_PHASE_BUDGET)
from .dynforest import (HAVE_COMPILED_CORE, LinkCutForestIndex,
                        NaiveForestIndex, make_index)
from .oracles import (OracleBudget, exhaustive_transform_search,
                      has_augmenting_path, max_matching_exact,
                      max_weight_matching_exact, msf_exact)
from .wrapper import (BatchRecompute, GreedyMaximalMatching, InnerAlgorithm,
                      OutputDelta, WrappedMatching, wrap)
from .adversary import (gen_fully_dynamic, run_decremental_mirror,
                        run_incremental_adversary)

__version__ = "0.1.0"

__all__ = [
    "BudgetError", "ContractError", "DataError", "DeltaReport", "Error",
    "Graph", "Matching", "SolutionStats", "SpanningForest", "UpdateEvent",
    "ValidityReport", "edge_set_stats", "solution_stats", "validate_forest",
    "validate_matching", "Boundary", "ChangeOp", "GuaranteeResult", "Phase",
    "ReplayReport", "TransformationScript", "check_guarantee", "replay",
    "EdgeClassification", "classify", "plan_mcm", "MCM_PHASE_BUDGET",
    "AlternatingComponent", "decompose", "mwm_phase_budget",
    "order_components", "plan_mwm", "plan_mwm_auto", "prefix_min_index",
    "replace_blue_red", "CrossEdgeHeap", "TreeTransformState",
    "min_weight_cross_edge", "plan_msf", "plan_tree", "MSF_PHASE_BUDGET",
    "HAVE_COMPILED_CORE", "LinkCutForestIndex", "NaiveForestIndex",
    "make_index", "OracleBudget", "exhaustive_transform_search",
    "has_augmenting_path", "max_matching_exact", "max_weight_matching_exact",
    "msf_exact", "BatchRecompute", "GreedyMaximalMatching", "InnerAlgorithm",
    "OutputDelta", "WrappedMatching", "wrap", "gen_fully_dynamic",
    "run_decremental_mirror", "run_incremental_adversary", "__version__",
]
