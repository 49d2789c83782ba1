from .enlarge import SeparationReport, additive_constant, enlarge, separated_shrink
from .lojasiewicz import LojasiewiczFit, fit_lojasiewicz
from .regularity import (
    DEFAULT_LADDER,
    AxisProfile,
    Kind,
    RegularityProfile,
    RegularityVerdict,
    Witness,
    axis_ratio_profile,
    judge_masks,
    judge_one_regular,
    regularity_profile,
    uses_frame,
)
from .shrink import ShrinkParams, ShrinkResult, shrink_masks, shrink_to_regular
from .topology import (
    RegularCoveringReport,
    check_regular_covering,
    closure_covering_restrict,
    f_regular_test,
    judge_covering,
    restrict_covering,
)

__all__ = [
    "DEFAULT_LADDER", "AxisProfile", "Kind", "LojasiewiczFit", "RegularCoveringReport",
    "RegularityProfile", "RegularityVerdict", "SeparationReport", "ShrinkParams", "ShrinkResult",
    "Witness", "additive_constant", "axis_ratio_profile", "check_regular_covering",
    "closure_covering_restrict", "enlarge", "f_regular_test", "fit_lojasiewicz", "judge_covering",
    "judge_masks", "judge_one_regular", "regularity_profile", "restrict_covering",
    "separated_shrink", "shrink_masks", "shrink_to_regular", "uses_frame",
]
