"""Sheaves k_V over Q: sections, restrictions, Čech complexes and the germ-of-cusps examples."""

from .cech import (
    MAX_MEMBERS,
    CochainComplex,
    CohomologyReport,
    MVReport,
    cech_complex,
    cohomology,
    inclusion_map,
    mv_check,
    sheaf_mv_check,
)
from .germ import DEFAULT_A_LADDER, GermEvidence, GermVerdict, germ_cusp_F, in_catalog, sheaf_N_sections
from .sections import BasisElement, ConstructibleSheaf, SectionSpace, restriction, restriction_between, sections

__all__ = [
    "BasisElement", "CochainComplex", "CohomologyReport", "ConstructibleSheaf", "DEFAULT_A_LADDER",
    "GermEvidence", "GermVerdict", "MAX_MEMBERS", "MVReport", "SectionSpace", "cech_complex", "cohomology",
    "germ_cusp_F", "in_catalog", "inclusion_map", "mv_check", "restriction", "restriction_between",
    "sections", "sheaf_N_sections", "sheaf_mv_check",
]
