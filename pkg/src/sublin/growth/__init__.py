"""Growth of functions at the boundary: temperate and Gevrey classes, cutoffs, harmonic estimates."""

from .classes import (
    DEFAULT_H_LADDER,
    DEFAULT_LADDER,
    MARGIN,
    ExponentFit,
    GevreyCheck,
    GrowthReport,
    gevrey_membership,
    temperate_order_estimate,
    weighted_sup_norm,
)
from .cutoff import CutoffReport, chi, cutoff, cutoff_field, separated_closed_sets, smoothstep
from .functions import FieldFunction, TestFunction, derivative, laplacian, multi_indices, stencil
from .harmonic import HarmonicReport, HarmonicRow, harmonic_estimate_check

__all__ = [
    "DEFAULT_H_LADDER",
    "DEFAULT_LADDER",
    "MARGIN",
    "CutoffReport",
    "ExponentFit",
    "FieldFunction",
    "GevreyCheck",
    "GrowthReport",
    "HarmonicReport",
    "HarmonicRow",
    "TestFunction",
    "chi",
    "cutoff",
    "cutoff_field",
    "derivative",
    "gevrey_membership",
    "harmonic_estimate_check",
    "laplacian",
    "multi_indices",
    "separated_closed_sets",
    "smoothstep",
    "stencil",
    "temperate_order_estimate",
    "weighted_sup_norm",
]
