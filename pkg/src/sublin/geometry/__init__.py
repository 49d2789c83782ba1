from .components import ComponentLabeling, component_closed_in, components
from .distance import DistanceField, distance_to_complement, distance_to_set, squared_edt
from .export import mask_to_json, pgm_bytes, read_pgm, write_pgm
from .grid import BBox, Grid, ladder
from .polynomial import X1, X2, Polynomial
from .region import (
    All,
    Any,
    Const,
    Mask,
    Negation,
    Positive,
    Predicate,
    Region,
    disk,
    gt,
    half_plane,
    lt,
    predicate_from_json,
    region_algebra,
    union_all,
)

__all__ = [
    "All", "Any", "BBox", "ComponentLabeling", "Const", "DistanceField", "Grid", "Mask",
    "Negation", "Polynomial", "Positive", "Predicate", "Region", "X1", "X2",
    "component_closed_in", "components", "disk", "distance_to_complement", "distance_to_set",
    "gt", "half_plane", "ladder", "lt", "mask_to_json", "pgm_bytes", "predicate_from_json",
    "read_pgm", "region_algebra", "squared_edt", "union_all", "write_pgm",
]
