"""Cone-condition certificates for Lipschitz boundaries, cone sums and weakly Lipschitz decompositions."""

from .certificate import (
    DEFAULT_RESOLUTIONS,
    LipschitzCertificate,
    PointRecord,
    Verdict,
    boundary_cells,
    gamma_open_at,
    gamma_open_batch,
    lipschitz_certificate,
    sample_boundary,
)
from .cones import DEFAULT_ANGLES, ConeSpec, cone_steps, default_fan, default_radius
from .sums import ConeSum, WeaklyLipschitzReport, cone_sum, cone_sum_mask, weakly_lipschitz_check

__all__ = [
    "DEFAULT_ANGLES", "DEFAULT_RESOLUTIONS", "ConeSpec", "ConeSum", "LipschitzCertificate", "PointRecord",
    "Verdict", "WeaklyLipschitzReport", "boundary_cells", "cone_steps", "cone_sum", "cone_sum_mask",
    "default_fan", "default_radius", "gamma_open_at", "gamma_open_batch", "lipschitz_certificate",
    "sample_boundary", "weakly_lipschitz_check",
]
