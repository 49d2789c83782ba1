"""Connected components of masks and the closed-in test used for sheaf sections."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from ..errors import ConfigurationError
from .region import Mask

_STRUCTURES = {4: ndimage.generate_binary_structure(2, 1), 8: np.ones((3, 3), bool)}


@dataclass(frozen=True, eq=False)
class ComponentLabeling:
    """labels[j, i] in 1..count for cells of ``source``; 0 elsewhere.

    Labels are numbered by the raster-scan position of each component's first cell.
    """

    source: Mask
    labels: np.ndarray
    count: int
    connectivity: int

    def component(self, label: int) -> Mask:
        return Mask(self.source.grid, self.labels == label)

    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels.ravel(), minlength=self.count + 1)[1:]


def components(mask: Mask, connectivity: int = 8) -> ComponentLabeling:
    if connectivity not in _STRUCTURES:
        raise ConfigurationError("connectivity must be 4 or 8")
    raw, count = ndimage.label(mask.bits, structure=_STRUCTURES[connectivity])
    # renumber by first appearance in raster order so bases are deterministic
    flat = raw.ravel()
    firsts, index = np.unique(flat, return_index=True)
    order = firsts[np.argsort(index)]
    order = order[order != 0]
    remap = np.zeros(count + 1, dtype=np.int32)
    remap[order] = np.arange(1, len(order) + 1, dtype=np.int32)
    labels = remap[raw]
    labels.setflags(write=False)
    return ComponentLabeling(mask, labels, int(count), connectivity)


def component_closed_in(labeling: ComponentLabeling, label: int, ambient: Mask) -> bool:
    """True iff the one-cell dilation of the component meets ``ambient`` only inside it."""
    if not labeling.source.subset_of(ambient):
        raise ConfigurationError("labelled mask must lie inside the ambient mask")
    comp = labeling.labels == label
    grown = ndimage.binary_dilation(comp, structure=_STRUCTURES[8])
    return not (grown & ambient.bits & ~comp).any()
