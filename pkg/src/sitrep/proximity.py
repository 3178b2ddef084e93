"""Signed, bounded proximity between two semantic features.

The semantic component (ontology table, [-1, 1]) is attenuated by spatial and
temporal factors in [0, 1], so distance and time gaps can only mute a
relation, never flip its sign. Far-apart or long-separated events end up
independent (combined 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .features import SemanticFeature
from .ontology import Ontology

# spatial factor used when either side has no usable localisation:
# discounted but not muted, so heard-only events still relate
UNKNOWN_LOCATION_FACTOR = 0.5

KERNELS = ("linear", "exponential")

# intensity tokens that assert an actually ongoing phenomenon
_INACTIVE_INTENSITIES = frozenset({"none", "unknown"})


@dataclass(frozen=True)
class ProximityBreakdown:
    semantic: float
    spatial_factor: float
    temporal_factor: float

    @property
    def combined(self) -> float:
        return self.semantic * self.spatial_factor * self.temporal_factor


def _attenuation(gap: float, scale: float, kernel: str) -> float:
    if kernel == "linear":
        return max(0.0, 1.0 - gap / scale)
    if kernel == "exponential":
        return math.exp(-gap / scale)
    raise ValueError(f"unknown proximity kernel {kernel!r}")


def spatial_factor(d: float, scale: float, kernel: str = "linear") -> float:
    """Attenuation for a distance of d map units; 0 at and beyond the scale."""
    return _attenuation(d, scale, kernel)


def temporal_factor(dt: int, scale: float, kernel: str = "linear") -> float:
    """Attenuation for a gap of dt cycles; 0 at and beyond the scale."""
    return _attenuation(float(dt), scale, kernel)


def contradicts(f1: SemanticFeature, f2: SemanticFeature) -> bool:
    """Same key, one side reports the phenomenon gone, the other active."""
    if f1.key != f2.key:
        return False
    i1, i2 = f1.intensity, f2.intensity
    if i1 is None or i2 is None:
        return False
    return (i1 == "none" and i2 not in _INACTIVE_INTENSITIES) or (
        i2 == "none" and i1 not in _INACTIVE_INTENSITIES)


def proximity(
    ont: Ontology,
    f1: SemanticFeature,
    f2: SemanticFeature,
    spatial_scale: float | None = None,
    temporal_scale: float | None = None,
    kernel: str = "linear",
) -> ProximityBreakdown:
    """Full breakdown for a feature pair. Symmetric in its two features."""
    d_scale = spatial_scale if spatial_scale is not None else ont.spatial_scale
    t_scale = temporal_scale if temporal_scale is not None else ont.temporal_scale

    if contradicts(f1, f2):
        semantic = -1.0
    else:
        semantic = ont.semantic_proximity(f1.type, f2.type)

    loc1, loc2 = f1.localisation, f2.localisation
    if loc1 is None or loc2 is None:
        sf = UNKNOWN_LOCATION_FACTOR
    else:
        sf = spatial_factor(math.dist(loc1, loc2), d_scale, kernel)

    tf = temporal_factor(abs(f1.time - f2.time), t_scale, kernel)
    return ProximityBreakdown(semantic, sf, tf)
