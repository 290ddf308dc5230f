"""Big-Five scoring from feature vectors and the OCEAN-to-OCC emotion map.

The socialization estimator replaces a trained network whose weights were
never published: a monotone logistic over the same three inputs
(collectivity, mean distance to others, neighbors in social space), with
documented default weights. Isolation is defined as its exact complement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import EmptyRegistryFactor, TraitUnavailable
from .features import FeatureVector
from .registry import FACTORS, ItemEquation, evaluate_item

EMOTIONS = ("fear", "happiness", "sadness", "anger")

# Item columns whose max-min span is below this are treated as constant and
# normalize to 0.5 for every pedestrian.
CONSTANT_SPAN = 1e-12

# Pairwise comparison bands.
TIE_DELTA = 0.05
BOTH_MIN = 0.75
NEITHER_MAX = 0.25

COMPARABLE_TRAITS = ("O", "C", "E", "A", "N",
                     "Fear", "Happiness", "Sadness", "Anger", "Socialization")


@dataclass(frozen=True)
class SocialScores:
    socialization: float
    isolation: float

    def __post_init__(self):
        if not 0.0 <= self.socialization <= 1.0:
            raise ValueError(f"socialization out of [0, 1]: {self.socialization}")
        if self.socialization + self.isolation != 1.0:
            raise ValueError("isolation must be the exact complement of socialization")

    @classmethod
    def from_socialization(cls, theta: float) -> "SocialScores":
        return cls(socialization=theta, isolation=1.0 - theta)


@dataclass(frozen=True)
class SocialSurrogateParams:
    """Weights of the logistic socialization estimator."""

    weight_collectivity: float = 2.0
    weight_proximity: float = 2.0
    weight_neighbors: float = 2.0
    bias: float = -3.0
    d_max: float = 10.0
    n_cap: int = 10

    def __post_init__(self):
        if self.d_max <= 0:
            raise ValueError("d_max must be positive")
        if self.n_cap < 1:
            raise ValueError("n_cap must be >= 1")


def socialization_level(phi: float, mean_dist: float, neighbors: float,
                        p: SocialSurrogateParams | None = None) -> SocialScores:
    """Socialization in [0, 1] from collectivity, mean distance and neighbor
    count; isolation is returned as the exact complement.

    Monotone: non-decreasing in ``phi`` and ``neighbors``, non-increasing in
    ``mean_dist``. Inputs are clamped to their valid ranges, so this is total.
    """
    p = p or SocialSurrogateParams()
    phi = min(max(phi, 0.0), 1.0)
    proximity = 1.0 - min(max(mean_dist, 0.0), p.d_max) / p.d_max
    crowding = min(max(neighbors, 0.0), p.n_cap) / p.n_cap
    z = (p.weight_collectivity * phi
         + p.weight_proximity * proximity
         + p.weight_neighbors * crowding
         + p.bias)
    theta = 1.0 / (1.0 + math.exp(-z))
    return SocialScores.from_socialization(theta)


@dataclass(frozen=True)
class OceanScores:
    O: float
    C: float
    E: float
    A: float
    N: float

    def __post_init__(self):
        for name in "OCEAN":
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"factor {name} out of [0, 1]: {v}")

    def value(self, factor: str) -> float:
        if factor not in FACTORS:
            raise KeyError(factor)
        return getattr(self, factor)

    def as_dict(self) -> dict[str, float]:
        return {f: getattr(self, f) for f in FACTORS}


def polarity(value: float) -> str:
    """'+' for values >= 0.5, '-' below."""
    return "+" if value >= 0.5 else "-"


# Sign table: (factor, polarity) -> effect on each emotion. +1 means the
# stronger the trait, the stronger the emotion; -1 the opposite; 0 no effect.
_DEFAULT_MAPPING = {
    ("O", "+"): {"fear": 0, "happiness": 0, "sadness": 0, "anger": -1},
    ("O", "-"): {"fear": 0, "happiness": 0, "sadness": 0, "anger": 1},
    ("C", "+"): {"fear": -1, "happiness": 0, "sadness": 0, "anger": 0},
    ("C", "-"): {"fear": 1, "happiness": 0, "sadness": 0, "anger": 0},
    ("E", "+"): {"fear": -1, "happiness": 1, "sadness": -1, "anger": -1},
    ("E", "-"): {"fear": 1, "happiness": 0, "sadness": 0, "anger": 0},
    ("A", "+"): {"fear": 0, "happiness": 0, "sadness": 0, "anger": -1},
    ("A", "-"): {"fear": 0, "happiness": 0, "sadness": 0, "anger": 1},
    ("N", "+"): {"fear": 1, "happiness": -1, "sadness": 1, "anger": 1},
    ("N", "-"): {"fear": -1, "happiness": 1, "sadness": -1, "anger": -1},
}


@dataclass(frozen=True)
class EmotionMappingTable:
    """Sign matrix from factor polarity to the four emotions."""

    entries: dict = field(default_factory=lambda: dict(_DEFAULT_MAPPING))

    def __post_init__(self):
        for f in FACTORS:
            for pol in "+-":
                row = self.entries.get((f, pol))
                if row is None or set(row) != set(EMOTIONS):
                    raise ValueError(f"mapping table is missing row ({f}, {pol})")
                if any(v not in (-1, 0, 1) for v in row.values()):
                    raise ValueError(f"row ({f}, {pol}) has entries outside {{-1, 0, 1}}")

    def contribution(self, factor: str, pol: str, emotion: str) -> int:
        if factor not in FACTORS or pol not in "+-" or emotion not in EMOTIONS:
            raise KeyError((factor, pol, emotion))
        return self.entries[(factor, pol)][emotion]


def emotion_contribution(table: EmotionMappingTable, factor: str, pol: str, emotion: str) -> int:
    return table.contribution(factor, pol, emotion)


@dataclass(frozen=True)
class EmotionScores:
    fear: float
    happiness: float
    sadness: float
    anger: float

    def __post_init__(self):
        for name in EMOTIONS:
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"emotion {name} out of [0, 1]: {v}")

    def value(self, emotion: str) -> float:
        if emotion not in EMOTIONS:
            raise KeyError(emotion)
        return getattr(self, emotion)

    def as_dict(self) -> dict[str, float]:
        return {e: getattr(self, e) for e in EMOTIONS}

    def dominant(self) -> str:
        return max(EMOTIONS, key=self.value)


def emotions_from_ocean(o: OceanScores, table: EmotionMappingTable | None = None) -> EmotionScores:
    """Combine factor polarities and strengths into the four emotion scores.

    Each factor contributes its table sign weighted by 2*|value - 0.5|
    (how far from neutral the trait is); the sum is centered at 0.5 and
    scaled by 1/10 so an all-neutral profile yields all-neutral emotions.
    """
    table = table or EmotionMappingTable()
    scores = {}
    for emotion in EMOTIONS:
        raw = 0.0
        for f in FACTORS:
            v = o.value(f)
            raw += table.contribution(f, polarity(v), emotion) * 2.0 * abs(v - 0.5)
        scores[emotion] = min(max(0.5 + raw / 10.0, 0.0), 1.0)
    return EmotionScores(**scores)


def ocean_from_items(all_vectors: list[FeatureVector],
                     registry: list[ItemEquation]) -> list[OceanScores]:
    """Score every pedestrian of a scene on the five factors.

    Raw item scores are min-max normalized across the scene's pedestrians
    (a constant column normalizes to 0.5 for everyone); each factor is the
    mean of its items' normalized scores.
    """
    if not all_vectors:
        raise ValueError("need at least one feature vector")
    by_factor: dict[str, list[list[float]]] = {f: [] for f in FACTORS}
    for eq in registry:
        raws = [evaluate_item(eq, v) for v in all_vectors]
        lo, hi = min(raws), max(raws)
        if hi - lo <= CONSTANT_SPAN:
            normalized = [0.5] * len(raws)
        else:
            normalized = [(r - lo) / (hi - lo) for r in raws]
        by_factor[eq.factor].append(normalized)
    for f in FACTORS:
        if not by_factor[f]:
            raise EmptyRegistryFactor(f)
    out = []
    for i in range(len(all_vectors)):
        factor_scores = {
            f: sum(cols[i] for cols in by_factor[f]) / len(by_factor[f])
            for f in FACTORS
        }
        out.append(OceanScores(**factor_scores))
    return out


def compare_pedestrians(a: dict[str, float], b: dict[str, float], trait: str) -> str:
    """Which of two pedestrians scores higher on a trait.

    ``a``/``b`` map trait names (factors, emotions, 'Socialization') to
    scores. Returns 'A', 'B', 'Both' (both >= 0.75), 'Neither' (both
    <= 0.25) or 'Tie' (difference below 0.05); the band checks run before
    the sign comparison, so the result is antisymmetric under swapping.
    """
    if trait not in COMPARABLE_TRAITS:
        raise TraitUnavailable(f"unknown trait {trait!r}")
    try:
        va, vb = a[trait], b[trait]
    except KeyError as exc:
        raise TraitUnavailable(f"trait {trait!r} missing from analysis") from exc
    if va >= BOTH_MIN and vb >= BOTH_MIN:
        return "Both"
    if va <= NEITHER_MAX and vb <= NEITHER_MAX:
        return "Neither"
    if abs(va - vb) < TIE_DELTA:
        return "Tie"
    return "A" if va > vb else "B"
