"""Discrete classifications: avatar animation states and density levels."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import NegativeSpeed
from .features import PTS


class AnimationState(str, Enum):
    IDLE = "Idle"
    WALK = "Walk"
    RUN = "Run"


class DensityLevel(str, Enum):
    LOW = "Low"
    MEDIUM = "Medium"
    HIGH = "High"

    def __lt__(self, other):
        order = ("Low", "Medium", "High")
        return order.index(self.value) < order.index(other.value)


# Pedestrian-count cutpoints, chosen at the gaps of the labeled videos
# (counts 10-16 are Low, 25 Medium, 34 High).
DENSITY_LOW_MAX = 20
DENSITY_MEDIUM_MAX = 30

# Optional pedestrians-per-square-meter mode for scenes with known extent.
DENSITY_AREA_CUTPOINTS = (0.5, 1.0)


def classify_animation(speed: float) -> AnimationState:
    """Idle at zero speed, Run at or above the walk/run transition speed,
    Walk in between."""
    if speed < 0:
        raise NegativeSpeed(f"speed must be >= 0, got {speed}")
    if speed == 0:
        return AnimationState.IDLE
    if speed < PTS:
        return AnimationState.WALK
    return AnimationState.RUN


def classify_density(pedestrian_count: int) -> DensityLevel:
    if pedestrian_count < 0:
        raise ValueError("pedestrian_count must be non-negative")
    if pedestrian_count <= DENSITY_LOW_MAX:
        return DensityLevel.LOW
    if pedestrian_count <= DENSITY_MEDIUM_MAX:
        return DensityLevel.MEDIUM
    return DensityLevel.HIGH


def classify_density_by_area(pedestrian_count: int, area_m2: float,
                             cutpoints: tuple[float, float] = DENSITY_AREA_CUTPOINTS) -> DensityLevel:
    if area_m2 <= 0:
        raise ValueError("area must be positive")
    per_m2 = pedestrian_count / area_m2
    if per_m2 <= cutpoints[0]:
        return DensityLevel.LOW
    if per_m2 <= cutpoints[1]:
        return DensityLevel.MEDIUM
    return DensityLevel.HIGH


@dataclass(frozen=True)
class HighlightAnnotation:
    """Two color-highlighted pedestrians and the trait they are compared on.

    ``question_key`` is either a question id (Q1..Q7) or a trait name.
    """

    scene_id: str
    yellow_id: int
    red_id: int
    question_key: str

    def __post_init__(self):
        if self.yellow_id == self.red_id:
            raise ValueError("yellow and red must be different pedestrians")


# Question id -> compared trait. Q7 asks about sociability, which scores the
# socialization level rather than a Big-Five factor.
QUESTION_TRAITS = {
    "Q1": "N",
    "Q2": "Anger",
    "Q3": "O",
    "Q4": "Fear",
    "Q5": "Happiness",
    "Q6": "E",
    "Q7": "Socialization",
}
