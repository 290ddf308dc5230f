"""crowdlens: pedestrian trajectory analytics and playback service.

Parses tracking files into world-coordinate scenes, computes geometric
features (speed, heading variation, proxemics, collectivity), scores
Big-Five personality factors and four appraisal emotions per pedestrian,
classifies animation and density, and serves scenes to a playback viewer.
"""

from . import kernels
from .classify import (
    AnimationState,
    DensityLevel,
    HighlightAnnotation,
    classify_animation,
    classify_density,
)
from .features import (
    CollectivityParams,
    FeatureVector,
    FrameFeatures,
    aggregate_feature_vector,
    collectivity,
    compute_scene_features,
    compute_speed,
    compute_heading_and_variation,
    distance_stats,
    pair_similarity,
)
from .personality import (
    EmotionMappingTable,
    EmotionScores,
    OceanScores,
    SocialScores,
    SocialSurrogateParams,
    compare_pedestrians,
    emotion_contribution,
    emotions_from_ocean,
    ocean_from_items,
    socialization_level,
)
from .pipeline import AnalysisConfig, PedestrianAnalysis, SceneAnalysis, analyze_scene
from .registry import ItemEquation, default_registry, evaluate_item, load_registry
from .report import answer_question, summarize_scene, summary_json
from .tracking import (
    CoordinateTransform,
    SceneMetadata,
    TrackedScene,
    Trajectory,
    TrajectorySample,
    apply_transform,
    fill_gaps,
    parse_tracking_file,
    serialize_scene,
)

__version__ = "0.1.0"

KERNEL_BACKEND = kernels.BACKEND
