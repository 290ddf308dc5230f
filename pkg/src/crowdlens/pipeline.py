"""End-to-end per-scene analysis: features -> social -> OCEAN -> emotions."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import kernels
from .classify import (
    DENSITY_LOW_MAX,
    DENSITY_MEDIUM_MAX,
    AnimationState,
    classify_animation,
    classify_density,
)
from .features import (
    ALONE_DISTANCE,
    PTS,
    SOCIAL_RADIUS,
    CollectivityParams,
    FeatureVector,
    FrameFeatures,
    aggregate_feature_vector,
    compute_scene_features,
)
from .personality import (
    BOTH_MIN,
    EMOTIONS,
    NEITHER_MAX,
    TIE_DELTA,
    EmotionMappingTable,
    EmotionScores,
    OceanScores,
    SocialScores,
    SocialSurrogateParams,
    emotions_from_ocean,
    ocean_from_items,
    socialization_level,
)
from .registry import EPSILON, FACTORS, ItemEquation, default_registry, registry_ledger
from .tracking import TrackedScene, ensure_world_coordinates, with_filled_gaps


@dataclass
class AnalysisConfig:
    collectivity: CollectivityParams = field(default_factory=CollectivityParams)
    social: SocialSurrogateParams = field(default_factory=SocialSurrogateParams)
    registry: list[ItemEquation] = field(default_factory=default_registry)
    emotion_table: EmotionMappingTable = field(default_factory=EmotionMappingTable)
    # Longest tracking dropout that gap filling may bridge, in seconds.
    gap_limit_seconds: float = 2.0

    def ledger(self) -> dict:
        """Every constant that shaped the analysis, for embedding in outputs."""
        return {
            "collectivity": {
                "gamma": self.collectivity.gamma,
                "beta": self.collectivity.beta,
                "w1": self.collectivity.w1,
                "w2": self.collectivity.w2,
            },
            "pair_similarity": {"speed_normalizer_m_per_frame": PTS,
                                "heading_normalizer_degrees": 180.0},
            "proximity": {"social_radius_m": SOCIAL_RADIUS,
                          "alone_distance_m": ALONE_DISTANCE},
            "social_surrogate": {
                "weight_collectivity": self.social.weight_collectivity,
                "weight_proximity": self.social.weight_proximity,
                "weight_neighbors": self.social.weight_neighbors,
                "bias": self.social.bias,
                "d_max": self.social.d_max,
                "n_cap": self.social.n_cap,
            },
            "registry": registry_ledger(self.registry),
            "item_epsilon": EPSILON,
            "emotion_combination": {"baseline": 0.5, "scale": 10.0},
            "comparison_bands": {"tie_delta": TIE_DELTA, "both_min": BOTH_MIN,
                                 "neither_max": NEITHER_MAX},
            "animation_thresholds": {"idle_speed": 0.0, "run_min_speed": PTS},
            "density_cutpoints": {"low_max": DENSITY_LOW_MAX,
                                  "medium_max": DENSITY_MEDIUM_MAX},
            "gap_fill": {"max_gap_seconds": self.gap_limit_seconds},
            "kernel_backend": kernels.BACKEND,
        }


@dataclass
class PedestrianAnalysis:
    pedestrian_id: int
    frames: list[FrameFeatures]
    animations: list[AnimationState]
    social: SocialScores
    vector: FeatureVector
    ocean: OceanScores
    emotions: EmotionScores
    dominant_emotion: str

    def trait_values(self) -> dict[str, float]:
        """Trait name -> score, for pairwise comparison."""
        values = {f: self.ocean.value(f) for f in FACTORS}
        values.update({e.capitalize(): self.emotions.value(e) for e in EMOTIONS})
        values["Socialization"] = self.social.socialization
        return values


@dataclass
class SceneAnalysis:
    scene: TrackedScene
    config: AnalysisConfig
    pedestrians: dict[int, PedestrianAnalysis]

    @property
    def density(self):
        return classify_density(self.scene.metadata.pedestrian_count)

    def pedestrian(self, ped_id: int) -> PedestrianAnalysis:
        return self.pedestrians[ped_id]


def analyze_scene(scene: TrackedScene, config: AnalysisConfig | None = None) -> SceneAnalysis:
    """Run the full pipeline on one scene.

    Normalizes to world coordinates, fills tracking gaps, computes per-frame
    geometry, then socialization, feature vectors, OCEAN factors, emotions
    and animation states for every pedestrian.
    """
    config = config or AnalysisConfig()
    scene = ensure_world_coordinates(scene)
    scene = with_filled_gaps(
        scene, max_gap=round(config.gap_limit_seconds * scene.metadata.fps)
    )
    sf = compute_scene_features(scene, config.collectivity)

    frames_by_ped: dict[int, list[FrameFeatures]] = {}
    socials: dict[int, SocialScores] = {}
    vectors: list[FeatureVector] = []
    for ped_id in sf.ped_ids:
        frames = sf.features_for(ped_id)
        phi, mean_dist, neighbors = sf.mean_inputs(ped_id)
        social = socialization_level(phi, mean_dist, neighbors, config.social)
        frames_by_ped[ped_id] = frames
        socials[ped_id] = social
        vectors.append(aggregate_feature_vector(frames, social))

    oceans = ocean_from_items(vectors, config.registry)

    pedestrians: dict[int, PedestrianAnalysis] = {}
    for ped_id, vector, ocean in zip(sf.ped_ids, vectors, oceans):
        emotions = emotions_from_ocean(ocean, config.emotion_table)
        frames = frames_by_ped[ped_id]
        pedestrians[ped_id] = PedestrianAnalysis(
            pedestrian_id=ped_id,
            frames=frames,
            animations=[classify_animation(f.speed) for f in frames],
            social=socials[ped_id],
            vector=vector,
            ocean=ocean,
            emotions=emotions,
            dominant_emotion=emotions.dominant(),
        )
    return SceneAnalysis(scene=scene, config=config, pedestrians=pedestrians)
