"""Scene summaries and highlighted-pedestrian question answering."""

from __future__ import annotations

import json

from .classify import QUESTION_TRAITS, HighlightAnnotation
from .errors import IncompleteAnalyses, PedestrianMissing, TraitUnavailable
from .personality import COMPARABLE_TRAITS, compare_pedestrians
from .pipeline import PedestrianAnalysis, SceneAnalysis


def _pedestrian_record(pa: PedestrianAnalysis) -> dict:
    return {
        "id": pa.pedestrian_id,
        "feature_vector": {
            "x": [pa.vector.x[0], pa.vector.x[1]],
            "s": pa.vector.s,
            "alpha": pa.vector.alpha,
            "isolation": pa.vector.isolation,
            "socialization": pa.vector.socialization,
            "collectivity": pa.vector.collectivity,
        },
        "ocean": pa.ocean.as_dict(),
        "emotions": pa.emotions.as_dict(),
        "dominant_emotion": pa.dominant_emotion,
        "frames": [
            {
                "frame": f.frame,
                "x": f.position[0],
                "y": f.position[1],
                "speed": f.speed,
                "heading": f.heading,
                "angular_variation": f.angular_variation,
                "mean_distance": f.mean_distance,
                "social_neighbors": f.social_neighbors,
                "collectivity": f.collectivity,
                "animation": anim.value,
            }
            for f, anim in zip(pa.frames, pa.animations)
        ],
    }


def summarize_scene(analysis: SceneAnalysis) -> dict:
    """Full per-scene report: metadata, density, per-pedestrian features,
    scores and animation timeline, plus the parameter ledger.

    Deterministic: equal inputs and config produce an identical structure.
    """
    scene = analysis.scene
    expected = {t.pedestrian_id for t in scene.trajectories}
    if not analysis.pedestrians or set(analysis.pedestrians) != expected:
        missing = sorted(expected - set(analysis.pedestrians))
        raise IncompleteAnalyses(f"scene {scene.scene_id}: missing analyses for {missing}")
    md = scene.metadata
    return {
        "scene": {
            "scene_id": md.scene_id,
            "country": md.country,
            "fps": md.fps,
            "pedestrian_count": md.pedestrian_count,
            "frame_range": [scene.frame_range[0], scene.frame_range[1]],
        },
        "density": {
            "computed": analysis.density.value,
            "ground_truth": md.density_label,
        },
        "parameters": analysis.config.ledger(),
        "pedestrians": [
            _pedestrian_record(analysis.pedestrians[pid])
            for pid in sorted(analysis.pedestrians)
        ],
    }


def summary_json(summary: dict) -> bytes:
    """Canonical byte encoding of a summary (stable key order)."""
    return (json.dumps(summary, sort_keys=True, separators=(",", ":")) + "\n").encode("utf-8")


def question_trait(question_key: str) -> str:
    """Resolve a question id (Q1..Q7) or bare trait name to the trait."""
    if question_key in QUESTION_TRAITS:
        return QUESTION_TRAITS[question_key]
    if question_key in COMPARABLE_TRAITS:
        return question_key
    raise TraitUnavailable(f"unknown question or trait {question_key!r}")


def answer_question(annotation: HighlightAnnotation, analysis: SceneAnalysis) -> dict:
    """Compare the two highlighted pedestrians on the question's trait.

    Returns the answer ('Yellow', 'Red', 'Both', 'Neither' or 'Tie') along
    with both pedestrians' scores.
    """
    for ped_id in (annotation.yellow_id, annotation.red_id):
        if ped_id not in analysis.pedestrians:
            raise PedestrianMissing(ped_id, annotation.scene_id)
    trait = question_trait(annotation.question_key)
    yellow = analysis.pedestrians[annotation.yellow_id].trait_values()
    red = analysis.pedestrians[annotation.red_id].trait_values()
    verdict = compare_pedestrians(yellow, red, trait)
    answer = {"A": "Yellow", "B": "Red"}.get(verdict, verdict)
    return {
        "scene_id": annotation.scene_id,
        "question_key": annotation.question_key,
        "trait": trait,
        "yellow_id": annotation.yellow_id,
        "red_id": annotation.red_id,
        "answer": answer,
        "scores": {"yellow": yellow[trait], "red": red[trait]},
    }
