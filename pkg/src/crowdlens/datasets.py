"""Deterministic synthetic scenes: demo dataset and scenario reconstructions.

The demo dataset mirrors the six labeled videos' metadata (id, country,
pedestrian count, density label) with seeded synthetic trajectories. The
three scenario scenes (P01, P02, P03) reconstruct the highlighted-pedestrian
clips from their verbal descriptions: a runner cutting through a group, a
loner far from an interacting group, and a loner walking against the flow.

``python -m crowdlens.datasets OUTDIR`` writes everything as canonical CSV
plus an annotations file for the question pipeline.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np

from .classify import HighlightAnnotation
from .tracking import SceneMetadata, TrackedScene, Trajectory

# (scene_id, country, pedestrian count, density label)
TABLE2_VIDEOS = [
    ("AE-01", "United Arab Emirates", 12, "Low"),
    ("AT-03", "Austria", 10, "Low"),
    ("BR-01", "Brazil", 16, "Low"),
    ("BR-15", "Brazil", 15, "Low"),
    ("BR-25", "Brazil", 25, "Medium"),
    ("BR-34", "Brazil", 34, "High"),
]

SCENARIO_IDS = ("P01", "P02", "P03")

_FPS = 24
_FRAMES = 240


def _walk(rng, start, heading_deg, speed, frames,
          heading_noise=0.0, speed_jitter=0.0, start_frame=0):
    """Trajectory points for a walker holding a base direction.

    Per-frame heading wobbles around the base direction instead of random-
    walking away from it, so group members stay together.
    """
    pos = np.asarray(start, dtype=float).copy()
    points = [pos.copy()]
    for _ in range(frames - 1):
        h = heading_deg + (rng.normal(0.0, heading_noise) if heading_noise else 0.0)
        s = max(speed + (rng.normal(0.0, speed_jitter) if speed_jitter else 0.0), 0.0)
        pos = pos + s * np.array([np.cos(np.radians(h)), np.sin(np.radians(h))])
        points.append(pos.copy())
    frames_idx = np.arange(start_frame, start_frame + frames)
    return frames_idx, np.array(points)


def _stand(start, frames, start_frame=0):
    frames_idx = np.arange(start_frame, start_frame + frames)
    return frames_idx, np.tile(np.asarray(start, dtype=float), (frames, 1))


def _cluster_starts(rng, center, n, spacing=1.1):
    """Roughly hexagonal blob of start positions around a center."""
    starts = []
    ring = 0
    placed = 0
    while placed < n:
        count = 1 if ring == 0 else 6 * ring
        for k in range(count):
            if placed >= n:
                break
            angle = 2 * np.pi * k / count
            r = ring * spacing
            jitter = rng.uniform(-0.15, 0.15, 2)
            starts.append(np.array(center) + r * np.array([np.cos(angle), np.sin(angle)]) + jitter)
            placed += 1
        ring += 1
    return starts


def demo_scene(scene_id: str) -> TrackedScene:
    """Synthetic scene with the metadata of one labeled video."""
    for idx, (sid, country, count, density) in enumerate(TABLE2_VIDEOS):
        if sid == scene_id:
            break
    else:
        raise KeyError(scene_id)
    rng = np.random.default_rng(1000 + idx)

    trajectories = []
    ped = 1

    # one standing and one fast loner per scene, the rest in walking clusters
    frames, pts = _stand(rng.uniform((-10.0, -6.0), (10.0, 6.0)), _FRAMES)
    trajectories.append(Trajectory(ped, frames, pts))
    ped += 1
    frames, pts = _walk(rng, rng.uniform((-10.0, -6.0), (10.0, 6.0)),
                        float(rng.uniform(-180, 180)), 0.1, _FRAMES,
                        heading_noise=2.0, speed_jitter=0.003)
    trajectories.append(Trajectory(ped, frames, pts))
    ped += 1

    remaining = count - 2
    while remaining > 0:
        size = int(min(remaining, rng.integers(3, 8)))
        center = rng.uniform((-10.0, -6.0), (10.0, 6.0))
        heading = float(rng.uniform(-180, 180))
        speed = float(rng.uniform(0.02, 0.06))
        for s in _cluster_starts(rng, center, size):
            frames, pts = _walk(rng, s, heading, speed, _FRAMES,
                                heading_noise=8.0, speed_jitter=0.004)
            trajectories.append(Trajectory(ped, frames, pts))
            ped += 1
        remaining -= size

    metadata = SceneMetadata(scene_id=scene_id, country=country, fps=_FPS,
                             density_label=density)
    return TrackedScene(metadata=metadata, trajectories=trajectories)


def demo_scenes() -> list[TrackedScene]:
    return [demo_scene(sid) for sid, *_ in TABLE2_VIDEOS]


def _group(rng, trajectories, center, heading, speed, size, first_id,
           heading_noise=7.0, speed_jitter=0.003):
    starts = _cluster_starts(rng, center, size)
    for offset, s in enumerate(starts):
        frames, pts = _walk(rng, s, heading, speed, _FRAMES,
                            heading_noise=heading_noise, speed_jitter=speed_jitter)
        trajectories.append(Trajectory(first_id + offset, frames, pts))
    return first_id + len(starts)


def scenario_scene(name: str) -> tuple[TrackedScene, list[HighlightAnnotation]]:
    """One of the three highlighted-pedestrian scenes plus its questions."""
    if name not in SCENARIO_IDS:
        raise KeyError(name)
    rng = np.random.default_rng(2000 + SCENARIO_IDS.index(name))
    trajectories: list[Trajectory] = []

    if name == "P01":
        # Group walking +x on the right; yellow inside it. Red crosses the
        # group's path alone, perpendicular and fast, with little wobble.
        next_id = _group(rng, trajectories, center=(0.0, 0.0), heading=0.0,
                         speed=0.035, size=7, first_id=1)
        yellow_id = 4
        red_id = next_id
        frames, pts = _walk(rng, (2.8, -5.5), 90.0, 0.11, _FRAMES,
                            heading_noise=1.5, speed_jitter=0.002)
        trajectories.append(Trajectory(red_id, frames, pts))
        questions = ["Q1", "Q2"]

    elif name == "P02":
        # Interacting group: slow, milling, high direction change. Yellow is
        # the liveliest member; red walks alone far away, slow and straight.
        next_id = _group(rng, trajectories, center=(0.0, 0.0), heading=20.0,
                         speed=0.03, size=6, first_id=1,
                         heading_noise=14.0, speed_jitter=0.004)
        yellow_id = next_id
        frames, pts = _walk(rng, (0.4, 0.6), 20.0, 0.03, _FRAMES,
                            heading_noise=26.0, speed_jitter=0.004)
        trajectories.append(Trajectory(yellow_id, frames, pts))
        red_id = yellow_id + 1
        frames, pts = _walk(rng, (9.0, -7.0), 175.0, 0.02, _FRAMES,
                            heading_noise=1.0, speed_jitter=0.001)
        trajectories.append(Trajectory(red_id, frames, pts))
        questions = ["Q3", "Q4"]

    else:
        # P03: group flowing +x with yellow inside; red walks -x against the
        # flow, alone on a parallel lane.
        next_id = _group(rng, trajectories, center=(-4.0, 0.0), heading=0.0,
                         speed=0.05, size=6, first_id=1)
        yellow_id = 3
        red_id = next_id
        frames, pts = _walk(rng, (12.0, 4.5), 180.0, 0.05, _FRAMES,
                            heading_noise=2.0, speed_jitter=0.002)
        trajectories.append(Trajectory(red_id, frames, pts))
        questions = ["Q5", "Q6", "Q7"]

    metadata = SceneMetadata(scene_id=name, country="synthetic", fps=_FPS,
                             density_label="Low")
    scene = TrackedScene(metadata=metadata, trajectories=trajectories)
    annotations = [
        HighlightAnnotation(scene_id=name, yellow_id=yellow_id, red_id=red_id,
                            question_key=q)
        for q in questions
    ]
    return scene, annotations


def scenario_scenes() -> list[tuple[TrackedScene, list[HighlightAnnotation]]]:
    return [scenario_scene(name) for name in SCENARIO_IDS]


def write_dataset(outdir) -> list[Path]:
    """Write the demo scenes, scenario scenes and annotations to a directory."""
    from .tracking import serialize_scene

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for scene in demo_scenes():
        path = outdir / f"{scene.scene_id}.csv"
        path.write_bytes(serialize_scene(scene, "csv"))
        written.append(path)
    annotations = []
    for scene, notes in scenario_scenes():
        path = outdir / f"{scene.scene_id}.csv"
        path.write_bytes(serialize_scene(scene, "csv"))
        written.append(path)
        annotations.extend(
            {"scene_id": a.scene_id, "yellow_id": a.yellow_id,
             "red_id": a.red_id, "question_key": a.question_key}
            for a in notes
        )
    ann_path = outdir / "annotations.json"
    ann_path.write_text(json.dumps(annotations, indent=2) + "\n", encoding="utf-8")
    written.append(ann_path)
    return written


if __name__ == "__main__":
    target = sys.argv[1] if len(sys.argv) > 1 else "demo-data"
    paths = write_dataset(target)
    print(f"wrote {len(paths)} files to {target}")
