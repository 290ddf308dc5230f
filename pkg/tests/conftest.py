import numpy as np
import pytest

from crowdlens.tracking import SceneMetadata, TrackedScene, Trajectory


def make_trajectory(ped_id, points, first_frame=0):
    """Trajectory from a list of (x, y) at consecutive frames."""
    pts = np.asarray(points, dtype=float)
    frames = np.arange(first_frame, first_frame + len(pts))
    return Trajectory(ped_id, frames, pts)


def make_scene(tracks, scene_id="test", fps=24, density_label=None, country=""):
    """Scene from {ped_id: [(frame, x, y), ...]} or {ped_id: [(x, y), ...]}."""
    trajectories = []
    for ped_id, rows in tracks.items():
        rows = list(rows)
        if len(rows[0]) == 3:
            frames = [r[0] for r in rows]
            points = [(r[1], r[2]) for r in rows]
        else:
            frames = list(range(len(rows)))
            points = rows
        trajectories.append(Trajectory(ped_id, frames, points))
    meta = SceneMetadata(scene_id=scene_id, country=country, fps=fps,
                         density_label=density_label)
    return TrackedScene(metadata=meta, trajectories=trajectories)


@pytest.fixture
def two_ped_scene():
    return make_scene({
        1: [(0.0, 0.0), (0.05, 0.0), (0.10, 0.0)],
        2: [(1.0, 0.0), (1.05, 0.0), (1.10, 0.0)],
    })
