"""Per-frame and per-pedestrian geometric features.

For every pedestrian and frame: speed (meters/frame), heading against the
fixed reference direction (1, 0), frame-to-frame angular variation, mean
distance to everyone else, neighbor count inside the social-space radius,
and collectivity (kernel-weighted motion similarity to the rest of the
frame). Per-pedestrian feature vectors are frame averages of these.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import FrameAbsent, FrameMismatch, NoFrames, PedestrianAbsent, TooFewSamples
from .tracking import TrackedScene, Trajectory

# Preferred Transition Speed: walk/run boundary, meters per frame.
PTS = 0.08
# Hall's social space radius, meters.
SOCIAL_RADIUS = 3.6
# Mean-distance sentinel when a pedestrian has no one else in the frame.
ALONE_DISTANCE = 10.0


@dataclass(frozen=True)
class CollectivityParams:
    """Constants of the pairwise similarity and decay kernel.

    ``pair_similarity`` mixes the speed difference (normalized by PTS) and
    the heading difference (normalized by 180 degrees) with weights ``w1``
    and ``w2``; the decay kernel is ``gamma * exp(-beta * similarity**2)``.
    ``beta`` defaults so the kernel halves at similarity 0.5.
    """

    gamma: float = 1.0
    beta: float = 2.77
    w1: float = 0.5
    w2: float = 0.5

    def __post_init__(self):
        if min(self.gamma, self.beta, self.w1, self.w2) <= 0:
            raise ValueError("collectivity params must be strictly positive")
        if abs(self.w1 + self.w2 - 1.0) > 1e-9:
            raise ValueError("w1 + w2 must equal 1")


@dataclass(frozen=True)
class FrameFeatures:
    pedestrian_id: int
    frame: int
    position: tuple[float, float]
    speed: float
    heading: float
    angular_variation: float
    mean_distance: float
    social_neighbors: int
    collectivity: float


@dataclass(frozen=True)
class FeatureVector:
    """Per-pedestrian frame averages: [x, s, alpha, isolation, socialization,
    collectivity].

    ``isolation`` must be constructed as ``1 - socialization`` so the
    complement invariant holds exactly.
    """

    x: tuple[float, float]
    s: float
    alpha: float
    isolation: float
    socialization: float
    collectivity: float

    def __post_init__(self):
        if self.isolation + self.socialization != 1.0:
            raise ValueError("isolation + socialization must equal 1 exactly")
        for name in ("isolation", "socialization", "collectivity"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} out of [0, 1]: {v}")


def wrap_degrees_180(delta: float) -> float:
    """Fold an angle difference onto the shortest arc, in [0, 180]."""
    d = abs(delta) % 360.0
    return 360.0 - d if d > 180.0 else d


def trajectory_kinematics(traj: Trajectory):
    """Speed, heading and angular-variation arrays aligned with the samples.

    Speed is displacement per frame between consecutive samples; the first
    sample copies the second's value. Heading is the signed angle of the
    displacement against (1, 0) in (-180, 180]; zero-displacement steps carry
    the previous heading (stationary trajectories read as heading 0).
    Angular variation is the wrapped absolute heading change, 0 at the first
    sample.
    """
    L = len(traj)
    if L == 1:
        z = np.zeros(1)
        return z.copy(), z.copy(), z.copy()

    pos = traj.positions
    dframes = np.diff(traj.frames).astype(np.float64)
    disp = np.diff(pos, axis=0)
    step_speed = np.hypot(disp[:, 0], disp[:, 1]) / dframes
    speeds = np.concatenate([step_speed[:1], step_speed])

    raw = np.degrees(np.arctan2(disp[:, 1], disp[:, 0]))
    raw[raw <= -180.0] = 180.0  # atan2 may return -pi exactly

    moving = step_speed > 0.0
    last_idx = np.maximum.accumulate(np.where(moving, np.arange(L - 1), -1))
    step_heading = np.where(last_idx >= 0, raw[np.maximum(last_idx, 0)], np.nan)
    if np.isnan(step_heading).any():
        defined = np.nonzero(~np.isnan(step_heading))[0]
        if len(defined):
            step_heading[: defined[0]] = step_heading[defined[0]]
        else:
            step_heading[:] = 0.0
    headings = np.concatenate([step_heading[:1], step_heading])

    dh = np.abs(np.diff(headings)) % 360.0
    variations = np.concatenate([[0.0], np.where(dh > 180.0, 360.0 - dh, dh)])
    return speeds, headings, variations


def compute_speed(traj: Trajectory, frame: int) -> float:
    """Speed at a frame, meters/frame; the first frame copies the second."""
    if len(traj) < 2:
        raise TooFewSamples(f"pedestrian {traj.pedestrian_id}: speed needs >= 2 samples")
    try:
        i = traj.index_of(frame)
    except KeyError:
        raise FrameAbsent(f"frame {frame} absent for pedestrian {traj.pedestrian_id}") from None
    if i > 0 and traj.frames[i - 1] != frame - 1:
        raise FrameAbsent(f"frame {frame - 1} absent for pedestrian {traj.pedestrian_id}")
    return float(trajectory_kinematics(traj)[0][i])


def compute_heading_and_variation(traj: Trajectory, frame: int) -> tuple[float, float]:
    """Heading against (1, 0) and wrapped heading change at a frame."""
    if len(traj) < 2:
        raise TooFewSamples(f"pedestrian {traj.pedestrian_id}: heading needs >= 2 samples")
    try:
        i = traj.index_of(frame)
    except KeyError:
        raise FrameAbsent(f"frame {frame} absent for pedestrian {traj.pedestrian_id}") from None
    _, headings, variations = trajectory_kinematics(traj)
    return float(headings[i]), float(variations[i])


def pair_similarity(a: FrameFeatures, b: FrameFeatures, p: CollectivityParams) -> float:
    """Motion difference of two pedestrians in the same frame (>= 0, symmetric)."""
    if a.frame != b.frame:
        raise FrameMismatch(f"frames differ: {a.frame} vs {b.frame}")
    ds = abs(a.speed - b.speed) / PTS
    dh = wrap_degrees_180(a.heading - b.heading)
    return p.w1 * ds + p.w2 * (dh / 180.0)


class SceneFeatures:
    """Dense per-frame feature matrices for one scene.

    Rows are frames (offset by ``frame0``), columns follow ``ped_ids``.
    Slots where a pedestrian is not tracked are masked by ``present``.
    """

    def __init__(self, scene: TrackedScene, params: CollectivityParams):
        self.scene = scene
        self.params = params
        self.ped_ids = [t.pedestrian_id for t in scene.trajectories]
        self.frame0 = scene.frame_range[0]
        F = scene.frame_range[1] - self.frame0 + 1
        P = len(self.ped_ids)

        self.xs = np.zeros((F, P))
        self.ys = np.zeros((F, P))
        self.speeds = np.zeros((F, P))
        self.headings = np.zeros((F, P))
        self.variations = np.zeros((F, P))
        self.present = np.zeros((F, P), dtype=np.uint8)

        for col, traj in enumerate(scene.trajectories):
            rows = traj.frames - self.frame0
            sp, hd, var = trajectory_kinematics(traj)
            self.xs[rows, col] = traj.positions[:, 0]
            self.ys[rows, col] = traj.positions[:, 1]
            self.speeds[rows, col] = sp
            self.headings[rows, col] = hd
            self.variations[rows, col] = var
            self.present[rows, col] = 1

        self.collectivity, self.mean_distance, self.neighbors = kernels.scene_stats(
            self.xs, self.ys, self.speeds, self.headings, self.present,
            gamma=params.gamma, beta=params.beta, w1=params.w1, w2=params.w2,
            pts=PTS, social_radius=SOCIAL_RADIUS, alone_distance=ALONE_DISTANCE,
        )

    def _col(self, ped_id: int) -> int:
        try:
            return self.ped_ids.index(ped_id)
        except ValueError:
            raise PedestrianAbsent(f"pedestrian {ped_id} not in scene") from None

    def features_for(self, ped_id: int) -> list[FrameFeatures]:
        col = self._col(ped_id)
        rows = np.nonzero(self.present[:, col])[0]
        return [
            FrameFeatures(
                pedestrian_id=ped_id,
                frame=int(r + self.frame0),
                position=(float(self.xs[r, col]), float(self.ys[r, col])),
                speed=float(self.speeds[r, col]),
                heading=float(self.headings[r, col]),
                angular_variation=float(self.variations[r, col]),
                mean_distance=float(self.mean_distance[r, col]),
                social_neighbors=int(self.neighbors[r, col]),
                collectivity=float(self.collectivity[r, col]),
            )
            for r in rows
        ]

    def mean_inputs(self, ped_id: int) -> tuple[float, float, float]:
        """Frame-averaged (collectivity, mean_distance, neighbors) for one
        pedestrian; these feed the socialization estimator."""
        col = self._col(ped_id)
        mask = self.present[:, col].astype(bool)
        return (
            float(self.collectivity[mask, col].mean()),
            float(self.mean_distance[mask, col].mean()),
            float(self.neighbors[mask, col].mean()),
        )


def compute_scene_features(scene: TrackedScene, params: CollectivityParams | None = None) -> SceneFeatures:
    return SceneFeatures(scene, params or CollectivityParams())


def distance_stats(scene: TrackedScene, ped_id: int, frame: int) -> tuple[float, int]:
    """Mean distance to everyone else at a frame, and the neighbor count
    inside the social-space radius. Alone: (sentinel, 0)."""
    focal = _position_at(scene, ped_id, frame)
    others = [
        t.position_at(frame)
        for t in scene.trajectories
        if t.pedestrian_id != ped_id and t.has_frame(frame)
    ]
    if not others:
        return ALONE_DISTANCE, 0
    d = np.hypot(*(np.asarray(others) - focal).T)
    return float(d.mean()), int((d <= SOCIAL_RADIUS).sum())


def collectivity(scene: TrackedScene, ped_id: int, frame: int,
                 params: CollectivityParams | None = None) -> float:
    """Decay-kernel similarity of one pedestrian to everyone else in a frame."""
    params = params or CollectivityParams()
    _position_at(scene, ped_id, frame)  # presence check
    present = [t for t in scene.trajectories if t.has_frame(frame)]
    if len(present) == 1:
        return 0.0
    xs, ys, sp, hd = [], [], [], []
    focal_idx = 0
    for k, t in enumerate(present):
        if t.pedestrian_id == ped_id:
            focal_idx = k
        i = t.index_of(frame)
        kin = trajectory_kinematics(t)
        xs.append(t.positions[i, 0])
        ys.append(t.positions[i, 1])
        sp.append(kin[0][i])
        hd.append(kin[1][i])
    coll, _, _ = kernels.frame_stats(
        xs, ys, sp, hd,
        gamma=params.gamma, beta=params.beta, w1=params.w1, w2=params.w2,
        pts=PTS, social_radius=SOCIAL_RADIUS, alone_distance=ALONE_DISTANCE,
    )
    return float(coll[focal_idx])


def aggregate_feature_vector(frame_features: list[FrameFeatures], social) -> FeatureVector:
    """Average per-frame features into the per-pedestrian vector; the
    socialization/isolation pair is copied from the social scores."""
    if not frame_features:
        raise NoFrames("no per-frame features to aggregate")
    xs = np.array([f.position[0] for f in frame_features])
    ys = np.array([f.position[1] for f in frame_features])
    return FeatureVector(
        x=(float(xs.mean()), float(ys.mean())),
        s=float(np.mean([f.speed for f in frame_features])),
        alpha=float(np.mean([f.angular_variation for f in frame_features])),
        isolation=social.isolation,
        socialization=social.socialization,
        collectivity=float(np.mean([f.collectivity for f in frame_features])),
    )


def _position_at(scene: TrackedScene, ped_id: int, frame: int) -> np.ndarray:
    try:
        traj = scene.trajectory(ped_id)
    except KeyError:
        raise PedestrianAbsent(f"pedestrian {ped_id} not in scene") from None
    if not traj.has_frame(frame):
        raise PedestrianAbsent(f"pedestrian {ped_id} not present at frame {frame}")
    return traj.position_at(frame)
