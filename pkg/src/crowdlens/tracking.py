"""Tracking-file I/O: parse, validate and normalize pedestrian scenes.

Canonical on-disk formats (UTF-8, LF):

CSV::

    # scene_id=AE-01
    # country=United Arab Emirates
    # fps=24
    # density_label=Low
    # coords=world
    # homography=1,0,0,0,1,0,0,0,1
    frame,id,x,y
    0,1,0.0,0.0
    ...

``#``-prefixed ``key=value`` header lines, then a ``frame,id,x,y`` column
header, then one row per (frame, pedestrian). ``density_label`` and
``homography`` are optional; ``coords`` is ``image`` or ``world`` (default
``world``). When ``coords=image`` the homography must be applied before any
feature computation.

JSON mirrors the same fields::

    {"scene_id": ..., "country": ..., "fps": ..., "density_label": ...,
     "coords": ..., "homography": [9 numbers] | null,
     "rows": [[frame, id, x, y], ...]}
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import (
    EmptyScene,
    MalformedHeader,
    NonFinitePosition,
    NonMonotonicFrames,
    PointAtInfinity,
    SingularTransform,
    TooFewSamples,
    TrackLost,
)

DENSITY_LABELS = ("Low", "Medium", "High")
COORD_SPACES = ("image", "world")

_HEADER_KEYS = ("scene_id", "country", "fps", "density_label", "coords", "homography")
_COLUMNS = ("frame", "id", "x", "y")


@dataclass(frozen=True)
class SceneMetadata:
    scene_id: str
    country: str = ""
    fps: int = 24
    density_label: str | None = None
    pedestrian_count: int = 0

    def __post_init__(self):
        if self.fps <= 0 or int(self.fps) != self.fps:
            raise MalformedHeader(f"fps must be a positive integer, got {self.fps!r}")
        if self.density_label is not None and self.density_label not in DENSITY_LABELS:
            raise MalformedHeader(f"density_label must be one of {DENSITY_LABELS}")
        if self.pedestrian_count < 0:
            raise MalformedHeader("pedestrian_count must be non-negative")


@dataclass(frozen=True)
class TrajectorySample:
    frame: int
    position: tuple[float, float]


class Trajectory:
    """One pedestrian's track: strictly increasing frames, finite positions."""

    __slots__ = ("pedestrian_id", "frames", "positions")

    def __init__(self, pedestrian_id: int, frames, positions):
        frames = np.asarray(frames, dtype=np.int64)
        positions = np.asarray(positions, dtype=np.float64)
        if frames.ndim != 1 or positions.shape != (len(frames), 2):
            raise ValueError("frames must be (L,), positions (L, 2)")
        if len(frames) == 0:
            raise TooFewSamples(f"pedestrian {pedestrian_id} has no samples")
        if frames[0] < 0:
            raise NonMonotonicFrames(pedestrian_id, "negative frame index")
        if len(frames) > 1 and not np.all(np.diff(frames) > 0):
            raise NonMonotonicFrames(pedestrian_id)
        if not np.all(np.isfinite(positions)):
            bad = int(np.where(~np.isfinite(positions).all(axis=1))[0][0])
            raise NonFinitePosition(bad, f"pedestrian {pedestrian_id}: non-finite position at sample {bad}")
        self.pedestrian_id = int(pedestrian_id)
        self.frames = frames
        self.positions = positions
        self.frames.setflags(write=False)
        self.positions.setflags(write=False)

    def __len__(self):
        return len(self.frames)

    def __eq__(self, other):
        return (
            isinstance(other, Trajectory)
            and self.pedestrian_id == other.pedestrian_id
            and np.array_equal(self.frames, other.frames)
            and np.array_equal(self.positions, other.positions)
        )

    def __repr__(self):
        return f"Trajectory(id={self.pedestrian_id}, samples={len(self)}, frames=[{self.first_frame}..{self.last_frame}])"

    @property
    def first_frame(self) -> int:
        return int(self.frames[0])

    @property
    def last_frame(self) -> int:
        return int(self.frames[-1])

    def has_frame(self, frame: int) -> bool:
        i = np.searchsorted(self.frames, frame)
        return i < len(self.frames) and self.frames[i] == frame

    def index_of(self, frame: int) -> int:
        i = int(np.searchsorted(self.frames, frame))
        if i >= len(self.frames) or self.frames[i] != frame:
            raise KeyError(frame)
        return i

    def position_at(self, frame: int) -> np.ndarray:
        return self.positions[self.index_of(frame)]

    def samples(self) -> list[TrajectorySample]:
        return [
            TrajectorySample(int(f), (float(p[0]), float(p[1])))
            for f, p in zip(self.frames, self.positions)
        ]

    @classmethod
    def from_samples(cls, pedestrian_id: int, samples) -> "Trajectory":
        frames = [s.frame for s in samples]
        positions = [s.position for s in samples]
        return cls(pedestrian_id, frames, positions)


class CoordinateTransform:
    """3x3 homography mapping image pixels to world meters."""

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        m = np.asarray(matrix, dtype=np.float64).reshape(3, 3)
        if abs(np.linalg.det(m)) <= 1e-12:
            raise SingularTransform("homography is not invertible")
        self.matrix = m
        self.matrix.setflags(write=False)

    @classmethod
    def identity(cls) -> "CoordinateTransform":
        return cls(np.eye(3))

    def inverse(self) -> "CoordinateTransform":
        return CoordinateTransform(np.linalg.inv(self.matrix))

    def apply(self, points: np.ndarray) -> np.ndarray:
        """Map (L, 2) points through the homography and dehomogenize."""
        pts = np.asarray(points, dtype=np.float64)
        squeeze = pts.ndim == 1
        pts = np.atleast_2d(pts)
        homog = np.hstack([pts, np.ones((len(pts), 1))])
        mapped = homog @ self.matrix.T
        w = mapped[:, 2]
        if np.any(np.abs(w) <= 1e-12):
            raise PointAtInfinity("homogeneous w vanished during transform")
        out = mapped[:, :2] / w[:, None]
        return out[0] if squeeze else out

    def __eq__(self, other):
        return isinstance(other, CoordinateTransform) and np.array_equal(self.matrix, other.matrix)


@dataclass
class TrackedScene:
    """A parsed video: metadata plus per-pedestrian trajectories.

    Immutable by convention after construction; all transforming operations
    return new scenes.
    """

    metadata: SceneMetadata
    trajectories: list[Trajectory]
    coords: str = "world"
    transform: CoordinateTransform | None = None
    frame_range: tuple[int, int] = field(init=False)

    def __post_init__(self):
        if not self.trajectories:
            raise EmptyScene(f"scene {self.metadata.scene_id} has no trajectories")
        if self.coords not in COORD_SPACES:
            raise MalformedHeader(f"coords must be one of {COORD_SPACES}")
        ids = [t.pedestrian_id for t in self.trajectories]
        if len(set(ids)) != len(ids):
            raise NonMonotonicFrames(ids[0], "duplicate pedestrian ids in scene")
        self.trajectories = sorted(self.trajectories, key=lambda t: t.pedestrian_id)
        self.frame_range = (
            min(t.first_frame for t in self.trajectories),
            max(t.last_frame for t in self.trajectories),
        )
        if self.metadata.pedestrian_count != len(self.trajectories):
            self.metadata = replace(self.metadata, pedestrian_count=len(self.trajectories))

    def __eq__(self, other):
        return (
            isinstance(other, TrackedScene)
            and self.metadata == other.metadata
            and self.coords == other.coords
            and self.transform == other.transform
            and self.trajectories == other.trajectories
        )

    @property
    def scene_id(self) -> str:
        return self.metadata.scene_id

    def trajectory(self, ped_id: int) -> Trajectory:
        for t in self.trajectories:
            if t.pedestrian_id == ped_id:
                return t
        raise KeyError(ped_id)

    def has_pedestrian(self, ped_id: int) -> bool:
        return any(t.pedestrian_id == ped_id for t in self.trajectories)

    def pedestrians_at(self, frame: int) -> list[int]:
        return [t.pedestrian_id for t in self.trajectories if t.has_frame(frame)]


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def _build_scene(header: dict, rows: list[tuple[int, int, float, float]]) -> TrackedScene:
    if not rows:
        raise EmptyScene("no data rows")
    by_ped: dict[int, list[tuple[int, float, float]]] = {}
    for frame, ped, x, y in rows:
        by_ped.setdefault(ped, []).append((frame, x, y))

    trajectories = []
    for ped in sorted(by_ped):
        recs = sorted(by_ped[ped], key=lambda r: r[0])
        frames = [r[0] for r in recs]
        if len(set(frames)) != len(frames):
            raise NonMonotonicFrames(ped)
        positions = [(r[1], r[2]) for r in recs]
        trajectories.append(Trajectory(ped, frames, positions))

    homography = header.get("homography")
    transform = CoordinateTransform(homography) if homography is not None else None
    metadata = SceneMetadata(
        scene_id=header.get("scene_id", "scene"),
        country=header.get("country", ""),
        fps=header.get("fps", 24),
        density_label=header.get("density_label"),
        pedestrian_count=len(trajectories),
    )
    return TrackedScene(
        metadata=metadata,
        trajectories=trajectories,
        coords=header.get("coords", "world"),
        transform=transform,
    )


def _parse_header_value(key: str, value: str):
    if key == "fps":
        try:
            return int(value)
        except ValueError as exc:
            raise MalformedHeader(f"fps is not an integer: {value!r}") from exc
    if key == "homography":
        parts = value.split(",")
        if len(parts) != 9:
            raise MalformedHeader(f"homography needs 9 values, got {len(parts)}")
        try:
            return [float(p) for p in parts]
        except ValueError as exc:
            raise MalformedHeader(f"homography has non-numeric entry: {value!r}") from exc
    if key == "density_label":
        canon = value.strip().capitalize()
        if canon not in DENSITY_LABELS:
            raise MalformedHeader(f"density_label must be one of {DENSITY_LABELS}, got {value!r}")
        return canon
    if key == "coords":
        if value not in COORD_SPACES:
            raise MalformedHeader(f"coords must be one of {COORD_SPACES}, got {value!r}")
        return value
    return value


def _parse_row(fields: list[str], row_no: int) -> tuple[int, int, float, float]:
    if len(fields) != 4:
        raise MalformedHeader(f"row {row_no}: expected 4 columns, got {len(fields)}")
    try:
        frame = int(fields[0])
        ped = int(fields[1])
    except ValueError as exc:
        raise MalformedHeader(f"row {row_no}: frame and id must be integers") from exc
    if frame < 0:
        raise MalformedHeader(f"row {row_no}: negative frame index")
    try:
        x = float(fields[2])
        y = float(fields[3])
    except ValueError as exc:
        raise NonFinitePosition(row_no, f"row {row_no}: non-numeric position") from exc
    if not (math.isfinite(x) and math.isfinite(y)):
        raise NonFinitePosition(row_no, f"row {row_no}: non-finite position")
    return frame, ped, x, y


def _parse_csv(text: str) -> TrackedScene:
    header: dict = {}
    lines = text.splitlines()
    i = 0
    for i, line in enumerate(lines):
        stripped = line.strip()
        if not stripped:
            continue
        if not stripped.startswith("#"):
            break
        body = stripped.lstrip("#").strip()
        if "=" not in body:
            raise MalformedHeader(f"header line without key=value: {stripped!r}")
        key, _, value = body.partition("=")
        key = key.strip()
        if key not in _HEADER_KEYS:
            raise MalformedHeader(f"unknown header key {key!r}")
        header[key] = _parse_header_value(key, value.strip())
    else:
        raise MalformedHeader("file contains no column header")

    columns = tuple(c.strip() for c in lines[i].split(","))
    if columns != _COLUMNS:
        raise MalformedHeader(f"expected column header {','.join(_COLUMNS)!r}, got {lines[i]!r}")

    rows = []
    reader = csv.reader(io.StringIO("\n".join(lines[i + 1:])))
    for row_no, fields in enumerate(reader, start=i + 2):
        if not fields or (len(fields) == 1 and not fields[0].strip()):
            continue
        rows.append(_parse_row([f.strip() for f in fields], row_no))
    return _build_scene(header, rows)


def _parse_json(text: str) -> TrackedScene:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedHeader(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedHeader("top-level JSON value must be an object")
    header: dict = {}
    for key in _HEADER_KEYS:
        if key not in doc or doc[key] is None:
            continue
        value = doc[key]
        if key == "homography":
            if not isinstance(value, list) or len(value) != 9:
                raise MalformedHeader("homography must be a list of 9 numbers")
            header[key] = [float(v) for v in value]
        elif key == "fps":
            header[key] = _parse_header_value(key, str(value))
        else:
            header[key] = _parse_header_value(key, str(value))
    raw_rows = doc.get("rows")
    if not isinstance(raw_rows, list):
        raise MalformedHeader("missing 'rows' list")
    rows = []
    for row_no, entry in enumerate(raw_rows):
        if not isinstance(entry, list) or len(entry) != 4:
            raise MalformedHeader(f"rows[{row_no}] must be [frame, id, x, y]")
        rows.append(_parse_row([str(v) for v in entry], row_no))
    return _build_scene(header, rows)


def parse_tracking_file(data: bytes | str, fmt: str = "csv") -> TrackedScene:
    """Parse a canonical tracking file into a scene.

    Trajectories come out grouped by pedestrian id with samples sorted by
    frame; ``pedestrian_count`` is set from the parsed trajectories.
    """
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedHeader("input is not valid UTF-8") from exc
    else:
        text = data
    if fmt == "csv":
        return _parse_csv(text)
    if fmt == "json":
        return _parse_json(text)
    raise ValueError(f"unknown format {fmt!r}")


def detect_format(path: str) -> str:
    return "json" if str(path).lower().endswith(".json") else "csv"


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _scene_rows(scene: TrackedScene) -> list[tuple[int, int, float, float]]:
    rows = []
    for t in scene.trajectories:
        for f, p in zip(t.frames, t.positions):
            rows.append((int(f), t.pedestrian_id, float(p[0]), float(p[1])))
    rows.sort(key=lambda r: (r[0], r[1]))
    return rows


def serialize_scene(scene: TrackedScene, fmt: str = "csv") -> bytes:
    """Serialize to the canonical format; round-trips through the parser."""
    md = scene.metadata
    if fmt == "csv":
        out = [f"# scene_id={md.scene_id}"]
        if md.country:
            out.append(f"# country={md.country}")
        out.append(f"# fps={md.fps}")
        if md.density_label is not None:
            out.append(f"# density_label={md.density_label}")
        out.append(f"# coords={scene.coords}")
        if scene.transform is not None:
            flat = ",".join(repr(float(v)) for v in scene.transform.matrix.ravel())
            out.append(f"# homography={flat}")
        out.append(",".join(_COLUMNS))
        for frame, ped, x, y in _scene_rows(scene):
            out.append(f"{frame},{ped},{x!r},{y!r}")
        return ("\n".join(out) + "\n").encode("utf-8")
    if fmt == "json":
        doc = {
            "scene_id": md.scene_id,
            "country": md.country,
            "fps": md.fps,
            "density_label": md.density_label,
            "coords": scene.coords,
            "homography": (
                [float(v) for v in scene.transform.matrix.ravel()]
                if scene.transform is not None
                else None
            ),
            "rows": [[f, p, x, y] for f, p, x, y in _scene_rows(scene)],
        }
        return (json.dumps(doc, indent=None, separators=(",", ":")) + "\n").encode("utf-8")
    raise ValueError(f"unknown format {fmt!r}")


# ---------------------------------------------------------------------------
# normalization
# ---------------------------------------------------------------------------

def apply_transform(scene: TrackedScene, t: CoordinateTransform) -> TrackedScene:
    """Map every position through the homography; metadata is unchanged."""
    trajectories = [
        Trajectory(traj.pedestrian_id, traj.frames, t.apply(traj.positions))
        for traj in scene.trajectories
    ]
    return TrackedScene(
        metadata=scene.metadata,
        trajectories=trajectories,
        coords="world",
        transform=None,
    )


def ensure_world_coordinates(scene: TrackedScene) -> TrackedScene:
    """Apply the embedded homography when the scene is in image coordinates."""
    if scene.coords == "world":
        return scene
    if scene.transform is None:
        raise MalformedHeader(
            f"scene {scene.scene_id}: coords=image requires a homography header"
        )
    return apply_transform(scene, scene.transform)


def fill_gaps(traj: Trajectory, max_gap: int | None = None) -> Trajectory:
    """Insert linearly interpolated samples for every missing integer frame.

    ``max_gap`` bounds the number of consecutive missing frames; longer gaps
    raise ``TrackLost`` rather than inventing behavior.
    """
    if len(traj) < 2:
        raise TooFewSamples(f"pedestrian {traj.pedestrian_id}: need >= 2 samples to fill gaps")
    diffs = np.diff(traj.frames)
    if max_gap is not None:
        worst = int(diffs.max()) - 1
        if worst > max_gap:
            raise TrackLost(traj.pedestrian_id, worst, max_gap)
    if np.all(diffs == 1):
        return traj
    full = np.arange(traj.first_frame, traj.last_frame + 1, dtype=np.int64)
    x = np.interp(full, traj.frames, traj.positions[:, 0])
    y = np.interp(full, traj.frames, traj.positions[:, 1])
    return Trajectory(traj.pedestrian_id, full, np.column_stack([x, y]))


def with_filled_gaps(scene: TrackedScene, max_gap: int | None = None) -> TrackedScene:
    """Gap-fill every trajectory; default gap limit is two seconds of video."""
    if max_gap is None:
        max_gap = 2 * scene.metadata.fps
    filled = [
        fill_gaps(t, max_gap) if len(t) >= 2 else t
        for t in scene.trajectories
    ]
    return TrackedScene(
        metadata=scene.metadata,
        trajectories=filled,
        coords=scene.coords,
        transform=scene.transform,
    )
