// Camera projections. World coordinates are meters on the ground plane
// (x east, y north); the third axis is height. Screen space is pixels with
// the origin top-left.

import {
  Bounds,
  EYE_HEIGHT_M,
  FramePayload,
  OBLIQUE_PITCH_DEG,
  Vec2,
  ViewerState,
} from "./types.js";

export interface Viewport {
  width: number;
  height: number;
}

export const DEFAULT_VIEWPORT: Viewport = { width: 960, height: 600 };

export interface Projection {
  point: Vec2;
  /** Distance along the view axis; orders the painter back-to-front. */
  depth: number;
  /** Pixels per meter at this depth; sizes avatars. */
  scale: number;
  visible: boolean;
}

export interface Projector {
  mode: ViewerState["camera"];
  /** Downward tilt of the view axis, degrees (90 = straight down). */
  pitchDeg: number;
  project(world: Vec2, height?: number): Projection;
}

const FOV_DEG = 60;
const NEAR = 0.05;

function center(b: Bounds): Vec2 {
  return { x: (b.minX + b.maxX) / 2, y: (b.minY + b.maxY) / 2 };
}

function topProjector(bounds: Bounds, vp: Viewport): Projector {
  const c = center(bounds);
  const extentX = Math.max(bounds.maxX - bounds.minX, 1) + 4;
  const extentY = Math.max(bounds.maxY - bounds.minY, 1) + 4;
  const scale = Math.min(vp.width / extentX, vp.height / extentY);
  return {
    mode: "Top",
    pitchDeg: 90,
    project(world, _height = 0) {
      return {
        point: {
          x: vp.width / 2 + (world.x - c.x) * scale,
          y: vp.height / 2 - (world.y - c.y) * scale,
        },
        depth: bounds.maxY - world.y,
        scale,
        visible: true,
      };
    },
  };
}

interface Pose {
  eye: [number, number, number]; // x, height, y
  yawDeg: number;   // 0 looks along +x
  pitchDeg: number; // downward tilt
}

function perspectiveProjector(mode: ViewerState["camera"], pose: Pose, vp: Viewport): Projector {
  const yaw = (pose.yawDeg * Math.PI) / 180;
  const pitch = (pose.pitchDeg * Math.PI) / 180;
  // forward tilted down by pitch; right stays on the ground plane
  const fwd = [
    Math.cos(yaw) * Math.cos(pitch),
    -Math.sin(pitch),
    Math.sin(yaw) * Math.cos(pitch),
  ];
  const right = [-Math.sin(yaw), 0, Math.cos(yaw)];
  // up = right x forward
  const up = [
    -right[2] * fwd[1],
    right[2] * fwd[0] - right[0] * fwd[2],
    right[0] * fwd[1],
  ];
  const f = vp.height / 2 / Math.tan(((FOV_DEG / 2) * Math.PI) / 180);

  return {
    mode,
    pitchDeg: pose.pitchDeg,
    project(world, height = 0) {
      const d = [world.x - pose.eye[0], height - pose.eye[1], world.y - pose.eye[2]];
      const cz = d[0] * fwd[0] + d[1] * fwd[1] + d[2] * fwd[2];
      const cx = d[0] * right[0] + d[1] * right[1] + d[2] * right[2];
      const cy = d[0] * up[0] + d[1] * up[1] + d[2] * up[2];
      const z = Math.max(cz, NEAR);
      return {
        point: {
          x: vp.width / 2 + (f * cx) / z,
          y: vp.height / 2 - (f * cy) / z,
        },
        depth: cz,
        scale: f / z,
        visible: cz > NEAR,
      };
    },
  };
}

/** Build the projector for the current camera mode. */
export function makeProjector(
  state: ViewerState,
  payload: FramePayload,
  vp: Viewport = DEFAULT_VIEWPORT,
): Projector {
  const bounds = state.sceneBounds;
  if (state.camera === "Top") {
    return topProjector(bounds, vp);
  }
  if (state.camera === "Oblique") {
    const c = center(bounds);
    const diag = Math.hypot(bounds.maxX - bounds.minX, bounds.maxY - bounds.minY);
    const dist = Math.max(diag, 8) * 1.3;
    const pitch = (OBLIQUE_PITCH_DEG * Math.PI) / 180;
    return perspectiveProjector(
      "Oblique",
      {
        // south of the scene, looking north and down at 45 degrees
        eye: [c.x, Math.sin(pitch) * dist, c.y - Math.cos(pitch) * dist],
        yawDeg: 90,
        pitchDeg: OBLIQUE_PITCH_DEG,
      },
      vp,
    );
  }
  // First person: ride the followed agent at eye height. If the agent is not
  // in this frame the camera falls back to the scene center.
  const followed = payload.pedestrians.find((p) => p.id === state.followedAgent);
  if (followed) {
    return perspectiveProjector(
      "FirstPerson",
      {
        eye: [followed.x, EYE_HEIGHT_M, followed.y],
        yawDeg: followed.heading + state.fpYawOffset,
        pitchDeg: 10,
      },
      vp,
    );
  }
  const c = center(bounds);
  return perspectiveProjector(
    "FirstPerson",
    { eye: [c.x, EYE_HEIGHT_M, c.y], yawDeg: state.fpYawOffset, pitchDeg: 10 },
    vp,
  );
}
