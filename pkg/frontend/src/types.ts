// Shared viewer types: service wire formats, viewer state and draw commands.

export type CameraMode = "Top" | "Oblique" | "FirstPerson";
export type AvatarStyle = "Cylinder" | "Humanoid";
export type Animation = "Idle" | "Walk" | "Run";
export type PlayState = "Playing" | "Paused" | "Stopped";
export type HighlightColor = "yellow" | "red";

export const RATES = [0.5, 1, 2, 4] as const;

// Avatar geometry (meters)
export const CYLINDER_RADIUS_M = 0.3;
export const CYLINDER_HEIGHT_M = 1.7;
export const EYE_HEIGHT_M = 1.6;
export const OBLIQUE_PITCH_DEG = 45;
export const WALL_MARGIN_M = 0.5;
export const WALL_HEIGHT_M = 2.2;

/** One pedestrian in a frame payload, as served by the playback service. */
export interface PedestrianRecord {
  id: number;
  x: number;
  y: number;
  heading: number;
  animation: Animation;
  color?: HighlightColor;
  collectivity?: number;
  socialization?: number;
  emotion?: {
    fear: number;
    happiness: number;
    sadness: number;
    anger: number;
    dominant: string;
  };
}

export interface FramePayload {
  scene_id: string;
  frame: number;
  fps: number;
  pedestrians: PedestrianRecord[];
  playback?: { state: PlayState; rate: number };
}

export interface SceneInfo {
  scene_id: string;
  country: string;
  fps: number;
  pedestrian_count: number;
  density_label: string | null;
  density_computed: string;
  frame_range: [number, number];
}

export interface SessionInfo {
  session_id: string;
  scene_id: string;
  cursor_frame: number;
  rate: number;
  state: PlayState;
  fps: number;
  frame_range: [number, number];
}

export interface OverlayToggles {
  emotion: boolean;
  socialization: boolean;
  collectivity: boolean;
}

export interface Bounds {
  minX: number;
  maxX: number;
  minY: number;
  maxY: number;
}

export interface ViewerState {
  sceneId: string;
  sessionId: string | null;
  camera: CameraMode;
  avatarStyle: AvatarStyle;
  /** Agent the first-person camera is attached to. */
  followedAgent: number | null;
  /** User turn relative to the followed agent's heading; RestartCamPos zeroes it. */
  fpYawOffset: number;
  overlays: OverlayToggles;
  highlight: Record<number, HighlightColor>;
  wallsEnabled: boolean;
  playback: { state: PlayState; rate: number; cursor: number };
  frameRange: [number, number];
  fps: number;
  knownAgents: number[];
  sceneBounds: Bounds;
}

export interface Vec2 {
  x: number;
  y: number;
}

export interface Segment {
  from: Vec2;
  to: Vec2;
  width: number;
}

/**
 * Renderer output. Rendering is a pure function of (state, payload), so a
 * command list is snapshot-testable; the canvas painter interprets it.
 * `visible: false` marks geometry behind the camera (emitted anyway so the
 * avatar count always matches the payload).
 */
export type DrawCommand =
  | { kind: "clear"; color: string }
  | { kind: "wall"; corners: Vec2[]; depth: number; visible: boolean }
  | {
      kind: "avatar";
      id: number;
      style: AvatarStyle;
      animation: Animation;
      anchor: Vec2;
      radiusPx: number;
      heightPx: number;
      tint: string | null;
      depth: number;
      visible: boolean;
      segments?: Segment[];
    }
  | { kind: "label"; agent: number; text: string; at: Vec2; color: string; visible: boolean };

export class StaleFrameError extends Error {
  constructor(frame: number, cursor: number) {
    super(`payload frame ${frame} is older than cursor ${cursor}`);
    this.name = "StaleFrameError";
  }
}

export class AgentRequiredError extends Error {
  constructor() {
    super("first-person camera needs an agent to follow");
    this.name = "AgentRequiredError";
  }
}

export class AgentAbsentError extends Error {
  constructor(agent: number) {
    super(`agent ${agent} is not part of the scene`);
    this.name = "AgentAbsentError";
  }
}

export class SessionClosedError extends Error {
  constructor() {
    super("no open playback session");
    this.name = "SessionClosedError";
  }
}
