// Viewer state machine: camera switching, playback controls and feed sync.
//
// Control actions update the local state optimistically and return the
// message to POST to the service, mirroring the server's own semantics.

import {
  AgentAbsentError,
  AgentRequiredError,
  Bounds,
  CameraMode,
  FramePayload,
  HighlightColor,
  RATES,
  SessionClosedError,
  ViewerState,
} from "./types.js";

export interface ControlMessage {
  action: "play" | "pause" | "stop" | "rate" | "seek";
  rate?: number;
  frame?: number;
}

export type PlaybackAction =
  | { type: "play" }
  | { type: "pause" }
  | { type: "stop" }
  | { type: "rewind" }
  | { type: "rate"; rate: number }
  | { type: "seek"; frame: number };

/** Seconds jumped backward by one rewind action. */
export const REWIND_SECONDS = 2;

export function initialViewerState(args: {
  sceneId: string;
  sessionId: string | null;
  frameRange: [number, number];
  fps: number;
  knownAgents: number[];
  sceneBounds: Bounds;
  highlight?: Record<number, HighlightColor>;
}): ViewerState {
  return {
    sceneId: args.sceneId,
    sessionId: args.sessionId,
    camera: "Top",
    avatarStyle: "Humanoid",
    followedAgent: null,
    fpYawOffset: 0,
    overlays: { emotion: false, socialization: false, collectivity: false },
    highlight: args.highlight ?? {},
    wallsEnabled: false,
    playback: { state: "Paused", rate: 1, cursor: args.frameRange[0] },
    frameRange: args.frameRange,
    fps: args.fps,
    knownAgents: args.knownAgents,
    sceneBounds: args.sceneBounds,
  };
}

/**
 * Change the camera mode. First person requires an agent to follow and
 * resets the view onto it; switching only changes the projection, never the
 * scene data.
 */
export function switchCamera(state: ViewerState, mode: CameraMode, agent?: number): ViewerState {
  if (mode === "FirstPerson") {
    if (agent === undefined || agent === null) {
      throw new AgentRequiredError();
    }
    if (!state.knownAgents.includes(agent)) {
      throw new AgentAbsentError(agent);
    }
    return { ...state, camera: mode, followedAgent: agent, fpYawOffset: 0 };
  }
  return { ...state, camera: mode };
}

/** Reset the first-person pose onto the followed agent's current heading. */
export function restartCamPos(state: ViewerState): ViewerState {
  return { ...state, fpYawOffset: 0 };
}

export function playbackControls(
  state: ViewerState,
  action: PlaybackAction,
): { state: ViewerState; message: ControlMessage } {
  if (!state.sessionId) {
    throw new SessionClosedError();
  }
  const [first, last] = state.frameRange;
  const clamp = (f: number) => Math.min(Math.max(f, first), last);

  switch (action.type) {
    case "play": {
      const cursor = state.playback.cursor >= last ? first : state.playback.cursor;
      return {
        state: { ...state, playback: { ...state.playback, state: "Playing", cursor } },
        message: { action: "play" },
      };
    }
    case "pause":
      return {
        state: { ...state, playback: { ...state.playback, state: "Paused" } },
        message: { action: "pause" },
      };
    case "stop":
      return {
        state: { ...state, playback: { ...state.playback, state: "Stopped" } },
        message: { action: "stop" },
      };
    case "rate": {
      if (!(RATES as readonly number[]).includes(action.rate)) {
        throw new Error(`rate must be one of ${RATES.join(", ")}`);
      }
      return {
        state: { ...state, playback: { ...state.playback, rate: action.rate } },
        message: { action: "rate", rate: action.rate },
      };
    }
    case "rewind": {
      const frame = clamp(state.playback.cursor - REWIND_SECONDS * state.fps);
      return {
        state: { ...state, playback: { ...state.playback, cursor: frame } },
        message: { action: "seek", frame },
      };
    }
    case "seek": {
      const frame = clamp(action.frame);
      return {
        state: { ...state, playback: { ...state.playback, cursor: frame } },
        message: { action: "seek", frame },
      };
    }
  }
}

/** True when a feed message is older than what the viewer already shows. */
export function isStale(state: ViewerState, payload: FramePayload): boolean {
  return payload.frame < state.playback.cursor;
}

/** Sync local playback state from a feed message (stale frames are ignored). */
export function applyFeedMessage(state: ViewerState, payload: FramePayload): ViewerState {
  if (isStale(state, payload)) {
    return state;
  }
  const playback = { ...state.playback, cursor: payload.frame };
  if (payload.playback) {
    playback.state = payload.playback.state;
    playback.rate = payload.playback.rate;
  }
  return { ...state, playback };
}
