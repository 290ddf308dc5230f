// Shared fixtures: a deterministic 12-pedestrian payload and viewer state.

import { initialViewerState } from "../src/playback.js";
import { Animation, FramePayload, PedestrianRecord, ViewerState } from "../src/types.js";

export function makePayload(n = 12, frame = 10): FramePayload {
  const animations: Animation[] = ["Idle", "Walk", "Run"];
  const pedestrians: PedestrianRecord[] = [];
  for (let i = 0; i < n; i++) {
    pedestrians.push({
      id: i + 1,
      x: (i % 4) * 2.5 - 3.75,
      y: Math.floor(i / 4) * 2.0 - 2.0,
      heading: (i * 30) % 360 - 180,
      animation: animations[i % 3],
      collectivity: (i % 10) / 10,
      socialization: ((i * 3) % 10) / 10,
      emotion: { fear: 0.4, happiness: 0.6, sadness: 0.45, anger: 0.5, dominant: "happiness" },
    });
  }
  return { scene_id: "demo", frame, fps: 24, pedestrians };
}

export function makeState(overrides: Partial<ViewerState> = {}): ViewerState {
  const base = initialViewerState({
    sceneId: "demo",
    sessionId: "sess-1",
    frameRange: [0, 239],
    fps: 24,
    knownAgents: makePayload().pedestrians.map((p) => p.id),
    sceneBounds: { minX: -6, maxX: 6, minY: -4, maxY: 4 },
  });
  return { ...base, ...overrides, playback: { ...base.playback, ...(overrides.playback ?? {}) } };
}
