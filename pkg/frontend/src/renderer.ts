// Pure frame renderer: (ViewerState, FramePayload) -> draw commands.
//
// Invariants: one avatar command per pedestrian in the payload, every frame,
// in every camera mode; walls contribute exactly four quads when enabled;
// identical inputs produce identical command lists.

import { avatarCommand, gaitPhase } from "./avatars.js";
import { DEFAULT_VIEWPORT, makeProjector, Projector, Viewport } from "./camera.js";
import {
  Bounds,
  DrawCommand,
  FramePayload,
  PedestrianRecord,
  StaleFrameError,
  Vec2,
  ViewerState,
  WALL_HEIGHT_M,
  WALL_MARGIN_M,
} from "./types.js";

const BACKGROUND = "#1c1f26";
const LABEL_COLOR = "#e5e7eb";

function rampColor(value: number): string {
  // blue (0) -> red (1)
  const v = Math.min(Math.max(value, 0), 1);
  const r = Math.round(40 + 215 * v);
  const b = Math.round(255 - 215 * v);
  return `rgb(${r},70,${b})`;
}

function wallCommands(bounds: Bounds, proj: Projector): DrawCommand[] {
  const x0 = bounds.minX - WALL_MARGIN_M;
  const x1 = bounds.maxX + WALL_MARGIN_M;
  const y0 = bounds.minY - WALL_MARGIN_M;
  const y1 = bounds.maxY + WALL_MARGIN_M;
  const ground: [Vec2, Vec2][] = [
    [{ x: x0, y: y0 }, { x: x1, y: y0 }],
    [{ x: x1, y: y0 }, { x: x1, y: y1 }],
    [{ x: x1, y: y1 }, { x: x0, y: y1 }],
    [{ x: x0, y: y1 }, { x: x0, y: y0 }],
  ];
  return ground.map(([a, b]) => {
    const pa = proj.project(a, 0);
    const pb = proj.project(b, 0);
    const ta = proj.project(a, WALL_HEIGHT_M);
    const tb = proj.project(b, WALL_HEIGHT_M);
    return {
      kind: "wall" as const,
      corners: [pa.point, pb.point, tb.point, ta.point],
      depth: (pa.depth + pb.depth) / 2,
      visible: pa.visible || pb.visible,
    };
  });
}

function overlayLabels(
  rec: PedestrianRecord,
  state: ViewerState,
  proj: Projector,
): DrawCommand[] {
  const head = proj.project({ x: rec.x, y: rec.y }, 1.9);
  const lines: { text: string; color: string }[] = [];
  if (state.overlays.collectivity && rec.collectivity !== undefined) {
    lines.push({ text: `col ${rec.collectivity.toFixed(2)}`, color: rampColor(rec.collectivity) });
  }
  if (state.overlays.socialization && rec.socialization !== undefined) {
    lines.push({ text: `soc ${rec.socialization.toFixed(2)}`, color: rampColor(rec.socialization) });
  }
  if (state.overlays.emotion && rec.emotion !== undefined) {
    const e = rec.emotion;
    const value = e[e.dominant as keyof typeof e];
    lines.push({
      text: `${e.dominant} ${(value as number).toFixed(2)}`,
      color: LABEL_COLOR,
    });
  }
  return lines.map((line, i) => ({
    kind: "label" as const,
    agent: rec.id,
    text: line.text,
    at: { x: head.point.x, y: head.point.y - 12 * i },
    color: line.color,
    visible: head.visible,
  }));
}

/**
 * Render one frame into a draw-command list.
 *
 * Throws StaleFrameError when the payload is older than the playback cursor;
 * the caller drops such frames (latest-wins coalescing).
 */
export function renderFrame(
  state: ViewerState,
  payload: FramePayload,
  viewport: Viewport = DEFAULT_VIEWPORT,
): DrawCommand[] {
  if (payload.frame < state.playback.cursor) {
    throw new StaleFrameError(payload.frame, state.playback.cursor);
  }
  const proj = makeProjector(state, payload, viewport);
  const commands: DrawCommand[] = [{ kind: "clear", color: BACKGROUND }];

  if (state.wallsEnabled) {
    commands.push(...wallCommands(state.sceneBounds, proj));
  }

  const pedestrians = [...payload.pedestrians].sort((a, b) => a.id - b.id);
  const avatars = pedestrians.map((rec) =>
    avatarCommand(rec, state.avatarStyle, proj, gaitPhase(payload.frame, payload.fps, rec.id, rec.animation)),
  );
  // painter order: far to near, id as tiebreak for determinism
  avatars.sort((a, b) => {
    const da = a.kind === "avatar" ? a.depth : 0;
    const db = b.kind === "avatar" ? b.depth : 0;
    if (da !== db) {
      return db - da;
    }
    return (a.kind === "avatar" ? a.id : 0) - (b.kind === "avatar" ? b.id : 0);
  });
  commands.push(...avatars);

  for (const rec of pedestrians) {
    commands.push(...overlayLabels(rec, state, proj));
  }
  return commands;
}

/** Avatar commands in a rendered list (the count must match the payload). */
export function avatarCount(commands: DrawCommand[]): number {
  return commands.filter((c) => c.kind === "avatar").length;
}

export function wallCount(commands: DrawCommand[]): number {
  return commands.filter((c) => c.kind === "wall").length;
}
