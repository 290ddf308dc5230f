// Avatar draw-command generation: cylinders and stick humanoids with
// animation-driven pose cycles.

import { Projector } from "./camera.js";
import {
  Animation,
  AvatarStyle,
  CYLINDER_HEIGHT_M,
  CYLINDER_RADIUS_M,
  DrawCommand,
  PedestrianRecord,
  Segment,
} from "./types.js";

const TINTS: Record<string, string> = { yellow: "#facc15", red: "#ef4444" };

// stride cycles per second; idle avatars hold phase 0
const STRIDE_HZ: Record<Animation, number> = { Idle: 0, Walk: 1.6, Run: 2.6 };

/** Deterministic gait phase in [0, 1): a function of frame, fps and agent id. */
export function gaitPhase(frame: number, fps: number, id: number, animation: Animation): number {
  const hz = STRIDE_HZ[animation];
  if (hz === 0) {
    return 0;
  }
  const phase = (frame / fps) * hz + id * 0.17;
  return phase - Math.floor(phase);
}

function humanoidSegments(
  rec: PedestrianRecord,
  proj: Projector,
  phase: number,
): Segment[] {
  const swingAmp = rec.animation === "Run" ? 0.55 : rec.animation === "Walk" ? 0.3 : 0;
  const swing = Math.sin(phase * 2 * Math.PI) * swingAmp;
  const headingRad = (rec.heading * Math.PI) / 180;
  const dir = { x: Math.cos(headingRad), y: Math.sin(headingRad) };

  const at = (forward: number, height: number) =>
    proj.project({ x: rec.x + dir.x * forward, y: rec.y + dir.y * forward }, height).point;

  const pelvis = at(0, 0.95);
  const neck = at(0, 1.45);
  const headTop = at(0, 1.7);
  const footL = at(swing * 0.4, 0);
  const footR = at(-swing * 0.4, 0);
  const handL = at(-swing * 0.35, 0.8);
  const handR = at(swing * 0.35, 0.8);

  const limb = 2;
  return [
    { from: pelvis, to: neck, width: 3 },
    { from: neck, to: headTop, width: 3 },
    { from: pelvis, to: footL, width: limb },
    { from: pelvis, to: footR, width: limb },
    { from: neck, to: handL, width: limb },
    { from: neck, to: handR, width: limb },
  ];
}

export function avatarCommand(
  rec: PedestrianRecord,
  style: AvatarStyle,
  proj: Projector,
  phase: number,
): DrawCommand {
  const base = proj.project({ x: rec.x, y: rec.y }, 0);
  const command: DrawCommand = {
    kind: "avatar",
    id: rec.id,
    style,
    animation: rec.animation,
    anchor: base.point,
    radiusPx: CYLINDER_RADIUS_M * base.scale,
    heightPx: CYLINDER_HEIGHT_M * base.scale,
    tint: rec.color ? TINTS[rec.color] : null,
    depth: base.depth,
    visible: base.visible,
  };
  if (style === "Humanoid") {
    command.segments = humanoidSegments(rec, proj, phase);
  }
  return command;
}
