import { describe, expect, it } from "vitest";

import { avatarCount, renderFrame, wallCount } from "../src/renderer.js";
import { AvatarStyle, CameraMode, StaleFrameError } from "../src/types.js";
import { makePayload, makeState } from "./helpers.js";

const CAMERAS: CameraMode[] = ["Top", "Oblique", "FirstPerson"];
const STYLES: AvatarStyle[] = ["Cylinder", "Humanoid"];

describe("renderFrame", () => {
  it.each(CAMERAS.flatMap((c) => STYLES.map((s) => [c, s] as const)))(
    "renders 12 avatars in %s camera with %s avatars",
    (camera, style) => {
      const state = makeState({
        camera,
        avatarStyle: style,
        followedAgent: camera === "FirstPerson" ? 1 : null,
      });
      const commands = renderFrame(state, makePayload(12));
      expect(avatarCount(commands)).toBe(12);
      expect(commands).toMatchSnapshot();
    },
  );

  it("keeps the avatar count equal to the payload count for any size", () => {
    for (const n of [1, 3, 7, 25]) {
      const commands = renderFrame(makeState(), makePayload(n));
      expect(avatarCount(commands)).toBe(n);
    }
  });

  it("is deterministic for identical inputs", () => {
    const state = makeState({ camera: "Oblique", avatarStyle: "Humanoid" });
    const a = renderFrame(state, makePayload());
    const b = renderFrame(state, makePayload());
    expect(a).toEqual(b);
  });

  it("never mutates the payload or the state", () => {
    const state = makeState({ camera: "Top" });
    const payload = makePayload();
    const stateCopy = JSON.parse(JSON.stringify(state));
    const payloadCopy = JSON.parse(JSON.stringify(payload));
    renderFrame(state, payload);
    expect(state).toEqual(stateCopy);
    expect(payload).toEqual(payloadCopy);
  });

  it("adds exactly 4 wall quads when walls are enabled", () => {
    const off = renderFrame(makeState(), makePayload());
    expect(wallCount(off)).toBe(0);
    for (const camera of CAMERAS) {
      const on = renderFrame(
        makeState({ camera, wallsEnabled: true,
                    followedAgent: camera === "FirstPerson" ? 1 : null }),
        makePayload(),
      );
      expect(wallCount(on)).toBe(4);
      expect(avatarCount(on)).toBe(12);
    }
  });

  it("drops stale frames", () => {
    const state = makeState({ playback: { state: "Playing", rate: 1, cursor: 50 } });
    expect(() => renderFrame(state, makePayload(12, 49))).toThrow(StaleFrameError);
    expect(() => renderFrame(state, makePayload(12, 50))).not.toThrow();
  });

  it("marks highlighted pedestrians with their tint", () => {
    const state = makeState({ highlight: { 2: "yellow", 5: "red" } });
    const payload = makePayload();
    payload.pedestrians[1].color = "yellow";
    payload.pedestrians[4].color = "red";
    const commands = renderFrame(state, payload);
    const avatars = commands.filter((c) => c.kind === "avatar");
    const byId = new Map(avatars.map((a) => [a.kind === "avatar" ? a.id : -1, a]));
    expect((byId.get(2) as { tint: string }).tint).toBe("#facc15");
    expect((byId.get(5) as { tint: string }).tint).toBe("#ef4444");
    expect((byId.get(3) as { tint: null }).tint).toBeNull();
  });

  it("draws overlay labels with a color ramp when toggled", () => {
    const state = makeState({
      overlays: { emotion: true, socialization: false, collectivity: true },
    });
    const commands = renderFrame(state, makePayload());
    const labels = commands.filter((c) => c.kind === "label");
    // one collectivity + one emotion label per pedestrian
    expect(labels.length).toBe(24);
    const texts = labels.map((l) => (l.kind === "label" ? l.text : ""));
    expect(texts.some((t) => t.startsWith("col "))).toBe(true);
    expect(texts.some((t) => t.startsWith("happiness "))).toBe(true);
  });

  it("humanoid avatars carry pose segments, cylinders do not", () => {
    const humanoid = renderFrame(makeState({ avatarStyle: "Humanoid" }), makePayload());
    const cylinder = renderFrame(makeState({ avatarStyle: "Cylinder" }), makePayload());
    for (const cmd of humanoid) {
      if (cmd.kind === "avatar") {
        expect(cmd.segments).toBeDefined();
        expect(cmd.segments!.length).toBe(6);
      }
    }
    for (const cmd of cylinder) {
      if (cmd.kind === "avatar") {
        expect(cmd.segments).toBeUndefined();
      }
    }
  });

  it("run animation swings limbs further than idle", () => {
    const state = makeState({ avatarStyle: "Humanoid" });
    const payload = makePayload(2);
    payload.pedestrians[0].animation = "Idle";
    payload.pedestrians[1].animation = "Run";
    payload.pedestrians[1].x = payload.pedestrians[0].x; // same depth/scale
    payload.pedestrians[1].y = payload.pedestrians[0].y;
    const commands = renderFrame(state, payload);
    const avatars = commands.filter((c) => c.kind === "avatar");
    const spread = (cmd: (typeof avatars)[number]) => {
      if (cmd.kind !== "avatar" || !cmd.segments) {
        return 0;
      }
      const [l, r] = [cmd.segments[2], cmd.segments[3]];
      return Math.hypot(l.to.x - r.to.x, l.to.y - r.to.y);
    };
    const idle = avatars.find((a) => a.kind === "avatar" && a.animation === "Idle")!;
    const run = avatars.find((a) => a.kind === "avatar" && a.animation === "Run")!;
    expect(spread(run)).toBeGreaterThan(spread(idle));
  });
});
