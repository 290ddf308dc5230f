// Canvas 2D interpreter for renderer draw commands.

import { DrawCommand } from "./types.js";

const CYLINDER_FILL = "#9ca3af";
const HUMANOID_STROKE = "#d1d5db";
const WALL_FILL = "rgba(148, 163, 184, 0.35)";
const WALL_EDGE = "#94a3b8";

export function paint(ctx: CanvasRenderingContext2D, commands: DrawCommand[]): void {
  for (const cmd of commands) {
    switch (cmd.kind) {
      case "clear":
        ctx.fillStyle = cmd.color;
        ctx.fillRect(0, 0, ctx.canvas.width, ctx.canvas.height);
        break;
      case "wall": {
        if (!cmd.visible) {
          break;
        }
        ctx.beginPath();
        ctx.moveTo(cmd.corners[0].x, cmd.corners[0].y);
        for (const c of cmd.corners.slice(1)) {
          ctx.lineTo(c.x, c.y);
        }
        ctx.closePath();
        ctx.fillStyle = WALL_FILL;
        ctx.fill();
        ctx.strokeStyle = WALL_EDGE;
        ctx.stroke();
        break;
      }
      case "avatar": {
        if (!cmd.visible) {
          break;
        }
        if (cmd.style === "Cylinder" || !cmd.segments) {
          const w = Math.max(cmd.radiusPx * 2, 2);
          const h = Math.max(cmd.heightPx, 3);
          ctx.fillStyle = cmd.tint ?? CYLINDER_FILL;
          ctx.fillRect(cmd.anchor.x - w / 2, cmd.anchor.y - h, w, h);
          ctx.beginPath();
          ctx.ellipse(cmd.anchor.x, cmd.anchor.y - h, w / 2, w / 4, 0, 0, 2 * Math.PI);
          ctx.fill();
        } else {
          ctx.strokeStyle = cmd.tint ?? HUMANOID_STROKE;
          for (const seg of cmd.segments) {
            ctx.lineWidth = seg.width;
            ctx.beginPath();
            ctx.moveTo(seg.from.x, seg.from.y);
            ctx.lineTo(seg.to.x, seg.to.y);
            ctx.stroke();
          }
          const head = cmd.segments[1].to;
          ctx.beginPath();
          ctx.arc(head.x, head.y, Math.max(cmd.radiusPx * 0.6, 1.5), 0, 2 * Math.PI);
          ctx.fillStyle = cmd.tint ?? HUMANOID_STROKE;
          ctx.fill();
        }
        ctx.lineWidth = 1;
        break;
      }
      case "label":
        if (!cmd.visible) {
          break;
        }
        ctx.font = "11px monospace";
        ctx.textAlign = "center";
        ctx.fillStyle = cmd.color;
        ctx.fillText(cmd.text, cmd.at.x, cmd.at.y);
        break;
    }
  }
}
