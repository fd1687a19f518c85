// Front-view rendering of the shared scene: X right, Z up, world [-5, 5]
// mapped onto the canvas. Primitives draw as their projected footprints;
// fidelity beyond "a box twice as tall as wide looks that way" is a non-goal.

import type { SceneObjectData } from "./protocol.js";
import { WORLD_HALF_SPAN, type SceneState, type Viewport } from "./scene.js";

export interface Box {
  x: number;
  y: number;
  width: number;
  height: number;
}

export function projectedBox(obj: SceneObjectData, viewport: Viewport): Box {
  const span = 2 * WORLD_HALF_SPAN;
  const pxPerUnitX = viewport.w_px / span;
  const pxPerUnitZ = viewport.h_px / span;
  // unit primitives span one scene unit per axis before scaling
  const width = obj.scale[0] * pxPerUnitX;
  const height = obj.scale[2] * pxPerUnitZ;
  const cx = ((obj.translation[0] + WORLD_HALF_SPAN) / span) * viewport.w_px;
  const cy = (1 - (obj.translation[2] + WORLD_HALF_SPAN) / span) * viewport.h_px;
  return { x: cx - width / 2, y: cy - height / 2, width, height };
}

export function renderScene(
  ctx: CanvasRenderingContext2D,
  scene: SceneState,
  viewport: Viewport,
): void {
  ctx.clearRect(0, 0, viewport.w_px, viewport.h_px);
  ctx.save();
  // ground line at z = 0
  const groundY = (1 - 0.5) * viewport.h_px;
  ctx.strokeStyle = "#30363d";
  ctx.beginPath();
  ctx.moveTo(0, groundY);
  ctx.lineTo(viewport.w_px, groundY);
  ctx.stroke();
  for (const obj of [...scene.objects].sort((a, b) => a.id - b.id)) {
    const box = projectedBox(obj, viewport);
    const selected = scene.selection === obj.id;
    ctx.lineWidth = selected ? 3 : 1.5;
    ctx.strokeStyle = selected ? "#e3b341" : "#58a6ff";
    ctx.fillStyle = selected ? "rgba(227,179,65,0.15)" : "rgba(88,166,255,0.12)";
    if (obj.primitive === "cylinder") {
      const r = box.width / 2;
      ctx.beginPath();
      ctx.ellipse(box.x + r, box.y + box.height / 2, r, box.height / 2, 0, 0, Math.PI * 2);
      ctx.fill();
      ctx.stroke();
    } else {
      ctx.fillRect(box.x, box.y, box.width, box.height);
      ctx.strokeRect(box.x, box.y, box.width, box.height);
    }
  }
  ctx.restore();
}
