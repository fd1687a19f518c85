// Canonical scene serialization, byte-compatible with the server: fixed field
// order, id-sorted objects, every decimal as 6 fixed fractional digits,
// negative zero normalized. scene_hash is the SHA-256 hex of exactly these
// bytes, which is how a replica proves it converged.

import type { TransformEntry, Vec3 } from "./protocol.js";
import type { SceneState } from "./scene.js";

function fixed(v: number): string {
  const s = v.toFixed(6);
  return s === "-0.000000" ? "0.000000" : s;
}

const vec3 = (v: Vec3) => `[${fixed(v[0])},${fixed(v[1])},${fixed(v[2])}]`;
const transform = (t: TransformEntry) => `[${vec3(t[0])},${vec3(t[1])},${vec3(t[2])}]`;

export function canonicalScene(scene: SceneState): string {
  const objects = [...scene.objects]
    .sort((a, b) => a.id - b.id)
    .map(
      (o) =>
        `{"id":${o.id},"primitive":"${o.primitive}","translation":${vec3(o.translation)},` +
        `"rotation":${vec3(o.rotation)},"scale":${vec3(o.scale)}}`,
    )
    .join(",");
  const pendingKeys = [...scene.pending.keys()].sort((a, b) => a - b);
  const pending = pendingKeys.map((k) => `"${k}":${transform(scene.pending.get(k)!)}`).join(",");
  const undo = scene.undoStack
    .map((s) =>
      s.kind === "create"
        ? `{"kind":"create","id":${s.id}}`
        : `{"kind":"transform","id":${s.id},"before":${transform(s.before)},"after":${transform(s.after)}}`,
    )
    .join(",");
  const selection = scene.selection === null ? "null" : String(scene.selection);
  return (
    `{"next_id":${scene.nextId},"selection":${selection},"view":"${scene.view}",` +
    `"objects":[${objects}],"pending":{${pending}},"undo_stack":[${undo}]}`
  );
}

export async function sha256Hex(text: string): Promise<string> {
  const bytes = new TextEncoder().encode(text);
  const digest = await crypto.subtle.digest("SHA-256", bytes);
  return [...new Uint8Array(digest)].map((b) => b.toString(16).padStart(2, "0")).join("");
}

export async function sceneHash(scene: SceneState): Promise<string> {
  return sha256Hex(canonicalScene(scene));
}
