// Client-side replica of the scene kernel. Directives carry absolute values,
// so application is assignment-only and every replica lands on identical
// numbers. Semantics must match the server exactly: same undo granularity,
// same pending-bracket rules, same pick math.

import type { Directive, SceneSnapshot, SceneObjectData, TransformEntry, UndoStep, Vec3 } from "./protocol.js";

export interface Viewport {
  w_px: number;
  h_px: number;
}

export const DEFAULT_VIEWPORT: Viewport = { w_px: 1920, h_px: 1080 };
export const PICK_RADIUS_PX = 40.0;
export const WORLD_HALF_SPAN = 5.0;

export interface SceneState {
  nextId: number;
  selection: number | null;
  view: "default" | "front";
  objects: SceneObjectData[];
  pending: Map<number, TransformEntry>;
  undoStack: UndoStep[];
}

export function emptyScene(): SceneState {
  return {
    nextId: 1,
    selection: null,
    view: "default",
    objects: [],
    pending: new Map(),
    undoStack: [],
  };
}

const vec = (v: Vec3): Vec3 => [v[0], v[1], v[2]];
const entry = (o: SceneObjectData): TransformEntry => [vec(o.translation), vec(o.rotation), vec(o.scale)];
const vecEq = (a: Vec3, b: Vec3) => a[0] === b[0] && a[1] === b[1] && a[2] === b[2];
const entryEq = (a: TransformEntry, b: TransformEntry) =>
  vecEq(a[0], b[0]) && vecEq(a[1], b[1]) && vecEq(a[2], b[2]);

export function sceneFromSnapshot(snapshot: SceneSnapshot): SceneState {
  const pending = new Map<number, TransformEntry>();
  for (const [key, value] of Object.entries(snapshot.pending)) {
    pending.set(Number(key), [vec(value[0]), vec(value[1]), vec(value[2])]);
  }
  return {
    nextId: snapshot.next_id,
    selection: snapshot.selection,
    view: snapshot.view,
    objects: snapshot.objects.map((o) => ({
      id: o.id,
      primitive: o.primitive,
      translation: vec(o.translation),
      rotation: vec(o.rotation),
      scale: vec(o.scale),
    })),
    pending,
    undoStack: snapshot.undo_stack.map((s) =>
      s.kind === "create"
        ? { kind: "create", id: s.id }
        : {
            kind: "transform",
            id: s.id,
            before: [vec(s.before[0]), vec(s.before[1]), vec(s.before[2])],
            after: [vec(s.after[0]), vec(s.after[1]), vec(s.after[2])],
          },
    ),
  };
}

function find(scene: SceneState, id: number): SceneObjectData | undefined {
  return scene.objects.find((o) => o.id === id);
}

function require(scene: SceneState, id: number, what: string): SceneObjectData {
  const obj = find(scene, id);
  if (!obj) throw new Error(`${what}: no object with id ${id}`);
  return obj;
}

export function applyDirective(scene: SceneState, d: Directive, viewport: Viewport = DEFAULT_VIEWPORT): void {
  switch (d.kind) {
    case "create": {
      scene.objects.push({
        id: scene.nextId,
        primitive: d.primitive,
        translation: [0, 0, 0],
        rotation: [0, 0, 0],
        scale: [1, 1, 1],
      });
      scene.selection = scene.nextId;
      scene.undoStack.push({ kind: "create", id: scene.nextId });
      scene.nextId += 1;
      break;
    }
    case "set_transform": {
      const obj = require(scene, d.object_id, "set_transform");
      if (!(d.scale[0] > 0 && d.scale[1] > 0 && d.scale[2] > 0)) {
        throw new Error(`scale components must be positive, got ${d.scale}`);
      }
      if (!scene.pending.has(d.object_id)) {
        scene.pending.set(d.object_id, entry(obj));
      }
      obj.translation = vec(d.translation);
      obj.rotation = vec(d.rotation);
      obj.scale = vec(d.scale);
      break;
    }
    case "commit": {
      let oid = d.object_id;
      if (oid === undefined) {
        if (scene.pending.size === 0) return;
        if (scene.pending.size > 1) throw new Error("ambiguous commit");
        oid = scene.pending.keys().next().value as number;
      }
      const before = scene.pending.get(oid);
      if (before === undefined) return;
      scene.pending.delete(oid);
      const obj = require(scene, oid, "commit");
      const after = entry(obj);
      if (!entryEq(before, after)) {
        scene.undoStack.push({ kind: "transform", id: oid, before, after });
      }
      break;
    }
    case "cancel": {
      const obj = require(scene, d.object_id, "cancel");
      obj.translation = vec(d.translation);
      obj.rotation = vec(d.rotation);
      obj.scale = vec(d.scale);
      scene.pending.delete(d.object_id);
      break;
    }
    case "undo": {
      const step = scene.undoStack.pop();
      if (!step) return;
      if (step.kind === "create") {
        scene.objects = scene.objects.filter((o) => o.id !== step.id);
        scene.pending.delete(step.id);
        if (scene.selection === step.id) scene.selection = null;
      } else {
        const obj = require(scene, step.id, "undo");
        obj.translation = vec(step.before[0]);
        obj.rotation = vec(step.before[1]);
        obj.scale = vec(step.before[2]);
      }
      break;
    }
    case "select_at": {
      scene.selection = pick(scene, [d.x_px, d.y_px], viewport);
      break;
    }
    case "view_front": {
      scene.view = "front";
      break;
    }
  }
}

export function project(translation: Vec3, viewport: Viewport): [number, number] {
  const span = 2.0 * WORLD_HALF_SPAN;
  const u = ((translation[0] + WORLD_HALF_SPAN) / span) * viewport.w_px;
  const v = (1.0 - (translation[2] + WORLD_HALF_SPAN) / span) * viewport.h_px;
  return [u, v];
}

export function pick(scene: SceneState, cursor: [number, number], viewport: Viewport): number | null {
  let bestId: number | null = null;
  let bestD = Infinity;
  const sorted = [...scene.objects].sort((a, b) => a.id - b.id);
  for (const obj of sorted) {
    const [u, v] = project(obj.translation, viewport);
    const du = u - cursor[0];
    const dv = v - cursor[1];
    // sqrt form matches the server bit for bit in IEEE arithmetic
    const d = Math.sqrt(du * du + dv * dv);
    if (d <= PICK_RADIUS_PX && d < bestD) {
      bestD = d;
      bestId = obj.id;
    }
  }
  return bestId;
}
