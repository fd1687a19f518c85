// Scene store: Welcome snapshot plus in-order deltas, nothing else. A seq gap
// or a hash mismatch means the local replica can no longer be trusted, so the
// store asks for a fresh snapshot instead of guessing.

import type { DeltaMessage, SceneSnapshot } from "./protocol.js";
import { applyDirective, emptyScene, sceneFromSnapshot, type SceneState, type Viewport, DEFAULT_VIEWPORT } from "./scene.js";
import { sceneHash } from "./canonical.js";

export type DeltaOutcome = "applied" | "gap" | "hash_mismatch" | "apply_error";

export class SceneStore {
  scene: SceneState = emptyScene();
  seq = -1; // no snapshot yet
  onResyncNeeded: (() => void) | null = null;
  private viewport: Viewport;

  constructor(viewport: Viewport = DEFAULT_VIEWPORT) {
    this.viewport = viewport;
  }

  get synced(): boolean {
    return this.seq >= 0;
  }

  welcome(snapshot: SceneSnapshot, seq: number): void {
    this.scene = sceneFromSnapshot(snapshot);
    this.seq = seq;
  }

  async applyDelta(delta: DeltaMessage): Promise<DeltaOutcome> {
    if (!this.synced || delta.seq !== this.seq + 1) {
      this.onResyncNeeded?.();
      return "gap";
    }
    try {
      for (const directive of delta.directives) {
        applyDirective(this.scene, directive, this.viewport);
      }
    } catch {
      this.onResyncNeeded?.();
      return "apply_error";
    }
    const hash = await sceneHash(this.scene);
    if (hash !== delta.scene_hash) {
      this.onResyncNeeded?.();
      return "hash_mismatch";
    }
    this.seq = delta.seq;
    return "applied";
  }
}
