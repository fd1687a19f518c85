import { describe, expect, it } from "vitest";

import { sceneHash } from "../src/canonical.js";
import type { DeltaMessage, SceneSnapshot } from "../src/protocol.js";
import { applyDirective, sceneFromSnapshot } from "../src/scene.js";
import { SceneStore } from "../src/store.js";

const emptySnapshot: SceneSnapshot = {
  next_id: 1,
  selection: null,
  view: "default",
  objects: [],
  pending: {},
  undo_stack: [],
};

async function createDelta(seq: number): Promise<DeltaMessage> {
  // compute the post-application hash the way the server would
  const scratch = sceneFromSnapshot(emptySnapshot);
  for (let i = 0; i < seq; i++) {
    applyDirective(scratch, { kind: "create", primitive: "cube" });
  }
  return {
    type: "delta",
    seq,
    directives: [{ kind: "create", primitive: "cube" }],
    scene_hash: await sceneHash(scratch),
  };
}

describe("scene store", () => {
  it("applies in-order deltas and tracks seq", async () => {
    const store = new SceneStore();
    store.welcome(emptySnapshot, 0);
    expect(await store.applyDelta(await createDelta(1))).toBe("applied");
    expect(await store.applyDelta(await createDelta(2))).toBe("applied");
    expect(store.seq).toBe(2);
    expect(store.scene.objects).toHaveLength(2);
  });

  it("a seq gap triggers resync and leaves the scene untouched", async () => {
    const store = new SceneStore();
    let resyncs = 0;
    store.onResyncNeeded = () => {
      resyncs += 1;
    };
    store.welcome(emptySnapshot, 0);
    await store.applyDelta(await createDelta(1));
    const outcome = await store.applyDelta(await createDelta(3)); // skipped 2
    expect(outcome).toBe("gap");
    expect(resyncs).toBe(1);
    expect(store.seq).toBe(1);
    expect(store.scene.objects).toHaveLength(1);
  });

  it("a hash mismatch triggers resync", async () => {
    const store = new SceneStore();
    let resyncs = 0;
    store.onResyncNeeded = () => {
      resyncs += 1;
    };
    store.welcome(emptySnapshot, 0);
    const forged = { ...(await createDelta(1)), scene_hash: "0".repeat(64) };
    expect(await store.applyDelta(forged)).toBe("hash_mismatch");
    expect(resyncs).toBe(1);
  });

  it("deltas before any welcome ask for a snapshot", async () => {
    const store = new SceneStore();
    let resyncs = 0;
    store.onResyncNeeded = () => {
      resyncs += 1;
    };
    expect(await store.applyDelta(await createDelta(1))).toBe("gap");
    expect(resyncs).toBe(1);
  });

  it("welcome replaces the scene wholesale", async () => {
    const store = new SceneStore();
    store.welcome(emptySnapshot, 0);
    await store.applyDelta(await createDelta(1));
    store.welcome(emptySnapshot, 5);
    expect(store.scene.objects).toHaveLength(0);
    expect(store.seq).toBe(5);
  });
});
