// Wire types for the session protocol: one JSON message per websocket frame.

export type Vec3 = [number, number, number];

export interface SceneObjectData {
  id: number;
  primitive: "cube" | "cylinder";
  translation: Vec3;
  rotation: Vec3;
  scale: Vec3;
}

export type TransformEntry = [Vec3, Vec3, Vec3]; // translation, rotation, scale

export type UndoStep =
  | { kind: "create"; id: number }
  | { kind: "transform"; id: number; before: TransformEntry; after: TransformEntry };

export interface SceneSnapshot {
  next_id: number;
  selection: number | null;
  view: "default" | "front";
  objects: SceneObjectData[];
  pending: Record<string, TransformEntry>;
  undo_stack: UndoStep[];
}

export type Directive =
  | { kind: "create"; primitive: "cube" | "cylinder" }
  | {
      kind: "set_transform";
      object_id: number;
      translation: Vec3;
      rotation: Vec3;
      scale: Vec3;
      op: string;
      axis?: string;
      magnitude?: number;
      cursor?: [number, number];
    }
  | { kind: "commit"; object_id?: number }
  | { kind: "cancel"; object_id: number; translation: Vec3; rotation: Vec3; scale: Vec3 }
  | { kind: "undo" }
  | { kind: "select_at"; x_px: number; y_px: number }
  | { kind: "view_front" };

export interface HudEntry {
  id: string;
  phrase: string;
  threshold: number;
  aliases: string[];
}

export interface HelloMessage {
  type: "hello";
  session_id: string;
  client_name: string;
}

export interface WelcomeMessage {
  type: "welcome";
  client_id: string;
  snapshot: SceneSnapshot;
  hud: HudEntry[];
  seq: number;
}

export interface DeltaMessage {
  type: "delta";
  seq: number;
  directives: Directive[];
  scene_hash: string;
}

export interface ErrorMessage {
  type: "error";
  code: string;
  detail: string;
}

export type EventPayload =
  | { kind: "speech"; text: string }
  | { kind: "cursor_move"; x_px: number; y_px: number }
  | { kind: "pinch_start"; hand: "left" | "right" }
  | { kind: "pinch_end"; hand: "left" | "right" }
  | { kind: "landmark"; hand: "left" | "right"; points: number[][] };

export interface EventMessage {
  type: "event";
  event: { t: number; payload: EventPayload };
}

export type ServerMessage = WelcomeMessage | DeltaMessage | ErrorMessage;

export function parseServerMessage(raw: string): ServerMessage {
  const data = JSON.parse(raw);
  if (data === null || typeof data !== "object" || typeof data.type !== "string") {
    throw new Error("malformed server message");
  }
  return data as ServerMessage;
}
