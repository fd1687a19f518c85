// Session client: one socket, one scene store. Capture sources push events in;
// only server deltas mutate the scene. The websocket implementation and the
// clock are injected so the whole flow runs under tests without a browser.

import type {
  EventMessage,
  EventPayload,
  HudEntry,
  ServerMessage,
} from "./protocol.js";
import { parseServerMessage } from "./protocol.js";
import { SceneStore } from "./store.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  addEventListener(type: "open" | "message" | "close" | "error", handler: (ev: any) => void): void;
}

export type SocketFactory = (url: string) => SocketLike;

export interface ClientOptions {
  url: string;
  sessionId: string;
  clientName: string;
  socketFactory?: SocketFactory;
  now?: () => number; // client-local milliseconds
}

export type ConnectionStatus = "connecting" | "connected" | "closed" | "error";

export class SessionClient {
  readonly store = new SceneStore();
  hud: HudEntry[] | null = null;
  clientId: string | null = null;
  status: ConnectionStatus = "connecting";
  lastError: string | null = null;
  lastDirectives: string[] = [];
  onUpdate: (() => void) | null = null;

  private socket: SocketLike | null = null;
  private readonly options: ClientOptions;
  private readonly now: () => number;
  private lastT = 0;
  private welcomeWaiters: Array<() => void> = [];

  constructor(options: ClientOptions) {
    this.options = options;
    this.now = options.now ?? (() => Date.now());
    this.store.onResyncNeeded = () => this.requestResync();
  }

  connect(): Promise<void> {
    const factory =
      this.options.socketFactory ?? ((url: string) => new WebSocket(url) as unknown as SocketLike);
    const socket = factory(this.options.url);
    this.socket = socket;
    socket.addEventListener("open", () => {
      this.sendHello();
    });
    socket.addEventListener("message", (ev: any) => {
      const raw = typeof ev.data === "string" ? ev.data : String(ev.data);
      void this.handleMessage(raw);
    });
    socket.addEventListener("close", () => {
      this.status = "closed";
      this.onUpdate?.();
    });
    socket.addEventListener("error", () => {
      this.status = "error";
      this.onUpdate?.();
    });
    return new Promise((resolve) => {
      this.welcomeWaiters.push(resolve);
    });
  }

  private sendHello(): void {
    this.socket?.send(
      JSON.stringify({
        type: "hello",
        session_id: this.options.sessionId,
        client_name: this.options.clientName,
      }),
    );
  }

  requestResync(): void {
    // the protocol has no dedicated resync message: a repeated hello
    // answers with a fresh welcome snapshot
    this.sendHello();
  }

  async handleMessage(raw: string): Promise<void> {
    let message: ServerMessage;
    try {
      message = parseServerMessage(raw);
    } catch {
      return;
    }
    if (message.type === "welcome") {
      this.clientId = message.client_id;
      this.hud = message.hud;
      this.store.welcome(message.snapshot, message.seq);
      this.status = "connected";
      for (const resolve of this.welcomeWaiters.splice(0)) resolve();
    } else if (message.type === "delta") {
      const outcome = await this.store.applyDelta(message);
      if (outcome === "applied") {
        this.lastDirectives = message.directives.map((d) => d.kind);
      }
    } else {
      this.lastError = `${message.code}: ${message.detail}`;
    }
    this.onUpdate?.();
  }

  private monotonicT(): number {
    const t = Math.max(Math.round(this.now()), this.lastT);
    this.lastT = t;
    return t;
  }

  buildEvent(payload: EventPayload): EventMessage {
    return { type: "event", event: { t: this.monotonicT(), payload } };
  }

  sendEvent(payload: EventPayload): void {
    this.socket?.send(JSON.stringify(this.buildEvent(payload)));
  }

  sendTranscript(text: string): void {
    this.sendEvent({ kind: "speech", text });
  }

  sendLandmarks(hand: "left" | "right", points: number[][]): void {
    this.sendEvent({ kind: "landmark", hand, points });
  }

  close(): void {
    this.socket?.close();
  }
}

// Mode shown in the HUD: derived from the shared scene's open transform
// brackets rather than any locally guessed state.
export function modeIndicator(client: SessionClient): string {
  const pending = client.store.scene.pending;
  if (pending.size === 0) return "idle";
  const ids = [...pending.keys()].sort((a, b) => a - b).join(", ");
  return `transforming object ${ids}`;
}
