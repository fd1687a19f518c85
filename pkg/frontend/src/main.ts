// Browser bootstrap. Configuration comes from the URL:
//   index.html?session=studio&server=ws://127.0.0.1:8765&name=alice

import { SessionClient, modeIndicator } from "./client.js";
import { startCamera, startMicrophone, type CaptureStatus } from "./capture.js";
import { renderHud } from "./hud.js";
import { renderScene, type Box } from "./render.js";
import type { Viewport } from "./scene.js";

function query(name: string, fallback: string): string {
  return new URLSearchParams(window.location.search).get(name) ?? fallback;
}

const canvas = document.getElementById("scene") as HTMLCanvasElement;
const hudBox = document.getElementById("hud") as HTMLElement;
const statusBox = document.getElementById("status") as HTMLElement;
const modeBox = document.getElementById("mode") as HTMLElement;
const flashBox = document.getElementById("flash") as HTMLElement;
const form = document.getElementById("say") as HTMLFormElement;
const input = document.getElementById("transcript") as HTMLInputElement;
const video = document.getElementById("camera") as HTMLVideoElement;

const viewport: Viewport = { w_px: canvas.width, h_px: canvas.height };
let capture: CaptureStatus = { camera: "off", microphone: "off" };

const client = new SessionClient({
  url: query("server", "ws://127.0.0.1:8765"),
  sessionId: query("session", "studio"),
  clientName: query("name", "browser"),
});

function statusLine(): string {
  const device = (label: string, state: string) =>
    state === "on" ? label : `${label} ${state} (typed input active)`;
  return [
    `${client.status}${client.clientId ? ` as ${client.clientId}` : ""}`,
    device("camera", capture.camera),
    device("microphone", capture.microphone),
    client.lastError ? `error: ${client.lastError}` : "",
  ]
    .filter(Boolean)
    .join(" | ");
}

function redraw(): void {
  statusBox.textContent = statusLine();
  modeBox.textContent = `mode: ${modeIndicator(client)}`;
  if (client.lastDirectives.length > 0) {
    flashBox.textContent = client.lastDirectives.join(" + ");
  }
  if (client.hud) {
    renderHud(hudBox, client.hud);
  }
  const ctx = canvas.getContext("2d");
  if (ctx) renderScene(ctx, client.store.scene, viewport);
}

client.onUpdate = redraw;

form.addEventListener("submit", (ev) => {
  ev.preventDefault();
  const text = input.value.trim();
  if (text) client.sendTranscript(text);
  input.value = "";
});

void client.connect().then(() => {
  redraw();
  void startCamera(client, video, (s) => {
    capture = s;
    redraw();
  });
  startMicrophone(client, (s) => {
    capture = s;
    redraw();
  });
});

redraw();
export type { Box };
