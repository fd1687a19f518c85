// HUD: the command library as the server sent it, never hard-coded.

import type { HudEntry } from "./protocol.js";

export interface HudLine {
  phrase: string;
  detail: string;
}

export function hudLines(entries: HudEntry[]): HudLine[] {
  return entries.map((e) => ({
    phrase: e.phrase,
    detail:
      e.aliases.length > 0
        ? `${e.threshold.toFixed(2)} (also: ${e.aliases.join(", ")})`
        : e.threshold.toFixed(2),
  }));
}

export function renderHud(container: HTMLElement, entries: HudEntry[]): void {
  container.replaceChildren();
  const title = document.createElement("h2");
  title.textContent = "voice commands";
  container.appendChild(title);
  const list = document.createElement("ul");
  for (const line of hudLines(entries)) {
    const item = document.createElement("li");
    const phrase = document.createElement("span");
    phrase.className = "phrase";
    phrase.textContent = line.phrase;
    const detail = document.createElement("span");
    detail.className = "detail";
    detail.textContent = line.detail;
    item.append(phrase, detail);
    list.appendChild(item);
  }
  container.appendChild(list);
}
