// DOM rendering for the chat view and the diagnostics panel. All values come
// straight from the last turn payload in the state.

import type { AgentTurn } from "./api.js";
import { inputDisabled, isWellFormedTurn, sparklinePoints, UiState } from "./state.js";

export const SPARK_WIDTH = 220;
export const SPARK_HEIGHT = 48;

export interface ViewElements {
  transcript: HTMLElement;
  banner: HTMLElement;
  newSessionButton: HTMLElement;
  input: HTMLInputElement;
  sendButton: HTMLButtonElement;
  status: HTMLElement;
  diagnostics: HTMLElement;
}

export function lookupElements(doc: Document): ViewElements {
  const byId = (id: string) => {
    const el = doc.getElementById(id);
    if (!el) throw new Error(`missing element #${id}`);
    return el;
  };
  return {
    transcript: byId("transcript"),
    banner: byId("banner"),
    newSessionButton: byId("new-session"),
    input: byId("message-input") as HTMLInputElement,
    sendButton: byId("send-button") as HTMLButtonElement,
    status: byId("connection-status"),
    diagnostics: byId("diagnostics"),
  };
}

function dash(value: unknown, format: (v: never) => string = String): string {
  return value === undefined || value === null ? "—" : format(value as never);
}

/** Diagnostics panel markup; malformed payloads fall back to raw JSON. */
export function diagnosticsHtml(turn: AgentTurn | null): string {
  if (turn === null) {
    return '<p class="placeholder">No turns yet.</p>';
  }
  if (!isWellFormedTurn(turn)) {
    return `<pre class="raw-fallback">${escapeHtml(JSON.stringify(turn, null, 2))}</pre>`;
  }
  const belief = Array.isArray(turn.belief_top)
    ? `${turn.belief_top[0]} ${(turn.belief_top[1] * 100).toFixed(1)}%`
    : undefined;
  const rows = [
    ["level", dash(turn.level)],
    ["mode", dash(turn.mode)],
    ["reward", dash(turn.reward, (r: number) => r.toFixed(2))],
    ["belief", dash(belief)],
    ["ncp", dash(turn.ncp)],
    ["action", dash(turn.action)],
  ]
    .map(([k, v]) => `<div class="diag-row"><span>${k}</span><strong>${v}</strong></div>`)
    .join("");
  const x = typeof turn.crisp_x === "number" ? turn.crisp_x.toFixed(2) : "—";
  return `
    <div id="emotion-badge" class="badge emotion-${escapeHtml(dash(turn.emotion))}">
      <span class="emotion-label">${escapeHtml(dash(turn.emotion))}</span>
      <span class="emotion-x">x = ${x}</span>
    </div>
    ${rows}
    <div class="spark-box">
      <span>rewards</span>
      <svg id="reward-sparkline" viewBox="0 0 ${SPARK_WIDTH} ${SPARK_HEIGHT}"
           width="${SPARK_WIDTH}" height="${SPARK_HEIGHT}">
        <polyline fill="none" stroke="currentColor" stroke-width="1.5" points=""></polyline>
      </svg>
    </div>`;
}

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function render(view: ViewElements, state: UiState, doc: Document): void {
  // Transcript is append-only; rebuild cheaply from state.
  view.transcript.innerHTML = "";
  for (const bubble of state.transcript) {
    const div = doc.createElement("div");
    div.className = `bubble ${bubble.speaker}`;
    div.textContent = bubble.text;
    view.transcript.appendChild(div);
  }
  view.transcript.scrollTop = view.transcript.scrollHeight;

  view.diagnostics.innerHTML = diagnosticsHtml(state.lastTurn);
  const polyline = view.diagnostics.querySelector("polyline");
  if (polyline) {
    polyline.setAttribute("points", sparklinePoints(state.rewards, SPARK_WIDTH, SPARK_HEIGHT));
  }

  const disabled = inputDisabled(state);
  view.input.disabled = disabled;
  view.sendButton.disabled = disabled;
  view.status.textContent = state.connection;
  view.status.className = `status ${state.connection}`;

  if (state.banner.kind === "none") {
    view.banner.textContent = "";
    view.banner.className = "banner hidden";
  } else {
    view.banner.textContent = state.banner.message;
    view.banner.className = `banner ${state.banner.kind}`;
  }
  (view.newSessionButton as HTMLButtonElement).hidden = state.banner.kind !== "expired";
}
