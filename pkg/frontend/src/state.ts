// Pure client state and its transitions. Rendering reads this; nothing here
// touches the DOM or the network.

import type { AgentTurn } from "./api.js";

export type Speaker = "user" | "agent";

export interface Bubble {
  speaker: Speaker;
  text: string;
}

export type Banner =
  | { kind: "none" }
  | { kind: "retry"; message: string }
  | { kind: "ended"; message: string }
  | { kind: "expired"; message: string };

export type Connection = "idle" | "busy" | "offline";

export interface UiState {
  sessionId: string | null;
  transcript: Bubble[];
  rewards: number[];
  lastTurn: AgentTurn | null;
  connection: Connection;
  ended: boolean;
  banner: Banner;
}

export function initialState(): UiState {
  return {
    sessionId: null,
    transcript: [],
    rewards: [],
    lastTurn: null,
    connection: "idle",
    ended: false,
    banner: { kind: "none" },
  };
}

export function withSession(state: UiState, sessionId: string, greeting: string): UiState {
  return {
    ...initialState(),
    sessionId,
    transcript: [{ speaker: "agent", text: greeting }],
  };
}

/** The user's bubble appears immediately; the request is then in flight. */
export function withUserMessage(state: UiState, text: string): UiState {
  return {
    ...state,
    transcript: [...state.transcript, { speaker: "user", text }],
    connection: "busy",
    banner: { kind: "none" },
  };
}

export function withAgentTurn(state: UiState, turn: AgentTurn): UiState {
  const ended = turn.goal_reached === true;
  return {
    ...state,
    transcript: [...state.transcript, { speaker: "agent", text: turn.reply }],
    rewards: [...state.rewards, turn.reward],
    lastTurn: turn,
    connection: "idle",
    ended: state.ended || ended,
    banner: ended ? { kind: "ended", message: "Session ended." } : { kind: "none" },
  };
}

/** A failed send leaves the transcript unchanged apart from the user bubble. */
export function withFailure(state: UiState, banner: Banner, offline = false): UiState {
  return {
    ...state,
    connection: offline ? "offline" : "idle",
    ended: state.ended || banner.kind === "ended",
    banner,
  };
}

export function inputDisabled(state: UiState): boolean {
  return state.ended || state.connection === "busy" || state.sessionId === null;
}

/**
 * SVG polyline points for the reward history, left to right, scaled into a
 * width x height box with a small vertical margin.
 */
export function sparklinePoints(rewards: number[], width: number, height: number): string {
  if (rewards.length === 0) return "";
  const margin = 2;
  const lo = Math.min(...rewards, 0);
  const hi = Math.max(...rewards, 0);
  const span = hi - lo || 1;
  const innerH = height - 2 * margin;
  const step = rewards.length > 1 ? width / (rewards.length - 1) : 0;
  return rewards
    .map((r, i) => {
      const x = rewards.length > 1 ? i * step : width / 2;
      const y = margin + (1 - (r - lo) / span) * innerH;
      return `${x.toFixed(1)},${y.toFixed(1)}`;
    })
    .join(" ");
}

/** Shape check for a turn payload; failures trigger the raw-JSON fallback. */
export function isWellFormedTurn(payload: unknown): payload is AgentTurn {
  if (typeof payload !== "object" || payload === null) return false;
  const turn = payload as Record<string, unknown>;
  return (
    typeof turn.reply === "string" &&
    typeof turn.emotion === "string" &&
    typeof turn.reward === "number"
  );
}
