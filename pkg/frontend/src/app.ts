// Wires the state machine, the API client, and the DOM together. One request
// may be in flight per session; the input stays locked while waiting.

import { AgentTurn, ApiClient, ApiError } from "./api.js";
import { lookupElements, render, ViewElements } from "./render.js";
import {
  initialState,
  inputDisabled,
  UiState,
  withAgentTurn,
  withFailure,
  withSession,
  withUserMessage,
} from "./state.js";

export class ChatApp {
  state: UiState = initialState();
  readonly view: ViewElements;

  constructor(
    private readonly doc: Document,
    private readonly api: ApiClient,
  ) {
    this.view = lookupElements(doc);
    this.view.sendButton.addEventListener("click", () => void this.sendFromInput());
    this.view.input.addEventListener("keydown", (event) => {
      if ((event as KeyboardEvent).key === "Enter") void this.sendFromInput();
    });
    this.view.newSessionButton.addEventListener("click", () => void this.start());
    this.render();
  }

  render(): void {
    render(this.view, this.state, this.doc);
  }

  async start(seed?: number): Promise<void> {
    try {
      const info = await this.api.createSession(seed);
      this.state = withSession(this.state, info.session_id, info.greeting);
    } catch (error) {
      this.state = withFailure(
        this.state,
        { kind: "retry", message: describe(error) },
        true,
      );
    }
    this.render();
  }

  private async sendFromInput(): Promise<void> {
    const text = this.view.input.value.trim();
    if (!text || inputDisabled(this.state)) return;
    this.view.input.value = "";
    await this.send(text);
  }

  async send(text: string): Promise<AgentTurn | null> {
    const sessionId = this.state.sessionId;
    if (sessionId === null || inputDisabled(this.state)) return null;
    this.state = withUserMessage(this.state, text);
    this.render();
    try {
      const turn = await this.api.sendMessage(sessionId, text);
      this.state = withAgentTurn(this.state, turn);
      this.render();
      return turn;
    } catch (error) {
      this.state = withFailure(this.state, bannerFor(error), !(error instanceof ApiError));
      this.render();
      return null;
    }
  }
}

function describe(error: unknown): string {
  return error instanceof Error ? error.message : String(error);
}

function bannerFor(error: unknown) {
  if (error instanceof ApiError) {
    if (error.status === 409) {
      return { kind: "ended", message: "This session has ended." } as const;
    }
    if (error.status === 404) {
      return { kind: "expired", message: "Session expired. Start a new one?" } as const;
    }
    return { kind: "retry", message: `Request failed: ${error.message}` } as const;
  }
  return { kind: "retry", message: "Network problem. Please retry." } as const;
}

export function createChatApp(doc: Document, api: ApiClient): ChatApp {
  return new ChatApp(doc, api);
}
