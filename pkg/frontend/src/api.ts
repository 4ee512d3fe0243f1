// Thin fetch wrapper over the gateway JSON API. The client re-implements no
// engine math; every displayed number originates from a turn payload.

export interface SentimentScore {
  compound: number;
  neg: number;
  neu: number;
  pos: number;
}

export interface AgentTurn {
  reply: string;
  action: string;
  emotion: string;
  crisp_x: number;
  level: string;
  mode: string;
  reward: number;
  sentiment: SentimentScore;
  belief_top: [string, number];
  ncp: number;
  accepted: boolean;
  session_id?: string;
  turn?: number;
  goal_reached?: boolean;
}

export interface SessionInfo {
  session_id: string;
  greeting: string;
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let message = response.statusText || `HTTP ${response.status}`;
  try {
    const body = (await response.json()) as { error?: string };
    if (body && typeof body.error === "string") message = body.error;
  } catch {
    // keep the status text
  }
  return new ApiError(response.status, message);
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.base + path, init);
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as T;
  }

  createSession(seed?: number): Promise<SessionInfo> {
    return this.request<SessionInfo>("/api/session", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(seed === undefined ? {} : { seed }),
    });
  }

  sendMessage(sessionId: string, text: string): Promise<AgentTurn> {
    return this.request<AgentTurn>(`/api/session/${sessionId}/message`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ text }),
    });
  }

  transcript(sessionId: string): Promise<AgentTurn[]> {
    return this.request<AgentTurn[]>(`/api/session/${sessionId}/transcript`);
  }

  async deleteSession(sessionId: string): Promise<void> {
    await this.request<unknown>(`/api/session/${sessionId}`, { method: "DELETE" });
  }

  async health(): Promise<boolean> {
    try {
      const body = await this.request<{ status: string }>("/api/health");
      return body.status === "ok";
    } catch {
      return false;
    }
  }
}
