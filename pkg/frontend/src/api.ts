/** Typed client for the SkillScout session API. */

export type PolicyKind = "rule" | "rl" | "baseline-popularity";
export type Style = "brief" | "verbose";

export interface SessionSettings {
  policy_kind: PolicyKind;
  first_time: boolean;
  style: Style;
}

export interface OfferDto {
  id: string;
  label: string;
  kind: "skill" | "category";
}

export interface MetadataDto {
  type: string;
  rating?: number;
  reviews?: number;
  trending?: boolean;
  recommended?: boolean;
  description?: string;
}

export interface AgentMoveDto {
  action: string;
  prompt_id: string;
  text: string;
  metadata: MetadataDto;
  offers: OfferDto[];
  launched: { id: string; label: string } | null;
  terminal: boolean;
}

export interface CreateSessionResponse {
  schema_version: number;
  session_id: string;
  move: AgentMoveDto;
  status: string;
  reward: number;
  done: boolean;
}

export interface UtteranceResponse {
  schema_version: number;
  move: AgentMoveDto | null;
  reward: number;
  done: boolean;
  status: string;
  intent: string;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

async function readJson(resp: Response): Promise<unknown> {
  try {
    return await resp.json();
  } catch {
    return {};
  }
}

export class SkillScoutApi {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const resp = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers: { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const doc = (await readJson(resp)) as Record<string, unknown>;
    if (!resp.ok) {
      throw new ApiError(
        resp.status,
        String(doc.code ?? "error"),
        String(doc.message ?? `request failed with status ${resp.status}`),
      );
    }
    return doc as T;
  }

  createSession(settings: SessionSettings): Promise<CreateSessionResponse> {
    return this.request("POST", "/v1/sessions", {
      policy: settings.policy_kind,
      profile: { first_time: settings.first_time, style: settings.style },
    });
  }

  postUtterance(sessionId: string, text: string): Promise<UtteranceResponse> {
    return this.request("POST", `/v1/sessions/${sessionId}/utterances`, { text });
  }

  metrics(): Promise<Record<string, unknown>> {
    return this.request("GET", "/v1/metrics");
  }
}
