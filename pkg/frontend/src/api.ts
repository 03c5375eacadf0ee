import type {
  CommitResult,
  CreateResponse,
  PreviewResult,
  ReferenceTrajectory,
  SessionSnapshot,
  ViaPoint,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

/** Commit rejected because a via point breaks the norm constraint. */
export class InvalidPointsError extends ApiError {
  constructor(readonly errors: string[]) {
    super(400, errors.join("; "));
    this.name = "InvalidPointsError";
  }
}

/** The slice of the API a running session needs; TeachingApi implements it. */
export interface SessionApi {
  createSession(group: string): Promise<CreateResponse>;
  getSession(id: string): Promise<SessionSnapshot>;
  preview(id: string, points: ViaPoint[]): Promise<PreviewResult>;
  commit(id: string, points: ViaPoint[]): Promise<CommitResult>;
}

export class TeachingApi implements SessionApi {
  constructor(private readonly base: string = "") {}

  createSession(group: string): Promise<CreateResponse> {
    return this.request("POST", "/api/sessions", { group });
  }

  getSession(id: string): Promise<SessionSnapshot> {
    return this.request("GET", `/api/sessions/${id}`);
  }

  preview(id: string, points: ViaPoint[]): Promise<PreviewResult> {
    return this.request("POST", `/api/sessions/${id}/preview`, { points });
  }

  commit(id: string, points: ViaPoint[]): Promise<CommitResult> {
    return this.request("POST", `/api/sessions/${id}/commit`, { points });
  }

  reference(skill: string, stride = 200): Promise<ReferenceTrajectory> {
    return this.request("GET", `/api/skills/${skill}/reference?stride=${stride}`);
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const res = await fetch(this.base + path, init);
    if (!res.ok) {
      throw await toError(res);
    }
    return res.json() as Promise<T>;
  }
}

async function toError(res: Response): Promise<ApiError> {
  let detail: unknown = null;
  try {
    detail = ((await res.json()) as { detail?: unknown }).detail;
  } catch {
    // non-JSON error body; fall through to the generic message
  }
  if (
    res.status === 400 &&
    detail !== null &&
    typeof detail === "object" &&
    Array.isArray((detail as { errors?: unknown }).errors)
  ) {
    return new InvalidPointsError((detail as { errors: string[] }).errors);
  }
  const message =
    typeof detail === "string" ? detail : `request failed (${res.status})`;
  return new ApiError(res.status, message);
}
