/** Typed client for the verification gateway HTTP API. */

export interface DeclaredFields {
  gender?: string;
  birth_year?: number;
  residence?: string;
  education?: string;
  occupation?: string;
}

export interface CommunityEntry {
  community_id: string;
  member_count: number;
}

export interface MemberEntry {
  member_id: string;
  total_posts: number;
  declared: DeclaredFields;
}

export interface ServerConfig {
  theta_min: number;
  theta_sat: number;
  theta_conf: number;
  per_post_cap: number;
  reference_year: number;
  characteristics: string[];
}

export interface Verdict {
  characteristic: string;
  declared: string | null;
  inferred: string | null;
  reliability: number;
  verdict: string;
  evidence_mass: number;
}

export interface MemberReport {
  member_id: string;
  community_id: string;
  classification: string;
  track_size: number;
  verdicts: Verdict[];
  profile: {
    member_id: string;
    community_id: string;
    entries: Record<string, { value: string; reliability: number }>;
    annotations: Verdict[];
  };
}

export interface RunRecord {
  run_id: string;
  status: "queued" | "running" | "done" | "failed";
  created_at: number;
  reports: MemberReport[] | null;
  error: string | null;
  request: {
    community_id: string;
    member_ids: string[];
    characteristics: string[] | null;
    config_overrides: Record<string, number>;
  };
}

export interface RunSubmission {
  community_id: string;
  member_ids: string[];
  characteristics: string[];
  config: Record<string, number>;
}

/** Error carrying the HTTP status and the server's message verbatim. */
export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
    this.name = "ApiError";
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let message = `HTTP ${response.status}`;
  try {
    const body = await response.json();
    if (body && typeof body.error === "string") message = body.error;
  } catch {
    /* non-JSON error body: keep the status line */
  }
  return new ApiError(response.status, message);
}

export class ApiClient {
  constructor(private readonly base = "", private readonly fetchFn: typeof fetch =
    globalThis.fetch.bind(globalThis)) {}

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.fetchFn(this.base + path);
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as T;
  }

  listCommunities(): Promise<CommunityEntry[]> {
    return this.getJson("/api/communities");
  }

  listMembers(communityId: string): Promise<MemberEntry[]> {
    return this.getJson(`/api/communities/${encodeURIComponent(communityId)}/members`);
  }

  serverConfig(): Promise<ServerConfig> {
    return this.getJson("/api/config");
  }

  async submitRun(submission: RunSubmission): Promise<string> {
    const response = await this.fetchFn(this.base + "/api/runs", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(submission),
    });
    if (!response.ok) throw await parseError(response);
    const body = (await response.json()) as { run_id: string };
    return body.run_id;
  }

  getRun(runId: string): Promise<RunRecord> {
    return this.getJson(`/api/runs/${encodeURIComponent(runId)}`);
  }

  exportUrl(runId: string, format: "json" | "csv" | "table"): string {
    return `${this.base}/api/runs/${encodeURIComponent(runId)}/export?format=${format}`;
  }
}
