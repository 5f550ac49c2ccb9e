/** Typed client for the triage HTTP API. All queue mutations go through
 * POST /decisions; everything else is read-only. */

export interface Segment {
  ordinal?: number;
  text: string;
  behavior: string;
}

export interface TriageItem {
  item_id: string;
  comment_id: string;
  behavior: string;
  probability: number;
  comment_text: string;
  lang: string;
  status: "pending" | "confirmed" | "rejected" | "split";
  decided_at: string | null;
  reviewer: string | null;
  segments: Segment[];
  second_reviewer: string | null;
  second_verdict: string | null;
  disagreement: boolean;
  highlight_terms: string[];
}

export interface Progress {
  total: number;
  by_status: Record<string, number>;
  by_behavior: Record<string, Record<string, number>>;
  disagreements: number;
}

export interface LabeledCorpus {
  format: string;
  version: number;
  lang: string;
  behaviors: Record<string, string[]>;
}

export type Verdict = "confirm" | "reject" | "split";

/** Non-2xx response; status 409 means the item was decided elsewhere. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }

  get conflict(): boolean {
    return this.status === 409;
  }
}

export interface QueueFilter {
  status?: string;
  behavior?: string;
  limit?: number;
}

export class TriageApi {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await this.fetchFn(`${this.baseUrl}${path}`, init);
    const body = (await res.json()) as Record<string, unknown>;
    if (!res.ok) {
      throw new ApiError(res.status, String(body["error"] ?? res.statusText));
    }
    return body as T;
  }

  async listCandidates(filter: QueueFilter = {}): Promise<TriageItem[]> {
    const params = new URLSearchParams();
    if (filter.status !== undefined) params.set("status", filter.status);
    if (filter.behavior !== undefined) params.set("behavior", filter.behavior);
    if (filter.limit !== undefined) params.set("limit", String(filter.limit));
    const qs = params.toString();
    const payload = await this.request<{ items: TriageItem[] }>(
      `/candidates${qs ? `?${qs}` : ""}`,
    );
    return payload.items;
  }

  /** The API has no per-item GET; refresh by scanning the full list. */
  async getItem(itemId: string): Promise<TriageItem | undefined> {
    const items = await this.listCandidates({ status: "any" });
    return items.find((i) => i.item_id === itemId);
  }

  async submitDecision(
    itemId: string,
    verdict: Verdict,
    segments?: Segment[],
    reviewer?: string,
  ): Promise<TriageItem> {
    return this.request<TriageItem>("/decisions", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({
        item_id: itemId,
        verdict,
        segments: segments ?? null,
        reviewer: reviewer ?? null,
      }),
    });
  }

  async progress(): Promise<Progress> {
    return this.request<Progress>("/progress");
  }

  async exportCorpus(lang = "en"): Promise<LabeledCorpus> {
    return this.request<LabeledCorpus>(`/export?lang=${encodeURIComponent(lang)}`);
  }
}
