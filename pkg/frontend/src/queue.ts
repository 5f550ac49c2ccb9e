/** Queue state machine, DOM-free. The view renders `state`; every mutation
 * round-trips through the API so the server stays the source of truth. */

import { ApiError, Segment, TriageApi, TriageItem, Verdict } from "./api.js";

export interface QueueState {
  /** Pending items, oldest first; survives fetch failures as a cache. */
  items: TriageItem[];
  index: number;
  offline: boolean;
  behaviorFilter: string | null;
  decidedThisSession: number;
  /** Notice about the last out-of-band change (409 refresh), if any. */
  notice: string | null;
}

export interface DecideOutcome {
  ok: boolean;
  /** Server-side validation message to render inline (400s). */
  error?: string;
  /** True when the item had already been decided elsewhere (409). */
  conflict?: boolean;
}

export class QueueController {
  readonly state: QueueState = {
    items: [],
    index: 0,
    offline: false,
    behaviorFilter: null,
    decidedThisSession: 0,
    notice: null,
  };

  constructor(
    private readonly api: TriageApi,
    private readonly reviewer?: string,
  ) {}

  current(): TriageItem | undefined {
    return this.state.items[this.state.index];
  }

  get position(): { at: number; of: number } {
    return { at: Math.min(this.state.index + 1, this.state.items.length), of: this.state.items.length };
  }

  /** Fetch the pending queue; on failure flip offline and keep the cache. */
  async load(behavior?: string | null): Promise<void> {
    if (behavior !== undefined) this.state.behaviorFilter = behavior;
    try {
      const items = await this.api.listCandidates({
        status: "pending",
        behavior: this.state.behaviorFilter ?? undefined,
      });
      this.state.items = items;
      this.state.index = 0;
      this.state.offline = false;
    } catch {
      this.state.offline = true;
    }
  }

  /** Submit a verdict for the current item and advance on success. */
  async decide(verdict: Verdict, segments?: Segment[]): Promise<DecideOutcome> {
    const item = this.current();
    if (!item) return { ok: false, error: "queue is empty" };
    try {
      await this.api.submitDecision(item.item_id, verdict, segments, this.reviewer);
    } catch (err) {
      if (err instanceof ApiError && err.conflict) {
        await this.refreshCurrent();
        return { ok: false, conflict: true, error: err.message };
      }
      if (err instanceof ApiError) {
        return { ok: false, error: err.message };
      }
      this.state.offline = true;
      return { ok: false, error: "service unreachable" };
    }
    this.state.items.splice(this.state.index, 1);
    if (this.state.index >= this.state.items.length) {
      this.state.index = Math.max(0, this.state.items.length - 1);
    }
    this.state.decidedThisSession += 1;
    this.state.notice = null;
    return { ok: true };
  }

  /** Re-fetch the current item after a conflict; drop it if no longer pending. */
  async refreshCurrent(): Promise<void> {
    const item = this.current();
    if (!item) return;
    try {
      const fresh = await this.api.getItem(item.item_id);
      if (!fresh || fresh.status !== "pending") {
        this.state.items.splice(this.state.index, 1);
        if (this.state.index >= this.state.items.length) {
          this.state.index = Math.max(0, this.state.items.length - 1);
        }
        this.state.notice = `${item.item_id} was decided by ${fresh?.reviewer ?? "someone else"}`;
      } else {
        this.state.items[this.state.index] = fresh;
        this.state.notice = null;
      }
      this.state.offline = false;
    } catch {
      this.state.offline = true;
    }
  }
}
