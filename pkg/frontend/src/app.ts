/** DOM shell: one card at a time, hotkey-driven, with an inline split
 * editor. All state changes flow through QueueController; the DOM is
 * re-rendered from controller state after every operation. */

import { Segment, TriageApi, TriageItem } from "./api.js";
import { highlightSpans, segmentsForRender } from "./highlight.js";
import { QueueController } from "./queue.js";
import { DraftSegment, initialDraft, validateSplit } from "./segments.js";

export interface AppOptions {
  baseUrl: string;
  reviewer?: string;
  fetchFn?: typeof fetch;
}

export class App {
  readonly api: TriageApi;
  readonly controller: QueueController;
  private draft: DraftSegment[] | null = null;
  private splitError: string | null = null;
  private chain: Promise<void> = Promise.resolve();
  private readonly doc: Document;

  constructor(
    private readonly root: HTMLElement,
    options: AppOptions,
  ) {
    this.api = new TriageApi(options.baseUrl, options.fetchFn);
    this.controller = new QueueController(this.api, options.reviewer);
    this.doc = root.ownerDocument;
    this.doc.addEventListener("keydown", (e) => this.handleKey(e as KeyboardEvent));
  }

  /** Queue an async user action; render after it settles. */
  private enqueue(op: () => Promise<void>): Promise<void> {
    this.chain = this.chain.then(op).then(() => this.render());
    return this.chain;
  }

  /** Resolves when every queued action has finished (used by tests). */
  settle(): Promise<void> {
    return this.chain;
  }

  start(): Promise<void> {
    return this.enqueue(() => this.controller.load());
  }

  retry(): Promise<void> {
    return this.enqueue(() => this.controller.load());
  }

  filter(behavior: string | null): Promise<void> {
    return this.enqueue(() => this.controller.load(behavior));
  }

  confirm(): Promise<void> {
    return this.enqueue(async () => {
      await this.controller.decide("confirm");
    });
  }

  reject(): Promise<void> {
    return this.enqueue(async () => {
      await this.controller.decide("reject");
    });
  }

  openSplit(): Promise<void> {
    return this.enqueue(async () => {
      const item = this.controller.current();
      if (!item) return;
      this.draft = initialDraft(item.comment_text, item.behavior);
      this.splitError = null;
    });
  }

  cancelSplit(): Promise<void> {
    return this.enqueue(async () => {
      this.draft = null;
      this.splitError = null;
    });
  }

  submitSplit(): Promise<void> {
    return this.enqueue(async () => {
      const item = this.controller.current();
      if (!item || !this.draft) return;
      const invalid = validateSplit(item.comment_text, this.draft);
      if (invalid) {
        this.splitError = invalid;
        return;
      }
      const segments: Segment[] = this.draft.map((d) => ({ text: d.text, behavior: d.behavior }));
      const outcome = await this.controller.decide("split", segments);
      if (outcome.ok) {
        this.draft = null;
        this.splitError = null;
      } else {
        this.splitError = outcome.error ?? "submit failed";
      }
    });
  }

  get splitOpen(): boolean {
    return this.draft !== null;
  }

  handleKey(e: KeyboardEvent): void {
    const target = e.target as HTMLElement | null;
    const typing = target && (target.tagName === "TEXTAREA" || target.tagName === "INPUT");
    if (this.splitOpen) {
      if (e.key === "Escape") {
        e.preventDefault();
        void this.cancelSplit();
      } else if (e.key === "Enter" && (e.ctrlKey || e.metaKey)) {
        e.preventDefault();
        void this.submitSplit();
      }
      return;
    }
    if (typing) return;
    if (e.key === "c") void this.confirm();
    else if (e.key === "r") void this.reject();
    else if (e.key === "s") void this.openSplit();
  }

  // ---------------------------------------------------------------- render

  render(): void {
    const el = this.doc.createElement.bind(this.doc);
    const state = this.controller.state;
    this.root.textContent = "";

    const header = el("header");
    const title = el("h1");
    title.textContent = "review triage";
    const progress = el("span");
    progress.id = "session-progress";
    progress.textContent = `${state.decidedThisSession} decided · ${state.items.length} pending`;
    header.append(title, progress);
    this.root.append(header);

    if (state.offline) {
      const banner = el("div");
      banner.id = "offline-banner";
      banner.className = "banner";
      banner.textContent = "service unreachable — showing cached queue ";
      const retry = el("button");
      retry.id = "retry";
      retry.textContent = "retry";
      retry.addEventListener("click", () => void this.retry());
      banner.append(retry);
      this.root.append(banner);
    }

    if (state.notice) {
      const notice = el("div");
      notice.id = "notice";
      notice.className = "banner";
      notice.textContent = state.notice;
      this.root.append(notice);
    }

    const item = this.controller.current();
    if (!item) {
      const done = el("div");
      done.id = "empty-state";
      done.textContent = state.offline
        ? "no cached items"
        : "queue complete — nothing pending";
      this.root.append(done);
      return;
    }

    this.root.append(this.renderCard(item));
    if (this.draft) {
      this.root.append(this.renderSplitEditor(item));
    } else {
      const hotkeys = el("footer");
      hotkeys.id = "hotkeys";
      hotkeys.textContent = "[c]onfirm · [r]eject · [s]plit";
      this.root.append(hotkeys);
    }
  }

  private renderCard(item: TriageItem): HTMLElement {
    const el = this.doc.createElement.bind(this.doc);
    const card = el("article");
    card.id = "card";
    card.dataset["itemId"] = item.item_id;

    const meta = el("div");
    meta.className = "meta";
    const behavior = el("span");
    behavior.id = "card-behavior";
    behavior.textContent = item.behavior;
    const prob = el("span");
    prob.id = "card-probability";
    prob.textContent = `p=${item.probability.toFixed(2)}`;
    const pos = el("span");
    pos.id = "queue-position";
    const { at, of } = this.controller.position;
    pos.textContent = `${at} / ${of}`;
    meta.append(behavior, prob, pos);

    const text = el("p");
    text.id = "card-text";
    const spans = highlightSpans(item.comment_text, item.highlight_terms);
    for (const part of segmentsForRender(item.comment_text, spans)) {
      if (part.highlighted) {
        const mark = el("mark");
        mark.textContent = part.text;
        text.append(mark);
      } else {
        text.append(part.text);
      }
    }

    card.append(meta, text);
    return card;
  }

  private renderSplitEditor(item: TriageItem): HTMLElement {
    const el = this.doc.createElement.bind(this.doc);
    const editor = el("section");
    editor.id = "split-editor";

    const rows = el("div");
    rows.id = "split-rows";
    this.draft!.forEach((seg, i) => {
      const row = el("div");
      row.className = "split-row";
      const text = el("textarea");
      text.className = "seg-text";
      text.value = seg.text;
      text.addEventListener("input", () => {
        seg.text = text.value;
        this.revalidateDraft(item);
      });
      const behavior = el("input");
      behavior.className = "seg-behavior";
      behavior.value = seg.behavior;
      behavior.addEventListener("input", () => {
        seg.behavior = behavior.value;
        this.revalidateDraft(item);
      });
      const drop = el("button");
      drop.className = "seg-drop";
      drop.textContent = "×";
      drop.addEventListener("click", () => {
        this.draft!.splice(i, 1);
        this.revalidateDraft(item);
        this.render();
      });
      row.append(text, behavior, drop);
      rows.append(row);
    });

    const error = el("div");
    error.id = "split-error";
    error.textContent = this.splitError ?? "";

    const controls = el("div");
    const add = el("button");
    add.id = "split-add";
    add.textContent = "+ segment";
    add.addEventListener("click", () => {
      this.draft!.push({ text: "", behavior: item.behavior });
      this.render();
    });
    const submit = el("button");
    submit.id = "split-submit";
    submit.textContent = "submit split (ctrl+enter)";
    submit.disabled = validateSplit(item.comment_text, this.draft!) !== null;
    submit.addEventListener("click", () => void this.submitSplit());
    const cancel = el("button");
    cancel.id = "split-cancel";
    cancel.textContent = "cancel (esc)";
    cancel.addEventListener("click", () => void this.cancelSplit());
    controls.append(add, submit, cancel);

    editor.append(rows, error, controls);
    return editor;
  }

  /** Live-revalidate without a full re-render so typing keeps focus. */
  private revalidateDraft(item: TriageItem): void {
    const invalid = validateSplit(item.comment_text, this.draft ?? []);
    this.splitError = invalid;
    const error = this.doc.getElementById("split-error");
    if (error) error.textContent = invalid ?? "";
    const submit = this.doc.getElementById("split-submit") as HTMLButtonElement | null;
    if (submit) submit.disabled = invalid !== null;
  }
}

export function mountApp(root: HTMLElement, options: AppOptions): App {
  const app = new App(root, options);
  void app.start();
  return app;
}
