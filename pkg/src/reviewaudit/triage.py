"""Human confirmation step: persistent triage store + local HTTP service.

Persistence is an append-only JSONL decision log (plus optional snapshots);
replaying the log onto an empty store reproduces the store state exactly.
"""
from __future__ import annotations

import datetime as _dt
import hashlib
import json
import threading
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Iterable, Optional, Sequence
from urllib.parse import parse_qs, urlparse

from .labeler import CandidateLabel

VERDICTS = ("confirm", "reject", "split")
STATUSES = ("pending", "confirmed", "rejected", "split")
_VERDICT_STATUS = {"confirm": "confirmed", "reject": "rejected", "split": "split"}


class ConflictError(Exception):
    """Decision attempted on a non-pending item."""


@dataclass(frozen=True)
class SplitSegment:
    parent_comment_id: str
    ordinal: int
    text: str
    behavior: str


@dataclass
class TriageItem:
    item_id: str
    candidate: CandidateLabel
    comment_text: str
    lang: str
    status: str = "pending"
    decided_at: Optional[str] = None
    reviewer: Optional[str] = None
    segments: tuple[SplitSegment, ...] = ()
    second_reviewer: Optional[str] = None
    second_verdict: Optional[str] = None

    @property
    def disagreement(self) -> bool:
        if self.second_verdict is None or self.status == "pending":
            return False
        return _VERDICT_STATUS[self.second_verdict] != self.status

    def to_dict(self) -> dict:
        return {
            "item_id": self.item_id,
            "comment_id": self.candidate.comment_id,
            "behavior": self.candidate.behavior,
            "probability": self.candidate.probability,
            "comment_text": self.comment_text,
            "lang": self.lang,
            "status": self.status,
            "decided_at": self.decided_at,
            "reviewer": self.reviewer,
            "segments": [
                {"ordinal": s.ordinal, "text": s.text, "behavior": s.behavior}
                for s in self.segments
            ],
            "second_reviewer": self.second_reviewer,
            "second_verdict": self.second_verdict,
            "disagreement": self.disagreement,
        }


@dataclass
class LabeledCorpus:
    lang: str
    texts_by_behavior: dict[str, list[str]] = field(default_factory=dict)

    def size(self) -> int:
        return sum(len(v) for v in self.texts_by_behavior.values())

    def to_dict(self) -> dict:
        return {
            "format": "labeled-corpus",
            "version": 1,
            "lang": self.lang,
            "behaviors": {b: list(ts) for b, ts in sorted(self.texts_by_behavior.items())},
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "LabeledCorpus":
        if payload.get("format") != "labeled-corpus":
            raise ValueError("not a labeled-corpus document")
        return cls(lang=payload["lang"], texts_by_behavior=dict(payload["behaviors"]))

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, sort_keys=True, ensure_ascii=False, indent=1)
            fh.write("\n")

    @classmethod
    def load(cls, path: str) -> "LabeledCorpus":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


@dataclass
class EnqueueResult:
    added: int = 0
    duplicates: int = 0
    errors: list[tuple[str, str]] = field(default_factory=list)  # (comment_id, message)


def item_id_for(comment_id: str, behavior: str) -> str:
    digest = hashlib.sha1(f"{comment_id}\x1f{behavior}".encode("utf-8")).hexdigest()
    return "t" + digest[:12]


def _now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def validate_segments(parent_text: str, segments: Sequence[dict]) -> list[tuple[str, str]]:
    """Segments must be non-empty, appear in the parent left to right without
    overlap (so segments + the skipped separators reconstruct the parent)."""
    if len(segments) < 2:
        raise ValueError("split requires at least 2 segments")
    out: list[tuple[str, str]] = []
    cursor = 0
    for seg in segments:
        text = seg.get("text") if isinstance(seg, dict) else None
        behavior = seg.get("behavior") if isinstance(seg, dict) else None
        if not text or not isinstance(text, str):
            raise ValueError("segment missing text")
        if not behavior or not isinstance(behavior, str):
            raise ValueError("segment missing behavior")
        pos = parent_text.find(text, cursor)
        if pos < 0:
            raise ValueError(
                f"segment {text!r} does not occur in the parent comment after offset {cursor}"
            )
        cursor = pos + len(text)
        out.append((text, behavior))
    return out


class TriageStore:
    """Single-writer store; mutations are serialized by an internal lock."""

    def __init__(self, log_path: Optional[str] = None, behaviors: Optional[Iterable[str]] = None):
        self.items: dict[str, TriageItem] = {}
        self._order: list[str] = []
        self._lock = threading.Lock()
        self._log_path = log_path
        self._behaviors = frozenset(behaviors) if behaviors is not None else None

    # -- log plumbing ---------------------------------------------------

    def _append_log(self, record: dict) -> None:
        if self._log_path is None:
            return
        with open(self._log_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(record, sort_keys=True, ensure_ascii=False) + "\n")

    # -- mutations -------------------------------------------------------

    def enqueue(
        self,
        candidates: Sequence[CandidateLabel],
        texts: dict[str, str],
        langs: Optional[dict[str, str]] = None,
    ) -> EnqueueResult:
        with self._lock:
            return self._enqueue_locked(candidates, texts, langs or {}, log=True)

    def _enqueue_locked(self, candidates, texts, langs, log: bool) -> EnqueueResult:
        result = EnqueueResult()
        for cand in candidates:
            if cand.comment_id not in texts:
                result.errors.append((cand.comment_id, "comment text not resolvable"))
                continue
            if self._behaviors is not None and cand.behavior not in self._behaviors:
                result.errors.append((cand.comment_id, f"unknown behavior {cand.behavior!r}"))
                continue
            iid = item_id_for(cand.comment_id, cand.behavior)
            if iid in self.items:
                result.duplicates += 1
                continue
            item = TriageItem(
                item_id=iid,
                candidate=cand,
                comment_text=texts[cand.comment_id],
                lang=langs.get(cand.comment_id, "en"),
            )
            self.items[iid] = item
            self._order.append(iid)
            result.added += 1
            if log:
                self._append_log(
                    {
                        "op": "enqueue",
                        "item_id": iid,
                        "comment_id": cand.comment_id,
                        "behavior": cand.behavior,
                        "probability": cand.probability,
                        "comment_text": item.comment_text,
                        "lang": item.lang,
                    }
                )
        return result

    def decide(
        self,
        item_id: str,
        verdict: str,
        segments: Optional[Sequence[dict]] = None,
        reviewer: Optional[str] = None,
        at: Optional[str] = None,
    ) -> TriageItem:
        with self._lock:
            item = self._decide_locked(item_id, verdict, segments, reviewer, at or _now(), log=True)
        return item

    def _decide_locked(self, item_id, verdict, segments, reviewer, at, log: bool) -> TriageItem:
        if verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {verdict!r}; expected one of {VERDICTS}")
        item = self.items.get(item_id)
        if item is None:
            raise KeyError(f"unknown triage item {item_id!r}")
        if item.status != "pending":
            raise ConflictError(f"item {item_id} already decided ({item.status})")
        stored_segments: tuple[SplitSegment, ...] = ()
        if verdict == "split":
            pairs = validate_segments(item.comment_text, segments or [])
            for text, behavior in pairs:
                if self._behaviors is not None and behavior not in self._behaviors:
                    raise ValueError(f"unknown behavior {behavior!r} in segment")
            stored_segments = tuple(
                SplitSegment(
                    parent_comment_id=item.candidate.comment_id,
                    ordinal=i,
                    text=text,
                    behavior=behavior,
                )
                for i, (text, behavior) in enumerate(pairs)
            )
        elif segments:
            raise ValueError("segments are only allowed with the split verdict")
        item.status = _VERDICT_STATUS[verdict]
        item.decided_at = at
        item.reviewer = reviewer
        item.segments = stored_segments
        if log:
            self._append_log(
                {
                    "op": "decide",
                    "item_id": item_id,
                    "verdict": verdict,
                    "segments": [
                        {"ordinal": s.ordinal, "text": s.text, "behavior": s.behavior}
                        for s in stored_segments
                    ]
                    or None,
                    "reviewer": reviewer,
                    "at": at,
                }
            )
        return item

    def revert(self, item_id: str, reviewer: Optional[str] = None, at: Optional[str] = None) -> TriageItem:
        """Explicitly reopen a decided item (decided items are otherwise immutable)."""
        with self._lock:
            item = self.items.get(item_id)
            if item is None:
                raise KeyError(f"unknown triage item {item_id!r}")
            if item.status == "pending":
                raise ConflictError(f"item {item_id} is not decided")
            at = at or _now()
            item.status = "pending"
            item.decided_at = None
            item.reviewer = None
            item.segments = ()
            item.second_reviewer = None
            item.second_verdict = None
            self._append_log({"op": "revert", "item_id": item_id, "reviewer": reviewer, "at": at})
            return item

    def second_opinion(
        self, item_id: str, verdict: str, reviewer: str, at: Optional[str] = None
    ) -> TriageItem:
        """Record an independent second verdict; disagreements are flagged,
        resolution happens through revert + decide."""
        with self._lock:
            if verdict not in VERDICTS:
                raise ValueError(f"unknown verdict {verdict!r}")
            item = self.items.get(item_id)
            if item is None:
                raise KeyError(f"unknown triage item {item_id!r}")
            if item.status == "pending":
                raise ConflictError("second opinion requires a first decision")
            at = at or _now()
            item.second_reviewer = reviewer
            item.second_verdict = verdict
            self._append_log(
                {"op": "second_opinion", "item_id": item_id, "verdict": verdict,
                 "reviewer": reviewer, "at": at}
            )
            return item

    # -- queries ----------------------------------------------------------

    def get(self, item_id: str) -> TriageItem:
        return self.items[item_id]

    def list_items(
        self,
        status: Optional[str] = None,
        behavior: Optional[str] = None,
        limit: Optional[int] = None,
    ) -> list[TriageItem]:
        out = []
        for iid in self._order:
            item = self.items[iid]
            if status is not None and item.status != status:
                continue
            if behavior is not None and item.candidate.behavior != behavior:
                continue
            out.append(item)
            if limit is not None and len(out) >= limit:
                break
        return out

    def progress(self) -> dict:
        by_status = {s: 0 for s in STATUSES}
        by_behavior: dict[str, dict[str, int]] = {}
        disagreements = 0
        for iid in self._order:
            item = self.items[iid]
            by_status[item.status] += 1
            row = by_behavior.setdefault(item.candidate.behavior, {s: 0 for s in STATUSES})
            row[item.status] += 1
            if item.disagreement:
                disagreements += 1
        return {
            "total": len(self._order),
            "by_status": by_status,
            "by_behavior": dict(sorted(by_behavior.items())),
            "disagreements": disagreements,
        }

    def export_labeled_corpus(self, lang: str = "en") -> LabeledCorpus:
        texts: dict[str, list[str]] = {}
        for iid in self._order:
            item = self.items[iid]
            if item.lang != lang:
                continue
            if item.status == "confirmed":
                texts.setdefault(item.candidate.behavior, []).append(item.comment_text)
            elif item.status == "split":
                for seg in item.segments:
                    texts.setdefault(seg.behavior, []).append(seg.text)
        return LabeledCorpus(lang=lang, texts_by_behavior=dict(sorted(texts.items())))

    # -- persistence -------------------------------------------------------

    @classmethod
    def replay(cls, log_path: str, behaviors: Optional[Iterable[str]] = None) -> "TriageStore":
        """Rebuild a store by applying the decision log to an empty store."""
        store = cls(log_path=None, behaviors=behaviors)
        with open(log_path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                rec = json.loads(line)
                op = rec.get("op")
                try:
                    if op == "enqueue":
                        cand = CandidateLabel(
                            comment_id=rec["comment_id"],
                            behavior=rec["behavior"],
                            probability=rec["probability"],
                        )
                        store._enqueue_locked(
                            [cand],
                            {rec["comment_id"]: rec["comment_text"]},
                            {rec["comment_id"]: rec.get("lang", "en")},
                            log=False,
                        )
                    elif op == "decide":
                        store._decide_locked(
                            rec["item_id"], rec["verdict"], rec.get("segments"),
                            rec.get("reviewer"), rec["at"], log=False,
                        )
                    elif op == "revert":
                        item = store.items[rec["item_id"]]
                        item.status = "pending"
                        item.decided_at = None
                        item.reviewer = None
                        item.segments = ()
                        item.second_reviewer = None
                        item.second_verdict = None
                    elif op == "second_opinion":
                        item = store.items[rec["item_id"]]
                        item.second_reviewer = rec["reviewer"]
                        item.second_verdict = rec["verdict"]
                    else:
                        raise ValueError(f"unknown op {op!r}")
                except (KeyError, ValueError, ConflictError) as exc:
                    raise ValueError(f"log line {line_no}: {exc}") from None
        store._log_path = log_path
        return store

    def save_snapshot(self, path: str) -> None:
        payload = {
            "format": "triage-snapshot",
            "version": 1,
            "items": [self.items[iid].to_dict() for iid in self._order],
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, sort_keys=True, ensure_ascii=False, indent=1)
            fh.write("\n")

    @classmethod
    def load_snapshot(cls, path: str, log_path: Optional[str] = None,
                      behaviors: Optional[Iterable[str]] = None) -> "TriageStore":
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
        if payload.get("format") != "triage-snapshot":
            raise ValueError(f"not a triage snapshot: {path}")
        store = cls(log_path=log_path, behaviors=behaviors)
        for rec in payload["items"]:
            item = TriageItem(
                item_id=rec["item_id"],
                candidate=CandidateLabel(
                    comment_id=rec["comment_id"],
                    behavior=rec["behavior"],
                    probability=rec["probability"],
                ),
                comment_text=rec["comment_text"],
                lang=rec.get("lang", "en"),
                status=rec["status"],
                decided_at=rec.get("decided_at"),
                reviewer=rec.get("reviewer"),
                segments=tuple(
                    SplitSegment(rec["comment_id"], s["ordinal"], s["text"], s["behavior"])
                    for s in rec.get("segments", [])
                ),
                second_reviewer=rec.get("second_reviewer"),
                second_verdict=rec.get("second_verdict"),
            )
            store.items[item.item_id] = item
            store._order.append(item.item_id)
        return store


# ---------------------------------------------------------------------------
# HTTP service


class _TriageHandler(BaseHTTPRequestHandler):
    server_version = "reviewaudit-triage/1"
    store: TriageStore
    topic_words: dict[str, list[str]]

    # silence default stderr access log
    def log_message(self, fmt, *args):  # pragma: no cover
        pass

    def _send_json(self, status: int, payload: dict) -> None:
        body = json.dumps(payload, sort_keys=True, ensure_ascii=False).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self._cors()
        self.end_headers()
        self.wfile.write(body)

    def _cors(self) -> None:
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")

    def do_OPTIONS(self):
        self.send_response(204)
        self._cors()
        self.end_headers()

    def _item_payload(self, item: TriageItem) -> dict:
        d = item.to_dict()
        d["highlight_terms"] = self.topic_words.get(item.candidate.behavior, [])
        return d

    def do_GET(self):
        url = urlparse(self.path)
        params = parse_qs(url.query)
        store = self.store
        if url.path == "/candidates":
            status = params.get("status", ["pending"])[0]
            behavior = params.get("behavior", [None])[0]
            limit = None
            if "limit" in params:
                try:
                    limit = int(params["limit"][0])
                except ValueError:
                    return self._send_json(400, {"error": "limit must be an integer"})
            if status == "any":
                status = None
            with store._lock:
                items = store.list_items(status=status, behavior=behavior, limit=limit)
                payload = {"items": [self._item_payload(i) for i in items]}
            return self._send_json(200, payload)
        if url.path == "/progress":
            with store._lock:
                return self._send_json(200, store.progress())
        if url.path == "/export":
            lang = params.get("lang", ["en"])[0]
            with store._lock:
                corpus = store.export_labeled_corpus(lang)
            return self._send_json(200, corpus.to_dict())
        return self._send_json(404, {"error": f"unknown path {url.path}"})

    def do_POST(self):
        url = urlparse(self.path)
        if url.path != "/decisions":
            return self._send_json(404, {"error": f"unknown path {url.path}"})
        try:
            length = int(self.headers.get("Content-Length", "0"))
            body = json.loads(self.rfile.read(length) or b"{}")
            item = self.store.decide(
                item_id=body["item_id"],
                verdict=body["verdict"],
                segments=body.get("segments"),
                reviewer=body.get("reviewer"),
            )
        except ConflictError as exc:
            return self._send_json(409, {"error": str(exc)})
        except KeyError as exc:
            return self._send_json(404, {"error": f"missing or unknown: {exc}"})
        except (ValueError, json.JSONDecodeError) as exc:
            return self._send_json(400, {"error": str(exc)})
        return self._send_json(200, self._item_payload(item))


def make_server(
    store: TriageStore,
    port: int = 0,
    host: str = "127.0.0.1",
    topic_words: Optional[dict[str, list[str]]] = None,
) -> ThreadingHTTPServer:
    """Configured but not started; call serve_forever() (or use in a thread)."""
    handler = type(
        "BoundTriageHandler",
        (_TriageHandler,),
        {"store": store, "topic_words": topic_words or {}},
    )
    return ThreadingHTTPServer((host, port), handler)
