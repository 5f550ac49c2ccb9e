"""Canonical data model: behaviors, comments, policy documents, markets.

Bundled data files (taxonomy, per-market policy matrix) live in
``reviewaudit/data`` and are versioned with the package.
"""
from __future__ import annotations

import datetime as _dt
import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from typing import Iterable, Optional


class Category(str, Enum):
    FUNCTIONALITY_PERFORMANCE = "FunctionalityPerformance"
    ADVERTISEMENT = "Advertisement"
    SECURITY = "Security"
    ILLEGITIMATE_DEVELOPER_BEHAVIOR = "IllegitimateDeveloperBehavior"
    CONTENT = "Content"


@dataclass(frozen=True)
class Behavior:
    id: str
    display_name: str
    category: Category


@dataclass(frozen=True)
class Comment:
    id: str
    app_id: str
    market: str
    lang: str
    rating: int
    text: str
    posted_at: Optional[_dt.date] = None


@dataclass(frozen=True)
class PolicyDocument:
    behavior: str
    lang: str
    text: str


@dataclass(frozen=True)
class AppRecord:
    app_id: str
    market: str
    removed_at: Optional[_dt.date] = None


@dataclass
class IngestResult:
    comments: list[Comment] = field(default_factory=list)
    # (line number, message) for every rejected line
    errors: list[tuple[int, str]] = field(default_factory=list)


class PolicyMatrix:
    """Per-market declaration of which behaviors its policies cover."""

    def __init__(self, declared: dict[str, frozenset[str]], behavior_ids: frozenset[str]):
        self._declared = declared
        self._behavior_ids = behavior_ids
        self._aliases = {_market_key(m): m for m in declared}

    def markets(self) -> list[str]:
        return sorted(self._declared)

    def resolve_market(self, market: str) -> Optional[str]:
        return self._aliases.get(_market_key(market))

    def is_known_market(self, market: str) -> bool:
        return self.resolve_market(market) is not None

    def declared_behaviors(self, market: str) -> frozenset[str]:
        resolved = self.resolve_market(market)
        if resolved is None:
            raise KeyError(f"unknown market: {market!r}")
        return self._declared[resolved]

    def is_declared(self, market: str, behavior_id: str) -> bool:
        if behavior_id not in self._behavior_ids:
            raise KeyError(f"unknown behavior: {behavior_id!r}")
        return behavior_id in self.declared_behaviors(market)


def _market_key(name: str) -> str:
    # "Vivo", "vivo market" and "Vivo Market" address the same market
    key = "".join(ch for ch in name.lower() if ch.isalnum())
    for suffix in ("market", "myapp"):
        if key.endswith(suffix) and key != suffix:
            key = key[: -len(suffix)]
    return key


def _data_text(filename: str) -> str:
    return resources.files("reviewaudit.data").joinpath(filename).read_text("utf-8")


def load_taxonomy() -> list[Behavior]:
    raw = json.loads(_data_text("taxonomy.json"))
    behaviors = [
        Behavior(id=b["id"], display_name=b["display_name"], category=Category(b["category"]))
        for b in raw["behaviors"]
    ]
    ids = [b.id for b in behaviors]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate behavior ids in taxonomy data")
    return behaviors


def behaviors_by_category(behaviors: Iterable[Behavior], category: Category) -> list[Behavior]:
    return [b for b in behaviors if b.category is category]


def behavior_index(behaviors: Iterable[Behavior]) -> dict[str, Behavior]:
    return {b.id: b for b in behaviors}


def load_policy_matrix() -> PolicyMatrix:
    raw = json.loads(_data_text("policy_matrix.json"))
    behavior_ids = frozenset(b.id for b in load_taxonomy())
    declared: dict[str, frozenset[str]] = {}
    for market, ids in raw["markets"].items():
        unknown = set(ids) - behavior_ids
        if unknown:
            raise ValueError(f"policy matrix for {market!r} names unknown behaviors: {sorted(unknown)}")
        declared[market] = frozenset(ids)
    return PolicyMatrix(declared, behavior_ids)


def synthesize_comment_id(app_id: str, market: str, posted_at: str, text: str) -> str:
    payload = "\x1f".join([app_id, market, posted_at, text]).encode("utf-8")
    return "c" + hashlib.sha1(payload).hexdigest()[:16]


def _parse_date(value: str) -> _dt.date:
    return _dt.date.fromisoformat(value)


def _comment_from_record(rec: dict) -> Comment:
    for key in ("app_id", "market", "lang", "rating", "text"):
        if key not in rec:
            raise ValueError(f"missing field {key!r}")
    rating = rec["rating"]
    if not isinstance(rating, int) or isinstance(rating, bool) or not 1 <= rating <= 5:
        raise ValueError("rating out of range (must be an integer 1..5)")
    text = rec["text"]
    if not isinstance(text, str):
        raise ValueError("text must be a string")
    posted_raw = rec.get("posted_at")
    posted_at = None
    if posted_raw is not None:
        if not isinstance(posted_raw, str):
            raise ValueError("posted_at must be an ISO-8601 date string")
        try:
            posted_at = _parse_date(posted_raw)
        except ValueError as exc:
            raise ValueError(f"bad posted_at: {exc}") from None
    cid = rec.get("id") or synthesize_comment_id(
        rec["app_id"], rec["market"], posted_raw or "", text
    )
    return Comment(
        id=cid,
        app_id=rec["app_id"],
        market=rec["market"],
        lang=rec["lang"],
        rating=rating,
        text=text,
        posted_at=posted_at,
    )


def ingest_comments(path: str) -> IngestResult:
    """Load a JSONL comments file; invalid lines become per-line errors."""
    result = IngestResult()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
                if not isinstance(rec, dict):
                    raise ValueError("record must be an object")
                result.comments.append(_comment_from_record(rec))
            except (ValueError, TypeError) as exc:
                result.errors.append((line_no, str(exc)))
    return result


def serialize_comments(comments: Iterable[Comment], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for c in comments:
            fh.write(comment_to_json(c) + "\n")


def comment_to_json(c: Comment) -> str:
    rec = {
        "id": c.id,
        "app_id": c.app_id,
        "market": c.market,
        "lang": c.lang,
        "rating": c.rating,
        "text": c.text,
        "posted_at": c.posted_at.isoformat() if c.posted_at else None,
    }
    return json.dumps(rec, ensure_ascii=False, sort_keys=True)


def load_policy_documents(path: str) -> list[PolicyDocument]:
    docs: list[PolicyDocument] = []
    seen: set[tuple[str, str]] = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            for key in ("behavior", "lang", "text"):
                if key not in rec:
                    raise ValueError(f"line {line_no}: missing field {key!r}")
            if not rec["text"]:
                raise ValueError(f"line {line_no}: empty policy text")
            key = (rec["behavior"], rec["lang"])
            if key in seen:
                raise ValueError(f"line {line_no}: duplicate policy document for {key}")
            seen.add(key)
            docs.append(PolicyDocument(behavior=rec["behavior"], lang=rec["lang"], text=rec["text"]))
    return docs


def load_app_records(path: str) -> list[AppRecord]:
    apps: list[AppRecord] = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            removed = rec.get("removed_at")
            apps.append(
                AppRecord(
                    app_id=rec["app_id"],
                    market=rec["market"],
                    removed_at=_parse_date(removed) if removed else None,
                )
            )
    return apps
