"""Analytics over match results: violation scores, declared/undeclared
cross-checks against market policies, rating-star distributions, market
reaction times, a text-similarity baseline classifier, and benchmark
evaluation (per-behavior precision/recall/F1)."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from datetime import date
from typing import Iterable, Mapping, Optional, Sequence

from . import textprep
from .corpus import (
    AppRecord,
    Behavior,
    Category,
    Comment,
    PolicyMatrix,
    behavior_index,
    load_taxonomy,
)
from .textprep import StopwordList
from .triage import LabeledCorpus

DEFAULT_CATEGORY_WEIGHTS: dict[Category, float] = {
    Category.SECURITY: 3.0,
    Category.CONTENT: 2.0,
    Category.ILLEGITIMATE_DEVELOPER_BEHAVIOR: 2.0,
    Category.ADVERTISEMENT: 1.5,
    Category.FUNCTIONALITY_PERFORMANCE: 1.0,
}


@dataclass(frozen=True)
class MatchRecord:
    comment_id: str
    app_id: Optional[str]
    behavior: str
    rule_refs: tuple[str, ...]
    rating: Optional[int] = None
    posted_at: Optional[date] = None

    @classmethod
    def from_dict(cls, rec: Mapping) -> "MatchRecord":
        posted = rec.get("posted_at")
        return cls(
            comment_id=rec["comment_id"],
            app_id=rec.get("app_id"),
            behavior=rec["behavior"],
            rule_refs=tuple(rec.get("rule_refs") or ()),
            rating=rec.get("rating"),
            posted_at=date.fromisoformat(posted) if posted else None,
        )


def match_records(raw: Iterable[Mapping]) -> list[MatchRecord]:
    return [MatchRecord.from_dict(r) for r in raw]


@dataclass(frozen=True)
class AppReport:
    app_id: str
    market: str
    per_behavior_counts: dict[str, int]
    violation_score: float
    declared_hits: Optional[frozenset[str]]
    undeclared_hits: Optional[frozenset[str]]
    top_comments: dict[str, tuple[str, ...]]
    warnings: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "app_id": self.app_id,
            "market": self.market,
            "per_behavior_counts": dict(sorted(self.per_behavior_counts.items())),
            "violation_score": self.violation_score,
            "declared_hits": sorted(self.declared_hits) if self.declared_hits is not None else None,
            "undeclared_hits": (
                sorted(self.undeclared_hits) if self.undeclared_hits is not None else None
            ),
            "top_comments": {b: list(ids) for b, ids in sorted(self.top_comments.items())},
            "warnings": list(self.warnings),
        }


def normalize_weights(weights: Optional[Mapping] = None) -> dict[Category, float]:
    """Full five-category weight table; provided entries override defaults."""
    out = dict(DEFAULT_CATEGORY_WEIGHTS)
    if weights:
        for key, value in weights.items():
            out[Category(key)] = float(value)
    for cat, value in out.items():
        if value < 0:
            raise ValueError(f"weight for {cat.value} must be >= 0")
    return out


def _top_comments(matches: Sequence[MatchRecord], cap: int = 5) -> dict[str, tuple[str, ...]]:
    """Per behavior: the most recent match per rule, capped. Dateless matches
    sort oldest; comment_id breaks ties so output is deterministic."""
    per_behavior: dict[str, dict[str, MatchRecord]] = {}
    for m in matches:
        best_by_rule = per_behavior.setdefault(m.behavior, {})
        for ref in m.rule_refs:
            cur = best_by_rule.get(ref)
            key = (m.posted_at or date.min, m.comment_id)
            if cur is None or key > (cur.posted_at or date.min, cur.comment_id):
                best_by_rule[ref] = m
    out: dict[str, tuple[str, ...]] = {}
    for behavior, best_by_rule in per_behavior.items():
        picks = {(m.posted_at or date.min, m.comment_id) for m in best_by_rule.values()}
        ordered = [cid for _, cid in sorted(picks, reverse=True)]
        out[behavior] = tuple(ordered[:cap])
    return out


def score_app(
    app_id: str,
    market: str,
    matches: Sequence[MatchRecord],
    behaviors: Optional[Mapping[str, Behavior]] = None,
    matrix: Optional[PolicyMatrix] = None,
    weights: Optional[Mapping] = None,
) -> AppReport:
    """violation_score = sum over hit behaviors of
    weight(category) * ln(1 + count)."""
    if behaviors is None:
        behaviors = behavior_index(load_taxonomy())
    table = normalize_weights(weights)

    counts: dict[str, int] = {}
    for m in matches:
        if m.app_id is not None and m.app_id != app_id:
            continue
        if m.behavior not in behaviors:
            raise ValueError(f"unknown behavior in matches: {m.behavior!r}")
        counts[m.behavior] = counts.get(m.behavior, 0) + 1

    score = sum(
        table[behaviors[b].category] * math.log(1 + n) for b, n in counts.items()
    )

    declared: Optional[frozenset[str]] = None
    undeclared: Optional[frozenset[str]] = None
    warnings: tuple[str, ...] = ()
    if matrix is not None:
        try:
            flags = {b: matrix.is_declared(market, b) for b in counts}
            declared = frozenset(b for b, ok in flags.items() if ok)
            undeclared = frozenset(b for b, ok in flags.items() if not ok)
        except KeyError:
            warnings = (f"unknown market {market!r}: declared/undeclared split omitted",)

    relevant = [m for m in matches if m.app_id is None or m.app_id == app_id]
    return AppReport(
        app_id=app_id,
        market=market,
        per_behavior_counts=counts,
        violation_score=score,
        declared_hits=declared,
        undeclared_hits=undeclared,
        top_comments=_top_comments(relevant),
        warnings=warnings,
    )


@dataclass(frozen=True)
class StarStats:
    total: int
    matched: int
    fraction: float


@dataclass(frozen=True)
class RatingBreakdown:
    stars: dict[int, StarStats]
    blank_excluded: bool

    def to_rows(self) -> list[tuple[int, int, int, float]]:
        return [
            (s, self.stars[s].total, self.stars[s].matched, self.stars[s].fraction)
            for s in range(1, 6)
        ]


def rating_breakdown(
    comments: Sequence[Comment],
    matches: Sequence[MatchRecord],
    exclude_blank: bool = False,
) -> RatingBreakdown:
    matched_ids = {m.comment_id for m in matches}
    totals = {s: 0 for s in range(1, 6)}
    hit = {s: 0 for s in range(1, 6)}
    for c in comments:
        if exclude_blank and not c.text.strip():
            continue
        totals[c.rating] += 1
        if c.id in matched_ids:
            hit[c.rating] += 1
    stars = {
        s: StarStats(totals[s], hit[s], (hit[s] / totals[s]) if totals[s] else 0.0)
        for s in range(1, 6)
    }
    return RatingBreakdown(stars=stars, blank_excluded=exclude_blank)


def breakdown_csv(breakdown: RatingBreakdown) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["stars", "total", "matched", "fraction"])
    for star, total, matched, fraction in breakdown.to_rows():
        writer.writerow([star, total, matched, f"{fraction:.6f}"])
    return buf.getvalue()


def reaction_time(app: AppRecord, matches: Sequence[MatchRecord]) -> Optional[int]:
    """Whole days from the earliest dated match for the app to its removal."""
    if app.removed_at is None:
        return None
    dates = [
        m.posted_at
        for m in matches
        if m.posted_at is not None and (m.app_id is None or m.app_id == app.app_id)
    ]
    if not dates:
        return None
    days = (app.removed_at - min(dates)).days
    if days < 0:
        raise ValueError(
            f"app {app.app_id!r} removed before its first matched comment"
        )
    return days


def similarity_baseline(
    text: str,
    labeled: LabeledCorpus,
    stoplist: Optional[StopwordList] = None,
) -> Optional[str]:
    """TF-IDF cosine against every labeled comment; behavior of the most
    similar one. None when the comment shares no weighted vocabulary."""
    if labeled.size() == 0:
        raise ValueError("labeled corpus is empty")
    if stoplist is None:
        stoplist = textprep.load_stopwords(lang=labeled.lang)

    docs: list[tuple[str, list[str]]] = []
    for behavior in sorted(labeled.texts_by_behavior):
        for doc_text in labeled.texts_by_behavior[behavior]:
            tokens = textprep.remove_stopwords(
                textprep.tokenize(doc_text, labeled.lang), stoplist
            )
            docs.append((behavior, tokens))

    n = len(docs)
    df: dict[str, int] = {}
    for _, tokens in docs:
        for t in set(tokens):
            df[t] = df.get(t, 0) + 1
    idf = {t: math.log(n / d) for t, d in df.items()}

    probe_tokens = [
        t
        for t in textprep.remove_stopwords(textprep.tokenize(text, labeled.lang), stoplist)
        if t in idf
    ]
    if not probe_tokens:
        return None
    probe_vec = _tfidf_vector(probe_tokens, idf)
    probe_norm = math.sqrt(sum(v * v for v in probe_vec.values()))
    if probe_norm == 0:
        return None

    best_behavior: Optional[str] = None
    best_score = 0.0
    for behavior, tokens in docs:
        vec = _tfidf_vector(tokens, idf)
        norm = math.sqrt(sum(v * v for v in vec.values()))
        if norm == 0:
            continue
        dot = sum(w * vec.get(t, 0.0) for t, w in probe_vec.items())
        score = dot / (probe_norm * norm)
        if score > best_score:
            best_score, best_behavior = score, behavior
    return best_behavior


def _tfidf_vector(tokens: Sequence[str], idf: Mapping[str, float]) -> dict[str, float]:
    tf: dict[str, int] = {}
    for t in tokens:
        if t in idf:
            tf[t] = tf.get(t, 0) + 1
    return {t: n * idf[t] for t, n in tf.items()}


@dataclass(frozen=True)
class BehaviorEval:
    behavior: str
    tp: int
    fp: int
    fn: int
    precision: Optional[float]
    recall: Optional[float]
    f1: Optional[float]

    @property
    def is_na(self) -> bool:
        return self.tp + self.fp + self.fn == 0


@dataclass(frozen=True)
class EvaluationReport:
    per_behavior: dict[str, BehaviorEval]
    macro_precision: Optional[float]
    macro_recall: Optional[float]
    macro_f1: Optional[float]

    def to_dict(self) -> dict:
        rows = {}
        for b in sorted(self.per_behavior):
            e = self.per_behavior[b]
            rows[b] = {
                "tp": e.tp,
                "fp": e.fp,
                "fn": e.fn,
                "precision": e.precision,
                "recall": e.recall,
                "f1": e.f1,
            }
        return {
            "format": "evaluation-report",
            "version": 1,
            "per_behavior": rows,
            "macro_precision": self.macro_precision,
            "macro_recall": self.macro_recall,
            "macro_f1": self.macro_f1,
        }


def evaluate(
    predictions: Mapping[str, Iterable[str]],
    gold: Mapping[str, Iterable[str]],
    behaviors: Optional[Iterable[str]] = None,
) -> EvaluationReport:
    """Multi-label per-behavior P/R/F1 over comment ids. Behaviors with zero
    predictions and zero gold are reported NA; macro averages run over
    behaviors with gold support only."""
    pred_sets = {cid: set(bs) for cid, bs in predictions.items()}
    gold_sets = {cid: set(bs) for cid, bs in gold.items()}
    universe: set[str] = set(behaviors or ())
    for bs in pred_sets.values():
        universe |= bs
    for bs in gold_sets.values():
        universe |= bs

    comment_ids = set(pred_sets) | set(gold_sets)
    per_behavior: dict[str, BehaviorEval] = {}
    for b in sorted(universe):
        tp = fp = fn = 0
        for cid in comment_ids:
            p = b in pred_sets.get(cid, ())
            g = b in gold_sets.get(cid, ())
            tp += p and g
            fp += p and not g
            fn += g and not p
        if tp + fp + fn == 0:
            per_behavior[b] = BehaviorEval(b, 0, 0, 0, None, None, None)
            continue
        precision = tp / (tp + fp) if (tp + fp) else 0.0
        recall = tp / (tp + fn) if (tp + fn) else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_behavior[b] = BehaviorEval(b, tp, fp, fn, precision, recall, f1)

    supported = [e for e in per_behavior.values() if e.tp + e.fn > 0]
    if supported:
        macro_p = sum(e.precision for e in supported) / len(supported)
        macro_r = sum(e.recall for e in supported) / len(supported)
        macro_f = sum(e.f1 for e in supported) / len(supported)
    else:
        macro_p = macro_r = macro_f = None
    return EvaluationReport(per_behavior, macro_p, macro_r, macro_f)


def render_summary(
    reports: Sequence[AppReport],
    breakdown: Optional[RatingBreakdown] = None,
    reaction_days: Optional[Mapping[str, Optional[int]]] = None,
) -> str:
    """Human-readable run summary: apps ranked by violation score."""
    lines = ["app_id                market            score  behaviors"]
    for r in sorted(reports, key=lambda r: (-r.violation_score, r.app_id)):
        behaviors = ", ".join(
            f"{b}:{n}" for b, n in sorted(r.per_behavior_counts.items())
        )
        lines.append(f"{r.app_id:<20}  {r.market:<15}  {r.violation_score:7.3f}  {behaviors}")
        if r.undeclared_hits:
            lines.append(f"{'':<20}  undeclared: {', '.join(sorted(r.undeclared_hits))}")
        for w in r.warnings:
            lines.append(f"{'':<20}  warning: {w}")
    if breakdown is not None:
        lines.append("")
        lines.append("stars  total  matched  fraction")
        for star, total, matched, fraction in breakdown.to_rows():
            lines.append(f"{star:>5}  {total:>5}  {matched:>7}  {fraction:8.4f}")
    if reaction_days:
        lines.append("")
        lines.append("reaction time (days from first matched comment to removal):")
        for app_id in sorted(reaction_days):
            days = reaction_days[app_id]
            lines.append(f"  {app_id}: {'n/a' if days is None else days}")
    return "\n".join(lines) + "\n"


def write_report(
    path: str,
    reports: Sequence[AppReport],
    breakdown: Optional[RatingBreakdown] = None,
    reaction_days: Optional[Mapping[str, Optional[int]]] = None,
) -> None:
    doc = {
        "format": "violation-report",
        "version": 1,
        "apps": [r.to_dict() for r in sorted(reports, key=lambda r: r.app_id)],
        "rating_breakdown": None,
        "reaction_days": dict(sorted(reaction_days.items())) if reaction_days else None,
    }
    if breakdown is not None:
        doc["rating_breakdown"] = {
            "blank_excluded": breakdown.blank_excluded,
            "stars": {
                str(star): {"total": total, "matched": matched, "fraction": fraction}
                for star, total, matched, fraction in breakdown.to_rows()
            },
        }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True, indent=2, ensure_ascii=False)
        fh.write("\n")


def load_report(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format") != "violation-report":
        raise ValueError("not a violation-report file")
    return doc
