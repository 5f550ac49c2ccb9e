"""Evaluate semantic rules against comments.

Gap semantics: for a pair rule {first, second, max_distance}, a token list
matches iff there are positions i < j with tokens[i] == first,
tokens[j] == second and j - i - 1 < max_distance — i.e. the number of
tokens strictly between the two keywords, counted AFTER stopword removal,
must be smaller than the rule's max_distance (strict). Rules files are
written against these semantics.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from . import textprep
from .corpus import Comment
from .textprep import UnsupportedLanguageError

MAX_DISTANCE_RANGE = (1, 20)


@dataclass(frozen=True)
class SemanticRule:
    behavior: str
    lang: str
    first: str
    second: Optional[str] = None
    max_distance: Optional[int] = None
    train_f1: Optional[float] = None

    def __post_init__(self):
        if (self.second is None) != (self.max_distance is None):
            raise ValueError("second keyword and max_distance must be present together")
        if self.max_distance is not None and not (
            MAX_DISTANCE_RANGE[0] <= self.max_distance <= MAX_DISTANCE_RANGE[1]
        ):
            raise ValueError(f"max_distance must be within {MAX_DISTANCE_RANGE}")
        if not self.first:
            raise ValueError("rule needs a first keyword")

    @property
    def ref(self) -> str:
        if self.second is None:
            return f"{self.lang}:{self.behavior}:{self.first}"
        return f"{self.lang}:{self.behavior}:{self.first}>{self.second}<{self.max_distance}"


def match_rule(rule: SemanticRule, tokens: Sequence[str]) -> Optional[tuple[int, Optional[int]]]:
    """Earliest match positions, or None. Single-keyword rules return (i, None)."""
    if rule.second is None:
        for i, t in enumerate(tokens):
            if t == rule.first:
                return (i, None)
        return None
    for i, t in enumerate(tokens):
        if t != rule.first:
            continue
        for j in range(i + 1, len(tokens)):
            if tokens[j] == rule.second:
                if j - i - 1 < rule.max_distance:
                    return (i, j)
                break  # the nearest second is already too far; later ones are farther
    return None


@dataclass(frozen=True)
class MatchResult:
    comment_id: str
    behavior: str
    matched_rules: tuple[str, ...]
    token_positions: tuple[tuple[int, Optional[int]], ...]


class RuleSet:
    def __init__(self, rules: Sequence[SemanticRule]):
        self.rules = list(rules)
        self._by_lang: dict[str, list[SemanticRule]] = {}
        for r in self.rules:
            self._by_lang.setdefault(r.lang, []).append(r)
        canonical = "\n".join(r.ref for r in sorted(self.rules, key=lambda r: r.ref))
        self.version = hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:12]

    def __len__(self) -> int:
        return len(self.rules)

    def languages(self) -> list[str]:
        return sorted(self._by_lang)

    def rules_for(self, lang: str) -> list[SemanticRule]:
        return self._by_lang.get(lang, [])


def classify(
    comment: Comment,
    ruleset: RuleSet,
    stoplist: Optional[textprep.StopwordList] = None,
) -> list[MatchResult]:
    rules = ruleset.rules_for(comment.lang)
    if not rules:
        raise UnsupportedLanguageError(f"no rules for language {comment.lang!r}")
    if stoplist is None:
        stoplist = textprep.load_stopwords(lang=comment.lang)
    tokens = textprep.remove_stopwords(textprep.tokenize(comment.text, comment.lang), stoplist)
    hits: dict[str, list[tuple[str, tuple[int, Optional[int]]]]] = {}
    for rule in rules:
        pos = match_rule(rule, tokens)
        if pos is not None:
            hits.setdefault(rule.behavior, []).append((rule.ref, pos))
    return [
        MatchResult(
            comment_id=comment.id,
            behavior=behavior,
            matched_rules=tuple(ref for ref, _ in pairs),
            token_positions=tuple(pos for _, pos in pairs),
        )
        for behavior, pairs in sorted(hits.items())
    ]


@dataclass
class StreamResult:
    results: list[MatchResult] = field(default_factory=list)
    unsupported: list[str] = field(default_factory=list)  # comment ids
    errors: list[tuple[str, str]] = field(default_factory=list)

    def summary(self) -> dict:
        by_behavior: dict[str, int] = {}
        matched_comments = set()
        for r in self.results:
            by_behavior[r.behavior] = by_behavior.get(r.behavior, 0) + 1
            matched_comments.add(r.comment_id)
        return {
            "matched_comments": len(matched_comments),
            "matches_by_behavior": dict(sorted(by_behavior.items())),
            "results": len(self.results),
            "unsupported_comments": len(self.unsupported),
            "errors": len(self.errors),
        }


def classify_stream(
    comments: Iterable[Comment],
    ruleset: RuleSet,
    stoplists: Optional[dict[str, textprep.StopwordList]] = None,
) -> StreamResult:
    """Batch classify; per-comment failures are collected, the batch continues."""
    out = StreamResult()
    cache: dict[str, textprep.StopwordList] = dict(stoplists or {})
    for c in comments:
        try:
            if c.lang not in cache and ruleset.rules_for(c.lang):
                cache[c.lang] = textprep.load_stopwords(lang=c.lang)
            out.results.extend(classify(c, ruleset, cache.get(c.lang)))
        except UnsupportedLanguageError:
            out.unsupported.append(c.id)
        except Exception as exc:  # pragma: no cover - defensive
            out.errors.append((c.id, str(exc)))
    return out


def rule_to_record(rule: SemanticRule) -> dict:
    return {
        "behavior": rule.behavior,
        "lang": rule.lang,
        "first": rule.first,
        "second": rule.second,
        "max_distance": rule.max_distance,
        "train_f1": rule.train_f1,
    }


def save_rules(rules: Iterable[SemanticRule], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in rules:
            fh.write(json.dumps(rule_to_record(r), sort_keys=True, ensure_ascii=False) + "\n")


def load_rules(path: str) -> list[SemanticRule]:
    rules = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            try:
                rules.append(
                    SemanticRule(
                        behavior=rec["behavior"],
                        lang=rec["lang"],
                        first=rec["first"],
                        second=rec.get("second"),
                        max_distance=rec.get("max_distance"),
                        train_f1=rec.get("train_f1"),
                    )
                )
            except (KeyError, ValueError) as exc:
                raise ValueError(f"bad rule on line {line_no}: {exc}") from None
    return rules


def load_starter_rules(lang: str = "en") -> list[SemanticRule]:
    """Curated rules bundled with the package (see data/starter_rules_*.jsonl)."""
    from importlib import resources

    data = resources.files("reviewaudit.data").joinpath(f"starter_rules_{lang}.jsonl")
    if not data.is_file():
        raise UnsupportedLanguageError(f"no bundled starter rules for language {lang!r}")
    rules = []
    for line in data.read_text("utf-8").splitlines():
        line = line.strip()
        if not line:
            continue
        rec = json.loads(line)
        rules.append(
            SemanticRule(
                behavior=rec["behavior"], lang=rec["lang"], first=rec["first"],
                second=rec.get("second"), max_distance=rec.get("max_distance"),
                train_f1=rec.get("train_f1"),
            )
        )
    return rules


def write_matches(path: str, results: Sequence[MatchResult], comments: Sequence[Comment]) -> None:
    meta = {c.id: c for c in comments}
    with open(path, "w", encoding="utf-8") as fh:
        for r in results:
            c = meta.get(r.comment_id)
            rec = {
                "comment_id": r.comment_id,
                "app_id": c.app_id if c else None,
                "behavior": r.behavior,
                "rule_refs": list(r.matched_rules),
                "rating": c.rating if c else None,
                "posted_at": c.posted_at.isoformat() if c and c.posted_at else None,
            }
            fh.write(json.dumps(rec, sort_keys=True, ensure_ascii=False) + "\n")


def load_matches(path: str) -> list[dict]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(json.loads(line))
    return out
