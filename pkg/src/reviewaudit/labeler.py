"""Map learned topics to behaviors via policy documents; propose candidates."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from . import btm, textprep
from .corpus import Comment, PolicyDocument

DEFAULT_THRESHOLD = 0.6


@dataclass(frozen=True)
class TopicLabeling:
    assignment: dict[int, str]  # topic index -> behavior id
    scores: dict[int, float]    # topic index -> P(z|d) of the winning policy doc

    def __post_init__(self):
        behaviors = list(self.assignment.values())
        if len(set(behaviors)) != len(behaviors):
            raise ValueError("topic labeling must be injective")

    def behavior_of(self, topic: int) -> Optional[str]:
        return self.assignment.get(topic)


@dataclass(frozen=True)
class CandidateLabel:
    comment_id: str
    behavior: str
    probability: float


_STOPLIST_CACHE: dict[str, textprep.StopwordList] = {}


def _stoplist_for(lang: str, override: Optional[textprep.StopwordList]) -> textprep.StopwordList:
    if override is not None:
        return override
    if lang not in _STOPLIST_CACHE:
        _STOPLIST_CACHE[lang] = textprep.load_stopwords(lang=lang)
    return _STOPLIST_CACHE[lang]


def policy_topic_scores(
    model: btm.BtmModel,
    policies: Sequence[PolicyDocument],
    stoplist: Optional[textprep.StopwordList] = None,
) -> dict[str, list[float]]:
    """P(z|d) per policy document, keyed by behavior."""
    scores: dict[str, list[float]] = {}
    for p in policies:
        tokens = textprep.remove_stopwords(
            textprep.tokenize(p.text, p.lang), _stoplist_for(p.lang, stoplist)
        )
        probs = btm.topic_given_doc(model, tokens)
        if probs is None:
            raise ValueError(
                f"policy document for behavior {p.behavior!r} has no in-vocabulary biterms"
            )
        scores[p.behavior] = probs
    return scores


def label_topics(
    model: btm.BtmModel,
    policies: Sequence[PolicyDocument],
    stoplist: Optional[textprep.StopwordList] = None,
) -> TopicLabeling:
    """Greedy assignment: repeatedly take the globally highest-scoring
    unassigned (topic, behavior) pair; injectivity enforced."""
    if len(policies) > model.k:
        raise ValueError(f"{len(policies)} policy documents but only K={model.k} topics")
    behaviors = [p.behavior for p in policies]
    if len(set(behaviors)) != len(behaviors):
        raise ValueError("duplicate behavior among policy documents")
    scores = policy_topic_scores(model, policies, stoplist)
    # deterministic regardless of the order policies were passed in
    pairs = sorted(
        ((probs[z], behavior, z) for behavior, probs in scores.items() for z in range(model.k)),
        key=lambda t: (-t[0], t[1], t[2]),
    )
    assignment: dict[int, str] = {}
    chosen_scores: dict[int, float] = {}
    taken_behaviors: set[str] = set()
    for score, behavior, z in pairs:
        if z in assignment or behavior in taken_behaviors:
            continue
        assignment[z] = behavior
        chosen_scores[z] = score
        taken_behaviors.add(behavior)
        if len(taken_behaviors) == len(scores):
            break
    return TopicLabeling(assignment=assignment, scores=chosen_scores)


def propose_candidates(
    model: btm.BtmModel,
    labeling: TopicLabeling,
    comments: Sequence[Comment],
    threshold: float = DEFAULT_THRESHOLD,
    stoplist: Optional[textprep.StopwordList] = None,
    lang: str = "en",
) -> list[CandidateLabel]:
    """One candidate per (comment, topic) with P(z|d) >= threshold.
    Undecidable comments (and comments in other languages) emit nothing."""
    if not 0 < threshold < 1:
        raise ValueError("threshold must be in (0, 1)")
    out: list[CandidateLabel] = []
    for c in comments:
        if c.lang != lang:
            continue
        tokens = textprep.remove_stopwords(
            textprep.tokenize(c.text, c.lang), _stoplist_for(c.lang, stoplist)
        )
        probs = btm.topic_given_doc(model, tokens)
        if probs is None:
            continue
        for z in range(model.k):
            behavior = labeling.behavior_of(z)
            if behavior is not None and probs[z] >= threshold:
                out.append(CandidateLabel(comment_id=c.id, behavior=behavior, probability=probs[z]))
    return out


def top_topic_words(model: btm.BtmModel, labeling: TopicLabeling, n: int = 8) -> dict[str, list[str]]:
    """Highest-phi words per labeled topic; advisory (UI highlighting)."""
    out: dict[str, list[str]] = {}
    for z, behavior in labeling.assignment.items():
        row = model.phi[z]
        ranked = sorted(range(len(row)), key=lambda w: (-row[w], model.vocab[w]))
        out[behavior] = [model.vocab[w] for w in ranked[:n]]
    return out


def save_labeling(
    labeling: TopicLabeling,
    path: str,
    topic_words: Optional[dict[str, list[str]]] = None,
) -> None:
    payload = {
        "format": "topic-labeling",
        "version": 1,
        "assignment": {str(z): b for z, b in labeling.assignment.items()},
        "scores": {str(z): s for z, s in labeling.scores.items()},
        "topic_words": topic_words or {},
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, ensure_ascii=False, indent=1)
        fh.write("\n")


def load_labeling(path: str) -> tuple[TopicLabeling, dict[str, list[str]]]:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("format") != "topic-labeling":
        raise ValueError(f"not a topic-labeling file: {path}")
    labeling = TopicLabeling(
        assignment={int(z): b for z, b in payload["assignment"].items()},
        scores={int(z): s for z, s in payload["scores"].items()},
    )
    return labeling, payload.get("topic_words", {})


def write_candidates(path: str, candidates: Iterable[CandidateLabel], comments: Sequence[Comment]) -> None:
    texts = {c.id: c.text for c in comments}
    langs = {c.id: c.lang for c in comments}
    with open(path, "w", encoding="utf-8") as fh:
        for cand in candidates:
            rec = {
                "comment_id": cand.comment_id,
                "behavior": cand.behavior,
                "probability": cand.probability,
                "comment_text": texts.get(cand.comment_id, ""),
                "lang": langs.get(cand.comment_id, "en"),
            }
            fh.write(json.dumps(rec, sort_keys=True, ensure_ascii=False) + "\n")


def read_candidates(path: str) -> list[dict]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(json.loads(line))
    return out
