"""Semantic-rule extraction from a labeled corpus.

Pipeline per behavior: TF-IDF keyword ranking over the behavior corpus →
coverage traversal grouping keywords into sets (ComtSet overlap merging) →
POS-paired rule generation with distance selection by training F1.

Rules are evaluated against training data: positives are the behavior's own
labeled texts, negatives are every other behavior's labeled texts.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from . import textprep
from .matcher import SemanticRule, match_rule
from .textprep import PosLexicon, StopwordList

DEFAULT_KEEP_THRESHOLD = 0.5
DEFAULT_DISTANCE_RANGE = (1, 20)


@dataclass(frozen=True)
class KeywordSet:
    words: tuple[str, ...]  # traversal order
    comt_sets: dict[str, frozenset[str]]  # keyword -> ids of comments containing it

    def comment_union(self) -> frozenset[str]:
        out: set[str] = set()
        for ids in self.comt_sets.values():
            out |= ids
        return frozenset(out)


def rank_keywords(
    texts: Sequence[str],
    lang: str = "en",
    stoplist: Optional[StopwordList] = None,
) -> list[str]:
    """Stopword-filtered tokens of the behavior corpus, ranked by TF-IDF
    (descending weight, lexicographic ties)."""
    if not texts:
        raise ValueError("cannot rank keywords of an empty corpus")
    if stoplist is None:
        stoplist = textprep.load_stopwords(lang=lang)
    docs = [textprep.remove_stopwords(textprep.tokenize(t, lang), stoplist) for t in texts]
    return textprep.build_tfidf(docs).ranked()


def build_keyword_sets(
    wordlist: Sequence[str],
    docs: Sequence[tuple[str, Sequence[str]]],
) -> list[KeywordSet]:
    """Traverse words in rank order. A word merges into any earlier set whose
    ComtSets overlap its own (several overlapped sets are unified into the
    earliest one); otherwise it starts a new set. The traversal stops as soon
    as the visited ComtSets cover every (non-empty) labeled comment.
    """
    comt: dict[str, set[str]] = {w: set() for w in wordlist}
    target: set[str] = set()
    for doc_id, tokens in docs:
        toks = set(tokens)
        if not toks:
            continue  # token-free comments can never be covered
        target.add(doc_id)
        for w in toks:
            if w in comt:
                comt[w].add(doc_id)

    sets: list[dict] = []  # {"words": [..], "union": set()}
    visited: set[str] = set()
    for word in wordlist:
        ids = comt.get(word, set())
        if not ids:
            continue
        overlapping = [s for s in sets if s["union"] & ids]
        if not overlapping:
            sets.append({"words": [word], "union": set(ids)})
        else:
            first = overlapping[0]
            first["words"].append(word)
            first["union"] |= ids
            for other in overlapping[1:]:
                first["words"].extend(other["words"])
                first["union"] |= other["union"]
                sets.remove(other)
        visited |= ids
        if target and visited >= target:
            break

    return [
        KeywordSet(
            words=tuple(s["words"]),
            comt_sets={w: frozenset(comt[w]) for w in s["words"]},
        )
        for s in sets
    ]


def _f1(tp: int, fp: int, fn: int) -> float:
    if tp == 0:
        return 0.0
    precision = tp / (tp + fp)
    recall = tp / (tp + fn)
    return 2 * precision * recall / (precision + recall)


def min_pair_gap(first: str, second: str, tokens: Sequence[str]) -> Optional[int]:
    """Smallest token gap over all ordered occurrences (first before second)."""
    best: Optional[int] = None
    for i, t in enumerate(tokens):
        if t != first:
            continue
        for j in range(i + 1, len(tokens)):
            if tokens[j] == second:
                gap = j - i - 1
                if best is None or gap < best:
                    best = gap
                break  # later seconds only widen the gap for this i
    return best


def f1_table(
    first: str,
    second: str,
    positives: Sequence[Sequence[str]],
    negatives: Sequence[Sequence[str]],
    d_range: tuple[int, int] = DEFAULT_DISTANCE_RANGE,
) -> list[tuple[int, float]]:
    """Training F1 of the ordered pair rule for every candidate distance."""
    lo, hi = d_range
    pos_gaps = [min_pair_gap(first, second, t) for t in positives]
    neg_gaps = [min_pair_gap(first, second, t) for t in negatives]
    table = []
    for d in range(lo, hi + 1):
        tp = sum(1 for g in pos_gaps if g is not None and g < d)
        fp = sum(1 for g in neg_gaps if g is not None and g < d)
        fn = len(positives) - tp
        table.append((d, _f1(tp, fp, fn)))
    return table


def select_distance(
    first: str,
    second: str,
    positives: Sequence[Sequence[str]],
    negatives: Sequence[Sequence[str]],
    d_range: tuple[int, int] = DEFAULT_DISTANCE_RANGE,
) -> tuple[int, float]:
    """Distance maximizing training F1; smallest distance wins ties."""
    if not positives:
        raise ValueError("select_distance needs at least one positive example")
    lo, hi = d_range
    if not (1 <= lo <= hi <= 20):
        raise ValueError("distance range must satisfy 1 <= lo <= hi <= 20")
    best_d, best_f1 = lo, -1.0
    for d, f1 in f1_table(first, second, positives, negatives, d_range):
        if f1 > best_f1:
            best_d, best_f1 = d, f1
    return best_d, best_f1


def single_rule_f1(
    keyword: str,
    positives: Sequence[Sequence[str]],
    negatives: Sequence[Sequence[str]],
) -> float:
    tp = sum(1 for t in positives if keyword in t)
    fp = sum(1 for t in negatives if keyword in t)
    return _f1(tp, fp, len(positives) - tp)


def generate_rules(
    sets: Sequence[KeywordSet],
    lexicon: PosLexicon,
    behavior: str,
    lang: str,
    positives: Sequence[Sequence[str]],
    negatives: Sequence[Sequence[str]],
    keep_threshold: float = DEFAULT_KEEP_THRESHOLD,
    d_range: tuple[int, int] = DEFAULT_DISTANCE_RANGE,
) -> list[SemanticRule]:
    """Noun-only sets yield single-keyword rules; mixed sets yield both
    orderings of every differing-POS pair ('other' never pairs). Rules whose
    training F1 falls below keep_threshold are discarded."""
    rules: list[SemanticRule] = []
    for kws in sets:
        tags = {w: textprep.pos_of(w, lexicon) for w in kws.words}
        if all(tag == "noun" for tag in tags.values()):
            for w in kws.words:
                f1 = single_rule_f1(w, positives, negatives)
                if f1 >= keep_threshold and f1 > 0:
                    rules.append(SemanticRule(behavior, lang, w, train_f1=round(f1, 6)))
            continue
        words = list(kws.words)
        for i in range(len(words)):
            for j in range(i + 1, len(words)):
                u, v = words[i], words[j]
                if tags[u] == tags[v] or "other" in (tags[u], tags[v]):
                    continue
                for first, second in ((u, v), (v, u)):
                    d, f1 = select_distance(first, second, positives, negatives, d_range)
                    if f1 >= keep_threshold and f1 > 0:
                        rules.append(
                            SemanticRule(
                                behavior, lang, first,
                                second=second, max_distance=d, train_f1=round(f1, 6),
                            )
                        )
    return rules


def extract_rules(
    texts_by_behavior: dict[str, list[str]],
    lang: str = "en",
    lexicon: Optional[PosLexicon] = None,
    stoplist: Optional[StopwordList] = None,
    policy_texts: Optional[dict[str, str]] = None,
    keep_threshold: float = DEFAULT_KEEP_THRESHOLD,
    d_range: tuple[int, int] = DEFAULT_DISTANCE_RANGE,
) -> list[SemanticRule]:
    """Extract rules for every behavior with labeled texts; behaviors with no
    labeled comments fall back to their policy text as a one-document corpus."""
    if lexicon is None:
        lexicon = textprep.load_pos_lexicon(lang=lang)
    if stoplist is None:
        stoplist = textprep.load_stopwords(lang=lang)

    corpora: dict[str, list[str]] = {}
    labeled: set[str] = set()
    for behavior, texts in texts_by_behavior.items():
        if texts:
            corpora[behavior] = list(texts)
            labeled.add(behavior)
    if policy_texts:
        for behavior, text in policy_texts.items():
            if behavior not in corpora and text:
                corpora[behavior] = [text]

    tokens_of: dict[str, list[list[str]]] = {
        behavior: [
            textprep.remove_stopwords(textprep.tokenize(t, lang), stoplist) for t in texts
        ]
        for behavior, texts in corpora.items()
    }

    rules: list[SemanticRule] = []
    for behavior in sorted(corpora):
        positives = tokens_of[behavior]
        # negatives are other behaviors' labeled comments, never policy texts
        negatives = [
            t
            for other in sorted(labeled - {behavior})
            for t in tokens_of[other]
        ]
        wordlist = rank_keywords(corpora[behavior], lang, stoplist)
        docs = [(f"{behavior}:{i}", toks) for i, toks in enumerate(positives)]
        sets = build_keyword_sets(wordlist, docs)
        rules.extend(
            generate_rules(
                sets, lexicon, behavior, lang, positives, negatives, keep_threshold, d_range
            )
        )
    return rules
