"""Tokenization, stopword management, TF-IDF weighting, POS lookup."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable, Iterable, Optional, Sequence


class UnsupportedLanguageError(ValueError):
    pass


POS_TAGS = frozenset({"noun", "verb", "adjective", "adverb", "other"})

_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)


def _segment_spaced(text: str) -> list[str]:
    return _WORD_RE.findall(text.lower())


# lang tag -> segmenter; only space/punctuation-delimited languages ship
_SEGMENTERS: dict[str, Callable[[str], list[str]]] = {"en": _segment_spaced}


def register_segmenter(lang: str, segmenter: Callable[[str], list[str]]) -> None:
    _SEGMENTERS[lang] = segmenter


def supported_languages() -> list[str]:
    return sorted(_SEGMENTERS)


def tokenize(text: str, lang: str = "en") -> list[str]:
    segmenter = _SEGMENTERS.get(lang)
    if segmenter is None:
        raise UnsupportedLanguageError(
            f"no segmenter registered for language {lang!r}; "
            f"register one with register_segmenter()"
        )
    return segmenter(text)


@dataclass(frozen=True)
class StopwordList:
    base: frozenset[str]
    removed: frozenset[str]
    added: frozenset[str]
    # multi-word entries, stored as token tuples, filtered before single words
    base_phrases: frozenset[tuple[str, ...]] = frozenset()
    removed_phrases: frozenset[tuple[str, ...]] = frozenset()
    added_phrases: frozenset[tuple[str, ...]] = frozenset()

    def __post_init__(self):
        if self.removed & self.added or self.removed_phrases & self.added_phrases:
            raise ValueError("stopword 'removed' and 'added' sections must be disjoint")

    @property
    def effective(self) -> frozenset[str]:
        return (self.base - self.removed) | self.added

    @property
    def effective_phrases(self) -> frozenset[tuple[str, ...]]:
        return (self.base_phrases - self.removed_phrases) | self.added_phrases


def parse_stopwords(text: str) -> StopwordList:
    sections: dict[str, list[str]] = {"base": [], "removed": [], "added": []}
    current: Optional[str] = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip().lower()
            if name not in sections:
                raise ValueError(f"unknown stopword section {name!r}")
            current = name
            continue
        if current is None:
            raise ValueError("stopword entry before any [section] header")
        sections[current].append(line.lower())

    def split(entries: list[str]) -> tuple[frozenset[str], frozenset[tuple[str, ...]]]:
        words, phrases = set(), set()
        for e in entries:
            parts = tuple(e.split())
            (phrases if len(parts) > 1 else words).add(parts if len(parts) > 1 else e)
        return frozenset(words), frozenset(phrases)

    base, base_p = split(sections["base"])
    removed, removed_p = split(sections["removed"])
    added, added_p = split(sections["added"])
    return StopwordList(base, removed, added, base_p, removed_p, added_p)


def load_stopwords(path: Optional[str] = None, lang: str = "en") -> StopwordList:
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            return parse_stopwords(fh.read())
    data = resources.files("reviewaudit.data").joinpath(f"stopwords_{lang}.txt")
    if not data.is_file():
        raise UnsupportedLanguageError(f"no bundled stopword list for language {lang!r}")
    return parse_stopwords(data.read_text("utf-8"))


def _drop_phrases(tokens: list[str], phrases: frozenset[tuple[str, ...]]) -> list[str]:
    if not phrases:
        return tokens
    longest = max(len(p) for p in phrases)
    out: list[str] = []
    i = 0
    while i < len(tokens):
        matched = 0
        for n in range(min(longest, len(tokens) - i), 1, -1):
            if tuple(tokens[i : i + n]) in phrases:
                matched = n
                break
        if matched:
            i += matched
        else:
            out.append(tokens[i])
            i += 1
    return out


def remove_stopwords(tokens: Sequence[str], stoplist: StopwordList) -> list[str]:
    """Filter against the effective list; phrase entries may expose new
    adjacencies, so the pass iterates to a fixpoint (idempotence)."""
    effective = stoplist.effective
    phrases = stoplist.effective_phrases
    cur = list(tokens)
    while True:
        nxt = _drop_phrases(cur, phrases)
        nxt = [t for t in nxt if t not in effective]
        if nxt == cur:
            return cur
        cur = nxt


@dataclass(frozen=True)
class TokenizedDoc:
    doc_id: str
    tokens: tuple[str, ...]
    source_len: int


def prepare(text: str, lang: str, stoplist: StopwordList, doc_id: str = "") -> TokenizedDoc:
    raw = tokenize(text, lang)
    kept = remove_stopwords(raw, stoplist)
    return TokenizedDoc(doc_id=doc_id, tokens=tuple(kept), source_len=len(raw))


@dataclass(frozen=True)
class TfidfIndex:
    weights: dict[str, float]
    doc_freq: dict[str, int]
    num_docs: int

    def ranked(self) -> list[str]:
        # descending weight, lexicographic on ties
        return sorted(self.weights, key=lambda t: (-self.weights[t], t))


def build_tfidf(docs: Sequence[Sequence[str]]) -> TfidfIndex:
    """weight(term) = corpus-global term frequency x ln(N / doc frequency)."""
    if not docs:
        raise ValueError("cannot build a TF-IDF index over an empty corpus")
    n = len(docs)
    tf: dict[str, int] = {}
    df: dict[str, int] = {}
    for doc in docs:
        for tok in doc:
            tf[tok] = tf.get(tok, 0) + 1
        for tok in set(doc):
            df[tok] = df.get(tok, 0) + 1
    weights = {t: tf[t] * math.log(n / df[t]) for t in tf}
    return TfidfIndex(weights=weights, doc_freq=df, num_docs=n)


class PosLexicon:
    """word -> coarse tag; lookups for unlisted words default to noun."""

    def __init__(self, entries: dict[str, str]):
        bad = {t for t in entries.values() if t not in POS_TAGS}
        if bad:
            raise ValueError(f"unknown POS tags: {sorted(bad)}")
        self.entries = dict(entries)

    def __len__(self) -> int:
        return len(self.entries)


def pos_of(word: str, lexicon: PosLexicon) -> str:
    return lexicon.entries.get(word.lower(), "noun")


def load_pos_lexicon(path: Optional[str] = None, lang: str = "en") -> PosLexicon:
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    else:
        data = resources.files("reviewaudit.data").joinpath(f"pos_lexicon_{lang}.tsv")
        if not data.is_file():
            raise UnsupportedLanguageError(f"no bundled POS lexicon for language {lang!r}")
        text = data.read_text("utf-8")
    entries: dict[str, str] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"POS lexicon line {line_no}: expected 'word<TAB>tag'")
        word, tag = parts[0].strip().lower(), parts[1].strip().lower()
        if word in entries and entries[word] != tag:
            raise ValueError(f"POS lexicon line {line_no}: conflicting tag for {word!r}")
        entries[word] = tag
    return PosLexicon(entries)
