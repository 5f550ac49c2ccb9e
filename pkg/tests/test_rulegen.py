import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reviewaudit import rulegen, textprep
from reviewaudit.matcher import SemanticRule, match_rule
from reviewaudit.rulegen import (
    KeywordSet,
    build_keyword_sets,
    extract_rules,
    f1_table,
    generate_rules,
    min_pair_gap,
    rank_keywords,
    select_distance,
    single_rule_f1,
)

LEXICON = textprep.load_pos_lexicon(lang="en")
STOPS = textprep.load_stopwords(lang="en")


# ---------------------------------------------------------------- ranking

def test_rank_keywords_orders_by_weight_then_lexicographic():
    texts = [
        "i uninstall and uninstall it",
        "uninstall it",
        "the ads popup",
    ]
    # uninstall: tf 3, df 2 -> 3*ln(3/2); ads/popup: tf 1, df 1 -> ln 3 each, tie
    ranked = rank_keywords(texts)
    assert ranked == ["uninstall", "ads", "popup"]
    assert 3 * math.log(1.5) > math.log(3)


def test_rank_keywords_empty_corpus_rejected():
    with pytest.raises(ValueError):
        rank_keywords([])


# ---------------------------------------------------------- keyword sets

def test_traversal_stops_at_coverage():
    texts = [
        "i uninstall and uninstall it",
        "uninstall it",
        "the ads popup",
    ]
    ranked = rank_keywords(texts)
    docs = [
        (f"c{i}", textprep.remove_stopwords(textprep.tokenize(t), STOPS))
        for i, t in enumerate(texts)
    ]
    sets = build_keyword_sets(ranked, docs)
    # 'uninstall' covers c0+c1, 'ads' covers c2 -> full coverage; 'popup' is
    # never visited even though it co-occurs with 'ads'.
    assert [s.words for s in sets] == [("uninstall",), ("ads",)]
    assert sets[0].comment_union() == {"c0", "c1"}
    assert sets[1].comment_union() == {"c2"}


def test_single_comment_corpus_yields_single_top_word_set():
    texts = ["malware stole money"]
    ranked = rank_keywords(texts)
    # every weight is 0 in a one-doc corpus, so rank is lexicographic
    assert ranked == ["malware", "money", "stole"]
    docs = [("only", textprep.tokenize(texts[0]))]
    sets = build_keyword_sets(ranked, docs)
    assert [s.words for s in sets] == [("malware",)]


def test_overlapping_word_unifies_earlier_disjoint_sets():
    wordlist = ["x", "y", "w", "r", "s"]
    docs = [
        ("d1", ["x", "p"]),
        ("d2", ["x", "w"]),
        ("d3", ["w", "y"]),
        ("d4", ["y", "q"]),
        ("d5", ["r", "s"]),
    ]
    sets = build_keyword_sets(wordlist, docs)
    # w overlaps both {x} and {y}: merged into the earlier set, sets unified
    assert [s.words for s in sets] == [("x", "w", "y"), ("r",)]
    assert sets[0].comment_union() == {"d1", "d2", "d3", "d4"}
    # 's' is not visited: coverage completed at 'r'
    assert "s" not in sets[1].words


def test_words_absent_from_docs_are_skipped():
    sets = build_keyword_sets(["ghost", "x"], [("d1", ["x"])])
    assert [s.words for s in sets] == [("x",)]


def test_token_free_docs_are_not_coverage_targets():
    sets = build_keyword_sets(["x"], [("d1", ["x"]), ("empty", [])])
    assert len(sets) == 1
    assert sets[0].comment_union() == {"d1"}


@settings(max_examples=150)
@given(
    st.lists(
        st.lists(st.sampled_from("abcdef"), min_size=0, max_size=5),
        min_size=1,
        max_size=10,
    )
)
def test_keyword_set_invariants(token_docs):
    docs = [(f"d{i}", toks) for i, toks in enumerate(token_docs)]
    vocab = sorted({t for toks in token_docs for t in toks})
    sets = build_keyword_sets(vocab, docs)
    target = {f"d{i}" for i, toks in enumerate(token_docs) if toks}
    covered = set()
    seen_words: set[str] = set()
    for s in sets:
        union = s.comment_union()
        # a set's words never repeat across sets
        assert not (seen_words & set(s.words))
        seen_words |= set(s.words)
        # final sets are pairwise disjoint in comment coverage
        assert not (covered & union)
        covered |= union
    if vocab:
        assert covered == target


# ------------------------------------------------------------- distances

def test_min_pair_gap_examples():
    assert min_pair_gap("a", "b", ["a", "b"]) == 0
    assert min_pair_gap("a", "b", ["a", "x", "b"]) == 1
    assert min_pair_gap("a", "b", ["b", "a"]) is None
    assert min_pair_gap("a", "b", ["a", "x", "x", "a", "b"]) == 0
    assert min_pair_gap("a", "b", ["c"]) is None


@given(st.lists(st.sampled_from("abx"), max_size=12))
def test_min_pair_gap_matches_exhaustive_search(tokens):
    gaps = [
        j - i - 1
        for i in range(len(tokens))
        for j in range(i + 1, len(tokens))
        if tokens[i] == "a" and tokens[j] == "b"
    ]
    expected = min(gaps) if gaps else None
    assert min_pair_gap("a", "b", tokens) == expected


def test_select_distance_on_gap_fixture():
    positives = [["v", "f1", "f2", "n"] for _ in range(5)]
    negatives = [["v", "x1", "x2", "x3", "x4", "x5", "x6", "n"] for _ in range(4)]
    d, f1 = select_distance("v", "n", positives, negatives)
    assert d == 3
    assert f1 == 1.0
    table = dict(f1_table("v", "n", positives, negatives))
    assert len(table) == 20
    assert table[1] == 0.0 and table[2] == 0.0
    for dd in (3, 4, 5, 6):
        assert table[dd] == 1.0
    # beyond 6 the negatives (gap 6) start matching too
    assert table[7] == pytest.approx(10 / 14)
    assert table[20] == pytest.approx(10 / 14)


def test_select_distance_requires_positives():
    with pytest.raises(ValueError):
        select_distance("a", "b", [], [["a", "b"]])


def test_select_distance_validates_range():
    with pytest.raises(ValueError):
        select_distance("a", "b", [["a", "b"]], [], d_range=(0, 20))
    with pytest.raises(ValueError):
        select_distance("a", "b", [["a", "b"]], [], d_range=(1, 21))
    with pytest.raises(ValueError):
        select_distance("a", "b", [["a", "b"]], [], d_range=(5, 4))


@settings(max_examples=100)
@given(
    st.lists(st.lists(st.sampled_from("abx"), max_size=8), min_size=1, max_size=6),
    st.lists(st.lists(st.sampled_from("abx"), max_size=8), max_size=6),
)
def test_f1_table_agrees_with_rule_matcher(positives, negatives):
    for d, f1 in f1_table("a", "b", positives, negatives, d_range=(1, 8)):
        rule = SemanticRule("z", "en", "a", second="b", max_distance=d)
        tp = sum(1 for t in positives if match_rule(rule, t) is not None)
        fp = sum(1 for t in negatives if match_rule(rule, t) is not None)
        fn = len(positives) - tp
        if tp == 0:
            assert f1 == 0.0
        else:
            p, r = tp / (tp + fp), tp / (tp + fn)
            assert f1 == pytest.approx(2 * p * r / (p + r))


def test_single_rule_f1_counts():
    positives = [["virus"], ["virus", "x"], ["y"], ["z"]]
    negatives = [["virus", "q"], ["clean"]]
    # tp=2 fp=1 fn=2 -> p=2/3 r=1/2 -> f1=4/7
    assert single_rule_f1("virus", positives, negatives) == pytest.approx(4 / 7)


# ---------------------------------------------------------- rule building

def test_noun_only_set_yields_single_keyword_rules():
    kws = KeywordSet(words=("virus",), comt_sets={"virus": frozenset({"a"})})
    positives = [["virus"], ["virus", "phone"]]
    rules = generate_rules([kws], LEXICON, "virus", "en", positives, [])
    assert len(rules) == 1
    rule = rules[0]
    assert (rule.first, rule.second, rule.max_distance) == ("virus", None, None)
    assert rule.train_f1 == 1.0


def test_mixed_set_emits_both_orderings_with_own_distances():
    kws = KeywordSet(
        words=("steal", "money"),
        comt_sets={"steal": frozenset({"a", "b"}), "money": frozenset({"a", "b"})},
    )
    positives = [["steal", "money"], ["money", "x", "steal"]]
    rules = generate_rules([kws], LEXICON, "payment_deception", "en", positives, [])
    by_order = {(r.first, r.second): r for r in rules}
    assert set(by_order) == {("steal", "money"), ("money", "steal")}
    assert by_order[("steal", "money")].max_distance == 1
    assert by_order[("money", "steal")].max_distance == 2
    for r in rules:
        assert r.train_f1 == pytest.approx(2 / 3)


def test_other_tagged_words_never_pair():
    kws = KeywordSet(
        words=("ok", "money"),
        comt_sets={"ok": frozenset({"a"}), "money": frozenset({"a"})},
    )
    rules = generate_rules([kws], LEXICON, "b", "en", [["ok", "money"]], [])
    assert rules == []


def test_same_pos_words_never_pair():
    kws = KeywordSet(
        words=("steal", "install"),
        comt_sets={"steal": frozenset({"a"}), "install": frozenset({"a"})},
    )
    rules = generate_rules([kws], LEXICON, "b", "en", [["steal", "install"]], [])
    assert rules == []


def test_keep_threshold_discards_weak_rules():
    kws = KeywordSet(
        words=("steal", "money"),
        comt_sets={"steal": frozenset({"a"}), "money": frozenset({"a"})},
    )
    # the pair appears in 1 of 4 positives: F1 = 2*0.25/1.25 = 0.4
    positives = [["steal", "money"], ["q"], ["r"], ["s"]]
    assert generate_rules([kws], LEXICON, "b", "en", positives, []) == []
    kept = generate_rules(
        [kws], LEXICON, "b", "en", positives, [], keep_threshold=0.3
    )
    assert {(r.first, r.second) for r in kept} == {("steal", "money")}
    assert kept[0].train_f1 == pytest.approx(0.4)


def test_keep_threshold_boundary_is_inclusive():
    texts = {
        "ad_disruption": [
            "i uninstall and uninstall it",
            "uninstall it",
            "the ads popup",
        ]
    }
    rules = extract_rules(texts)
    # {uninstall} is a verb-only set (no pair partner, no single rules);
    # {ads} is noun-only with F1 exactly 0.5 - kept at the boundary
    assert [(r.first, r.second) for r in rules] == [("ads", None)]
    assert rules[0].train_f1 == pytest.approx(0.5)


# ------------------------------------------------------------ extraction

# 'steal' appears in 3 of 4 texts and 'money' in 2 of 4; the last text keeps
# 'steal' ranked low enough that the traversal must visit it after 'money',
# merging the two into one mixed-POS set.
PAYMENT_TEXTS = [
    "they steal my money",
    "it is a steal of my money",
    "they will refund my card",
    "they steal from us",
]
VIRUS_TEXTS = ["a virus", "this virus", "the virus"]


def test_extract_rules_end_to_end():
    rules = extract_rules(
        {"payment_deception": PAYMENT_TEXTS, "virus": VIRUS_TEXTS}
    )
    behaviors = {r.behavior for r in rules}
    assert behaviors == {"payment_deception", "virus"}
    pay = [r for r in rules if r.behavior == "payment_deception"]
    # (steal, money) survives; the reverse ordering never occurs (F1 0) and
    # the {card, refund} set's rules fall below the keep threshold
    assert [(r.first, r.second) for r in pay] == [("steal", "money")]
    assert pay[0].max_distance == 1
    assert pay[0].train_f1 == pytest.approx(2 / 3)
    vir = [r for r in rules if r.behavior == "virus"]
    assert [(r.first, r.second) for r in vir] == [("virus", None)]
    assert vir[0].train_f1 == 1.0
    for r in rules:
        assert r.lang == "en"
        assert r.train_f1 is not None and r.train_f1 >= 0.5


def test_extract_rules_is_deterministic():
    texts = {"payment_deception": PAYMENT_TEXTS, "virus": VIRUS_TEXTS}
    assert extract_rules(texts) == extract_rules(texts)


def test_extract_rules_output_sorted_by_behavior():
    rules = extract_rules(
        {"virus": VIRUS_TEXTS, "payment_deception": PAYMENT_TEXTS}
    )
    assert [r.behavior for r in rules] == sorted(r.behavior for r in rules)


def test_policy_text_fallback_for_unlabeled_behavior():
    rules = extract_rules(
        {"payment_deception": PAYMENT_TEXTS, "virus": VIRUS_TEXTS},
        policy_texts={
            "browser_setting_alteration": "browser homepage gets hijacked",
            "payment_deception": "ignored because labeled texts exist",
        },
    )
    bsa = [r for r in rules if r.behavior == "browser_setting_alteration"]
    # a one-document corpus ranks lexicographically and stops at the first
    # word, so the fallback yields at most one single-keyword rule
    assert [(r.first, r.second) for r in bsa] == [("browser", None)]
    assert bsa[0].train_f1 == 1.0
    # the labeled payment corpus is untouched by its policy text
    pay = [r for r in rules if r.behavior == "payment_deception"]
    assert [(r.first, r.second) for r in pay] == [("steal", "money")]


def test_extracted_rules_match_pattern_texts():
    rules = extract_rules(
        {"payment_deception": PAYMENT_TEXTS, "virus": VIRUS_TEXTS}
    )
    pay = [r for r in rules if r.behavior == "payment_deception"]
    for text in PAYMENT_TEXTS[:2]:  # the steal-money pattern texts
        tokens = textprep.remove_stopwords(textprep.tokenize(text), STOPS)
        assert any(match_rule(r, tokens) is not None for r in pay)
    vir = [r for r in rules if r.behavior == "virus"]
    for text in VIRUS_TEXTS:
        tokens = textprep.remove_stopwords(textprep.tokenize(text), STOPS)
        assert any(match_rule(r, tokens) is not None for r in vir)
