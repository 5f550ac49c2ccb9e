import pytest
from hypothesis import given, settings, strategies as st

from reviewaudit import matcher
from reviewaudit.corpus import Comment
from reviewaudit.matcher import RuleSet, SemanticRule, classify, classify_stream, match_rule


def rule(first, second=None, d=None, behavior="virus", lang="en"):
    return SemanticRule(behavior=behavior, lang=lang, first=first, second=second, max_distance=d)


def comment(cid, text, lang="en"):
    return Comment(id=cid, app_id="app1", market="Google Play", lang=lang, rating=1, text=text)


def brute_force(r, tokens):
    # independent all-pairs oracle for match_rule
    if r.second is None:
        hits = [i for i, t in enumerate(tokens) if t == r.first]
        return (hits[0], None) if hits else None
    best = None
    for i in range(len(tokens)):
        for j in range(len(tokens)):
            if (
                i < j
                and tokens[i] == r.first
                and tokens[j] == r.second
                and j - i - 1 < r.max_distance
            ):
                if best is None or (i, j) < best:
                    best = (i, j)
    return best


class TestRuleInvariants:
    def test_second_requires_distance(self):
        with pytest.raises(ValueError):
            SemanticRule("virus", "en", "a", second="b", max_distance=None)
        with pytest.raises(ValueError):
            SemanticRule("virus", "en", "a", second=None, max_distance=3)

    def test_distance_range(self):
        with pytest.raises(ValueError):
            rule("a", "b", 0)
        with pytest.raises(ValueError):
            rule("a", "b", 21)

    def test_ref_formats(self):
        assert rule("virus").ref == "en:virus:virus"
        assert rule("notification", "ads", 3, behavior="ads_in_notification_bar").ref == (
            "en:ads_in_notification_bar:notification>ads<3"
        )


class TestMatchRule:
    def test_single_keyword(self):
        assert match_rule(rule("virus"), ["think", "virus"]) == (1, None)
        assert match_rule(rule("virus"), ["great", "fun"]) is None

    def test_pair_within_distance(self):
        r = rule("notification", "ads", 3)
        assert match_rule(r, ["notification", "bar", "full", "ads"]) == (0, 3)

    def test_order_violated(self):
        r = rule("ask", "permission", 3)
        assert match_rule(r, ["permission", "ask"]) is None

    def test_gap_one_under_two(self):
        r = rule("notification", "full", 2)
        assert match_rule(r, ["notification", "bar", "full", "ads"]) == (0, 2)

    def test_gap_equal_to_distance_rejected(self):
        # strict: gap < max_distance
        r = rule("a", "b", 2)
        assert match_rule(r, ["a", "x", "y", "b"]) is None
        assert match_rule(r, ["a", "x", "b"]) == (0, 2)

    def test_earliest_pair_wins(self):
        r = rule("a", "b", 5)
        assert match_rule(r, ["a", "a", "b", "b"]) == (0, 2)

    def test_later_first_occurrence_can_match(self):
        r = rule("a", "b", 1)
        # first "a" is too far from any "b"; the second "a" is adjacent
        assert match_rule(r, ["a", "x", "x", "a", "b"]) == (3, 4)

    @settings(max_examples=300, deadline=None)
    @given(
        tokens=st.lists(st.sampled_from("abcxy"), max_size=12),
        first=st.sampled_from("abc"),
        second=st.one_of(st.none(), st.sampled_from("abc")),
        d=st.integers(1, 20),
    )
    def test_oracle_equivalence(self, tokens, first, second, d):
        r = rule(first, second, d if second is not None else None)
        assert match_rule(r, tokens) == brute_force(r, tokens)

    @settings(max_examples=120, deadline=None)
    @given(
        tokens=st.lists(st.sampled_from("abx"), max_size=10),
        d=st.integers(1, 19),
    )
    def test_distance_monotonicity(self, tokens, d):
        if match_rule(rule("a", "b", d), tokens) is not None:
            assert match_rule(rule("a", "b", d + 1), tokens) is not None


FIG_RULES = RuleSet(matcher.load_starter_rules("en"))


class TestClassify:
    def test_notification_bar_comment_matches_two_rules(self):
        c = comment("c1", "too many ads, can not stand it anymore, the notification bar is full of ads")
        results = classify(c, FIG_RULES)
        assert len(results) == 1
        assert results[0].behavior == "ads_in_notification_bar"
        assert len(results[0].matched_rules) == 2
        assert set(results[0].matched_rules) == {
            "en:ads_in_notification_bar:notification>ads<3",
            "en:ads_in_notification_bar:notification>full<2",
        }

    def test_virus_comment(self):
        results = classify(comment("c2", "i think its a virus!"), FIG_RULES)
        assert [r.behavior for r in results] == ["virus"]

    def test_neutral_comment(self):
        assert classify(comment("c3", "great app love it"), FIG_RULES) == []

    def test_positions_satisfy_claimed_constraint(self):
        c = comment("c1", "the notification bar is full of ads")
        (result,) = classify(c, FIG_RULES)
        for ref, (i, j) in zip(result.matched_rules, result.token_positions):
            assert j is None or i < j

    def test_unsupported_language(self):
        with pytest.raises(matcher.UnsupportedLanguageError):
            classify(comment("c4", "x", lang="xx"), FIG_RULES)


class TestClassifyStream:
    def test_empty(self):
        out = classify_stream([], FIG_RULES)
        assert out.results == []
        assert out.summary()["matched_comments"] == 0

    def test_duplicates_not_deduped(self):
        c = comment("c1", "i think its a virus")
        out = classify_stream([c, c], FIG_RULES)
        assert len(out.results) == 2
        assert out.results[0] == out.results[1]

    def test_mixed_language_flagged(self):
        out = classify_stream(
            [comment("c1", "its a virus"), comment("c2", "virus", lang="xx")], FIG_RULES
        )
        assert out.unsupported == ["c2"]
        assert [r.comment_id for r in out.results] == ["c1"]

    def test_permutation_invariant_summary(self):
        cs = [
            comment("c1", "i think its a virus"),
            comment("c2", "notification bar full of ads"),
            comment("c3", "nothing here"),
        ]
        fwd = classify_stream(cs, FIG_RULES).summary()
        rev = classify_stream(list(reversed(cs)), FIG_RULES).summary()
        assert fwd == rev


class TestRuleSetIO:
    def test_round_trip(self, tmp_path):
        rules = [rule("virus"), rule("notification", "ads", 3, behavior="ads_in_notification_bar")]
        p = tmp_path / "rules.jsonl"
        matcher.save_rules(rules, str(p))
        assert matcher.load_rules(str(p)) == rules

    def test_version_content_hash(self):
        rs1 = RuleSet([rule("virus")])
        rs2 = RuleSet([rule("virus")])
        rs3 = RuleSet([rule("malware")])
        assert rs1.version == rs2.version
        assert rs1.version != rs3.version

    def test_bad_rule_line_reports_line_number(self, tmp_path):
        p = tmp_path / "rules.jsonl"
        p.write_text('{"behavior": "virus", "lang": "en", "first": "a", "second": "b"}\n')
        with pytest.raises(ValueError, match="line 1"):
            matcher.load_rules(str(p))

    def test_starter_rules_well_formed(self):
        rules = matcher.load_starter_rules("en")
        assert len(rules) == 11
        assert {r.behavior for r in rules} == {
            "virus",
            "ads_in_notification_bar",
            "permission_abuse",
        }


class TestWriteMatches:
    def test_match_records_carry_comment_fields(self, tmp_path):
        import datetime as dt

        c = Comment(
            id="c1", app_id="app9", market="Oppo Market", lang="en",
            rating=2, text="i think its a virus", posted_at=dt.date(2017, 5, 1),
        )
        results = classify(c, FIG_RULES)
        p = tmp_path / "matches.jsonl"
        matcher.write_matches(str(p), results, [c])
        recs = matcher.load_matches(str(p))
        assert recs[0]["app_id"] == "app9"
        assert recs[0]["behavior"] == "virus"
        assert recs[0]["rating"] == 2
        assert recs[0]["posted_at"] == "2017-05-01"
