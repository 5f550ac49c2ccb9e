#!/usr/bin/env python3
"""Generate the bundled synthetic demo corpus (committed artifacts).

Design notes
------------
Each behavior gets two keyword patterns (verb, noun) with disjoint
vocabulary, plus one train-only "anchor" comment per pattern noun. Anchors
pair the noun with a behavior-specific policy word, which keeps them
proposable by the topic model while forcing the keyword-set traversal deep
enough to visit both pattern words (otherwise the verb alone covers the
pattern's comments and no pair rule can form). The virus behavior instead
uses bare noun mentions so extraction exercises single-keyword rules.

Filler words are shared across behaviors, absent from policy texts (so the
topic model ignores them) and too rare to be visited by the traversal (so
they never enter rules). Everything is deterministic: fixed seed, fixed
dates, explicit comment ids.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from datetime import date, timedelta

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from reviewaudit import rulegen, textprep  # noqa: E402
from reviewaudit.matcher import match_rule  # noqa: E402

SEED = 20170601
START = date(2017, 3, 1)

FILLERS = [
    "honestly", "basically", "frankly", "literally", "genuinely",
    "seriously", "truly", "entirely", "somehow", "utterly",
]

APPS = [
    {"app_id": "com.blue.cleaner", "market": "Oppo", "removed_at": "2017-06-15"},
    {"app_id": "com.sunny.video", "market": "Google Play", "removed_at": None},
    {"app_id": "com.zap.games", "market": "Xiaomi MyApp", "removed_at": None},
]

# behavior -> (patterns, anchor extra word, policy text)
# pattern = (verb_surface, noun, n_instances, doubled_fraction)
SPEC = {
    "fail_to_install": {
        "patterns": [("install", "apk", 25, 0.3), ("download", "error", 18, 0.25)],
        "extra": "setup",
        "policy": (
            "apps must install correctly: the apk package and every download "
            "must complete without an error and the setup must finish on the "
            "first attempt"
        ),
    },
    "fail_to_uninstall": {
        "patterns": [("uninstall", "icon", 25, 0.3), ("remove", "shortcut", 18, 0.25)],
        "extra": "residue",
        "policy": (
            "users must be able to uninstall an app completely: its icon and "
            "every shortcut must remove cleanly leaving no residue behind"
        ),
    },
    "ad_disruption": {
        "patterns": [("show", "ads", 25, 0.3), ("pop", "banner", 18, 0.25)],
        "extra": "fullscreen",
        "policy": (
            "apps must not show disruptive ads: no banner may pop over other "
            "apps and no fullscreen promotion may block the screen"
        ),
    },
    "virus": {
        "nouns": [("virus", 22), ("trojan", 18)],
        "extra": "phone",
        "policy": (
            "apps must not contain a virus or trojan or any malware that "
            "infects the phone or damages the device"
        ),
    },
    "payment_deception": {
        "patterns": [("steal", "money", 25, 0.3), ("charged", "payment", 18, 0.25)],
        "extra": "refund",
        "policy": (
            "apps must not steal money: every payment must be authorized and "
            "users charged wrongly must receive a refund promptly"
        ),
    },
    "privacy_leak": {
        "patterns": [("upload", "contacts", 25, 0.3), ("leak", "data", 18, 0.25)],
        "extra": "album",
        "policy": (
            "apps must not leak personal data: never upload the contacts list "
            "or the photo album without explicit consent"
        ),
    },
}

N_NOISE = 21
NOISE_TEST = 7

# glue phrases are built entirely from stopwords so they vanish before
# ranking, set traversal and gap measurement
PREFIXES = ["they", "it will", "this will", "and then it will", "but they", "i think they"]
SUFFIXES = ["", "again", "again and again", "all the time", "every time", "once more"]


def pattern_comment(rng: random.Random, verb: str, noun: str, doubled: bool) -> str:
    prefix = rng.choice(PREFIXES)
    gap = rng.choice([0, 1, 2])
    mid = " ".join(rng.sample(FILLERS, gap))
    verb_part = f"{verb} and {verb}" if doubled else verb
    glue = rng.choice(["the", "my", "a"])
    suffix = rng.choice(SUFFIXES)
    parts = [prefix, verb_part, mid, glue, noun, suffix]
    return " ".join(p for p in parts if p)


def virus_comment(rng: random.Random, noun: str) -> str:
    # 'phone' appears in the virus policy text, so these stay proposable
    # (two in-vocab tokens) without adding a third content word
    shapes = [
        f"i think there is a {noun} on my phone",
        f"my phone has a {noun} in it",
        f"this thing is a {noun} and it was on my phone",
        f"there was a {noun} on the phone again",
    ]
    return rng.choice(shapes)


def noise_comment(rng: random.Random) -> str:
    words = rng.sample(FILLERS, 3)
    shapes = [
        f"{words[0]} the best thing ever",
        f"so {words[0]} and {words[1]}",
        f"{words[0]} {words[1]} {words[2]}",
        f"just {words[0]} really {words[1]}",
    ]
    return rng.choice(shapes)


def build():
    rng = random.Random(SEED)
    train, test, gold = [], [], []
    counter = 0

    def add(text: str, behaviors: list[str], to_train: bool, rating: int):
        nonlocal counter
        counter += 1
        cid = f"c{counter:04d}"
        app = APPS[counter % len(APPS)]
        rec = {
            "id": cid,
            "app_id": app["app_id"],
            "market": app["market"],
            "lang": "en",
            "rating": rating,
            "text": text,
            "posted_at": (START + timedelta(days=counter % 80)).isoformat(),
        }
        (train if to_train else test).append(rec)
        if not to_train:
            gold.append({"comment_id": cid, "behaviors": behaviors})
        return rec

    for behavior, spec in SPEC.items():
        if "patterns" in spec:
            for verb, noun, n, doubled_frac in spec["patterns"]:
                texts = []
                for i in range(n):
                    doubled = (i / n) < doubled_frac
                    texts.append(pattern_comment(rng, verb, noun, doubled))
                # stratify: every comment whose index % 10 >= 6 is held out,
                # except the first two so each gap shape is seen in training
                for i, text in enumerate(texts):
                    to_train = i < 2 or (i % 10) < 6
                    add(text, [behavior], to_train, rng.choice([1, 1, 2]))
                # train-only anchor: noun + behavior extra word, nothing else
                # (a filler here could get visited first and cover the anchor,
                # letting the traversal stop before the noun)
                add(f"{noun} {spec['extra']}", [behavior], True, rng.choice([1, 2]))
        else:
            for noun, n in spec["nouns"]:
                for i in range(n):
                    to_train = i < 2 or (i % 10) < 6
                    add(virus_comment(rng, noun), [behavior], to_train, 1)

    for i in range(N_NOISE):
        add(noise_comment(rng), [], i >= NOISE_TEST, rng.choice([4, 5, 5]))

    policies = [
        {"behavior": b, "lang": "en", "text": spec["policy"]} for b, spec in SPEC.items()
    ]
    return train, test, gold, policies


def verify(train, test, gold, policies):
    """Run the real extraction pipeline over the generated corpus and assert
    the design invariants hold before committing the data."""
    stoplist = textprep.load_stopwords(lang="en")
    texts_by_behavior: dict[str, list[str]] = {}
    gold_by_id = {g["comment_id"]: set(g["behaviors"]) for g in gold}

    train_gold: dict[str, list[str]] = {}
    for rec in train:
        for behavior, spec in SPEC.items():
            vocab = set()
            if "patterns" in spec:
                for verb, noun, _, _ in spec["patterns"]:
                    vocab |= {verb, noun}
            else:
                vocab |= {n for n, _ in spec["nouns"]}
            tokens = set(textprep.tokenize(rec["text"]))
            if tokens & vocab:
                texts_by_behavior.setdefault(behavior, []).append(rec["text"])
                train_gold.setdefault(rec["id"], []).append(behavior)

    rules = rulegen.extract_rules(texts_by_behavior, lang="en", stoplist=stoplist)
    by_behavior: dict[str, list] = {}
    for r in rules:
        by_behavior.setdefault(r.behavior, []).append(r)

    problems = []
    for behavior, spec in SPEC.items():
        own = by_behavior.get(behavior, [])
        kinds = {(r.first, r.second) for r in own}
        if "patterns" in spec:
            for verb, noun, _, _ in spec["patterns"]:
                if (verb, noun) not in kinds:
                    problems.append(f"{behavior}: missing pair rule ({verb}, {noun})")
        else:
            for noun, _ in spec["nouns"]:
                if (noun, None) not in kinds:
                    problems.append(f"{behavior}: missing single rule ({noun})")

    # held-out precision/recall, comment level
    tp = fp = fn = 0
    for rec in test:
        tokens = textprep.remove_stopwords(textprep.tokenize(rec["text"]), stoplist)
        predicted = {r.behavior for r in rules if match_rule(r, tokens) is not None}
        actual = gold_by_id[rec["id"]]
        tp += len(predicted & actual)
        fp += len(predicted - actual)
        fn += len(actual - predicted)
    precision = tp / (tp + fp) if tp + fp else 1.0
    recall = tp / (tp + fn) if tp + fn else 1.0
    if precision < 0.95:
        problems.append(f"held-out precision {precision:.3f} < 0.95")
    if recall < 0.95:
        problems.append(f"held-out recall {recall:.3f} < 0.95")

    share = len(test) / (len(train) + len(test))
    if not 0.27 <= share <= 0.33:
        problems.append(f"held-out share {share:.3f} outside 27-33%")

    return problems, precision, recall, rules


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--outdir",
        default=os.path.join(os.path.dirname(__file__), "..", "src", "reviewaudit", "data", "demo"),
    )
    args = parser.parse_args()

    train, test, gold, policies = build()
    problems, precision, recall, rules = verify(train, test, gold, policies)
    if problems:
        for p in problems:
            print(f"FAIL: {p}", file=sys.stderr)
        return 1

    os.makedirs(args.outdir, exist_ok=True)

    def dump(name, records):
        path = os.path.join(args.outdir, name)
        with open(path, "w", encoding="utf-8") as fh:
            for rec in records:
                fh.write(json.dumps(rec, sort_keys=True, ensure_ascii=False) + "\n")
        print(f"wrote {len(records):4d} records -> {path}")

    dump("comments_train.jsonl", train)
    dump("comments_test.jsonl", test)
    dump("gold_test.jsonl", gold)
    dump("policies_en.jsonl", policies)
    dump("apps.jsonl", APPS)

    config = {
        "k": 6,
        "alpha": 1.0,
        "beta": 0.01,
        "iterations": 200,
        "seed": 7,
        "threshold": 0.6,
        "keep_threshold": 0.5,
        "distance_range": [1, 20],
        "lang": "en",
    }
    cfg_path = os.path.join(args.outdir, "demo_config.json")
    with open(cfg_path, "w", encoding="utf-8") as fh:
        json.dump(config, fh, sort_keys=True, indent=2)
        fh.write("\n")
    print(f"wrote config -> {cfg_path}")

    print(
        f"verified: {len(rules)} rules, held-out precision {precision:.3f} "
        f"recall {recall:.3f}, {len(test)}/{len(train) + len(test)} held out"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
