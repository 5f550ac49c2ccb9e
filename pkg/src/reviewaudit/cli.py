"""Pipeline command line: one executable, one subcommand per phase.

Exit codes: 0 success, 1 usage error, 2 input error, 3 internal error.
Every artifact is rewritten byte-identically given the same inputs and seed;
the only wall-clock values in any output are triage decision timestamps,
which are data.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources
from typing import Optional, Sequence

from . import btm, labeler, matcher, report, rulegen, textprep, triage
from .config import PipelineConfig
from .corpus import (
    behavior_index,
    ingest_comments,
    load_app_records,
    load_policy_documents,
    load_policy_matrix,
    load_taxonomy,
    serialize_comments,
)


class InputError(Exception):
    """Missing or malformed input artifact."""


class UsageError(Exception):
    """Required setting absent from both flags and config."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors must exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _existing(path: str, what: str) -> str:
    if not os.path.exists(path):
        raise InputError(f"missing input: {what} file not found at {path!r}")
    return path


def _setting(flag_value: Optional[str], cfg_value: Optional[str], name: str) -> str:
    value = flag_value if flag_value is not None else cfg_value
    if value is None:
        raise UsageError(f"missing required setting {name} (flag or config)")
    return value


def _load_comments(path: str, what: str = "comments"):
    result = ingest_comments(_existing(path, what))
    for line_no, msg in result.errors:
        print(f"{path}:{line_no}: skipped: {msg}", file=sys.stderr)
    return result


def _prepared_docs(policies, lang: str) -> list[list[str]]:
    stoplist = textprep.load_stopwords(lang=lang)
    return [
        textprep.remove_stopwords(textprep.tokenize(p.text, lang), stoplist)
        for p in policies
    ]


def _demo_data_dir() -> str:
    return str(resources.files("reviewaudit").joinpath("data", "demo"))


# --------------------------------------------------------------- stages


def stage_ingest(input_path: str, output_path: str) -> tuple[int, int]:
    result = _load_comments(input_path, "raw comments")
    serialize_comments(result.comments, output_path)
    return len(result.comments), len(result.errors)


def stage_train(
    policies_path: str,
    model_path: str,
    k: int,
    alpha: Optional[float],
    beta: float,
    iterations: int,
    seed: int,
    lang: str,
) -> btm.BtmModel:
    policies = [
        p for p in load_policy_documents(_existing(policies_path, "policies")) if p.lang == lang
    ]
    if not policies:
        raise InputError(f"no policy documents for language {lang!r} in {policies_path!r}")
    docs = _prepared_docs(policies, lang)
    model = btm.train_on_docs(
        docs, k=k, alpha=alpha, beta=beta, iterations=iterations, seed=seed
    )
    btm.save_model(model, model_path)
    return model


def stage_label(model_path: str, policies_path: str, labeling_path: str, lang: str):
    model = btm.load_model(_existing(model_path, "model"))
    policies = [
        p for p in load_policy_documents(_existing(policies_path, "policies")) if p.lang == lang
    ]
    labeling = labeler.label_topics(model, policies)
    topic_words = labeler.top_topic_words(model, labeling)
    labeler.save_labeling(labeling, labeling_path, topic_words)
    return labeling, topic_words


def stage_propose(
    model_path: str,
    labeling_path: str,
    corpus_path: str,
    candidates_path: str,
    threshold: float,
    lang: str,
) -> int:
    model = btm.load_model(_existing(model_path, "model"))
    labeling, _ = labeler.load_labeling(_existing(labeling_path, "labeling"))
    comments = _load_comments(corpus_path).comments
    candidates = labeler.propose_candidates(
        model, labeling, comments, threshold=threshold, lang=lang
    )
    labeler.write_candidates(candidates_path, candidates, comments)
    return len(candidates)


def stage_extract(
    labeled: triage.LabeledCorpus,
    policies_path: Optional[str],
    rules_path: str,
    keep_threshold: float,
    d_range: tuple[int, int],
    lang: str,
) -> list[matcher.SemanticRule]:
    policy_texts = None
    if policies_path is not None:
        policy_texts = {
            p.behavior: p.text
            for p in load_policy_documents(_existing(policies_path, "policies"))
            if p.lang == lang
        }
    rules = rulegen.extract_rules(
        labeled.texts_by_behavior,
        lang=lang,
        policy_texts=policy_texts,
        keep_threshold=keep_threshold,
        d_range=d_range,
    )
    matcher.save_rules(rules, rules_path)
    return rules


def stage_match(rules_path: str, corpus_path: str, matches_path: str) -> dict:
    rules = matcher.load_rules(_existing(rules_path, "rules"))
    if not rules:
        raise InputError(f"rules file {rules_path!r} contains no rules")
    ruleset = matcher.RuleSet(rules)
    comments = _load_comments(corpus_path).comments
    stream = matcher.classify_stream(comments, ruleset)
    matcher.write_matches(matches_path, stream.results, comments)
    summary = stream.summary()
    summary["ruleset_version"] = ruleset.version
    return summary


def stage_report(
    matches_path: str,
    corpus_path: str,
    apps_path: Optional[str],
    report_path: str,
    csv_path: Optional[str],
    summary_path: Optional[str],
    weights: Optional[dict],
    exclude_blank: bool,
) -> str:
    records = report.match_records(matcher.load_matches(_existing(matches_path, "matches")))
    comments = _load_comments(corpus_path).comments
    behaviors = behavior_index(load_taxonomy())
    matrix = load_policy_matrix()

    markets: dict[str, str] = {}
    for c in comments:
        markets.setdefault(c.app_id, c.market)
    apps = []
    if apps_path is not None:
        apps = load_app_records(_existing(apps_path, "apps"))
        for a in apps:
            markets[a.app_id] = a.market

    by_app: dict[str, list[report.MatchRecord]] = {}
    for m in records:
        if m.app_id is not None:
            by_app.setdefault(m.app_id, []).append(m)

    reports = [
        report.score_app(
            app_id,
            markets.get(app_id, "unknown"),
            ms,
            behaviors,
            matrix,
            weights=weights,
        )
        for app_id, ms in sorted(by_app.items())
    ]
    breakdown = report.rating_breakdown(comments, records, exclude_blank=exclude_blank)
    reaction_days = {
        a.app_id: report.reaction_time(a, records) for a in apps if a.removed_at is not None
    }

    report.write_report(report_path, reports, breakdown, reaction_days or None)
    if csv_path is not None:
        with open(csv_path, "w", encoding="utf-8") as fh:
            fh.write(report.breakdown_csv(breakdown))
    text = report.render_summary(reports, breakdown, reaction_days or None)
    if summary_path is not None:
        with open(summary_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def stage_evaluate(matches_path: str, gold_path: str, eval_path: str) -> report.EvaluationReport:
    records = report.match_records(matcher.load_matches(_existing(matches_path, "matches")))
    predictions: dict[str, set[str]] = {}
    for m in records:
        predictions.setdefault(m.comment_id, set()).add(m.behavior)

    gold: dict[str, set[str]] = {}
    with open(_existing(gold_path, "gold"), encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
                gold[rec["comment_id"]] = set(rec["behaviors"])
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise InputError(f"{gold_path}:{line_no}: malformed gold record ({exc})")

    result = report.evaluate(predictions, gold)
    with open(eval_path, "w", encoding="utf-8") as fh:
        json.dump(result.to_dict(), fh, sort_keys=True, indent=2)
        fh.write("\n")
    return result


def _format_eval(result: report.EvaluationReport) -> str:
    lines = ["behavior                        P       R       F1"]
    for b in sorted(result.per_behavior):
        e = result.per_behavior[b]
        if e.is_na:
            lines.append(f"{b:<30}  NA      NA      NA")
        else:
            lines.append(
                f"{b:<30}  {e.precision:.3f}   {e.recall:.3f}   {e.f1:.3f}"
            )
    if result.macro_f1 is not None:
        lines.append(
            f"{'macro':<30}  {result.macro_precision:.3f}   {result.macro_recall:.3f}   {result.macro_f1:.3f}"
        )
    return "\n".join(lines)


# ----------------------------------------------------------- subcommands


def cmd_ingest(cfg: PipelineConfig, args) -> int:
    output = _setting(args.output, cfg.corpus_path, "--output/corpus_path")
    ok, bad = stage_ingest(_setting(args.input, None, "--input"), output)
    print(f"ingested {ok} comments ({bad} lines skipped) -> {output}")
    return 0


def cmd_train_btm(cfg: PipelineConfig, args) -> int:
    model_path = _setting(args.output, cfg.model_path, "--output/model_path")
    model = stage_train(
        _setting(args.policies, cfg.policies_path, "--policies/policies_path"),
        model_path,
        k=cfg.k,
        alpha=cfg.alpha,
        beta=cfg.beta,
        iterations=cfg.iterations,
        seed=cfg.seed,
        lang=cfg.lang,
    )
    print(
        f"trained {model.k} topics over {len(model.vocab)} vocabulary words -> {model_path}"
    )
    return 0


def cmd_label_topics(cfg: PipelineConfig, args) -> int:
    labeling_path = _setting(args.output, cfg.labeling_path, "--output/labeling_path")
    labeling, _ = stage_label(
        _setting(args.model, cfg.model_path, "--model/model_path"),
        _setting(args.policies, cfg.policies_path, "--policies/policies_path"),
        labeling_path,
        cfg.lang,
    )
    for z in sorted(labeling.assignment):
        print(f"topic {z} -> {labeling.assignment[z]} (score {labeling.scores[z]:.3f})")
    print(f"labeled {len(labeling.assignment)} topics -> {labeling_path}")
    return 0


def cmd_propose(cfg: PipelineConfig, args) -> int:
    candidates_path = _setting(args.output, cfg.candidates_path, "--output/candidates_path")
    n = stage_propose(
        _setting(args.model, cfg.model_path, "--model/model_path"),
        _setting(args.labeling, cfg.labeling_path, "--labeling/labeling_path"),
        _setting(args.corpus, cfg.corpus_path, "--corpus/corpus_path"),
        candidates_path,
        threshold=cfg.threshold,
        lang=cfg.lang,
    )
    print(f"proposed {n} candidate labels -> {candidates_path}")
    return 0


def cmd_triage_serve(cfg: PipelineConfig, args) -> int:
    candidates_path = _existing(
        _setting(args.candidates, cfg.candidates_path, "--candidates/candidates_path"),
        "candidates",
    )
    log_path = _setting(args.log, cfg.triage_log_path, "--log/triage_log_path")
    behaviors = [b.id for b in load_taxonomy()]

    if os.path.exists(log_path):
        store = triage.TriageStore.replay(log_path, behaviors=behaviors)
    else:
        store = triage.TriageStore(log_path=log_path, behaviors=behaviors)

    raw = labeler.read_candidates(candidates_path)
    cands = [
        labeler.CandidateLabel(r["comment_id"], r["behavior"], r["probability"]) for r in raw
    ]
    texts = {r["comment_id"]: r["comment_text"] for r in raw}
    langs = {r["comment_id"]: r.get("lang", "en") for r in raw}
    result = store.enqueue(cands, texts, langs)
    for cid, msg in result.errors:
        print(f"candidate {cid}: {msg}", file=sys.stderr)

    topic_words = None
    labeling_path = args.labeling if args.labeling is not None else cfg.labeling_path
    if labeling_path is not None and os.path.exists(labeling_path):
        _, topic_words = labeler.load_labeling(labeling_path)

    try:
        server = triage.make_server(
            store, port=cfg.port, host=cfg.host, topic_words=topic_words
        )
    except OSError as exc:
        raise InputError(f"cannot bind {cfg.host}:{cfg.port} ({exc})")
    host, port = server.server_address[:2]
    print(
        f"queued {result.added} new items ({result.duplicates} already known); "
        f"serving triage on http://{host}:{port}"
    )
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def cmd_extract_rules(cfg: PipelineConfig, args) -> int:
    rules_path = _setting(args.output, cfg.rules_path, "--output/rules_path")
    labeled_path = args.labeled if args.labeled is not None else cfg.labeled_path
    log_path = args.triage_log if args.triage_log is not None else cfg.triage_log_path

    if labeled_path is not None:
        labeled = triage.LabeledCorpus.load(_existing(labeled_path, "labeled corpus"))
    elif log_path is not None:
        store = triage.TriageStore.replay(_existing(log_path, "triage log"))
        labeled = store.export_labeled_corpus(lang=cfg.lang)
    else:
        raise UsageError("missing required setting --labeled or --triage-log")

    if labeled.size() == 0 and args.policies is None and cfg.policies_path is None:
        raise InputError("labeled corpus is empty and no policies given for fallback")

    policies_path = args.policies if args.policies is not None else cfg.policies_path
    rules = stage_extract(
        labeled,
        policies_path,
        rules_path,
        keep_threshold=cfg.keep_threshold,
        d_range=cfg.distance_range,
        lang=cfg.lang,
    )
    behaviors = sorted({r.behavior for r in rules})
    print(f"extracted {len(rules)} rules for {len(behaviors)} behaviors -> {rules_path}")
    return 0


def cmd_match(cfg: PipelineConfig, args) -> int:
    matches_path = _setting(args.output, cfg.matches_path, "--output/matches_path")
    summary = stage_match(
        _setting(args.rules, cfg.rules_path, "--rules/rules_path"),
        _setting(args.corpus, cfg.corpus_path, "--corpus/corpus_path"),
        matches_path,
    )
    print(json.dumps(summary, sort_keys=True))
    return 0


def cmd_report(cfg: PipelineConfig, args) -> int:
    report_path = _setting(args.output, cfg.report_path, "--output/report_path")
    apps_path = args.apps if args.apps is not None else cfg.apps_path
    text = stage_report(
        _setting(args.matches, cfg.matches_path, "--matches/matches_path"),
        _setting(args.corpus, cfg.corpus_path, "--corpus/corpus_path"),
        apps_path,
        report_path,
        args.csv,
        args.summary,
        weights=cfg.category_weights,
        exclude_blank=args.exclude_blank or cfg.exclude_blank,
    )
    print(text, end="")
    return 0


def cmd_evaluate(cfg: PipelineConfig, args) -> int:
    eval_path = _setting(args.output, cfg.eval_path, "--output/eval_path")
    result = stage_evaluate(
        _setting(args.matches, cfg.matches_path, "--matches/matches_path"),
        _setting(args.gold, cfg.gold_path, "--gold/gold_path"),
        eval_path,
    )
    print(_format_eval(result))
    return 0


def cmd_demo(cfg: PipelineConfig, args) -> int:
    data = _demo_data_dir()
    workdir = args.workdir
    os.makedirs(workdir, exist_ok=True)
    demo_cfg = PipelineConfig.load(os.path.join(data, "demo_config.json"))
    if args.seed is not None:
        demo_cfg = demo_cfg.override(seed=args.seed)
    if args.iterations is not None:
        demo_cfg = demo_cfg.override(iterations=args.iterations)

    paths = {name: os.path.join(workdir, name) for name in (
        "corpus_train.jsonl", "corpus_test.jsonl", "model.json", "labeling.json",
        "candidates.jsonl", "triage_log.jsonl", "labeled.json", "rules.jsonl",
        "matches.jsonl", "report.json", "breakdown.csv", "summary.txt", "eval.json",
    )}

    n_train, _ = stage_ingest(os.path.join(data, "comments_train.jsonl"), paths["corpus_train.jsonl"])
    n_test, _ = stage_ingest(os.path.join(data, "comments_test.jsonl"), paths["corpus_test.jsonl"])
    print(f"[1/8] ingested {n_train} training / {n_test} held-out comments")

    policies_path = os.path.join(data, "policies_en.jsonl")
    model = stage_train(
        policies_path, paths["model.json"],
        k=demo_cfg.k, alpha=demo_cfg.alpha, beta=demo_cfg.beta,
        iterations=demo_cfg.iterations, seed=demo_cfg.seed, lang=demo_cfg.lang,
    )
    print(f"[2/8] trained {model.k}-topic model on policy texts")

    labeling, _ = stage_label(paths["model.json"], policies_path, paths["labeling.json"], demo_cfg.lang)
    print(f"[3/8] labeled {len(labeling.assignment)} topics with behaviors")

    n_cand = stage_propose(
        paths["model.json"], paths["labeling.json"], paths["corpus_train.jsonl"],
        paths["candidates.jsonl"], threshold=demo_cfg.threshold, lang=demo_cfg.lang,
    )
    print(f"[4/8] proposed {n_cand} candidate labels above threshold {demo_cfg.threshold}")

    # scripted reviewer: confirm every candidate (fixed timestamps keep the
    # log byte-reproducible)
    if os.path.exists(paths["triage_log.jsonl"]):
        os.remove(paths["triage_log.jsonl"])
    behaviors = [b.id for b in load_taxonomy()]
    store = triage.TriageStore(log_path=paths["triage_log.jsonl"], behaviors=behaviors)
    raw = labeler.read_candidates(paths["candidates.jsonl"])
    cands = [labeler.CandidateLabel(r["comment_id"], r["behavior"], r["probability"]) for r in raw]
    store.enqueue(
        cands,
        {r["comment_id"]: r["comment_text"] for r in raw},
        {r["comment_id"]: r.get("lang", "en") for r in raw},
    )
    for item in store.list_items(status="pending"):
        store.decide(item.item_id, "confirm", reviewer="demo-bot", at="2017-06-01T00:00:00Z")
    labeled = store.export_labeled_corpus(lang=demo_cfg.lang)
    labeled.save(paths["labeled.json"])
    print(f"[5/8] scripted triage confirmed {labeled.size()} comments")

    rules = stage_extract(
        labeled, policies_path, paths["rules.jsonl"],
        keep_threshold=demo_cfg.keep_threshold, d_range=demo_cfg.distance_range,
        lang=demo_cfg.lang,
    )
    print(f"[6/8] extracted {len(rules)} semantic rules")

    summary = stage_match(paths["rules.jsonl"], paths["corpus_test.jsonl"], paths["matches.jsonl"])
    print(f"[7/8] matched {summary['matched_comments']} held-out comments")

    stage_report(
        paths["matches.jsonl"], paths["corpus_test.jsonl"],
        os.path.join(data, "apps.jsonl"), paths["report.json"],
        paths["breakdown.csv"], paths["summary.txt"],
        weights=demo_cfg.category_weights, exclude_blank=False,
    )
    result = stage_evaluate(paths["matches.jsonl"], os.path.join(data, "gold_test.jsonl"), paths["eval.json"])
    print("[8/8] report + evaluation written")
    print(_format_eval(result))
    return 0


# ----------------------------------------------------------------- main


def build_parser() -> _Parser:
    parser = _Parser(prog="reviewaudit", description=__doc__)
    common = _Parser(add_help=False)
    common.add_argument("--config", help="pipeline config JSON; flags override its fields")
    common.add_argument("--lang", help="language tag (default en)")
    common.add_argument("--seed", type=int, help="RNG seed override")

    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("ingest", parents=[common], help="validate + normalize raw comments")
    p.add_argument("--input", help="raw comments JSONL")
    p.add_argument("--output", help="normalized corpus JSONL")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("train-btm", parents=[common], help="train the biterm topic model on policy texts")
    p.add_argument("--policies", help="policy documents JSONL")
    p.add_argument("--output", help="model JSON")
    p.add_argument("--k", type=int, help="topic count")
    p.add_argument("--alpha", type=float, help="topic smoothing (default 50/K)")
    p.add_argument("--beta", type=float, help="word smoothing")
    p.add_argument("--iterations", type=int, help="Gibbs iterations")
    p.set_defaults(func=cmd_train_btm)

    p = sub.add_parser("label-topics", parents=[common], help="map topics to behaviors via policy texts")
    p.add_argument("--model", help="model JSON")
    p.add_argument("--policies", help="policy documents JSONL")
    p.add_argument("--output", help="labeling JSON")
    p.set_defaults(func=cmd_label_topics)

    p = sub.add_parser("propose", parents=[common], help="propose labeled candidates for triage")
    p.add_argument("--model", help="model JSON")
    p.add_argument("--labeling", help="labeling JSON")
    p.add_argument("--corpus", help="normalized corpus JSONL")
    p.add_argument("--output", help="candidates JSONL")
    p.add_argument("--threshold", type=float, help="P(topic|comment) cutoff in (0,1)")
    p.set_defaults(func=cmd_propose)

    p = sub.add_parser("triage-serve", parents=[common], help="serve the human triage HTTP API")
    p.add_argument("--candidates", help="candidates JSONL")
    p.add_argument("--log", help="append-only decision log JSONL")
    p.add_argument("--labeling", help="labeling JSON (for highlight terms)")
    p.add_argument("--port", type=int, help="TCP port (0 = ephemeral)")
    p.add_argument("--host", help="bind address")
    p.set_defaults(func=cmd_triage_serve)

    p = sub.add_parser("extract-rules", parents=[common], help="extract semantic rules from labeled comments")
    p.add_argument("--labeled", help="labeled corpus JSON (triage export)")
    p.add_argument("--triage-log", help="triage decision log to replay instead of --labeled")
    p.add_argument("--policies", help="policy documents JSONL (fallback for unlabeled behaviors)")
    p.add_argument("--output", help="rules JSONL")
    p.add_argument("--keep-threshold", type=float, help="minimum training F1 to keep a rule")
    p.set_defaults(func=cmd_extract_rules)

    p = sub.add_parser("match", parents=[common], help="classify comments against a rules file")
    p.add_argument("--rules", help="rules JSONL")
    p.add_argument("--corpus", help="normalized corpus JSONL")
    p.add_argument("--output", help="matches JSONL")
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("report", parents=[common], help="aggregate matches into violation reports")
    p.add_argument("--matches", help="matches JSONL")
    p.add_argument("--corpus", help="normalized corpus JSONL")
    p.add_argument("--apps", help="app records JSONL (markets + removal dates)")
    p.add_argument("--output", help="report JSON")
    p.add_argument("--csv", help="also write the rating breakdown as CSV")
    p.add_argument("--summary", help="also write the human-readable summary")
    p.add_argument("--exclude-blank", action="store_true", help="drop blank comments from rating denominators")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("evaluate", parents=[common], help="score matches against gold labels")
    p.add_argument("--matches", help="matches JSONL")
    p.add_argument("--gold", help="gold labels JSONL")
    p.add_argument("--output", help="evaluation JSON")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("demo", parents=[common], help="run the full pipeline on the bundled synthetic corpus")
    p.add_argument("--workdir", default="demo_run", help="directory for demo artifacts")
    p.add_argument("--iterations", type=int, help="Gibbs iterations override")
    p.set_defaults(func=cmd_demo)

    return parser


def _config_from(args) -> PipelineConfig:
    if getattr(args, "config", None):
        cfg = PipelineConfig.load(_existing(args.config, "config"))
    else:
        cfg = PipelineConfig()
    overrides = {}
    for name in (
        "lang", "seed", "k", "alpha", "beta", "iterations", "threshold",
        "keep_threshold", "port", "host",
    ):
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    return cfg.override(**overrides) if overrides else cfg


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # our error() raises 1; --help raises 0
        return int(exc.code or 0)
    try:
        cfg = _config_from(args)
        return args.func(cfg, args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        return 130
    except Exception as exc:  # pragma: no cover - last-resort diagnostics
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
