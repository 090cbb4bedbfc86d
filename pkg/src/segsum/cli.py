"""Command-line pipeline: preprocess, train, extract, summarize, evaluate,
topics. Every subcommand is deterministic given the config file and seed.

Exit codes: 0 success, 1 usage/config error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import classify, corpus as corpus_mod, evaluation, filters, model, patterns
from .config import ConfigError, load_config

log = logging.getLogger(__name__)

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class DataError(Exception):
    pass


def _load_corpus(cfg):
    if not cfg.paths.corpus:
        raise DataError("no corpus path configured")
    extra = corpus_mod.DEFAULT_EXTRA_SENTIMENT
    if cfg.paths.extra_sentiment:
        extra = corpus_mod.load_wordlist(cfg.paths.extra_sentiment)
    try:
        return corpus_mod.ingest_tagged(cfg.paths.corpus, cfg.paths.corpus_format, extra)
    except (OSError, corpus_mod.CorpusFormatError) as exc:
        raise DataError(str(exc)) from exc


def _build_vocab(cfg, corp):
    stopwords = corpus_mod.DEFAULT_STOPWORDS
    if cfg.paths.stopwords:
        stopwords = corpus_mod.load_wordlist(cfg.paths.stopwords)
    try:
        return corpus_mod.build_vocabulary(corp, cfg.min_count, stopwords)
    except ValueError as exc:
        raise DataError(str(exc)) from exc


def _load_seeds(cfg):
    if cfg.paths.seeds:
        return model.SeedList.from_file(cfg.paths.seeds)
    return model.SeedList()


def _load_lexicon(cfg):
    if cfg.paths.lexicon:
        return classify.PolarityLexicon.from_tsv(cfg.paths.lexicon)
    return classify.PolarityLexicon()


def _write_json(path, payload):
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)


def _extract_segments(cfg, corp, pattern_spec=None):
    spec = pattern_spec or cfg.pattern_spec
    ids = patterns.resolve_pattern_ids(spec)
    return patterns.extract_corpus(corp, ids, max_words=cfg.max_words)


def _entity_candidates(cfg, state, corp, pattern_spec=None):
    """Extract, aspect-label and run the configured procedure per entity."""
    est = model.estimate(state)
    lexicon = _load_lexicon(cfg)
    proc = filters.parse_procedure(cfg.procedure)

    segments = _extract_segments(cfg, corp, pattern_spec)
    labeled, dropped = classify.label_aspects(segments, est, state.vocab)
    if dropped:
        log.info("dropped %d unclassifiable segments", len(dropped))

    by_entity = {}
    for seg in labeled:
        by_entity.setdefault(seg.entity_id, []).append(seg)

    candidates = {}
    for entity_id in sorted(by_entity):
        pos, neg = filters.run_procedure(
            proc, by_entity[entity_id], est, state.vocab,
            y_senti=state.y_senti, lexicon=lexicon, config=cfg.filters)
        candidates[entity_id] = {"positive": pos, "negative": neg}
    return candidates, est


# -- subcommands -------------------------------------------------------------

def cmd_preprocess(cfg, args):
    corp = _load_corpus(cfg)
    vocab = _build_vocab(cfg, corp)
    refs = corpus_mod.build_reference_summaries(corp)
    out = cfg.paths.output_dir
    _write_json(os.path.join(out, "vocab.json"), vocab.to_dict())
    _write_json(os.path.join(out, "references.json"),
                {e: {"pros": sorted(p), "cons": sorted(c)}
                 for e, (p, c) in sorted(refs.items())})
    drops = {}
    for reason in vocab.drop_reasons.values():
        drops[reason] = drops.get(reason, 0) + 1
    _write_json(os.path.join(out, "preprocess_stats.json"), {
        "reviews": len(corp.reviews),
        "sentences": corp.num_sentences,
        "aspect_vocab": vocab.num_aspect_words,
        "senti_vocab": vocab.num_senti_words,
        "dropped_stems": drops,
    })
    print(f"vocabulary: {vocab.num_aspect_words} aspect stems, "
          f"{vocab.num_senti_words} sentiment stems; {len(refs)} entities")
    return EXIT_OK


def cmd_train(cfg, args):
    corp = _load_corpus(cfg)
    vocab = _build_vocab(cfg, corp)
    schedule = cfg.schedule
    if args.iters is not None:
        schedule = model.Schedule(min(schedule.burn_in, args.iters),
                                  schedule.interleave, args.iters)
    if args.resume and os.path.exists(cfg.checkpoint_path):
        state = model.load_checkpoint(cfg.checkpoint_path, corp)
        while state.sweep_index < schedule.total:
            model.gibbs_sweep(state)
            t = state.sweep_index
            if t > schedule.burn_in and (t - schedule.burn_in) % schedule.interleave == 0:
                model.optimize_smoothers(state)
    else:
        state = model.train(corp, vocab, cfg.hyperparams, _load_seeds(cfg),
                            schedule, rng_seed=cfg.rng_seed)
    os.makedirs(cfg.paths.output_dir, exist_ok=True)
    model.save_checkpoint(state, cfg.checkpoint_path)
    report = model.topic_report(state)
    _write_json(os.path.join(cfg.paths.output_dir, "topics.json"), report)
    table = model.format_topic_table(report)
    with open(os.path.join(cfg.paths.output_dir, "topics.txt"), "w",
              encoding="utf-8") as fh:
        fh.write(table + "\n")
    print(f"trained {state.sweep_index} sweeps; checkpoint at {cfg.checkpoint_path}")
    return EXIT_OK


def cmd_extract(cfg, args):
    corp = _load_corpus(cfg)
    segments = _extract_segments(cfg, corp, args.patterns)
    out = os.path.join(cfg.paths.output_dir, "segments.jsonl")
    os.makedirs(cfg.paths.output_dir, exist_ok=True)
    with open(out, "w", encoding="utf-8") as fh:
        for seg in segments:
            fh.write(json.dumps(seg.to_dict()) + "\n")
    print(f"extracted {len(segments)} segments -> {out}")
    return EXIT_OK


def cmd_summarize(cfg, args):
    corp = _load_corpus(cfg)
    if not os.path.exists(cfg.checkpoint_path):
        raise DataError(f"no checkpoint at {cfg.checkpoint_path}; run train first")
    state = model.load_checkpoint(cfg.checkpoint_path, corp)

    if args.entity:
        keep = [r for r in corp.reviews if r.entity_id == args.entity]
        if not keep:
            raise DataError(f"unknown entity: {args.entity}")
        corp = corpus_mod.Corpus(keep)
    candidates, est = _entity_candidates(cfg, state, corp, args.patterns)
    if args.entity:
        candidates = {args.entity: candidates.get(args.entity,
                                                  {"positive": [], "negative": []})}

    top_n = args.top_n if args.top_n is not None else cfg.top_n
    output = {}
    for entity_id, cand in candidates.items():
        entry = {}
        for polarity, segs in (("positive", cand["positive"]),
                               ("negative", cand["negative"])):
            ordered = sorted(segs, key=lambda s: -filters.rank_score(s, est, state.vocab))
            if top_n:
                ordered = ordered[:top_n]
            entry[polarity] = [s.to_dict() for s in ordered]
        output[entity_id] = entry
    _write_json(os.path.join(cfg.paths.output_dir, "summaries.json"), output)
    for entity_id, entry in output.items():
        print(f"== {entity_id}")
        for polarity in ("positive", "negative"):
            texts = ", ".join(s["text"] for s in entry[polarity]) or "(none)"
            print(f"  {polarity}: {texts}")
    return EXIT_OK


def cmd_evaluate(cfg, args):
    corp = _load_corpus(cfg)
    if not os.path.exists(cfg.checkpoint_path):
        raise DataError(f"no checkpoint at {cfg.checkpoint_path}; run train first")
    state = model.load_checkpoint(cfg.checkpoint_path, corp)
    refs = corpus_mod.build_reference_summaries(corp)
    if not any(p or c for p, c in refs.values()):
        raise DataError("no gold pros/cons in the corpus")

    candidates, _ = _entity_candidates(cfg, state, corp, args.patterns)
    try:
        report = evaluation.evaluate(candidates, refs, cfg.eval)
    except ValueError as exc:
        raise DataError(str(exc)) from exc

    tag = cfg.procedure.replace("+", "_")
    if args.patterns:
        tag += f"_patterns_{args.patterns.replace(',', '-')}"
    json_path = os.path.join(cfg.paths.output_dir, f"report_{tag}.json")
    _write_json(json_path, report.to_dict())
    table = evaluation.format_report_table(report, cfg.procedure)
    with open(os.path.join(cfg.paths.output_dir, f"report_{tag}.txt"), "w",
              encoding="utf-8") as fh:
        fh.write(table + "\n")
    print(table)
    return EXIT_OK


def cmd_topics(cfg, args):
    if not os.path.exists(cfg.checkpoint_path):
        raise DataError(f"no checkpoint at {cfg.checkpoint_path}; run train first")
    state = model.load_checkpoint(cfg.checkpoint_path)
    print(model.format_topic_table(model.topic_report(state, top_n=args.top_n or 10)))
    return EXIT_OK


# -- argument plumbing -------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(prog="segsum",
                                     description="Segment-based review summarization pipeline")
    parser.add_argument("--config", required=True, help="INI config file")
    parser.add_argument("--seed", type=int, help="override [run] rng_seed")
    parser.add_argument("--procedure", help="override [run] procedure, e.g. AW+SEN+SW")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("preprocess")
    p_train = sub.add_parser("train")
    p_train.add_argument("--iters", type=int, help="override total sweep count")
    p_train.add_argument("--resume", action="store_true")
    p_extract = sub.add_parser("extract")
    p_extract.add_argument("--patterns", help="preset name or ids, e.g. service or 1,3,5")
    p_sum = sub.add_parser("summarize")
    p_sum.add_argument("--entity", help="restrict to one entity")
    p_sum.add_argument("--patterns")
    p_sum.add_argument("--top-n", type=int, dest="top_n")
    p_eval = sub.add_parser("evaluate")
    p_eval.add_argument("--patterns")
    sub.add_parser("topics").add_argument("--top-n", type=int, dest="top_n", default=10)
    return parser


_COMMANDS = {
    "preprocess": cmd_preprocess,
    "train": cmd_train,
    "extract": cmd_extract,
    "summarize": cmd_summarize,
    "evaluate": cmd_evaluate,
    "topics": cmd_topics,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.seed is not None:
        cfg.rng_seed = args.seed
    if args.procedure is not None:
        cfg.procedure = args.procedure
    try:
        filters.parse_procedure(cfg.procedure)
    except filters.ProcedureError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](cfg, args)
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
