"""Command-line entry point.

Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical failure.
Config precedence: CLI flags > --config file > built-in defaults. The run
directory defaults to $FCM_RUN_DIR, then ./fcm-run.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import __version__, jsonio, pipeline
from .concepts import detect_elbow, TooFewValues
from .errors import DataError, FcmError, NumericalError
from .synthgen import PlantedSpec, generate_corpus, read_truth, score_recovery, write_truth
from .corpus import write_records

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--run-dir", default=None,
                        help="run directory (default: $FCM_RUN_DIR or ./fcm-run)")
    parser.add_argument("--config", default=None, help="JSON config file")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fcm", description="Mine failure scenarios from maintenance text.")
    parser.add_argument("--version", action="version", version=f"fcm {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="load, validate, and segment records")
    _add_common(p)
    p.add_argument("--input", required=True, help="records file (JSONL or CSV)")
    p.add_argument("--component", default=None, help="keep only this component tag")
    p.add_argument("--any-component", action="store_true",
                   help="accept component tags outside the default allow-list")

    p = sub.add_parser("preprocess", help="tokenize descriptions with the dictionaries")
    _add_common(p)
    p.add_argument("--stopwords", default=None)
    p.add_argument("--phrases", default=None)
    p.add_argument("--synonyms", default=None)
    p.add_argument("--lemmas", default=None)
    p.add_argument("--drop-numeric", action="store_true", default=None,
                   help="drop pure-digit tokens")

    p = sub.add_parser("vectorize", help="build the TF-IDF matrix")
    _add_common(p)
    p.add_argument("--min-df", type=float, default=None,
                   help="minimum document-frequency fraction (default 0.025)")

    p = sub.add_parser("decompose", help="factor the TF-IDF matrix")
    _add_common(p)
    p.add_argument("--k", type=int, default=None, help="concepts to retain (default 10)")
    p.add_argument("--seed", type=int, default=None, help="RNG seed (default 42)")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--exact", dest="exact", action="store_true", default=None)
    group.add_argument("--iterative", dest="exact", action="store_false", default=None)

    p = sub.add_parser("report", help="write concepts.json")
    _add_common(p)
    p.add_argument("--terms", type=int, default=None, help="terms per concept (default 25)")
    p.add_argument("--docs", type=int, default=None, help="documents per concept (default 10)")
    p.add_argument("--sigma-scaled", action="store_true", default=None,
                   help="multiply loadings by the concept singular value")

    p = sub.add_parser("run", help="run all five stages")
    _add_common(p)
    p.add_argument("--input", default=None)
    p.add_argument("--component", default=None)
    p.add_argument("--any-component", action="store_true")
    p.add_argument("--stopwords", default=None)
    p.add_argument("--phrases", default=None)
    p.add_argument("--synonyms", default=None)
    p.add_argument("--lemmas", default=None)
    p.add_argument("--drop-numeric", action="store_true", default=None)
    p.add_argument("--min-df", type=float, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--terms", type=int, default=None)
    p.add_argument("--docs", type=int, default=None)
    p.add_argument("--sigma-scaled", action="store_true", default=None)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--exact", dest="exact", action="store_true", default=None)
    group.add_argument("--iterative", dest="exact", action="store_false", default=None)

    p = sub.add_parser("synth", help="generate a planted-topic corpus")
    _add_common(p)
    p.add_argument("--topics", type=int, default=4)
    p.add_argument("--terms-per-topic", type=int, default=40)
    p.add_argument("--background", type=int, default=80)
    p.add_argument("--docs", type=int, default=400)
    p.add_argument("--length-min", type=int, default=30)
    p.add_argument("--length-max", type=int, default=60)
    p.add_argument("--weight", type=float, default=0.8)
    p.add_argument("--component", default="annular")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", default=None,
                   help="output records file (default RUN_DIR/synthetic.jsonl)")

    p = sub.add_parser("score", help="score planted-topic recovery of a finished run")
    _add_common(p)
    p.add_argument("--truth", required=True, help="truth.json from synth")
    p.add_argument("--top-n", type=int, default=10)

    p = sub.add_parser("elbow", help="print the scree-elbow suggestion for a run")
    _add_common(p)

    p = sub.add_parser("suggest-phrases", help="rank bigram/trigram candidates")
    _add_common(p)
    p.add_argument("--min-df", type=float, default=None)
    p.add_argument("--max-n", type=int, choices=(2, 3), default=3)
    p.add_argument("--limit", type=int, default=50)

    p = sub.add_parser("serve", help="serve a finished run over HTTP")
    _add_common(p)
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--run", default=None, help="run directory (overrides --run-dir)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--ui", default=None, help="static UI directory to serve at /")

    return parser


def _run_dir(args) -> Path:
    explicit = getattr(args, "run", None) or args.run_dir
    return Path(explicit or os.environ.get("FCM_RUN_DIR") or "fcm-run")


def _config(args, run_dir: Path, **overrides) -> pipeline.Config:
    """Effective config: flags > --config file > run manifest > defaults.

    The manifest layer lets per-stage invocations inherit the settings the
    run was started with (input path, dictionaries, k, ...) instead of
    requiring every flag on every command.
    """
    base: dict = {}
    manifest_path = run_dir / pipeline.MANIFEST_FILE
    if manifest_path.is_file():
        base.update(jsonio.load(manifest_path).get("config_snapshot", {}))
    if args.config:
        base.update(jsonio.load(args.config))
    config = pipeline.Config.from_dict(base) if base else pipeline.Config()
    return config.override(**overrides)


def _stage_overrides(args) -> dict:
    keys = ("input", "component", "stopwords", "phrases", "synonyms", "lemmas",
            "drop_numeric", "min_df", "k", "seed", "exact", "terms", "docs",
            "sigma_scaled")
    return {k: getattr(args, k) for k in keys if hasattr(args, k)}


def _dispatch(args) -> int:
    run_dir = _run_dir(args)

    if args.command in pipeline.STAGES:
        config = _config(args, run_dir, **_stage_overrides(args))
        if getattr(args, "any_component", False):
            config = pipeline.Config.from_dict(
                {**config.to_dict(), "components": None})
        manifest = pipeline.run_stage(args.command, config, run_dir)
        print(f"{args.command}: ok (run {manifest.run_id}, "
              f"stages {','.join(manifest.stages_completed)})")
        return EXIT_OK

    if args.command == "run":
        config = _config(args, run_dir, **_stage_overrides(args))
        if getattr(args, "any_component", False):
            config = pipeline.Config.from_dict(
                {**config.to_dict(), "components": None})
        manifest = pipeline.run_all(config, run_dir)
        print(f"run: ok (run {manifest.run_id}, k={manifest.stages['report']['k']})")
        return EXIT_OK

    if args.command == "synth":
        spec = PlantedSpec(
            n_topics=args.topics, terms_per_topic=args.terms_per_topic,
            background_terms=args.background, docs=args.docs,
            doc_length=(args.length_min, args.length_max),
            topic_weight=args.weight, component_tag=args.component, seed=args.seed)
        records, truth = generate_corpus(spec)
        run_dir.mkdir(parents=True, exist_ok=True)
        out = Path(args.out) if args.out else run_dir / "synthetic.jsonl"
        write_records(records, out)
        write_truth(truth, out.parent / "truth.json")
        print(f"synth: wrote {len(records)} records to {out} (+ truth.json)")
        return EXIT_OK

    if args.command == "score":
        model = pipeline.load_concept_model(run_dir)
        truth = read_truth(args.truth)
        report = score_recovery(model, truth, top_n=args.top_n)
        jsonio.dump(report.to_dict(), run_dir / "recovery.json")
        print(f"score: mean precision@{args.top_n} = {report.mean_precision:.4f} "
              f"(assignment {dict(sorted(report.assignment.items()))})")
        return EXIT_OK

    if args.command == "elbow":
        payload = jsonio.load(run_dir / pipeline.CONCEPTS_FILE)
        values = payload["singular_values"]
        try:
            idx = detect_elbow(values)
            print(f"elbow: index {idx} (sigma {values[idx]:.6g}); advisory only")
        except TooFewValues:
            print("elbow: too few singular values (need >= 3)")
        return EXIT_OK

    if args.command == "suggest-phrases":
        from .preprocess import load_tokens
        from .vectorize import suggest_phrases
        config = _config(args, run_dir, min_df=getattr(args, "min_df", None))
        docs = load_tokens(run_dir / pipeline.TOKENS_FILE)
        ranked = suggest_phrases(docs, max_n=args.max_n, min_df_fraction=config.min_df)
        for phrase, df in ranked[:args.limit]:
            print(f"{df}\t{phrase}")
        return EXIT_OK

    if args.command == "serve":
        from .server import serve_run
        serve_run(run_dir, port=args.port, host=args.host, ui_dir=args.ui).serve()
        return EXIT_OK

    raise AssertionError(f"unhandled command {args.command}")


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DataError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except FcmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
