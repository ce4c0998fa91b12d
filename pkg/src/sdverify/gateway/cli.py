"""Command-line interface.

    sdverify verify   --corpus DIR --lexicon FILE --community ID
                      [--members a,b] [--characteristics g,a] [--out report.json]
    sdverify evaluate --spec bench.json --lexicon FILE --out results.csv
    sdverify lexicon validate FILE
    sdverify serve    --corpus DIR --lexicon FILE [--port N] [--runs DIR]
                      [--static DIR]

Exit codes: 0 success, 1 validation problem, 2 I/O problem.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from ..canonical import canonical_json
from ..corpus import load_corpus
from ..errors import SdverifyError
from ..evaluation import format_results_table, load_benchmark_specs, run_benchmark
from ..lexicon import compile_lexicon, load_lexicon, validate_lexicon
from ..verifier import VerifierConfig, verify_member

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2


def _load_corpus_dir(corpus_dir: str):
    directory = Path(corpus_dir)
    return load_corpus(directory / "posts.jsonl", directory / "members.jsonl")


def _config_from_args(args) -> VerifierConfig:
    overrides = {}
    for name in ("theta_min", "theta_sat", "theta_conf", "per_post_cap", "reference_year"):
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    return VerifierConfig(**overrides)


def _add_threshold_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--theta-min", dest="theta_min", type=float)
    parser.add_argument("--theta-sat", dest="theta_sat", type=float)
    parser.add_argument("--theta-conf", dest="theta_conf", type=float)
    parser.add_argument("--per-post-cap", dest="per_post_cap", type=int)
    parser.add_argument("--reference-year", dest="reference_year", type=int)


def _cmd_verify(args) -> int:
    corpus = _load_corpus_dir(args.corpus)
    lexicon = load_lexicon(args.lexicon)
    matcher = compile_lexicon(lexicon)
    config = _config_from_args(args)
    if args.characteristics:
        config = replace(
            config,
            selected_characteristics=frozenset(args.characteristics.split(",")))
    member_ids = (args.members.split(",") if args.members
                  else corpus.members(args.community))
    reports = [
        verify_member(corpus, matcher, lexicon, args.community, member_id, config)
        for member_id in sorted(member_ids)
    ]
    document = canonical_json({
        "community_id": args.community,
        "reports": [report.to_dict() for report in reports],
    })
    if args.out:
        Path(args.out).write_text(document + "\n", encoding="utf-8")
    else:
        print(document)
    return EXIT_OK


def _cmd_evaluate(args) -> int:
    specs = load_benchmark_specs(args.spec)
    lexicon = load_lexicon(args.lexicon)
    config = _config_from_args(args)
    rows = run_benchmark(specs, lexicon, config)
    table, csv_text = format_results_table(rows)
    out_csv = Path(args.out)
    out_csv.write_text(csv_text, encoding="utf-8", newline="")
    out_json = out_csv.with_suffix(".json")
    out_json.write_text(canonical_json({
        "metric_definitions": {
            "false_rate_percent": "share of checked members with at least one "
                                  "definitive verdict contradicting ground truth",
            "effectiveness_percent": "share of checked members with at least one "
                                     "definitive verdict agreeing with ground truth",
        },
        "rows": [row.to_dict() for row in rows],
    }) + "\n", encoding="utf-8")
    sys.stdout.write(table)
    return EXIT_OK


def _cmd_lexicon_validate(args) -> int:
    lexicon = load_lexicon(args.file)
    issues = validate_lexicon(lexicon)
    for issue in issues:
        marker = f" [{issue.marker_id}]" if issue.marker_id else ""
        print(f"{issue.severity}{marker}: {issue.message}")
    print(f"{len(lexicon.markers)} markers, "
          f"{len(lexicon.characteristics)} characteristics, "
          f"{len(issues)} issue(s)")
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .api import create_app
    from .service import Gateway

    corpus = _load_corpus_dir(args.corpus)
    lexicon = load_lexicon(args.lexicon)
    gateway = Gateway(corpus, lexicon, _config_from_args(args), args.runs)
    gateway.recover()
    static_dir = args.static if args.static and Path(args.static).is_dir() else None
    app = create_app(gateway, static_dir=static_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sdverify",
        description="Verify declared socio-demographic data of community "
                    "members against their posted content.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="verify members of one community")
    p_verify.add_argument("--corpus", required=True,
                          help="directory with posts.jsonl and members.jsonl")
    p_verify.add_argument("--lexicon", required=True, help="lexicon.json path")
    p_verify.add_argument("--community", required=True)
    p_verify.add_argument("--members", help="comma-separated member ids (default: all)")
    p_verify.add_argument("--characteristics",
                          help="comma-separated characteristic ids (default: all)")
    p_verify.add_argument("--out", help="write canonical JSON report here")
    _add_threshold_flags(p_verify)
    p_verify.set_defaults(func=_cmd_verify)

    p_eval = sub.add_parser("evaluate", help="run a synthetic benchmark")
    p_eval.add_argument("--spec", required=True, help="benchmark spec JSON")
    p_eval.add_argument("--lexicon", required=True)
    p_eval.add_argument("--out", required=True, help="results CSV path "
                        "(a .json twin is written next to it)")
    _add_threshold_flags(p_eval)
    p_eval.set_defaults(func=_cmd_evaluate)

    p_lexicon = sub.add_parser("lexicon", help="lexicon tools")
    lexicon_sub = p_lexicon.add_subparsers(dest="lexicon_command", required=True)
    p_validate = lexicon_sub.add_parser("validate", help="check a lexicon file")
    p_validate.add_argument("file")
    p_validate.set_defaults(func=_cmd_lexicon_validate)

    p_serve = sub.add_parser("serve", help="serve the HTTP API")
    p_serve.add_argument("--corpus", required=True)
    p_serve.add_argument("--lexicon", required=True)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--runs", default="runs", help="run store directory")
    p_serve.add_argument("--static", help="static dashboard directory")
    _add_threshold_flags(p_serve)
    p_serve.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except SdverifyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
