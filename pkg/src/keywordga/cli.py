"""Command line front end.

Subcommands: run (full pipeline), dict (dictionary/pool export), eval
(score a given word list without the optimizer), synth (fixture
generator), oracle (exhaustive search on small instances). Exit codes:
0 success, 2 configuration error, 3 input error, 4 evaluation error.
"""

import argparse
import json
import sys
from pathlib import Path

from .corpus import dump_documents_jsonl, load_corpus, split_corpus
from .errors import ConfigError, InputError, KeywordGaError
from .freqdict import PoolConfig, build_frequency_dictionary, dictionary_to_csv, pool_to_csv, select_pool
from .ga import GaConfig, exhaustive_best
from .knn import KnnConfig, evaluate
from .pipeline import (
    EVAL_SPLIT_MODES,
    DICT_SCOPES,
    RunConfig,
    prepare_context,
    report_words,
    run,
    run_repeated,
)
from .synth import make_synthetic_corpus
from .vectorspace import build_feature_matrix, matrix_to_csv


def _optional_float(text: str):
    return None if text.strip().lower() in ("", "none") else float(text)


def _optional_int(text: str):
    return None if text.strip().lower() in ("", "none") else int(text)


_RUN_DEFAULTS = {
    "corpus_root": None,
    "output_dir": None,
    "train_count": None,
    "max_generations": None,
    "seed": 0,
    "encoding": "utf-8",
    "p_min": 0.0,
    "p_max": 1e-3,
    "max_words": 1000,
    "k": 1,
    "pop_size": 50,
    "chromosome_size": 30,
    "elite_count": 5,
    "crossover_fraction": 0.8,
    "mutation_rate": None,
    "stall_generations": None,
    "target_fitness": 0.0,
    "eval_split": "test",
    "validation_fraction": 0.25,
    "dict_scope": "train",
    "workers": 1,
    "repeat": 1,
}

_RUN_COERCERS = {
    "corpus_root": str,
    "output_dir": str,
    "train_count": int,
    "max_generations": int,
    "seed": int,
    "encoding": str,
    "p_min": float,
    "p_max": float,
    "max_words": int,
    "k": int,
    "pop_size": int,
    "chromosome_size": int,
    "elite_count": int,
    "crossover_fraction": float,
    "mutation_rate": _optional_float,
    "stall_generations": _optional_int,
    "target_fitness": float,
    "eval_split": str,
    "validation_fraction": float,
    "dict_scope": str,
    "workers": int,
    "repeat": int,
}

_RUN_REQUIRED = ("corpus_root", "output_dir", "train_count", "max_generations")


def _parse_config_file(path: Path) -> dict:
    """Flat `key = value` file; '#' starts a comment. Keys match the run
    flags with underscores."""
    if not path.is_file():
        raise ConfigError(f"config file {path} does not exist")
    options = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if key not in _RUN_COERCERS:
            raise ConfigError(f"{path}:{lineno}: unknown option {key!r}")
        try:
            options[key] = _RUN_COERCERS[key](value.strip())
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
    return options


def _resolve_run_options(args: argparse.Namespace) -> dict:
    merged = dict(_RUN_DEFAULTS)
    if args.config is not None:
        merged.update(_parse_config_file(Path(args.config)))
    for key in _RUN_DEFAULTS:
        cli_value = getattr(args, key)
        if cli_value is not None:
            merged[key] = cli_value
    missing = [k for k in _RUN_REQUIRED if merged[k] is None]
    if missing:
        raise ConfigError(
            "missing required options: " + ", ".join(m.replace("_", "-") for m in missing)
        )
    return merged


def _run_config_from_options(opts: dict) -> RunConfig:
    ga = GaConfig(
        max_generations=opts["max_generations"],
        seed=opts["seed"],
        pop_size=opts["pop_size"],
        chromosome_size=opts["chromosome_size"],
        elite_count=opts["elite_count"],
        crossover_fraction=opts["crossover_fraction"],
        mutation_rate=opts["mutation_rate"],
        stall_generations=opts["stall_generations"],
        target_fitness=opts["target_fitness"],
    )
    return RunConfig(
        corpus_root=Path(opts["corpus_root"]),
        output_dir=Path(opts["output_dir"]),
        train_count=opts["train_count"],
        ga=ga,
        seed=opts["seed"],
        pool=PoolConfig(opts["p_min"], opts["p_max"], opts["max_words"]),
        knn=KnnConfig(k=opts["k"]),
        eval_split=opts["eval_split"],
        validation_fraction=opts["validation_fraction"],
        dict_scope=opts["dict_scope"],
        workers=opts["workers"],
        encoding=opts["encoding"],
    )


def _cmd_run(args: argparse.Namespace) -> int:
    opts = _resolve_run_options(args)
    config = _run_config_from_options(opts)
    if opts["repeat"] > 1:
        reports, summary = run_repeated(config, opts["repeat"])
        best = summary["best_fitness"]
        print(
            f"{opts['repeat']} runs: best fitness {best['mean']:.4f} "
            f"+/- {best['stddev']:.4f}; summary in {config.output_dir / 'summary.json'}"
        )
    else:
        report = run(config)
        print(
            f"best fitness {report.best.fitness:.4f} with "
            f"{len(report.words)} keywords; test precision avg "
            f"{report.evaluation.pr_avg:.4f}, recall avg "
            f"{report.evaluation.rc_avg:.4f}"
        )
        print(f"outputs in {config.output_dir}")
    return 0


def _cmd_dict(args: argparse.Namespace) -> int:
    corpus = load_corpus(args.corpus_root, encoding=args.encoding)
    if args.train_count is not None:
        split = split_corpus(corpus, args.train_count, args.seed)
        ids = split.train
    else:
        ids = corpus.doc_ids()
    dictionary = build_frequency_dictionary(corpus, ids)
    if args.dict_csv:
        dictionary_to_csv(dictionary, args.dict_csv)
    if args.docs_jsonl:
        dump_documents_jsonl(corpus, args.docs_jsonl)
    pool_note = ""
    if args.pool_csv:
        pool = select_pool(
            dictionary, PoolConfig(args.p_min, args.p_max, args.max_words)
        )
        pool_to_csv(pool, args.pool_csv)
        pool_note = f"; pool of {len(pool)} words -> {args.pool_csv}"
    print(
        f"{len(dictionary)} distinct words over {dictionary.total_tokens} tokens"
        + pool_note
    )
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    words_path = Path(args.words_file)
    if not words_path.is_file():
        raise InputError(f"words file {words_path} does not exist")
    words = []
    for line in words_path.read_text(encoding="utf-8").splitlines():
        word = line.strip().lower()
        if word and word not in words:
            words.append(word)
    corpus = load_corpus(args.corpus_root, encoding=args.encoding)
    split = split_corpus(corpus, args.train_count, args.seed)
    matrix_train = build_feature_matrix(corpus, split.train, words)
    matrix_test = build_feature_matrix(corpus, split.test, words)
    if args.matrix_csv:
        matrix_to_csv(
            build_feature_matrix(corpus, corpus.doc_ids(), words), args.matrix_csv
        )
    report = evaluate(matrix_train, matrix_test, KnnConfig(k=args.k))
    payload = report.to_json()
    if args.output:
        Path(args.output).write_text(payload + "\n", encoding="utf-8")
        print(f"report written to {args.output}")
    else:
        print(payload)
    return 0


def _cmd_synth(args: argparse.Namespace) -> int:
    manifest = make_synthetic_corpus(
        args.output_dir,
        args.authors,
        args.docs_per_author,
        args.tokens_per_doc,
        args.markers_per_author,
        args.seed,
        background_words=args.background_words,
        marker_share=args.marker_share,
    )
    print(
        f"wrote {len(manifest['documents'])} documents for "
        f"{args.authors} authors under {args.output_dir}"
    )
    return 0


def _cmd_oracle(args: argparse.Namespace) -> int:
    ga = GaConfig(
        max_generations=1,
        seed=args.seed,
        chromosome_size=args.chromosome_size,
        pop_size=2,
        elite_count=0,
    )
    config = RunConfig(
        corpus_root=Path(args.corpus_root),
        output_dir=Path("."),  # oracle writes no directory outputs
        train_count=args.train_count,
        ga=ga,
        seed=args.seed,
        pool=PoolConfig(args.p_min, args.p_max, args.max_words),
        knn=KnnConfig(k=args.k),
        eval_split=args.eval_split,
        validation_fraction=args.validation_fraction,
        dict_scope=args.dict_scope,
        encoding=args.encoding,
    )
    ctx = prepare_context(config)
    best = exhaustive_best(
        len(ctx.pool), args.chromosome_size, ctx.fitness_fn(), cap=args.cap
    )
    payload = json.dumps(
        {
            "fitness": best.fitness,
            "indices": list(best.chromosome.canonical),
            "words": list(report_words(ctx.pool, best.chromosome)),
        },
        indent=2,
        sort_keys=True,
    )
    if args.output:
        Path(args.output).write_text(payload + "\n", encoding="utf-8")
        print(f"oracle result written to {args.output}")
    else:
        print(payload)
    return 0


def _add_pool_flags(parser: argparse.ArgumentParser, with_defaults: bool) -> None:
    d = _RUN_DEFAULTS
    parser.add_argument(
        "--p-min", type=float, default=d["p_min"] if with_defaults else None
    )
    parser.add_argument(
        "--p-max", type=float, default=d["p_max"] if with_defaults else None
    )
    parser.add_argument(
        "--max-words", type=int, default=d["max_words"] if with_defaults else None
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="keywordga",
        description=(
            "Select an authorship-discriminating keyword subset with a "
            "genetic algorithm scored by k-NN classification error."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="full pipeline: corpus -> GA -> reports")
    p_run.add_argument("--config", help="flat key=value file; flags override it")
    p_run.add_argument("--corpus-root")
    p_run.add_argument("--output-dir")
    p_run.add_argument("--train-count", type=int)
    p_run.add_argument("--seed", type=int)
    p_run.add_argument("--encoding")
    _add_pool_flags(p_run, with_defaults=False)
    p_run.add_argument("--k", type=int)
    p_run.add_argument("--pop-size", type=int)
    p_run.add_argument("--chromosome-size", type=int)
    p_run.add_argument("--elite-count", type=int)
    p_run.add_argument("--crossover-fraction", type=float)
    p_run.add_argument("--mutation-rate", type=_optional_float)
    p_run.add_argument("--max-generations", type=int)
    p_run.add_argument("--stall-generations", type=_optional_int)
    p_run.add_argument("--target-fitness", type=float)
    p_run.add_argument("--eval-split", choices=EVAL_SPLIT_MODES)
    p_run.add_argument("--validation-fraction", type=float)
    p_run.add_argument("--dict-scope", choices=DICT_SCOPES)
    p_run.add_argument("--workers", type=int)
    p_run.add_argument(
        "--repeat", type=int, help="run N seeds and report mean +/- stddev"
    )
    p_run.set_defaults(handler=_cmd_run)

    p_dict = sub.add_parser("dict", help="export the frequency dictionary / pool")
    p_dict.add_argument("--corpus-root", required=True)
    p_dict.add_argument("--encoding", default="utf-8")
    p_dict.add_argument(
        "--train-count",
        type=int,
        help="restrict counting to a train split of this size",
    )
    p_dict.add_argument("--seed", type=int, default=0)
    p_dict.add_argument("--dict-csv")
    p_dict.add_argument("--pool-csv")
    p_dict.add_argument("--docs-jsonl")
    _add_pool_flags(p_dict, with_defaults=True)
    p_dict.set_defaults(handler=_cmd_dict)

    p_eval = sub.add_parser("eval", help="score a fixed word list without the GA")
    p_eval.add_argument("--corpus-root", required=True)
    p_eval.add_argument("--train-count", type=int, required=True)
    p_eval.add_argument("--seed", type=int, default=0)
    p_eval.add_argument("--encoding", default="utf-8")
    p_eval.add_argument(
        "--words-file", required=True, help="one keyword per line"
    )
    p_eval.add_argument("--k", type=int, default=1)
    p_eval.add_argument("--output", help="write report JSON here instead of stdout")
    p_eval.add_argument("--matrix-csv", help="debug dump of the full feature matrix")
    p_eval.set_defaults(handler=_cmd_eval)

    p_synth = sub.add_parser("synth", help="generate a planted-marker test corpus")
    p_synth.add_argument("--output-dir", required=True)
    p_synth.add_argument("--authors", type=int, default=6)
    p_synth.add_argument("--docs-per-author", type=int, default=10)
    p_synth.add_argument("--tokens-per-doc", type=int, default=200)
    p_synth.add_argument("--markers-per-author", type=int, default=3)
    p_synth.add_argument("--background-words", type=int, default=120)
    p_synth.add_argument("--marker-share", type=float, default=0.1)
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.set_defaults(handler=_cmd_synth)

    p_oracle = sub.add_parser(
        "oracle", help="exhaustive best subset (small instances only)"
    )
    p_oracle.add_argument("--corpus-root", required=True)
    p_oracle.add_argument("--train-count", type=int, required=True)
    p_oracle.add_argument("--seed", type=int, default=0)
    p_oracle.add_argument("--encoding", default="utf-8")
    _add_pool_flags(p_oracle, with_defaults=True)
    p_oracle.add_argument("--chromosome-size", type=int, required=True)
    p_oracle.add_argument("--k", type=int, default=1)
    p_oracle.add_argument("--cap", type=int, default=1_000_000)
    p_oracle.add_argument("--eval-split", choices=EVAL_SPLIT_MODES, default="test")
    p_oracle.add_argument("--validation-fraction", type=float, default=0.25)
    p_oracle.add_argument("--dict-scope", choices=DICT_SCOPES, default="train")
    p_oracle.add_argument("--output", help="write result JSON here instead of stdout")
    p_oracle.set_defaults(handler=_cmd_oracle)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except KeywordGaError as exc:
        print(f"error[{exc.kind}]: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
