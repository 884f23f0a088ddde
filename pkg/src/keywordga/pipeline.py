"""End-to-end orchestration from a corpus directory to report files.

run() wires corpus -> dictionary -> pool -> feature matrices -> genetic
search -> final evaluation, then writes trace.csv, report.json,
per_category.csv and pool.csv into the output directory. Everything is
a pure function of the RunConfig except the wall-time field.
"""

import csv
import json
import time
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np

from .corpus import Corpus, Split, _draw_covering_sample, load_corpus, split_corpus
from .errors import ConfigError, InputError
from .freqdict import (
    FrequencyDictionary,
    KeywordPool,
    PoolConfig,
    build_frequency_dictionary,
    pool_to_csv,
    select_pool,
)
from .ga import Chromosome, EvolutionTrace, GaConfig, ScoredChromosome, evolve
from .knn import EvalReport, KnnConfig, evaluate
from .vectorspace import FeatureMatrix, build_feature_matrix, project

EVAL_SPLIT_MODES = ("test", "validation")
DICT_SCOPES = ("train", "full")


@dataclass(frozen=True)
class RunConfig:
    """Full pipeline configuration.

    eval_split picks where selection fitness is measured: "test" scores
    chromosomes directly on the held-out test split, "validation" on a
    subset carved out of the training split (selection then never sees
    the test documents). dict_scope controls whether the frequency
    dictionary is built from the training documents only (default, no
    test leakage) or the full corpus.
    """

    corpus_root: Path
    output_dir: Path
    train_count: int
    ga: GaConfig
    seed: int = 0
    pool: PoolConfig = PoolConfig()
    knn: KnnConfig = KnnConfig()
    eval_split: str = "test"
    validation_fraction: float = 0.25
    dict_scope: str = "train"
    workers: int = 1
    encoding: str = "utf-8"

    def __post_init__(self):
        object.__setattr__(self, "corpus_root", Path(self.corpus_root))
        object.__setattr__(self, "output_dir", Path(self.output_dir))
        if self.train_count < 1:
            raise ConfigError(f"train_count must be >= 1, got {self.train_count}")
        if self.eval_split not in EVAL_SPLIT_MODES:
            raise ConfigError(
                f"eval_split must be one of {EVAL_SPLIT_MODES}, got {self.eval_split!r}"
            )
        if self.dict_scope not in DICT_SCOPES:
            raise ConfigError(
                f"dict_scope must be one of {DICT_SCOPES}, got {self.dict_scope!r}"
            )
        if not 0.0 < self.validation_fraction < 1.0:
            raise ConfigError(
                f"validation_fraction must be in (0, 1), got {self.validation_fraction}"
            )
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")


@dataclass(frozen=True, eq=False)
class PipelineContext:
    """Everything the optimizer needs, assembled once per run."""

    corpus: Corpus
    split: Split
    dictionary: FrequencyDictionary
    pool: KeywordPool
    matrix_train: FeatureMatrix
    matrix_test: FeatureMatrix
    fitness_train: FeatureMatrix
    fitness_eval: FeatureMatrix
    knn: KnnConfig

    def fitness_fn(self):
        """Chromosome -> 1 - precision average on the fitness split."""

        def fitness(chromosome: Chromosome) -> float:
            sub_train = project(self.fitness_train, chromosome.genes)
            sub_eval = project(self.fitness_eval, chromosome.genes)
            return evaluate(sub_train, sub_eval, self.knn).fitness

        return fitness


def prepare_context(config: RunConfig) -> PipelineContext:
    """Load, split, build the dictionary/pool and all feature matrices."""
    corpus = load_corpus(config.corpus_root, encoding=config.encoding)
    if corpus.n_categories < 2:
        raise InputError(
            f"classification needs at least 2 categories, corpus has {corpus.n_categories}"
        )
    split = split_corpus(corpus, config.train_count, config.seed)
    dict_ids = split.train if config.dict_scope == "train" else frozenset(corpus.doc_ids())
    dictionary = build_frequency_dictionary(corpus, dict_ids)
    pool = select_pool(dictionary, config.pool)
    matrix_train = build_feature_matrix(corpus, split.train, pool.words)
    matrix_test = build_feature_matrix(corpus, split.test, pool.words)
    if config.eval_split == "validation":
        train_ids = sorted(split.train)
        val_count = max(1, round(config.validation_fraction * len(train_ids)))
        fit_count = len(train_ids) - val_count
        if fit_count < corpus.n_categories:
            raise ConfigError(
                f"validation carve leaves {fit_count} fit documents, "
                f"fewer than {corpus.n_categories} categories"
            )
        carve_rng = np.random.default_rng([config.seed, 1])
        fit_ids = _draw_covering_sample(corpus, train_ids, fit_count, carve_rng)
        val_ids = frozenset(train_ids) - fit_ids
        fitness_train = build_feature_matrix(corpus, fit_ids, pool.words)
        fitness_eval = build_feature_matrix(corpus, val_ids, pool.words)
    else:
        fitness_train, fitness_eval = matrix_train, matrix_test
    if config.knn.k > fitness_train.n_docs:
        raise ConfigError(
            f"k={config.knn.k} exceeds {fitness_train.n_docs} fitness-training documents"
        )
    return PipelineContext(
        corpus,
        split,
        dictionary,
        pool,
        matrix_train,
        matrix_test,
        fitness_train,
        fitness_eval,
        config.knn,
    )


def report_words(pool: KeywordPool, chromosome: Chromosome) -> tuple[str, ...]:
    """Resolve chromosome gene indices to pool words, in gene order."""
    for g in chromosome.genes:
        if g >= len(pool.words):
            raise ValueError(
                f"gene index {g} outside pool of {len(pool.words)} words; "
                "pool/chromosome mismatch"
            )
    return tuple(pool.words[g] for g in chromosome.genes)


@dataclass(frozen=True, eq=False)
class RunReport:
    best: ScoredChromosome
    words: tuple[str, ...]
    evaluation: EvalReport
    trace: EvolutionTrace
    pool: KeywordPool
    config: RunConfig
    wall_time_seconds: float
    output_files: dict


def run(config: RunConfig) -> RunReport:
    """Execute the full pipeline and write all output files.

    On failure, files already written for this run are removed.
    """
    started = time.perf_counter()
    ctx = prepare_context(config)
    if config.ga.chromosome_size > len(ctx.pool):
        raise ConfigError(
            f"chromosome_size {config.ga.chromosome_size} exceeds "
            f"pool of {len(ctx.pool)} words"
        )
    best, trace = evolve(
        len(ctx.pool), config.ga, ctx.fitness_fn(), workers=config.workers
    )
    canonical = Chromosome(best.chromosome.canonical)
    words = report_words(ctx.pool, canonical)
    final = evaluate(
        project(ctx.matrix_train, canonical.genes),
        project(ctx.matrix_test, canonical.genes),
        config.knn,
    )
    wall = time.perf_counter() - started
    outputs = _write_outputs(config, ctx, best, words, final, trace, wall)
    return RunReport(best, words, final, trace, ctx.pool, config, wall, outputs)


def run_repeated(config: RunConfig, repeats: int) -> tuple[list, dict]:
    """Run the pipeline with seeds seed..seed+repeats-1, one subdirectory
    per run, and write a summary.json of mean/stddev across seeds."""
    if repeats < 1:
        raise ConfigError(f"repeat count must be >= 1, got {repeats}")
    reports = []
    for i in range(repeats):
        sub = replace(
            config,
            seed=config.seed + i,
            ga=replace(config.ga, seed=config.ga.seed + i),
            output_dir=config.output_dir / f"run_{i:02d}",
        )
        reports.append(run(sub))
    summary = {
        "runs": repeats,
        "seeds": [config.seed + i for i in range(repeats)],
        "best_fitness": _metric_stats([r.best.fitness for r in reports]),
        "test_fitness": _metric_stats([r.evaluation.fitness for r in reports]),
        "pr_avg": _metric_stats([r.evaluation.pr_avg for r in reports]),
        "rc_avg": _metric_stats([r.evaluation.rc_avg for r in reports]),
    }
    config.output_dir.mkdir(parents=True, exist_ok=True)
    (config.output_dir / "summary.json").write_text(
        json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return reports, summary


def _metric_stats(values) -> dict:
    arr = np.asarray(values, dtype=np.float64)
    # sample stddev; a single run reports 0.0
    std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return {
        "values": [float(v) for v in arr],
        "mean": float(arr.mean()),
        "stddev": std,
    }


def _config_echo(config: RunConfig) -> dict:
    echo = asdict(config)
    echo["corpus_root"] = str(config.corpus_root)
    echo["output_dir"] = str(config.output_dir)
    return echo


def _write_per_category(report: EvalReport, path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["category", "precision", "recall"])
        for cat, pr, rc in zip(report.categories, report.precision, report.recall):
            writer.writerow(
                [
                    cat.name,
                    "" if pr is None else repr(pr),
                    "" if rc is None else repr(rc),
                ]
            )


def _write_outputs(config, ctx, best, words, final, trace, wall) -> dict:
    out_dir = config.output_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    report_payload = {
        "best": {
            "fitness": best.fitness,
            "indices": list(best.chromosome.canonical),
            "words": list(words),
        },
        "evaluation": final.to_dict(),
        "trace_csv": "trace.csv",
        "config": _config_echo(config),
        "wall_time_seconds": wall,
    }
    targets = {
        "trace_csv": (out_dir / "trace.csv", trace.to_csv),
        "report_json": (
            out_dir / "report.json",
            lambda p: p.write_text(
                json.dumps(report_payload, indent=2, sort_keys=True, default=str)
                + "\n",
                encoding="utf-8",
            ),
        ),
        "per_category_csv": (
            out_dir / "per_category.csv",
            lambda p: _write_per_category(final, p),
        ),
        "pool_csv": (out_dir / "pool.csv", lambda p: pool_to_csv(ctx.pool, p)),
    }
    written = []
    try:
        for path, writer in targets.values():
            written.append(path)
            writer(path)
    except BaseException:
        # never leave partial outputs behind
        for p in written:
            p.unlink(missing_ok=True)
        raise
    return {name: path for name, (path, _) in targets.items()}
