"""Genetic selection of keyword subsets for k-NN authorship classification.

The pipeline: load a category-per-directory corpus, rank its words in a
frequency dictionary, cut a bounded-frequency keyword pool, represent
documents as keyword-frequency vectors, then evolve fixed-size index
subsets whose fitness is the error of a k-nearest-neighbor classifier
over the projected vectors.
"""

from .corpus import (
    CategoryId,
    Corpus,
    Document,
    Split,
    build_corpus,
    dump_documents_jsonl,
    load_corpus,
    split_corpus,
    tokenize,
)
from .errors import (
    ConfigError,
    CorpusWarning,
    EvaluationError,
    InputError,
    KeywordGaError,
)
from .freqdict import (
    FrequencyDictionary,
    KeywordPool,
    PoolConfig,
    WordStat,
    build_frequency_dictionary,
    dictionary_to_csv,
    pool_to_csv,
    select_pool,
)
from .ga import (
    Chromosome,
    EvolutionTrace,
    GaConfig,
    Population,
    ScoredChromosome,
    TraceRecord,
    evolve,
    exhaustive_best,
    init_population,
    mutate,
    repair,
    scattered_crossover,
    select_parent,
)
from .knn import (
    EvalReport,
    KnnConfig,
    classify,
    euclidean_distance,
    evaluate,
    fitness_from_report,
    report_from_predictions,
)
from .pipeline import (
    PipelineContext,
    RunConfig,
    RunReport,
    prepare_context,
    report_words,
    run,
    run_repeated,
)
from .synth import make_synthetic_corpus
from .vectorspace import (
    FeatureMatrix,
    build_feature_matrix,
    document_frequency,
    matrix_to_csv,
    project,
)

__version__ = "0.1.0"
