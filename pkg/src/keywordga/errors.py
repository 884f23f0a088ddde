"""Exception hierarchy shared across the package.

Exit codes follow the CLI contract: configuration problems exit 2,
bad input data exits 3, failures inside an evaluation exit 4.
"""


class KeywordGaError(Exception):
    exit_code = 1
    kind = "internal"


class ConfigError(KeywordGaError):
    """Invalid or unsatisfiable configuration values."""

    exit_code = 2
    kind = "config"


class InputError(KeywordGaError):
    """Unusable input data: missing files, bad encodings, shape mismatches."""

    exit_code = 3
    kind = "input"


class EvaluationError(KeywordGaError):
    """A classifier evaluation or fitness computation could not complete."""

    exit_code = 4
    kind = "evaluation"


class CorpusWarning(UserWarning):
    """Non-fatal corpus issues, e.g. a file that tokenizes to nothing."""
