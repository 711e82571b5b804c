"""Exception types shared across the package.

Everything raised on purpose derives from :class:`CotrainError`, so the
CLI can catch one type and turn it into a nonzero exit code.
"""


class CotrainError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(CotrainError):
    """Malformed input file (bad number, ragged row, wrong column count)."""

    def __init__(self, path, line, message):
        super().__init__(f"{path}:{line}: {message}")
        self.path = str(path)
        self.line = line


class DuplicateFeature(CotrainError):
    """A feature id occurs more than once."""


class DuplicateSample(CotrainError):
    """A sample id occurs more than once."""


class EmptyMatrix(CotrainError):
    """An ingested matrix has no features or no samples."""


class EmptyIntersection(CotrainError):
    """Two matrices share no feature ids."""


class FeatureMismatch(CotrainError):
    """Feature panels differ where they are required to agree."""


class ViewMismatch(CotrainError):
    """An operation mixed miRNA-view and gene-view matrices."""


class TooFewSamples(CotrainError):
    """Not enough samples for the requested operation."""


class DegenerateLabels(CotrainError):
    """Training data carries fewer than two distinct class labels."""


class EmptyDataset(CotrainError):
    """Training data has no samples or no features."""


class ConfigError(CotrainError):
    """Invalid configuration value or flag combination."""


class EmptyTable(CotrainError):
    """The target-pair table contains no pairs."""


class NoCoverage(CotrainError):
    """No feature in the requested panel has any covered counterpart."""


class NoOverlap(CotrainError):
    """No unlabeled pool shares features with the labeled set."""


class ClassSetMismatch(CotrainError):
    """The two views' labeled sets carry different class sets."""


class LengthMismatch(CotrainError):
    """Paired sequences have different lengths."""


class TestSetMismatch(CotrainError):
    """Compared experiments do not share one test set."""

    __test__ = False  # keep pytest from collecting the Test* name


class FileError(CotrainError):
    """A report or dataset file could not be written."""
