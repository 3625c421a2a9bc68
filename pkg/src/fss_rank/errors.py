"""Exception types shared across the package.

The three concrete classes map onto the CLI exit codes: validation
problems exit 1, data inconsistencies exit 2, and degenerate-statistics
conditions exit 3 when escalated with --strict.
"""

from __future__ import annotations


class FssRankError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(FssRankError):
    """Malformed input: bad file, bad row, bad configuration value."""


class DataInconsistencyError(FssRankError):
    """Inputs that are individually well-formed but mutually contradictory."""


class DegenerateStatisticsError(FssRankError):
    """A statistic is undefined on the given sample (zero spread, empty subgroup, ...)."""


class PipelineStageError(FssRankError):
    """A pipeline stage failed; carries the stage name, cause is chained."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
