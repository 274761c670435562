"""Exception types shared across the toolkit.

Data errors map to CLI exit code 2; usage errors to exit code 1.
"""

from __future__ import annotations


class AdvQAError(Exception):
    """Base class for all toolkit errors."""


class MalformedJson(AdvQAError):
    """Input is not syntactically valid JSON."""


class SchemaViolation(AdvQAError):
    """Input parses but violates the expected layout; message names the path."""


class OffsetMismatch(AdvQAError):
    """An answer's text does not occur at its recorded character offset."""

    def __init__(self, example_id: str, message: str):
        super().__init__(f"example {example_id!r}: {message}")
        self.example_id = example_id


class DuplicateId(AdvQAError):
    """Duplicate example or prediction id in strict mode."""


class EmptyDataset(AdvQAError):
    """Operation requires a non-empty dataset."""


class EmptyBatch(AdvQAError):
    """Loss computation requires a non-empty batch."""


class NonFiniteInput(AdvQAError):
    """Logits contain NaN or infinities."""


class OutOfBounds(AdvQAError):
    """Span or index lies outside the logit vectors."""


class UnmappableSpan(AdvQAError):
    """Character span covers no token (whitespace only)."""


class InsufficientData(AdvQAError):
    """Sampling without replacement cannot meet the requested counts."""


class DivergenceDetected(AdvQAError):
    """Training produced a non-finite loss."""


class UnsupportedFormat(AdvQAError):
    """Requested report format is not one of json/csv/markdown."""


class IneligibleExample(AdvQAError):
    """Example fails an attack's eligibility precondition."""


class SkipExample(Exception):
    """Raised by attack generators when an example cannot be attacked.

    Not an error: drivers catch it and record the reason in the report.
    """

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


# Canonical skip reasons recorded in augmentation reports.
NO_DISTRACTOR_CANDIDATE = "NoDistractorCandidate"
NO_ALTERNATIVE_ENTITY = "NoAlternativeEntity"
NO_NUMBER = "NoNumber"
UNSUPPORTED_VERB_SHAPE = "UnsupportedVerbShape"
NO_HARD_NEGATIVES = "NoHardNegatives"
INELIGIBLE = "IneligibleExample"
