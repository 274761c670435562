"""Exact Match and F1 scoring, aggregate evaluation, and adversarial-gap reporting.

Normalization pipeline, fixed: lowercase, replace every punctuation character
with a space, drop article tokens {a, an, the}, split on whitespace. Hyphenated
values therefore split ("24-10" -> ["24", "10"]).
"""

from __future__ import annotations

import logging
import math
import string
from collections import Counter
from dataclasses import dataclass, field

from .corpus import Dataset, PredictionSet, QAExample
from .errors import EmptyDataset

log = logging.getLogger(__name__)

_PUNCT = set(string.punctuation)
_ARTICLES = {"a", "an", "the"}


def normalize_answer(text: str) -> list[str]:
    """Normalize to a token list: lowercase, punct->space, drop articles, split."""
    lowered = text.lower()
    spaced = "".join(" " if ch in _PUNCT else ch for ch in lowered)
    return [tok for tok in spaced.split() if tok not in _ARTICLES]


def exact_match(prediction: str, gold_answers: list[str]) -> int:
    """1 iff the normalized prediction equals any normalized gold answer.

    An empty gold list is the null-answer convention: EM=1 iff the prediction
    normalizes to nothing.
    """
    pred = normalize_answer(prediction)
    if not gold_answers:
        return int(pred == [])
    return int(any(pred == normalize_answer(g) for g in gold_answers))


def _f1_single(pred_tokens: list[str], gold_tokens: list[str]) -> float:
    if not pred_tokens and not gold_tokens:
        return 1.0
    if not pred_tokens or not gold_tokens:
        return 0.0
    overlap = sum((Counter(pred_tokens) & Counter(gold_tokens)).values())
    if overlap == 0:
        return 0.0
    precision = overlap / len(pred_tokens)
    recall = overlap / len(gold_tokens)
    return 2 * precision * recall / (precision + recall)


def f1_score(prediction: str, gold_answers: list[str]) -> float:
    """Max over gold answers of token-multiset F1 in [0, 1]."""
    pred_tokens = normalize_answer(prediction)
    if not gold_answers:
        return _f1_single(pred_tokens, [])
    return max(_f1_single(pred_tokens, normalize_answer(g)) for g in gold_answers)


@dataclass(frozen=True)
class PerExampleScore:
    em: int
    f1: float
    predicted: str
    gold_list: tuple[str, ...]


@dataclass(frozen=True)
class EvalReport:
    em: float  # percentage
    f1: float  # percentage
    n_examples: int
    per_example: dict[str, PerExampleScore] = field(default_factory=dict)


def score_example(example: QAExample, prediction: str) -> PerExampleScore:
    golds = [a.text for a in example.answers]
    return PerExampleScore(
        em=exact_match(prediction, golds),
        f1=f1_score(prediction, golds),
        predicted=prediction,
        gold_list=tuple(golds),
    )


def evaluate(dataset: Dataset, predictions: PredictionSet) -> EvalReport:
    """Score every example; missing predictions score 0 with a warning.

    Aggregation uses math.fsum so parallel and serial runs agree at display
    precision regardless of summation order.
    """
    if len(dataset) == 0:
        raise EmptyDataset("cannot evaluate an empty dataset")
    per_example: dict[str, PerExampleScore] = {}
    for ex in dataset:
        if ex.id not in predictions:
            log.warning("no prediction for example %s: scored 0", ex.id)
            per_example[ex.id] = PerExampleScore(
                em=0, f1=0.0, predicted="", gold_list=tuple(a.text for a in ex.answers)
            )
            # A missing prediction on an impossible example would score EM=1
            # under the null convention; official behavior is a hard 0.
            continue
        per_example[ex.id] = score_example(ex, predictions[ex.id])
    n = len(per_example)
    em = 100.0 * math.fsum(s.em for s in per_example.values()) / n
    f1 = 100.0 * math.fsum(s.f1 for s in per_example.values()) / n
    return EvalReport(em=em, f1=f1, n_examples=n, per_example=per_example)


@dataclass(frozen=True)
class GapReport:
    clean_em: float
    adversarial_em: float
    gap: float  # adversarial_em - clean_em, signed percentage points
    closure_pct: float | None = None  # vs a supplied baseline gap


def adversarial_gap(
    clean_report: EvalReport | float,
    adv_report: EvalReport | float,
    baseline_gap: float | None = None,
) -> GapReport:
    """Gap = adversarial EM - clean EM; closure is the fraction of a baseline
    gap eliminated, as a percentage."""
    clean_em = clean_report.em if isinstance(clean_report, EvalReport) else float(clean_report)
    adv_em = adv_report.em if isinstance(adv_report, EvalReport) else float(adv_report)
    gap = adv_em - clean_em
    closure = None
    if baseline_gap is not None and baseline_gap != 0:
        closure = 100.0 * (abs(baseline_gap) - abs(gap)) / abs(baseline_gap)
    return GapReport(clean_em=clean_em, adversarial_em=adv_em, gap=gap, closure_pct=closure)


def display_round(value: float, decimals: int = 2) -> float:
    """Half-up rounding for display; internal math stays full precision."""
    scale = 10**decimals
    return math.floor(value * scale + 0.5) / scale
