"""EM/F1 scoring against hand-computed fixtures and a naive oracle."""

from __future__ import annotations

import random

import pytest

from advqa.corpus import Answer, Dataset, QAExample
from advqa.errors import EmptyDataset
from advqa.metrics import (
    adversarial_gap,
    display_round,
    evaluate,
    exact_match,
    f1_score,
    normalize_answer,
)

# (prediction, gold list, expected EM, expected F1) — all F1 values derived by
# hand from the fixed normalization pipeline.
HAND_SCORED = [
    ("Denver Broncos", ["Denver Broncos"], 1, 1.0),
    ("the Denver Broncos", ["Denver Broncos"], 1, 1.0),
    ("Broncos", ["Denver Broncos"], 0, 2 / 3),
    ("Panthers", ["Denver Broncos"], 0, 0.0),
    ("24-10", ["24-10"], 1, 1.0),
    ("24 10", ["24-10"], 1, 1.0),
    ("2410", ["24-10"], 0, 0.0),
    ("THE DENVER BRONCOS", ["denver broncos"], 1, 1.0),
    ("", [], 1, 1.0),
    ("", ["Denver Broncos"], 0, 0.0),
    ("Denver", [], 0, 0.0),
    ("Denver Broncos defeated", ["Denver Broncos"], 0, 4 / 5),
    ("a an the", [""], 1, 1.0),
    ("Panthers", ["Denver Broncos", "Panthers"], 1, 1.0),
    ("Carolina", ["Denver Broncos", "Carolina Panthers"], 0, 2 / 3),
    ("Super Bowl 50", ["Super Bowl L"], 0, 2 / 3),
    ("the the dog dog", ["dog"], 0, 2 / 3),
    ("!!!", ["x"], 0, 0.0),
    ("U.S.A.", ["USA"], 0, 0.0),
    ("1889", ["1889."], 1, 1.0),
    ("won't", ["won t"], 1, 1.0),
    ("It's a goal", ["goal"], 0, 1 / 2),
    ("1,000", ["1000"], 0, 0.0),
    ("Denver  Broncos", ["Denver Broncos"], 1, 1.0),
]


def test_normalize_examples():
    assert normalize_answer("The Denver Broncos") == ["denver", "broncos"]
    assert normalize_answer("") == []
    assert normalize_answer("24-10") == ["24", "10"]


@pytest.mark.parametrize("pred,golds,em,f1", HAND_SCORED)
def test_hand_scored_fixture(pred, golds, em, f1):
    assert exact_match(pred, golds) == em
    assert f1_score(pred, golds) == pytest.approx(f1, abs=1e-12)


def test_em_implies_f1_one():
    for pred, golds, em, f1 in HAND_SCORED:
        if em == 1:
            assert f1 == 1.0


def _toy_dataset(records):
    examples = []
    for i, (gold, _) in enumerate(records):
        ctx = f"The answer is {gold} here."
        examples.append(
            QAExample(id=f"e{i}", question="What is the answer?", context=ctx,
                      answers=(Answer(gold, ctx.index(gold)),))
        )
    return Dataset(examples=tuple(examples))


def test_evaluate_mean_of_hit_and_miss():
    records = [("alpha", "alpha"), ("beta", "gamma")]
    ds = _toy_dataset(records)
    preds = {f"e{i}": guess for i, (_, guess) in enumerate(records)}
    report = evaluate(ds, preds)
    assert report.em == pytest.approx(50.0)
    assert report.f1 == pytest.approx(50.0)
    assert report.n_examples == 2


def test_evaluate_all_correct():
    records = [("alpha", "alpha"), ("beta", "beta")]
    ds = _toy_dataset(records)
    report = evaluate(ds, {f"e{i}": g for i, (g, _) in enumerate(records)})
    assert report.em == 100.0


def test_evaluate_missing_prediction_scores_zero():
    ds = _toy_dataset([("alpha", "alpha")])
    report = evaluate(ds, {})
    assert report.em == 0.0
    assert report.per_example["e0"].predicted == ""


def test_evaluate_empty_dataset():
    with pytest.raises(EmptyDataset):
        evaluate(Dataset(examples=()), {})


def _naive_rescore(dataset, predictions):
    """Independent oracle: re-derive EM/F1 per example with fresh code paths."""
    import collections
    import string

    def norm(text):
        out = []
        for tok in "".join(" " if c in string.punctuation else c for c in text.lower()).split():
            if tok not in ("a", "an", "the"):
                out.append(tok)
        return out

    def one_f1(p, g):
        if not p and not g:
            return 1.0
        common = collections.Counter(p) & collections.Counter(g)
        same = sum(common.values())
        if not p or not g or same == 0:
            return 0.0
        prec, rec = same / len(p), same / len(g)
        return 2 * prec * rec / (prec + rec)

    ems, f1s = [], []
    for ex in dataset:
        pred = norm(predictions.get(ex.id, ""))
        golds = [norm(a.text) for a in ex.answers] or [[]]
        ems.append(max(int(pred == g) for g in golds))
        f1s.append(max(one_f1(pred, g) for g in golds))
    return 100 * sum(ems) / len(ems), 100 * sum(f1s) / len(f1s)


def test_evaluate_matches_naive_oracle_on_large_fixture():
    rng = random.Random(99)
    vocab = ["denver", "broncos", "panthers", "eagle", "1889", "1887", "final", "cup"]
    examples, preds = [], {}
    for i in range(1000):
        gold = " ".join(rng.sample(vocab, rng.randint(1, 3)))
        ctx = f"The story mentions {gold} in passing."
        examples.append(
            QAExample(id=f"r{i}", question="What?", context=ctx,
                      answers=(Answer(gold, ctx.index(gold)),))
        )
        preds[f"r{i}"] = " ".join(rng.sample(vocab, rng.randint(1, 3)))
    ds = Dataset(examples=tuple(examples))
    report = evaluate(ds, preds)
    em, f1 = _naive_rescore(ds, preds)
    assert report.em == pytest.approx(em, abs=1e-9)
    assert report.f1 == pytest.approx(f1, abs=1e-9)
    assert report.f1 >= report.em


def test_scores_invariant_under_gold_permutation():
    golds = ["Denver Broncos", "the Broncos", "Denver"]
    for pred in ["Broncos", "denver", "the Denver Broncos"]:
        shuffled = list(golds)
        random.Random(1).shuffle(shuffled)
        assert f1_score(pred, golds) == f1_score(pred, shuffled)
        assert exact_match(pred, golds) == exact_match(pred, shuffled)


def test_gap_report_published_values():
    baseline = adversarial_gap(85.46, 68.90)
    assert baseline.gap == pytest.approx(-16.56, abs=1e-12)
    entity = adversarial_gap(90.73, 89.89, baseline_gap=baseline.gap)
    assert entity.gap == pytest.approx(-0.84, abs=1e-12)
    assert entity.closure_pct == pytest.approx(94.92753623, abs=1e-6)
    assert display_round(entity.closure_pct, 1) == 94.9


def test_display_round_half_up():
    assert display_round(0.125, 2) == 0.13
    assert display_round(66.565, 2) == 66.57
    assert display_round(-1.0, 2) == -1.0
