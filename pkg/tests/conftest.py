"""Shared fixtures and synthetic corpus builders."""

from __future__ import annotations

import json
import random

import pytest

from advqa.corpus import Answer, Dataset, QAExample

DENVER_SQUAD = {
    "version": "1.1",
    "data": [
        {
            "title": "Super_Bowl_50",
            "paragraphs": [
                {
                    "context": "The Denver Broncos defeated the Panthers.",
                    "qas": [
                        {
                            "id": "q1",
                            "question": "Who won Super Bowl 50?",
                            "answers": [{"text": "Denver Broncos", "answer_start": 4}],
                        }
                    ],
                }
            ],
        }
    ],
}

EIFFEL_CONTEXT = (
    "The Eiffel Tower was built in 1889 for the World's Fair. "
    "The tower was constructed by Gustave Eiffel in 1887."
)

COMPANY_CONTEXT = (
    "The company was founded in 1998. It was acquired by a larger corporation "
    "in 2015. The acquisition was completed in 2016, marking a new era."
)


@pytest.fixture
def denver_squad_bytes() -> bytes:
    return json.dumps(DENVER_SQUAD).encode("utf-8")


@pytest.fixture
def eiffel_example() -> QAExample:
    return QAExample(
        id="eiffel",
        question="When was the Eiffel Tower built?",
        context=EIFFEL_CONTEXT,
        answers=(Answer("1889", EIFFEL_CONTEXT.index("1889")),),
    )


@pytest.fixture
def company_example() -> QAExample:
    return QAExample(
        id="company",
        question="When was the company acquired?",
        context=COMPANY_CONTEXT,
        answers=(Answer("2015", COMPANY_CONTEXT.index("2015")),),
    )


def simple_dataset(prefix: str, n: int) -> Dataset:
    """n one-sentence examples with unique team-name answers."""
    examples = []
    for i in range(n):
        ctx = f"The team {i} won the cup final. The crowd cheered loudly."
        examples.append(
            QAExample(
                id=f"{prefix}{i}",
                question=f"Who won match {i}?",
                context=ctx,
                answers=(Answer(f"team {i}", 4),),
            )
        )
    return Dataset(examples=tuple(examples))


# ---------------------------------------------------------------------------
# Year-entity corpora for attack and toy-train tests
# ---------------------------------------------------------------------------

EVENTS = [
    ("founded", "was founded"),
    ("acquired", "was acquired"),
    ("completed", "was completed"),
    ("opened", "was opened"),
    ("renamed", "was renamed"),
    ("sold", "was sold"),
]

SUBJECTS = ["company", "museum", "library", "club", "firm", "theater", "factory", "bank"]


def year_corpus(n: int, seed: int, id_prefix: str, hard_fraction: float = 0.4,
                hard_years: int = 4) -> Dataset:
    """Entity-rich year corpus with two subpopulations.

    Easy examples carry three distinct event sentences; the gold year sits in
    the first sentence next to the question's verb. Hard examples repeat one
    verb across hard_years sentences and the gold is always the LAST year, so
    nothing but relative position separates gold from the mined negatives.
    """
    rng = random.Random(seed)
    out = []
    for i in range(n):
        subj = rng.choice(SUBJECTS)
        if rng.random() >= hard_fraction:
            years = rng.sample(range(1900, 1999), 3)
            events = rng.sample(EVENTS, 3)
            ctx = " ".join(f"The {subj} {e[1]} in {y}." for e, y in zip(events, years))
            gold = str(years[0])
            start = ctx.index(gold)
            q_verb = events[0][1]
        else:
            years = sorted(rng.sample(range(1900, 1999), hard_years))
            verb = rng.choice(EVENTS)[1]
            ctx = " ".join(f"The {subj} {verb} in {y}." for y in years)
            gold = str(years[-1])
            start = ctx.rindex(gold)
            q_verb = verb
        question = "When " + q_verb.replace("was ", f"was the {subj} ") + "?"
        out.append(
            QAExample(
                id=f"{id_prefix}{i}",
                question=question,
                context=ctx,
                answers=(Answer(gold, start),),
            )
        )
    return Dataset(examples=tuple(out))


def negation_shape_corpus(n: int, negation_fraction: float) -> Dataset:
    """Corpus with an exact pre-existing-negation share; all positives are
    eligible for both negation pair types."""
    n_neg = round(negation_fraction * n)
    examples = []
    for i in range(n):
        if i < n_neg:
            gold = f"team {i}"
            ctx = f"The {gold} did not lose the final. The crowd cheered."
            question = f"Which team did not lose match {i}?"
        else:
            gold = f"squad {i}"
            ctx = f"The {gold} won the cup final. The crowd cheered loudly."
            question = f"Who won match {i}?"
        examples.append(
            QAExample(
                id=f"n{i}",
                question=question,
                context=ctx,
                answers=(Answer(gold, 4),),
            )
        )
    return Dataset(examples=tuple(examples))
