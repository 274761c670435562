"""Adversarial attack generators and negation contrastive-pair generation.

All distractor attacks append exactly one sentence at the end of the context,
so original answer offsets survive unchanged and the appended range is
recorded as a distractor span. Transformative negation instead rewrites the
answer-bearing sentence and empties the answers.

Generation is a pure function of (dataset order, config, seed): per-example
RNGs derive from a stable hash of (seed, example id), so results never depend
on scheduling.
"""

from __future__ import annotations

import hashlib
import math
import random
import re
from dataclasses import dataclass, field

from .corpus import Dataset, QAExample, concat
from .entity import (
    EntitySpan,
    HardNegativeSet,
    extract_entities,
    find_answer_entity,
    mine_hard_negatives,
    sentence_index,
    split_sentences,
    tokenize_with_offsets,
)
from .errors import (
    INELIGIBLE,
    NO_ALTERNATIVE_ENTITY,
    NO_DISTRACTOR_CANDIDATE,
    NO_HARD_NEGATIVES,
    NO_NUMBER,
    UNSUPPORTED_VERB_SHAPE,
    EmptyDataset,
    IneligibleExample,
    SkipExample,
)
from .taxonomy import contains_negation

NEGATION_WEIGHT = 3.0
ENTITY_WEIGHT = 2.5

DISTRACTOR_ATTACKS = ("paraphrase", "entity_swap", "negation_attack", "numeric_attack")

DEFAULT_TEMPLATES = {
    "paraphrase": "Some might argue it was {distractor}, though this is debated.",
    "entity_swap": "However, some records indicate {distractor} instead.",
    "negation_attack": "Contrary to popular belief, {distractor} is not the correct answer.",
    "numeric_attack": "Some sources cite {distractor} as an alternative figure.",
    # entity substitution shares the entity-swap template family
    "entity_substitution": "However, some records indicate {distractor} instead.",
    "additive_negation_verb": "Some claim they didn't {verb}.",
    "additive_negation_copula": "Some claim it {copula} not true.",
    "additive_negation_fallback": "Some claim this was not the case.",
}


@dataclass(frozen=True)
class AttackConfig:
    enabled: tuple[str, ...] = DISTRACTOR_ATTACKS
    augmentation_rate: float = 0.40
    seed: int = 0
    templates: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_TEMPLATES))
    # Optional externally supplied per-attack targets; the report records
    # achieved-vs-target deltas but never forces counts.
    target_counts: dict[str, int] | None = None

    def __post_init__(self):
        if not 0 < self.augmentation_rate <= 1:
            raise ValueError("augmentation_rate must be in (0, 1]")
        for attack in self.enabled:
            if not any(key == attack or key.startswith(attack + "_") for key in self.templates):
                raise ValueError(f"no template configured for attack {attack!r}")


@dataclass
class AugmentationReport:
    attempted: int
    generated: dict[str, int]
    skipped: dict[str, int]  # reason -> count
    total_output_size: int
    target_counts: dict[str, int] | None = None
    target_deltas: dict[str, int] | None = None


def _rng_for(seed: int, example_id: str) -> random.Random:
    digest = hashlib.sha256(f"{seed}:{example_id}".encode("utf-8")).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def _append_sentence(
    example: QAExample,
    sentence: str,
    attack_type: str,
    loss_weight: float = 1.0,
    is_negation: bool = False,
) -> QAExample:
    new_context = example.context + " " + sentence
    span = (len(example.context) + 1, len(new_context))
    return example.with_fields(
        id=f"{example.id}:{attack_type}",
        context=new_context,
        origin="augmented",
        attack_type=attack_type,
        loss_weight=loss_weight,
        is_negation=is_negation,
        distractor_spans=example.distractor_spans + (span,),
    )


# ---------------------------------------------------------------------------
# Distractor candidates and numeric perturbation
# ---------------------------------------------------------------------------

_NUM_RE = re.compile(r"\d[\d,]*(?:\.\d+)?")
_YEAR_RE = re.compile(r"[12]\d{3}")


def _perturb_number(value: str, rng: random.Random) -> str:
    """Seeded perturbation: years move +/-1..3; other numbers get +/-10%
    rounded or an adjacent-digit transposition. Always differs from the input."""
    if _YEAR_RE.fullmatch(value):
        return str(int(value) + rng.choice([-3, -2, -1, 1, 2, 3]))
    digits = value.replace(",", "")
    numeric = float(digits)
    if rng.random() < 0.5 and len(digits) >= 2 and "." not in digits:
        i = rng.randrange(len(digits) - 1)
        swapped = digits[:i] + digits[i + 1] + digits[i] + digits[i + 2 :]
        if swapped != digits:
            return swapped
    scaled = numeric * rng.choice([0.9, 1.1])
    out = round(scaled) if float(digits).is_integer() else round(scaled, 2)
    if float(out) == numeric:
        out = int(numeric) + 1
    return str(out)


def _gold_number(example: QAExample) -> str | None:
    if not example.answers:
        return None
    m = _NUM_RE.search(example.answers[0].text)
    return m.group() if m else None


def _distractor_candidate(example: QAExample, rng: random.Random) -> str | None:
    """A same-type entity from the context, else a perturbed gold number."""
    hns = mine_hard_negatives(example, with_token_positions=False)
    if hns is not None:
        return hns.negatives[0].surface
    gold_num = _gold_number(example)
    if gold_num is not None:
        return _perturb_number(gold_num, rng)
    return None


_NAMED_TYPES = ("Person", "Organization", "Location", "Facility", "Event", "Misc")


def _swap_candidate(example: QAExample) -> str | None:
    """Alternative entity for entity swap: same-type named entity nearest the
    gold if the gold is named, otherwise the most person-like named entity,
    falling back to any same-type entity."""
    if not example.answers:
        return None
    gold = example.answers[0]
    gold_range = (gold.answer_start, gold.answer_start + len(gold.text))
    gold_norm = " ".join(gold.text.lower().split())

    def usable(span: EntitySpan) -> bool:
        if span.char_start < gold_range[1] and span.char_end > gold_range[0]:
            return False
        return " ".join(span.surface.lower().split()) != gold_norm

    entities = [e for e in extract_entities(example.context) if usable(e)]
    named = [e for e in entities if e.entity_type in _NAMED_TYPES]
    answer_entity = find_answer_entity(example)
    if answer_entity is not None and answer_entity.entity_type in _NAMED_TYPES:
        same = [e for e in named if e.entity_type == answer_entity.entity_type]
        if same:
            same.sort(key=lambda e: (abs(e.char_start - gold_range[0]), e.char_start))
            return same[0].surface
    if named:
        named.sort(
            key=lambda e: (_NAMED_TYPES.index(e.entity_type), abs(e.char_start - gold_range[0]), e.char_start)
        )
        return named[0].surface
    if answer_entity is not None:
        hns = mine_hard_negatives(example, with_token_positions=False)
        if hns is not None:
            return hns.negatives[0].surface
    return None


# ---------------------------------------------------------------------------
# The four distractor attacks
# ---------------------------------------------------------------------------

def gen_paraphrase_attack(
    example: QAExample, seed: int, templates: dict[str, str] | None = None
) -> QAExample:
    templates = templates or DEFAULT_TEMPLATES
    rng = _rng_for(seed, example.id)
    cand = _distractor_candidate(example, rng)
    if cand is None:
        raise SkipExample(NO_DISTRACTOR_CANDIDATE)
    return _append_sentence(example, templates["paraphrase"].format(distractor=cand), "paraphrase")


def gen_entity_swap_attack(
    example: QAExample, seed: int, templates: dict[str, str] | None = None
) -> QAExample:
    templates = templates or DEFAULT_TEMPLATES
    cand = _swap_candidate(example)
    if cand is None:
        raise SkipExample(NO_ALTERNATIVE_ENTITY)
    return _append_sentence(example, templates["entity_swap"].format(distractor=cand), "entity_swap")


def gen_negation_attack(
    example: QAExample, seed: int, templates: dict[str, str] | None = None
) -> QAExample:
    templates = templates or DEFAULT_TEMPLATES
    rng = _rng_for(seed, example.id)
    cand = _distractor_candidate(example, rng)
    if cand is None:
        raise SkipExample(NO_DISTRACTOR_CANDIDATE)
    return _append_sentence(
        example, templates["negation_attack"].format(distractor=cand), "negation_attack"
    )


def gen_numeric_attack(
    example: QAExample, seed: int, templates: dict[str, str] | None = None
) -> QAExample:
    templates = templates or DEFAULT_TEMPLATES
    rng = _rng_for(seed, example.id)
    number = _gold_number(example)
    if number is None:
        m = _NUM_RE.search(example.context)
        number = m.group() if m else None
    if number is None:
        raise SkipExample(NO_NUMBER)
    distractor = _perturb_number(number, rng)
    return _append_sentence(
        example, templates["numeric_attack"].format(distractor=distractor), "numeric_attack"
    )


# ---------------------------------------------------------------------------
# Negation contrastive pairs
# ---------------------------------------------------------------------------

# Spec'd irregular-verb table for negation rewrites.
IRREGULAR_PAST = {
    "won": "win", "was": "be", "had": "have", "built": "build",
    "went": "go", "took": "take", "made": "make",
}

_COPULAS = {"is", "are", "was", "were", "am"}

# Frequent -ed verbs whose base restores a dropped final e.
_ED_BASES = {
    "acquired": "acquire", "completed": "complete", "created": "create",
    "named": "name", "used": "use", "caused": "cause", "moved": "move",
    "received": "receive", "served": "serve", "died": "die",
    "arrived": "arrive", "believed": "believe", "changed": "change",
    "continued": "continue", "decided": "decide", "produced": "produce",
    "provided": "provide", "released": "release", "announced": "announce",
}

_ED_KEEP_DOUBLE = {"ss", "ll", "ff", "zz", "ee"}
_ED_NON_VERBS = {"hundred", "sacred", "naked", "wicked", "indeed", "united"}


def _ed_to_base(word: str) -> str | None:
    lower = word.lower()
    if lower in _ED_NON_VERBS or len(lower) < 4 or not lower.endswith("ed"):
        return None
    if lower in _ED_BASES:
        return _ED_BASES[lower]
    if lower.endswith("ied"):
        return lower[:-3] + "y"
    stem = lower[:-2]
    if len(stem) >= 3 and stem[-1] == stem[-2] and stem[-2:] not in _ED_KEEP_DOUBLE:
        return stem[:-1]
    return stem


def _gold_sentence_range(example: QAExample) -> tuple[int, int] | None:
    if not example.answers:
        return None
    sentences = split_sentences(example.context)
    if not sentences:
        return None
    return sentences[sentence_index(example.answers[0].answer_start, sentences)]


def _find_copula(sentence: str) -> tuple[str, int, int] | None:
    tok = tokenize_with_offsets(sentence)
    for word, (s, e) in zip(tok.tokens, tok.offsets):
        if word.lower() in _COPULAS:
            return word, s, e
    return None


def _find_past_verb(sentence: str) -> tuple[str, int, int, str] | None:
    """(surface, start, end, base) of the first past-tense verb, if any."""
    tok = tokenize_with_offsets(sentence)
    for word, (s, e) in zip(tok.tokens, tok.offsets):
        lower = word.lower()
        if lower in _COPULAS:
            continue
        if lower in IRREGULAR_PAST:
            return word, s, e, IRREGULAR_PAST[lower]
        base = _ed_to_base(word) if word.islower() else None
        if base is not None:
            return word, s, e, base
    return None


def _example_has_negation(example: QAExample) -> bool:
    return contains_negation(example.question) or contains_negation(example.context)


def gen_additive_negation_pair(
    example: QAExample, seed: int, templates: dict[str, str] | None = None
) -> QAExample:
    """Append a negated claim about the gold answer; answer stays valid."""
    templates = templates or DEFAULT_TEMPLATES
    if _example_has_negation(example):
        raise IneligibleExample(f"example {example.id} already contains a negation marker")
    sentence_range = _gold_sentence_range(example)
    claim = templates["additive_negation_fallback"]
    if sentence_range is not None:
        sent = example.context[sentence_range[0] : sentence_range[1]]
        copula = _find_copula(sent)
        if copula is not None:
            claim = templates["additive_negation_copula"].format(copula=copula[0].lower())
        else:
            verb = _find_past_verb(sent)
            if verb is not None:
                claim = templates["additive_negation_verb"].format(verb=verb[3])
    return _append_sentence(
        example, claim, "additive_negation", loss_weight=NEGATION_WEIGHT, is_negation=True
    )


def gen_transformative_negation_pair(
    example: QAExample, seed: int, templates: dict[str, str] | None = None
) -> QAExample:
    """Negate the answer-bearing sentence and empty the answers.

    Copulas get "not" inserted; regular and tabled past verbs become
    "didn't <base>"; anything else skips rather than corrupting the text.
    """
    if _example_has_negation(example):
        raise IneligibleExample(f"example {example.id} already contains a negation marker")
    sentence_range = _gold_sentence_range(example)
    if sentence_range is None:
        raise SkipExample(UNSUPPORTED_VERB_SHAPE)
    s, e = sentence_range
    sent = example.context[s:e]
    copula = _find_copula(sent)
    if copula is not None:
        word, ws, we = copula
        rewritten = sent[:we] + " not" + sent[we:]
    else:
        verb = _find_past_verb(sent)
        if verb is None:
            raise SkipExample(UNSUPPORTED_VERB_SHAPE)
        word, ws, we, base = verb
        rewritten = sent[:ws] + "didn't " + base + sent[we:]
    new_context = example.context[:s] + rewritten + example.context[e:]
    delta = len(rewritten) - (e - s)
    spans = []
    for ds, de in example.distractor_spans:
        if de <= s:
            spans.append((ds, de))
        elif ds >= e:
            spans.append((ds + delta, de + delta))
        # spans overlapping the rewritten sentence are dropped
    return example.with_fields(
        id=f"{example.id}:transformative_negation",
        context=new_context,
        answers=(),
        is_impossible=True,
        origin="augmented",
        attack_type="transformative_negation",
        loss_weight=NEGATION_WEIGHT,
        is_negation=True,
        distractor_spans=tuple(spans),
    )


def gen_entity_substitution(
    example: QAExample,
    seed: int,
    hard_negatives: HardNegativeSet | None,
    templates: dict[str, str] | None = None,
) -> QAExample:
    """Append a distractor sentence asserting a mined hard negative."""
    templates = templates or DEFAULT_TEMPLATES
    if hard_negatives is None or not hard_negatives.negatives:
        raise SkipExample(NO_HARD_NEGATIVES)
    rng = _rng_for(seed, example.id)
    negative = rng.choice(hard_negatives.negatives)
    return _append_sentence(
        example,
        templates["entity_substitution"].format(distractor=negative.surface),
        "entity_substitution",
        loss_weight=ENTITY_WEIGHT,
    )


# ---------------------------------------------------------------------------
# Drivers
# ---------------------------------------------------------------------------

def _generate(attack: str, example: QAExample, config: AttackConfig) -> QAExample:
    if attack == "paraphrase":
        return gen_paraphrase_attack(example, config.seed, config.templates)
    if attack == "entity_swap":
        return gen_entity_swap_attack(example, config.seed, config.templates)
    if attack == "negation_attack":
        return gen_negation_attack(example, config.seed, config.templates)
    if attack == "numeric_attack":
        return gen_numeric_attack(example, config.seed, config.templates)
    if attack == "additive_negation":
        return gen_additive_negation_pair(example, config.seed, config.templates)
    if attack == "transformative_negation":
        return gen_transformative_negation_pair(example, config.seed, config.templates)
    if attack == "entity_substitution":
        return gen_entity_substitution(
            example, config.seed, mine_hard_negatives(example), config.templates
        )
    raise ValueError(f"unknown attack type {attack!r}")


def run_augmentation(dataset: Dataset, config: AttackConfig) -> tuple[Dataset, AugmentationReport]:
    """Seeded, order-stable augmentation: sample round(rate*N) examples, assign
    attacks round-robin with per-example eligibility fallback."""
    if len(dataset) == 0:
        raise EmptyDataset("cannot augment an empty dataset")
    n_sample = min(_round_half_up(config.augmentation_rate * len(dataset)), len(dataset))
    rng = random.Random(config.seed)
    indices = sorted(rng.sample(range(len(dataset)), n_sample))

    generated: dict[str, int] = {a: 0 for a in config.enabled}
    skipped: dict[str, int] = {}
    new_examples: list[QAExample] = []
    for k, idx in enumerate(indices):
        ex = dataset.examples[idx]
        last_reason = "NoEligibleAttack"
        for j in range(len(config.enabled)):
            attack = config.enabled[(k + j) % len(config.enabled)]
            try:
                new_examples.append(_generate(attack, ex, config))
                generated[attack] += 1
                break
            except SkipExample as skip:
                last_reason = skip.reason
            except IneligibleExample:
                last_reason = INELIGIBLE
        else:
            skipped[last_reason] = skipped.get(last_reason, 0) + 1

    output = concat(dataset, new_examples)
    report = AugmentationReport(
        attempted=n_sample,
        generated=generated,
        skipped=skipped,
        total_output_size=len(output),
        target_counts=dict(config.target_counts) if config.target_counts else None,
    )
    if report.target_counts:
        report.target_deltas = {
            a: generated.get(a, 0) - t for a, t in report.target_counts.items()
        }
    return output, report


def mark_negation_examples(dataset: Dataset, weight: float = NEGATION_WEIGHT) -> Dataset:
    """Flag every example whose question or context carries a negation marker."""
    out = []
    for ex in dataset:
        if _example_has_negation(ex):
            out.append(ex.with_fields(is_negation=True, loss_weight=weight))
        else:
            out.append(ex)
    return Dataset(examples=tuple(out), source_label=dataset.source_label, version=dataset.version)


@dataclass
class NegationPairReport:
    n_input: int
    n_original_negation: int
    n_anchors: int
    n_additive: int
    n_transformative: int
    transformative_skipped: int
    total_output_size: int
    weighted_count: int
    weighted_share: float
    size_ratio: float


def gen_negation_pairs(
    dataset: Dataset,
    rate: float = 0.30,
    seed: int = 0,
    templates: dict[str, str] | None = None,
) -> tuple[Dataset, NegationPairReport]:
    """Negation contrastive-pair pipeline.

    Originals carrying a marker are flagged and weighted. Positive anchors are
    then sampled so that total augmentations equal `rate` of the positives;
    each anchor yields one additive and one transformative augmentation and is
    itself flagged for weighted training as the pair's positive member.
    """
    if len(dataset) == 0:
        raise EmptyDataset("cannot generate pairs from an empty dataset")
    if not 0 < rate <= 1:
        raise ValueError("rate must be in (0, 1]")
    marked = mark_negation_examples(dataset)
    positive_ids = [ex.id for ex in marked if not ex.is_negation]
    n_original_negation = len(marked) - len(positive_ids)
    n_anchors = min(_round_half_up(rate * len(positive_ids) / 2), len(positive_ids))
    rng = random.Random(seed)
    anchor_ids = set(
        positive_ids[i] for i in sorted(rng.sample(range(len(positive_ids)), n_anchors))
    )

    updated: list[QAExample] = []
    augmented: list[QAExample] = []
    transformative_skipped = 0
    for ex in marked:
        if ex.id not in anchor_ids:
            updated.append(ex)
            continue
        augmented.append(gen_additive_negation_pair(ex, seed, templates))
        try:
            augmented.append(gen_transformative_negation_pair(ex, seed, templates))
        except SkipExample:
            transformative_skipped += 1
        updated.append(ex.with_fields(is_negation=True, loss_weight=NEGATION_WEIGHT))

    output = Dataset(
        examples=tuple(updated) + tuple(augmented),
        source_label=dataset.source_label,
        version=dataset.version,
    )
    weighted = sum(1 for ex in output if ex.is_negation)
    n_additive = sum(1 for ex in augmented if ex.attack_type == "additive_negation")
    n_transformative = len(augmented) - n_additive
    report = NegationPairReport(
        n_input=len(dataset),
        n_original_negation=n_original_negation,
        n_anchors=n_anchors,
        n_additive=n_additive,
        n_transformative=n_transformative,
        transformative_skipped=transformative_skipped,
        total_output_size=len(output),
        weighted_count=weighted,
        weighted_share=weighted / len(output),
        size_ratio=len(output) / len(dataset),
    )
    return output, report
