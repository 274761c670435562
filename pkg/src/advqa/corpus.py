"""Data model and I/O for SQuAD-format datasets, augmented JSONL, and prediction files.

Character offsets are Unicode scalar-value indices into the context (Python
string indices), never bytes: mixed conventions silently corrupt spans.
Datasets are immutable after construction and safe to share between threads.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field, fields, replace
from typing import Iterable, Iterator, Mapping

from .errors import DuplicateId, MalformedJson, OffsetMismatch, SchemaViolation

log = logging.getLogger(__name__)

ORIGINS = ("clean", "addsent", "augmented")
ATTACK_TYPES = (
    "paraphrase",
    "entity_swap",
    "negation_attack",
    "numeric_attack",
    "additive_negation",
    "transformative_negation",
    "entity_substitution",
)

# Prediction sets are flat id -> answer maps.
PredictionSet = dict


@dataclass(frozen=True)
class Answer:
    text: str
    answer_start: int


@dataclass(frozen=True)
class QAExample:
    """One question/context/answer record with provenance and augmentation metadata."""

    id: str
    question: str
    context: str
    answers: tuple[Answer, ...] = ()
    is_impossible: bool = False
    origin: str = "clean"
    attack_type: str | None = None
    loss_weight: float = 1.0
    is_negation: bool = False
    is_entity_rich: bool = False
    distractor_spans: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "answers", tuple(self.answers))
        object.__setattr__(
            self, "distractor_spans", tuple((int(s), int(e)) for s, e in self.distractor_spans)
        )
        if self.origin not in ORIGINS:
            raise SchemaViolation(f"example {self.id!r}: unknown origin {self.origin!r}")
        if self.attack_type is not None and self.attack_type not in ATTACK_TYPES:
            raise SchemaViolation(f"example {self.id!r}: unknown attack_type {self.attack_type!r}")
        if not self.loss_weight > 0:
            raise SchemaViolation(f"example {self.id!r}: loss_weight must be positive")
        if self.is_impossible and self.answers:
            raise SchemaViolation(f"example {self.id!r}: impossible example carries answers")
        for ans in self.answers:
            got = self.context[ans.answer_start : ans.answer_start + len(ans.text)]
            if got != ans.text:
                raise OffsetMismatch(
                    self.id,
                    f"answer {ans.text!r} not at offset {ans.answer_start} (found {got!r})",
                )
        prev_end = 0
        for start, end in self.distractor_spans:
            if not (0 <= start < end <= len(self.context)):
                raise SchemaViolation(f"example {self.id!r}: distractor span ({start},{end}) out of bounds")
            if start < prev_end:
                raise SchemaViolation(f"example {self.id!r}: distractor spans overlap or are unsorted")
            prev_end = end

    def with_fields(self, **kwargs) -> "QAExample":
        return replace(self, **kwargs)


@dataclass(frozen=True)
class Dataset:
    """Ordered, id-unique collection of QAExamples."""

    examples: tuple[QAExample, ...]
    source_label: str = ""
    version: str = ""

    def __post_init__(self):
        object.__setattr__(self, "examples", tuple(self.examples))
        seen = set()
        for ex in self.examples:
            if ex.id in seen:
                raise DuplicateId(f"duplicate example id {ex.id!r}")
            seen.add(ex.id)

    def __len__(self) -> int:
        return len(self.examples)

    def __iter__(self) -> Iterator[QAExample]:
        return iter(self.examples)

    def by_id(self, example_id: str) -> QAExample:
        for ex in self.examples:
            if ex.id == example_id:
                return ex
        raise KeyError(example_id)


def _require(obj: Mapping, key: str, path: str):
    if key not in obj:
        raise SchemaViolation(f"missing field {path}.{key}")
    return obj[key]


def parse_squad(json_bytes: bytes | str, strict: bool = False) -> Dataset:
    """Parse SQuAD v1.1 JSON into a flat Dataset (origin=clean).

    Third-party SQuAD derivatives contain occasional offset drift, so the
    default is lenient: an answer that fails the offset check is logged and
    the example skipped. strict=True aborts with OffsetMismatch instead.
    """
    if isinstance(json_bytes, bytes):
        json_bytes = json_bytes.decode("utf-8")
    try:
        doc = json.loads(json_bytes)
    except json.JSONDecodeError as exc:
        raise MalformedJson(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaViolation("top level must be an object")
    data = _require(doc, "data", "$")
    if not isinstance(data, list):
        raise SchemaViolation("$.data must be a list")
    version = str(doc.get("version", ""))

    examples: list[QAExample] = []
    for ai, article in enumerate(data):
        paragraphs = _require(article, "paragraphs", f"$.data[{ai}]")
        for pi, para in enumerate(paragraphs):
            path = f"$.data[{ai}].paragraphs[{pi}]"
            context = _require(para, "context", path)
            for qi, qa in enumerate(_require(para, "qas", path)):
                qpath = f"{path}.qas[{qi}]"
                qid = str(_require(qa, "id", qpath))
                question = _require(qa, "question", qpath)
                answers = tuple(
                    Answer(text=_require(a, "text", f"{qpath}.answers[{j}]"),
                           answer_start=int(_require(a, "answer_start", f"{qpath}.answers[{j}]")))
                    for j, a in enumerate(_require(qa, "answers", qpath))
                )
                is_impossible = bool(qa.get("is_impossible", False))
                try:
                    examples.append(
                        QAExample(
                            id=qid,
                            question=question,
                            context=context,
                            answers=answers if not is_impossible else (),
                            is_impossible=is_impossible,
                        )
                    )
                except OffsetMismatch:
                    if strict:
                        raise
                    log.warning("skipping example %s: answer offset mismatch", qid)
    return Dataset(examples=tuple(examples), source_label="squad", version=version)


def parse_predictions(json_bytes: bytes | str, strict: bool = False) -> PredictionSet:
    """Parse a flat {id: answer} predictions object.

    Duplicate keys raise DuplicateId in strict mode; otherwise the last
    value wins and a warning is logged.
    """
    if isinstance(json_bytes, bytes):
        json_bytes = json_bytes.decode("utf-8")

    def collect(pairs):
        out = {}
        for key, value in pairs:
            if key in out:
                if strict:
                    raise DuplicateId(f"duplicate prediction id {key!r}")
                log.warning("duplicate prediction id %r: keeping last value", key)
            out[key] = value
        return out

    try:
        preds = json.loads(json_bytes, object_pairs_hook=collect)
    except json.JSONDecodeError as exc:
        raise MalformedJson(f"invalid JSON: {exc}") from exc
    if not isinstance(preds, dict):
        raise SchemaViolation("predictions must be a JSON object")
    for key, value in preds.items():
        if not isinstance(value, str):
            raise SchemaViolation(f"prediction for {key!r} is not a string")
    return preds


_EXAMPLE_FIELDS = [f.name for f in fields(QAExample)]


def example_to_dict(ex: QAExample) -> dict:
    return {
        "id": ex.id,
        "question": ex.question,
        "context": ex.context,
        "answers": [{"text": a.text, "answer_start": a.answer_start} for a in ex.answers],
        "is_impossible": ex.is_impossible,
        "origin": ex.origin,
        "attack_type": ex.attack_type,
        "loss_weight": ex.loss_weight,
        "is_negation": ex.is_negation,
        "is_entity_rich": ex.is_entity_rich,
        "distractor_spans": [[s, e] for s, e in ex.distractor_spans],
    }


def example_from_dict(obj: Mapping, where: str = "record") -> QAExample:
    for name in _EXAMPLE_FIELDS:
        if name not in obj:
            raise SchemaViolation(f"{where}: missing field {name!r}")
    try:
        return QAExample(
            id=str(obj["id"]),
            question=obj["question"],
            context=obj["context"],
            answers=tuple(Answer(a["text"], int(a["answer_start"])) for a in obj["answers"]),
            is_impossible=bool(obj["is_impossible"]),
            origin=obj["origin"],
            attack_type=obj["attack_type"],
            loss_weight=float(obj["loss_weight"]),
            is_negation=bool(obj["is_negation"]),
            is_entity_rich=bool(obj["is_entity_rich"]),
            distractor_spans=tuple((int(s), int(e)) for s, e in obj["distractor_spans"]),
        )
    except (TypeError, KeyError) as exc:
        raise SchemaViolation(f"{where}: malformed example: {exc}") from exc


def write_augmented(dataset: Dataset) -> bytes:
    """Serialize a Dataset to JSONL, one QAExample per line, UTF-8."""
    lines = []
    for ex in dataset:
        lines.append(json.dumps(example_to_dict(ex), ensure_ascii=False, sort_keys=True))
    return ("\n".join(lines) + ("\n" if lines else "")).encode("utf-8")


def read_augmented(jsonl_bytes: bytes | str, source_label: str = "", version: str = "") -> Dataset:
    """Parse augmented JSONL; lossless inverse of write_augmented."""
    if isinstance(jsonl_bytes, bytes):
        jsonl_bytes = jsonl_bytes.decode("utf-8")
    examples = []
    for lineno, line in enumerate(jsonl_bytes.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SchemaViolation(f"line {lineno}: invalid JSON: {exc}") from exc
        examples.append(example_from_dict(obj, where=f"line {lineno}"))
    return Dataset(examples=tuple(examples), source_label=source_label, version=version)


def concat(first: Dataset, second: Iterable[QAExample], source_label: str | None = None) -> Dataset:
    return Dataset(
        examples=tuple(first.examples) + tuple(second),
        source_label=first.source_label if source_label is None else source_label,
        version=first.version,
    )
