"""Five deterministic rule-based error-categorization schemes over
(question, context, gold, prediction, distractor spans).

Single-label schemes (question type, answer type, complexity, error type) are
total functions with fixed first-match rule order. Pattern detection is
multi-label: detectors run independently and may overlap.
"""

from __future__ import annotations

import logging
import re
from collections import Counter
from dataclasses import dataclass, field

from .corpus import Dataset, PredictionSet, QAExample
from .entity import (
    GEO_GAZETTEER,
    GEO_GAZETTEER_MULTI,
    GEO_SUFFIXES,
    GEO_WORD_CUES,
    extract_entities,
    sentence_index,
    split_sentences,
)
from .errors import EmptyDataset
from .metrics import exact_match, normalize_answer

log = logging.getLogger(__name__)

QUESTION_TYPES = ("What", "Who", "Where", "When", "Number", "WhyHow", "Other")
ANSWER_TYPES = ("Score", "Venue", "Location", "Date", "Long_Phrase", "Short_Phrase", "Year")
COMPLEXITY_LABELS = ("Simple", "Multi_Part", "Complex", "Superlative", "Counting", "Comparison", "Causal")
ERROR_TYPES = ("Wrong_Phrase", "Partial", "Distant_Distractor", "Near_Distractor", "Wrong_Year", "Other")
PATTERNS = (
    "Negation",
    "Entity_Substitution",
    "Numeric",
    "Additive",
    "Paraphrase",
    "Modal",
    "ComparativeSuperlative",
    "Temporal",
    "List_Enumeration",
    "Coreference",
)

# The 17 negation markers. "n't" additionally matches as a suffix so that
# contractions outside the explicit list (shouldn't, couldn't) still count.
NEGATION_MARKERS = (
    "not", "no", "never", "none", "n't", "cannot", "can't", "didn't",
    "doesn't", "don't", "won't", "wasn't", "weren't", "isn't", "aren't",
    "neither", "nor",
)

MODAL_VERBS = {"may", "might", "could", "would", "should", "can", "must"}

_WORDS_RE = re.compile(r"[a-z']+")

VENUE_CUES = {
    "stadium", "arena", "field", "center", "centre", "coliseum", "dome",
    "hall", "garden", "park", "speedway", "raceway", "course", "gym",
    "gymnasium", "track",
}

_MONTH_TOKENS = {
    "january", "february", "march", "april", "may", "june", "july", "august",
    "september", "october", "november", "december",
}

ADDITIVE_OPENERS = (
    "however", "some claim", "some sources", "some might argue",
    "some records", "some believe", "contrary to", "although", "though",
    "despite", "in contrast", "on the other hand", "nevertheless", "yet",
)

TEMPORAL_CUES = {
    "before", "after", "during", "until", "since", "earlier", "later",
    "previously", "prior", "subsequently", "originally", "formerly",
    "initially", "eventually", "meanwhile", "afterwards", "ago",
}

COMPARATIVE_SUPERLATIVE_CUES = {
    "more", "most", "less", "least", "fewer", "fewest", "versus", "vs",
    "first", "greater", "better", "worse", "bigger", "smaller", "higher",
    "lower", "older", "newer", "faster", "slower",
}

LIST_CUES = {"including", "respectively", "both", "among"}
_LIST_PHRASES = ("such as", "as well as")

_EST_EXCLUSIONS = {
    "west", "rest", "test", "guest", "forest", "harvest", "interest",
    "protest", "request", "contest", "northwest", "southwest", "arrest",
    "invest", "earnest", "honest", "modest", "nest", "chest", "quest",
    "crest", "priest", "digest", "suggest",
}

_CONTENT_STOPWORDS = {
    "is", "are", "was", "were", "be", "been", "being", "of", "in", "on",
    "at", "to", "for", "by", "with", "and", "or", "as", "it", "its", "this",
    "that", "these", "those", "from", "but", "not", "no", "some", "any",
    "all", "do", "does", "did", "have", "has", "had", "will", "would",
    "can", "could", "should", "may", "might", "must", "there", "their",
    "they", "he", "she", "his", "her", "we", "you", "i", "however",
    "though", "although",
}

_PRONOUNS_3P = {
    "he", "she", "it", "they", "him", "her", "them", "his", "hers",
    "theirs", "their", "its",
}

_NAMED_TYPES = {"Person", "Organization", "Location", "Facility", "Event", "Misc"}


def _words(text: str) -> list[str]:
    return _WORDS_RE.findall(text.lower())


def contains_negation(text: str) -> bool:
    """True when any of the 17 markers occurs (word-level, apostrophes kept)."""
    words = _words(text)
    word_set = set(words)
    for marker in NEGATION_MARKERS:
        if marker == "n't":
            if any(w.endswith("n't") for w in words):
                return True
        elif marker in word_set:
            return True
    return False


# ---------------------------------------------------------------------------
# Scheme 1: question type
# ---------------------------------------------------------------------------

_WH_MAP = {
    "what": "What", "who": "Who", "whom": "Who", "whose": "Who",
    "where": "Where", "when": "When", "why": "WhyHow", "how": "WhyHow",
}


def classify_question_type(question: str) -> str:
    """First-match rules: how-many/much -> Number, else first wh-word, else Other."""
    lowered = question.lower()
    if re.search(r"\bhow (many|much)\b", lowered):
        return "Number"
    for word in _words(lowered):
        if word in _WH_MAP:
            return _WH_MAP[word]
    return "Other"


def fold_question_type(label: str) -> str:
    """Report-layout folding: the canonical table has no When row."""
    return "Other" if label == "When" else label


# ---------------------------------------------------------------------------
# Scheme 2: answer type
# ---------------------------------------------------------------------------

_SCORE_RE = re.compile(r"\d{1,3}\s?[-–]\s?\d{1,3}")
_YEAR_RE = re.compile(r"[12]\d{3}")
_DMY_RE = re.compile(r"\d{1,2}[/-]\d{1,2}[/-]\d{2,4}")


def classify_answer_type(gold_answer: str) -> str:
    """Ordered rules: Score, Year, Date, Venue, Location, Long_Phrase, Short_Phrase."""
    text = gold_answer.strip()
    if _SCORE_RE.fullmatch(text):
        return "Score"
    if _YEAR_RE.fullmatch(text):
        return "Year"
    tokens = [w.strip(".,") for w in text.lower().split()]
    if not tokens:
        return "Short_Phrase"
    if _DMY_RE.fullmatch(text) or any(t in _MONTH_TOKENS for t in tokens):
        return "Date"
    if any(t in VENUE_CUES for t in tokens):
        return "Venue"
    geo_lower = {g.lower() for g in GEO_GAZETTEER}
    geo_multi_lower = {g.lower() for g in GEO_GAZETTEER_MULTI}
    word_cues_lower = {g.lower() for g in GEO_WORD_CUES}
    last = tokens[-1]
    # the head noun decides: "New York City" is a location, a long clause
    # that merely mentions a river is not
    if (
        text.lower() in geo_multi_lower
        or last in geo_lower
        or last in word_cues_lower
        or (len(last) > 5 and last.endswith(GEO_SUFFIXES))
    ):
        return "Location"
    if len(normalize_answer(text)) > 5:
        return "Long_Phrase"
    return "Short_Phrase"


# ---------------------------------------------------------------------------
# Scheme 3: question complexity
# ---------------------------------------------------------------------------

_CLAUSE_MARKERS = {
    "that", "which", "because", "while", "whose", "whom", "where", "when",
    "after", "before", "since",
}


def _has_superlative_cue(words: list[str]) -> bool:
    for w in words:
        if w in {"most", "least", "first", "largest"}:
            return True
        if len(w) >= 4 and w.endswith("est") and w not in _EST_EXCLUSIONS:
            return True
    return False


def classify_complexity(question: str) -> str:
    """Ordered rules: Causal, Counting, Comparison, Superlative, Multi_Part,
    Simple (<=8 tokens, single clause), Complex."""
    lowered = question.lower()
    words = _words(lowered)
    if "why" in words or "reason" in words or "reasons" in words or re.search(
        r"\bhow did\b.*\bcause", lowered
    ):
        return "Causal"
    if re.search(r"\bhow (many|much)\b", lowered):
        return "Counting"
    if (
        re.search(r"\b\w+er than\b", lowered)
        or "versus" in words
        or "vs" in words
        or re.search(r"\b(more|less|fewer) than\b", lowered)
        or "compared" in words
    ):
        return "Comparison"
    if _has_superlative_cue(words):
        return "Superlative"
    wh_count = sum(1 for w in words if w in _WH_MAP)
    if wh_count >= 2 and ("and" in words or "or" in words):
        return "Multi_Part"
    if len(words) <= 8 and not any(w in _CLAUSE_MARKERS for w in words[1:]):
        return "Simple"
    return "Complex"


# ---------------------------------------------------------------------------
# Prediction location
# ---------------------------------------------------------------------------

def locate_prediction(
    context: str, prediction: str, distractor_spans: tuple[tuple[int, int], ...] = ()
) -> tuple[int, int] | None:
    """Character span of the prediction's relevant occurrence in the context.

    An occurrence inside a distractor span takes priority; otherwise the last
    occurrence wins, since injected distractors trail the original text.
    """
    pred = prediction.strip()
    if not pred:
        return None
    occurrences = [m.span() for m in re.finditer(re.escape(pred), context)]
    if not occurrences:
        occurrences = [
            m.span() for m in re.finditer(re.escape(pred.casefold()), context.casefold())
        ]
    if not occurrences:
        return None
    for occ in occurrences:
        for ds, de in distractor_spans:
            if ds <= occ[0] and occ[1] <= de:
                return occ
    return occurrences[-1]


def _covering_distractor(
    span: tuple[int, int], distractor_spans: tuple[tuple[int, int], ...]
) -> tuple[int, int] | None:
    for ds, de in distractor_spans:
        if ds <= span[0] and span[1] <= de:
            return (ds, de)
    return None


# ---------------------------------------------------------------------------
# Scheme 4: error type
# ---------------------------------------------------------------------------

def _is_subsequence(short: list[str], long: list[str]) -> bool:
    it = iter(long)
    return all(tok in it for tok in short)


def classify_error_type(example: QAExample, prediction: str) -> str:
    """Ordered rules over an EM=0 example: Partial, Near/Distant_Distractor,
    Wrong_Year, Wrong_Phrase, Other."""
    golds = [a.text for a in example.answers]
    pred_norm = normalize_answer(prediction)

    if pred_norm:
        for g in golds:
            g_norm = normalize_answer(g)
            if not g_norm or pred_norm == g_norm:
                continue
            if _is_subsequence(pred_norm, g_norm) or _is_subsequence(g_norm, pred_norm):
                return "Partial"

    if not example.distractor_spans:
        log.warning(
            "example %s has no distractor spans; distractor error categories unreachable",
            example.id,
        )
    loc = locate_prediction(example.context, prediction, example.distractor_spans)
    if loc is not None:
        covering = _covering_distractor(loc, example.distractor_spans)
        if covering is not None:
            sentences = split_sentences(example.context)
            d_sent = sentence_index(covering[0], sentences)
            if example.answers:
                g_sent = sentence_index(example.answers[0].answer_start, sentences)
                if abs(d_sent - g_sent) <= 1:
                    return "Near_Distractor"
            return "Distant_Distractor"

    gold0 = golds[0] if golds else ""
    if gold0 and prediction.strip():
        if (
            classify_answer_type(prediction) == "Year"
            and classify_answer_type(gold0) == "Year"
            and pred_norm != normalize_answer(gold0)
        ):
            return "Wrong_Year"
        if any(classify_answer_type(prediction) == classify_answer_type(g) for g in golds):
            return "Wrong_Phrase"
    return "Other"


# ---------------------------------------------------------------------------
# Scheme 5: linguistic patterns (multi-label)
# ---------------------------------------------------------------------------

_NUM_RE = re.compile(r"\d[\d,]*(?:\.\d+)?")


def _numbers(text: str) -> list[float]:
    return sorted(float(m.group().replace(",", "")) for m in _NUM_RE.finditer(text))


def _entity_label(text: str) -> str | None:
    """Entity type of a short answer string, or None when it is not a single entity."""
    core = text.strip()
    core = re.sub(r"^(the|a|an)\s+", "", core, flags=re.IGNORECASE)
    if not core:
        return None
    spans = extract_entities(core)
    if len(spans) == 1 and spans[0].char_start == 0 and spans[0].char_end == len(core):
        return spans[0].entity_type
    return None


def _sentence_of(context: str, offset: int) -> tuple[int, str]:
    sentences = split_sentences(context)
    idx = sentence_index(offset, sentences)
    if not sentences:
        return 0, context
    s, e = sentences[idx]
    return idx, context[s:e]


def detect_patterns(example: QAExample, prediction: str) -> frozenset[str]:
    """Independent multi-label detectors over the question and the sentence
    containing the prediction."""
    found: set[str] = set()
    question = example.question
    golds = [a.text for a in example.answers]
    gold0 = golds[0] if golds else ""

    loc = locate_prediction(example.context, prediction, example.distractor_spans)
    if loc is not None:
        pred_sent_idx, pred_sentence = _sentence_of(example.context, loc[0])
    else:
        pred_sent_idx, pred_sentence = -1, ""
    if example.answers:
        gold_sent_idx, gold_sentence = _sentence_of(example.context, example.answers[0].answer_start)
    else:
        gold_sent_idx, gold_sentence = -2, ""

    if contains_negation(question) or (pred_sentence and contains_negation(pred_sentence)):
        found.add("Negation")

    if gold0 and prediction.strip():
        pt, gt = _entity_label(prediction), _entity_label(gold0)
        # Misc spans are untyped leftovers: same-type cannot be established.
        if pt is not None and pt == gt and pt != "Misc":
            if " ".join(normalize_answer(prediction)) != " ".join(normalize_answer(gold0)):
                found.add("Entity_Substitution")

    pred_nums, gold_nums = _numbers(prediction), _numbers(gold0)
    if (pred_nums or gold_nums) and pred_nums != gold_nums:
        found.add("Numeric")

    if loc is not None and _covering_distractor(loc, example.distractor_spans) is not None:
        found.add("Additive")
    elif pred_sentence and pred_sentence.strip().lower().startswith(ADDITIVE_OPENERS):
        found.add("Additive")

    if (
        pred_sentence
        and gold_sentence
        and pred_sent_idx != gold_sent_idx
        and pred_sentence.strip() != gold_sentence.strip()
    ):
        pred_content = set(normalize_answer(pred_sentence)) - _CONTENT_STOPWORDS
        gold_content = set(normalize_answer(gold_sentence)) - _CONTENT_STOPWORDS
        union = pred_content | gold_content
        if union and len(pred_content & gold_content) / len(union) >= 0.6:
            found.add("Paraphrase")

    if pred_sentence and set(_words(pred_sentence)) & MODAL_VERBS:
        found.add("Modal")

    scope_words = _words(question) + (_words(pred_sentence) if pred_sentence else [])
    scope_text = (question + " " + pred_sentence).lower()
    if (
        set(scope_words) & COMPARATIVE_SUPERLATIVE_CUES
        or re.search(r"\b\w+er than\b", scope_text)
        or _has_superlative_cue(scope_words)
    ):
        found.add("ComparativeSuperlative")

    if set(scope_words) & TEMPORAL_CUES:
        found.add("Temporal")

    if (
        set(scope_words) & LIST_CUES
        or any(p in scope_text for p in _LIST_PHRASES)
        or (pred_sentence.count(",") >= 2 and re.search(r",\s\w+[,\s].*\b(and|or)\b", pred_sentence))
    ):
        found.add("List_Enumeration")

    if set(_words(question)) & _PRONOUNS_3P:
        named = [s for s in extract_entities(question) if s.entity_type in _NAMED_TYPES]
        if not named:
            found.add("Coreference")

    return frozenset(found)


# ---------------------------------------------------------------------------
# Aggregate analysis
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ErrorRecord:
    example_id: str
    question_type: str
    answer_type: str
    complexity: str
    error_type: str
    patterns: frozenset[str]


@dataclass(frozen=True)
class TaxonomyReport:
    n_examples: int
    n_errors: int
    question_type: dict[str, tuple[int, int]]  # label -> (total, correct)
    answer_type: dict[str, tuple[int, int]]
    complexity: dict[str, tuple[int, int]]
    error_type_counts: dict[str, int]
    pattern_counts: dict[str, int]
    cooccurrence: dict[str, dict[str, int]]
    records: tuple[ErrorRecord, ...] = field(default_factory=tuple)


def classify_example(example: QAExample, prediction: str) -> ErrorRecord:
    """All five labels for one failed example."""
    gold0 = example.answers[0].text if example.answers else ""
    return ErrorRecord(
        example_id=example.id,
        question_type=classify_question_type(example.question),
        answer_type=classify_answer_type(gold0),
        complexity=classify_complexity(example.question),
        error_type=classify_error_type(example, prediction),
        patterns=detect_patterns(example, prediction),
    )


def analyze(dataset: Dataset, predictions: PredictionSet) -> TaxonomyReport:
    """Classify every example for the accuracy schemes and every EM=0 example
    for error type and patterns."""
    if len(dataset) == 0:
        raise EmptyDataset("cannot analyze an empty dataset")

    def stat_dict(labels):
        return {label: [0, 0] for label in labels}

    q_stats = stat_dict(QUESTION_TYPES + ("When",))
    a_stats = stat_dict(ANSWER_TYPES)
    c_stats = stat_dict(COMPLEXITY_LABELS)
    error_counts = Counter()
    pattern_counts = Counter()
    cooc = {p: {q: 0 for q in PATTERNS} for p in PATTERNS}
    records: list[ErrorRecord] = []

    for ex in dataset:
        pred = predictions.get(ex.id, "")
        golds = [a.text for a in ex.answers]
        em = exact_match(pred, golds)
        qt = classify_question_type(ex.question)
        at = classify_answer_type(golds[0] if golds else "")
        cx = classify_complexity(ex.question)
        for stats, label in ((q_stats, qt), (a_stats, at), (c_stats, cx)):
            stats[label][0] += 1
            stats[label][1] += em
        if em == 0:
            record = classify_example(ex, pred)
            records.append(record)
            error_counts[record.error_type] += 1
            for p in record.patterns:
                pattern_counts[p] += 1
            for p in record.patterns:
                for q in record.patterns:
                    cooc[p][q] += 1

    def freeze(stats):
        return {k: (v[0], v[1]) for k, v in stats.items()}

    return TaxonomyReport(
        n_examples=len(dataset),
        n_errors=len(records),
        question_type=freeze(q_stats),
        answer_type=freeze(a_stats),
        complexity=freeze(c_stats),
        error_type_counts={t: error_counts.get(t, 0) for t in ERROR_TYPES},
        pattern_counts={p: pattern_counts.get(p, 0) for p in PATTERNS},
        cooccurrence=cooc,
        records=tuple(records),
    )
