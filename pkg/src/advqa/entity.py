"""Rule-based entity extraction over 13 types, hard-negative mining, and
character-to-token offset mapping.

The extractor is a deterministic regex-and-gazetteer cascade. It trades recall
against a learned tagger for reproducibility and zero model dependencies; its
coverage is surfaced through corpus statistics rather than hidden.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .corpus import Dataset, QAExample
from .errors import UnmappableSpan

ENTITY_TYPES = (
    "Person", "Location", "Date", "Number", "Organization", "Year", "Time",
    "Money", "Percent", "Ordinal", "Event", "Facility", "Misc",
)

MAX_NEGATIVES = 5


@dataclass(frozen=True)
class EntitySpan:
    surface: str
    char_start: int
    char_end: int
    entity_type: str
    token_start: int | None = None
    token_end: int | None = None


@dataclass(frozen=True)
class HardNegativeSet:
    example_id: str
    answer_span: EntitySpan
    negatives: tuple[EntitySpan, ...]


@dataclass(frozen=True)
class TokenizationWithOffsets:
    tokens: tuple[str, ...]
    offsets: tuple[tuple[int, int], ...]


# ---------------------------------------------------------------------------
# Tokenization and sentence splitting
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\w+|[^\w\s]")
# Sentence boundary: terminal punctuation, whitespace, then an uppercase letter.
_SENT_BOUNDARY_RE = re.compile(r"[.!?]+\s+(?=[A-Z])")


def tokenize_with_offsets(text: str) -> TokenizationWithOffsets:
    """Whitespace-and-punctuation tokenization; alphanumeric runs stay whole,
    every other non-space character is its own token."""
    tokens, offsets = [], []
    for m in _TOKEN_RE.finditer(text):
        tokens.append(m.group())
        offsets.append((m.start(), m.end()))
    return TokenizationWithOffsets(tokens=tuple(tokens), offsets=tuple(offsets))


def split_sentences(text: str) -> list[tuple[int, int]]:
    """Character ranges of sentences; boundaries at {. ! ?} + space + uppercase."""
    if not text:
        return []
    starts = [0]
    for m in _SENT_BOUNDARY_RE.finditer(text):
        starts.append(m.end())
    ranges = []
    for i, s in enumerate(starts):
        e = starts[i + 1] if i + 1 < len(starts) else len(text)
        ranges.append((s, e))
    return ranges


def sentence_index(offset: int, sentences: Sequence[tuple[int, int]]) -> int:
    for i, (s, e) in enumerate(sentences):
        if s <= offset < e:
            return i
    return max(len(sentences) - 1, 0)


def map_to_token_positions(
    span: tuple[int, int], tokenization: TokenizationWithOffsets
) -> tuple[int, int]:
    """Smallest inclusive token interval whose character coverage contains the span.

    Span edges falling in leading/trailing whitespace beyond token coverage are
    clamped. Raises UnmappableSpan when no token intersects the span at all.
    """
    char_start, char_end = span
    offsets = tokenization.offsets
    if not any(ts < char_end and te > char_start for ts, te in offsets):
        raise UnmappableSpan(f"span ({char_start},{char_end}) covers no token")
    token_start = 0
    for i, (ts, _) in enumerate(offsets):
        if ts <= char_start:
            token_start = i
        else:
            break
    token_end = len(offsets) - 1
    for j in range(token_start, len(offsets)):
        if offsets[j][1] >= char_end:
            token_end = j
            break
    return (token_start, token_end)


# ---------------------------------------------------------------------------
# Gazetteers
# ---------------------------------------------------------------------------

_MONTHS = (
    "January", "February", "March", "April", "May", "June", "July",
    "August", "September", "October", "November", "December",
)

_SPELLED_NUMBERS = (
    "one", "two", "three", "four", "five", "six", "seven", "eight", "nine",
    "ten", "eleven", "twelve", "thirteen", "fourteen", "fifteen", "sixteen",
    "seventeen", "eighteen", "nineteen", "twenty",
)

_SPELLED_ORDINALS = (
    "first", "second", "third", "fourth", "fifth", "sixth", "seventh",
    "eighth", "ninth", "tenth",
)

ORG_CUES = {
    "Inc", "Inc.", "Corp", "Corp.", "Corporation", "Company", "Co", "Co.",
    "Ltd", "Ltd.", "LLC", "University", "College", "Institute", "Museum",
    "Bank", "Church", "Committee", "Association", "Agency", "Department",
    "Council", "Society", "Union", "Press", "Broadcasting", "Airlines",
}

FACILITY_CUES = {
    "Stadium", "Arena", "Field", "Center", "Centre", "Hall", "Tower",
    "Bridge", "Airport", "Station", "Coliseum", "Dome", "Garden", "Library",
    "Palace", "Castle", "Temple", "Cathedral", "Observatory",
}

EVENT_CUES = {
    "Bowl", "Olympics", "Olympic", "Cup", "War", "Championship", "Festival",
    "Fair", "Tournament", "Series", "Games", "Revolution", "Exposition",
}

HONORIFICS = {
    "Mr", "Mr.", "Mrs", "Mrs.", "Ms", "Ms.", "Dr", "Dr.", "President",
    "Professor", "Prof", "Prof.", "Sir", "Lady", "King", "Queen", "Prince",
    "Princess", "Captain", "General", "Senator", "Governor", "Judge",
    "Saint", "St.",
}

GIVEN_NAMES = {
    "John", "Jane", "James", "Mary", "Robert", "Michael", "William", "David",
    "Richard", "Joseph", "Thomas", "Charles", "Christopher", "Daniel",
    "Matthew", "George", "Paul", "Mark", "Donald", "Steven", "Kenneth",
    "Edward", "Brian", "Ronald", "Anthony", "Kevin", "Jason", "Gary",
    "Timothy", "Larry", "Frank", "Scott", "Eric", "Stephen", "Andrew",
    "Raymond", "Gregory", "Joshua", "Dennis", "Walter", "Patrick", "Peter",
    "Harold", "Douglas", "Henry", "Carl", "Arthur", "Ryan", "Roger",
    "Elizabeth", "Jennifer", "Linda", "Barbara", "Susan", "Jessica", "Sarah",
    "Karen", "Nancy", "Lisa", "Margaret", "Sandra", "Ashley", "Emily",
    "Donna", "Michelle", "Carol", "Amanda", "Melissa", "Deborah",
    "Stephanie", "Laura", "Rebecca", "Anna", "Samuel", "Gustave", "Albert", "Isaac",
    "Marie", "Louis", "Victor", "Hugo", "Napoleon", "Alexander", "Winston",
    "Abraham", "Theodore", "Franklin", "Ulysses", "Leonardo", "Wolfgang",
    "Ludwig", "Nikola", "Galileo", "Johannes", "Rene", "Blaise", "Ada",
}

GEO_GAZETTEER = {
    # countries and regions
    "France", "Germany", "England", "Britain", "Spain", "Italy", "China",
    "Japan", "India", "Russia", "Brazil", "Canada", "Mexico", "Australia",
    "Egypt", "Greece", "Turkey", "Poland", "Sweden", "Norway", "Portugal",
    "Austria", "Belgium", "Netherlands", "Switzerland", "Argentina", "Chile",
    "Peru", "Cuba", "Israel", "Iran", "Iraq", "Syria", "Vietnam", "Korea",
    "Thailand", "Indonesia", "Philippines", "Nigeria", "Kenya", "Ethiopia",
    "Morocco", "Algeria", "Ukraine", "Hungary", "Romania", "Denmark",
    "Finland", "Ireland", "Scotland", "Wales", "America", "Europe", "Asia",
    "Africa", "Antarctica", "Oceania",
    # US states
    "California", "Texas", "Florida", "Colorado", "Ohio", "Georgia",
    "Virginia", "Washington", "Oregon", "Nevada", "Arizona", "Utah",
    "Kansas", "Iowa", "Missouri", "Alabama", "Tennessee", "Kentucky",
    "Indiana", "Illinois", "Michigan", "Wisconsin", "Minnesota", "Montana",
    "Idaho", "Wyoming", "Nebraska", "Oklahoma", "Louisiana", "Arkansas",
    "Mississippi", "Maine", "Vermont", "Delaware", "Maryland", "Hawaii",
    "Alaska", "Pennsylvania", "Connecticut", "Massachusetts",
    # cities
    "Paris", "London", "Berlin", "Rome", "Madrid", "Moscow", "Beijing",
    "Tokyo", "Denver", "Chicago", "Boston", "Seattle", "Atlanta", "Dallas",
    "Houston", "Austin", "Miami", "Detroit", "Philadelphia", "Phoenix",
    "Baltimore", "Milwaukee", "Cleveland", "Pittsburgh", "Cincinnati",
    "Sacramento", "Portland", "Vancouver", "Toronto", "Montreal", "Sydney",
    "Melbourne", "Munich", "Hamburg", "Vienna", "Prague", "Budapest",
    "Warsaw", "Amsterdam", "Brussels", "Geneva", "Zurich", "Barcelona",
    "Lisbon", "Dublin", "Edinburgh", "Istanbul", "Cairo", "Nairobi",
    "Mumbai", "Delhi", "Shanghai", "Seoul", "Osaka", "Kyoto",
}

GEO_GAZETTEER_MULTI = {
    "United States", "New York", "Los Angeles", "San Francisco", "San Diego",
    "San Jose", "Santa Clara", "New Jersey", "New Mexico", "New Hampshire",
    "North Carolina", "South Carolina", "North Dakota", "South Dakota",
    "West Virginia", "Rhode Island", "New Orleans", "Las Vegas",
    "Kansas City", "United Kingdom", "South Africa", "Saudi Arabia",
    "New Zealand", "Hong Kong", "Buenos Aires", "Rio de Janeiro",
}

GEO_WORD_CUES = {
    "City", "State", "County", "Province", "Island", "Mountain", "River",
    "Lake", "Valley", "Bay", "Coast", "Beach", "Desert", "Republic",
}

GEO_SUFFIXES = ("land", "ville", "burg", "burgh", "shire", "stan")

# Sentence-initial tokens dropped from capitalized sequences unless they are
# themselves entity-like (gazetteer hits keep them).
_COMMON_STARTERS = {
    "the", "a", "an", "it", "he", "she", "they", "this", "that", "these",
    "those", "in", "on", "at", "but", "however", "some", "contrary", "when",
    "what", "who", "where", "why", "how", "after", "before", "during", "if",
    "as", "for", "to", "with", "while", "although", "though", "there", "its",
    "his", "her", "their", "many", "most", "one", "two", "according", "and",
    "or", "not", "no", "by", "from", "of", "was", "is", "are", "were", "all",
    "each", "both", "more", "other", "several", "despite", "unlike",
}

_CONNECTORS = {"of", "the", "de", "la", "von", "van", "del", "da"}


# ---------------------------------------------------------------------------
# Candidate regexes (priority order; lower number wins on span ties)
# ---------------------------------------------------------------------------

_MONTH_ALT = "|".join(_MONTHS)
_RULES: list[tuple[int, str, re.Pattern]] = [
    (1, "Time", re.compile(r"\b\d{1,2}:\d{2}(?::\d{2})?(?:\s?(?:a\.m\.|p\.m\.|am|pm|AM|PM))?")),
    (1, "Time", re.compile(r"\b\d{1,2}\s?(?:a\.m\.|p\.m\.|am|pm|AM|PM)\b")),
    (2, "Money", re.compile(r"[$€£]\s?\d[\d,]*(?:\.\d+)?(?:\s(?:million|billion|trillion|thousand))?")),
    (2, "Money", re.compile(r"\b\d[\d,]*(?:\.\d+)?\s(?:dollars|euros|pounds|cents)\b")),
    (3, "Percent", re.compile(r"\b\d[\d,]*(?:\.\d+)?\s?(?:%|percent|per cent)")),
    (4, "Date", re.compile(
        rf"\b(?:{_MONTH_ALT})\s\d{{1,2}}(?:st|nd|rd|th)?(?:,?\s\d{{4}})?\b")),
    (4, "Date", re.compile(rf"\b\d{{1,2}}(?:st|nd|rd|th)?\s(?:{_MONTH_ALT})(?:,?\s\d{{4}})?\b")),
    (4, "Date", re.compile(rf"\b(?:{_MONTH_ALT})(?:\s\d{{4}})?\b")),
    (4, "Date", re.compile(r"\b\d{1,2}[/-]\d{1,2}[/-]\d{2,4}\b")),
    (5, "Year", re.compile(r"\b[12]\d{3}\b")),
    (6, "Ordinal", re.compile(r"\b\d+(?:st|nd|rd|th)\b")),
    (6, "Ordinal", re.compile(r"\b(?:%s)\b" % "|".join(_SPELLED_ORDINALS), re.IGNORECASE)),
    (7, "Number", re.compile(r"\b\d[\d,]*(?:\.\d+)?\b")),
    (7, "Number", re.compile(r"\b(?:%s)\b" % "|".join(_SPELLED_NUMBERS), re.IGNORECASE)),
]

_WORD_RE = re.compile(r"[A-Za-z][A-Za-z'’.\-]*")
_CAP_WORD_RE = re.compile(r"^[A-Z]")

_HONORIFIC_ABBREV = {"Mr", "Mrs", "Ms", "Dr", "Prof", "St", "Gen", "Sen", "Capt"}


def _cap_sequences(text: str) -> list[tuple[int, int]]:
    """Character ranges of capitalized word runs, with sentence-initial common
    words stripped and lowercase connectors bridged."""
    words = []
    for m in _WORD_RE.finditer(text):
        word, start, end = m.group(), m.start(), m.end()
        # keep internal periods (U.S.) but shed a single trailing one so runs
        # cannot leak across sentence boundaries
        if word.endswith(".") and "." not in word[:-1]:
            word, end = word[:-1], end - 1
        if word:
            words.append((word, start, end))
    sent_starts = {s for s, _ in split_sentences(text)}
    n = len(words)

    def is_cap(i: int) -> bool:
        return bool(_CAP_WORD_RE.match(words[i][0]))

    def adjacent(i: int, j: int) -> bool:
        gap = text[words[i][2] : words[j][1]].strip()
        if gap == "":
            return True
        return gap == "." and words[i][0] in _HONORIFIC_ABBREV

    runs: list[list[int]] = []
    i = 0
    while i < n:
        if not is_cap(i):
            i += 1
            continue
        run = [i]
        j = i + 1
        while j < n and adjacent(run[-1], j):
            if is_cap(j):
                run.append(j)
                j += 1
            elif (
                words[j][0].lower() in _CONNECTORS
                and j + 1 < n
                and is_cap(j + 1)
                and adjacent(j, j + 1)
            ):
                run.extend((j, j + 1))
                j += 2
            else:
                break
        # drop a sentence-initial common word unless it is entity-like
        word, start, _ = words[run[0]]
        if (
            start in sent_starts
            and word.lower() in _COMMON_STARTERS
            and word not in GEO_GAZETTEER
            and word not in GIVEN_NAMES
        ):
            run = run[1:]
            while run and words[run[0]][0].lower() in _CONNECTORS:
                run = run[1:]
        # drop a leading article ("the Panthers" mid-sentence)
        if run and words[run[0]][0].lower() in {"the", "a", "an"}:
            run = run[1:]
        if run:
            runs.append(run)
        i = max(j, i + 1)

    return [(words[run[0]][1], words[run[-1]][2]) for run in runs]


def _cue_forms(tokens: list[str]) -> set[str]:
    forms = set(tokens)
    for t in tokens:
        t = t.replace("’", "'")
        if t.endswith("'s"):
            forms.add(t[:-2])
        forms.add(t.rstrip("."))
    return forms


def _classify_cap_sequence(surface: str) -> str:
    tokens = surface.split()
    forms = _cue_forms(tokens)
    if forms & ORG_CUES:
        return "Organization"
    if forms & FACILITY_CUES:
        return "Facility"
    if forms & EVENT_CUES:
        return "Event"
    if tokens[0] in HONORIFICS or forms & GIVEN_NAMES:
        return "Person"
    if (
        surface in GEO_GAZETTEER_MULTI
        or tokens[-1] in GEO_GAZETTEER
        or forms & GEO_WORD_CUES
        or (len(tokens[-1]) > 5 and tokens[-1].lower().endswith(GEO_SUFFIXES))
    ):
        return "Location"
    return "Misc"


def extract_entities(text: str) -> list[EntitySpan]:
    """Deterministic rule cascade; output sorted, non-overlapping spans.

    Overlaps resolve longest-match left-to-right, rule priority breaking ties.
    """
    candidates: list[tuple[int, int, int, str]] = []  # (start, -len, priority, type)
    for priority, etype, pattern in _RULES:
        for m in pattern.finditer(text):
            candidates.append((m.start(), m.end(), priority, etype))
    for start, end in _cap_sequences(text):
        candidates.append((start, end, 8, _classify_cap_sequence(text[start:end])))

    candidates.sort(key=lambda c: (c[0], -(c[1] - c[0]), c[2]))
    selected: list[EntitySpan] = []
    last_end = 0
    for start, end, _, etype in candidates:
        if start < last_end:
            continue
        selected.append(
            EntitySpan(surface=text[start:end], char_start=start, char_end=end, entity_type=etype)
        )
        last_end = end
    return selected


def attach_token_positions(
    spans: Iterable[EntitySpan], tokenization: TokenizationWithOffsets
) -> list[EntitySpan]:
    out = []
    for span in spans:
        ts, te = map_to_token_positions((span.char_start, span.char_end), tokenization)
        out.append(replace(span, token_start=ts, token_end=te))
    return out


# ---------------------------------------------------------------------------
# Hard-negative mining
# ---------------------------------------------------------------------------

def _normalized_surface(text: str) -> str:
    return " ".join(text.lower().split())


def find_answer_entity(example: QAExample) -> EntitySpan | None:
    """The extracted entity whose character range equals the gold answer span."""
    if not example.answers:
        return None
    gold = example.answers[0]
    gold_range = (gold.answer_start, gold.answer_start + len(gold.text))
    for span in extract_entities(example.context):
        if (span.char_start, span.char_end) == gold_range:
            return span
    return None


def mine_hard_negatives(
    example: QAExample, max_negatives: int = MAX_NEGATIVES, with_token_positions: bool = True
) -> HardNegativeSet | None:
    """Same-type, surface-distinct context entities nearest the gold answer.

    Returns None when the gold answer is not recognized as an entity or no
    same-type alternative exists. Distance is |candidate.char_start -
    gold.char_start|, ties broken by position.
    """
    answer = find_answer_entity(example)
    if answer is None:
        return None
    norm_gold = _normalized_surface(answer.surface)
    candidates = []
    for span in extract_entities(example.context):
        if span.entity_type != answer.entity_type:
            continue
        if span.char_start < answer.char_end and span.char_end > answer.char_start:
            continue  # overlaps gold
        if _normalized_surface(span.surface) == norm_gold:
            continue
        candidates.append(span)
    if not candidates:
        return None
    candidates.sort(key=lambda s: (abs(s.char_start - answer.char_start), s.char_start))
    negatives = tuple(candidates[:max_negatives])
    if with_token_positions:
        tok = tokenize_with_offsets(example.context)
        answer = attach_token_positions([answer], tok)[0]
        negatives = tuple(attach_token_positions(negatives, tok))
    return HardNegativeSet(example_id=example.id, answer_span=answer, negatives=negatives)


@dataclass(frozen=True)
class EntityStats:
    n_examples: int
    n_entity_rich: int
    fraction_entity_rich: float
    mean_negatives_per_rich: float
    type_distribution: dict[str, int]


def mine_dataset(dataset: Dataset) -> tuple[Dataset, list[HardNegativeSet], EntityStats]:
    """Mine every example; returns the dataset with is_entity_rich flags set,
    the mined sets, and corpus statistics."""
    mined: list[HardNegativeSet] = []
    updated: list[QAExample] = []
    type_counts: dict[str, int] = {}
    for ex in dataset:
        hns = mine_hard_negatives(ex)
        if hns is None:
            updated.append(ex.with_fields(is_entity_rich=False) if ex.is_entity_rich else ex)
            continue
        mined.append(hns)
        updated.append(ex.with_fields(is_entity_rich=True))
        t = hns.answer_span.entity_type
        type_counts[t] = type_counts.get(t, 0) + 1
    n = len(dataset)
    n_rich = len(mined)
    mean_neg = (sum(len(h.negatives) for h in mined) / n_rich) if n_rich else 0.0
    stats = EntityStats(
        n_examples=n,
        n_entity_rich=n_rich,
        fraction_entity_rich=(n_rich / n) if n else 0.0,
        mean_negatives_per_rich=mean_neg,
        type_distribution=dict(sorted(type_counts.items())),
    )
    out = Dataset(examples=tuple(updated), source_label=dataset.source_label, version=dataset.version)
    return out, mined, stats
