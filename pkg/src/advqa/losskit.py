"""Weighted span cross-entropy, contrastive ranking loss, and their convex
combination, with analytic gradients verified against central finite
differences. Includes a desk-scale linear span scorer (toy_train) driven by
the toolkit's own featurization.

All arithmetic is float64; log-sum-exp uses max-shift. Batch reductions go
through math.fsum so evaluation order cannot change results.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

import numpy as np

from .corpus import Dataset, QAExample
from .entity import (
    extract_entities,
    map_to_token_positions,
    mine_hard_negatives,
    split_sentences,
    tokenize_with_offsets,
)
from .errors import (
    DivergenceDetected,
    EmptyBatch,
    NonFiniteInput,
    OutOfBounds,
    UnmappableSpan,
)
from .metrics import exact_match, normalize_answer
from .taxonomy import classify_question_type

Span = tuple  # (start_index, end_index)


@dataclass
class SpanExample:
    """Start/end logits plus gold span, loss weight, and hard-negative spans."""

    start_logits: np.ndarray
    end_logits: np.ndarray
    gold: tuple[int, int]
    weight: float = 1.0
    negatives: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        self.start_logits = np.asarray(self.start_logits, dtype=np.float64)
        self.end_logits = np.asarray(self.end_logits, dtype=np.float64)
        if self.start_logits.shape != self.end_logits.shape or self.start_logits.ndim != 1:
            raise ValueError("start/end logits must be 1-D vectors of equal length")
        length = self.start_logits.shape[0]
        for s, e in (self.gold, *self.negatives):
            if not (0 <= s < length and 0 <= e < length):
                raise OutOfBounds(f"span ({s},{e}) out of bounds for length {length}")
        for neg in self.negatives:
            if tuple(neg) == tuple(self.gold):
                raise ValueError("negative span equals the gold span; dedup upstream")


SpanLogitsBatch = list  # list[SpanExample]


@dataclass(frozen=True)
class LossConfig:
    alpha: float = 0.5
    negation_weight: float = 3.0
    entity_weight: float = 2.5

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")


def _check_finite(*arrays: np.ndarray):
    for arr in arrays:
        if not np.all(np.isfinite(arr)):
            raise NonFiniteInput("logits contain NaN or infinity")


def _log_softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max()
    return shifted - math.log(np.exp(shifted).sum())


def qa_ce_loss(
    start_logits: np.ndarray, end_logits: np.ndarray, gold: tuple[int, int]
) -> tuple[float, tuple[np.ndarray, np.ndarray]]:
    """-log softmax(start)[pos_start] - log softmax(end)[pos_end].

    Gradient per head is softmax(logits) - one_hot(pos).
    """
    start_logits = np.asarray(start_logits, dtype=np.float64)
    end_logits = np.asarray(end_logits, dtype=np.float64)
    _check_finite(start_logits, end_logits)
    ps, pe = gold
    for pos, vec in ((ps, start_logits), (pe, end_logits)):
        if not 0 <= pos < vec.shape[0]:
            raise OutOfBounds(f"gold position {pos} out of bounds")
    ls, le = _log_softmax(start_logits), _log_softmax(end_logits)
    value = -(ls[ps] + le[pe])
    grad_start = np.exp(ls)
    grad_start[ps] -= 1.0
    grad_end = np.exp(le)
    grad_end[pe] -= 1.0
    return float(value), (grad_start, grad_end)


def weighted_batch_loss(
    batch: SpanLogitsBatch, config: LossConfig | None = None
) -> tuple[float, list[tuple[np.ndarray, np.ndarray]]]:
    """(1/N) sum_i w_i (l_start_i + l_end_i); gradients scale by w_i/N."""
    del config  # weights ride on the examples; the signature mirrors total_loss
    if not batch:
        raise EmptyBatch("weighted_batch_loss needs at least one example")
    n = len(batch)
    values = []
    grads = []
    for ex in batch:
        value, (gs, ge) = qa_ce_loss(ex.start_logits, ex.end_logits, ex.gold)
        values.append(ex.weight * value)
        grads.append((gs * (ex.weight / n), ge * (ex.weight / n)))
    return math.fsum(values) / n, grads


def span_score(start_logits: np.ndarray, end_logits: np.ndarray, span: tuple[int, int]) -> float:
    """logit_start[span_start] + logit_end[span_end]."""
    start_logits = np.asarray(start_logits, dtype=np.float64)
    end_logits = np.asarray(end_logits, dtype=np.float64)
    s, e = span
    if not (0 <= s < start_logits.shape[0] and 0 <= e < end_logits.shape[0]):
        raise OutOfBounds(f"span ({s},{e}) out of bounds")
    return float(start_logits[s] + end_logits[e])


def contrastive_loss(
    example: SpanExample,
) -> tuple[float, tuple[np.ndarray, np.ndarray]]:
    """-log exp(S_gold) / (exp(S_gold) + sum_i exp(S_neg_i)).

    No negatives means zero loss and zero gradient. Gradients touch exactly
    the indexed logit positions of the gold and negative spans.
    """
    _check_finite(example.start_logits, example.end_logits)
    grad_start = np.zeros_like(example.start_logits)
    grad_end = np.zeros_like(example.end_logits)
    if not example.negatives:
        return 0.0, (grad_start, grad_end)
    spans = [tuple(example.gold)] + [tuple(n) for n in example.negatives]
    scores = np.array(
        [span_score(example.start_logits, example.end_logits, sp) for sp in spans]
    )
    shifted = scores - scores.max()
    probs = np.exp(shifted)
    probs /= probs.sum()
    value = math.log(np.exp(shifted).sum()) + scores.max() - scores[0]
    coefs = probs.copy()
    coefs[0] -= 1.0
    for coef, (s, e) in zip(coefs, spans):
        grad_start[s] += coef
        grad_end[e] += coef
    return float(value), (grad_start, grad_end)


def total_loss(
    batch: SpanLogitsBatch, config: LossConfig
) -> tuple[float, list[tuple[np.ndarray, np.ndarray]]]:
    """(1 - alpha) * weighted QA loss + alpha * mean contrastive loss over
    entity-rich examples (examples without negatives contribute nothing)."""
    qa_value, qa_grads = weighted_batch_loss(batch)
    rich = [i for i, ex in enumerate(batch) if ex.negatives]
    con_value = 0.0
    con_grads: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    if rich:
        values = []
        for i in rich:
            v, g = contrastive_loss(batch[i])
            values.append(v)
            con_grads[i] = g
        con_value = math.fsum(values) / len(rich)
    alpha = config.alpha
    value = (1.0 - alpha) * qa_value + alpha * con_value
    grads = []
    for i, (gs, ge) in enumerate(qa_grads):
        out_s = (1.0 - alpha) * gs
        out_e = (1.0 - alpha) * ge
        if i in con_grads:
            cs, ce = con_grads[i]
            out_s = out_s + (alpha / len(rich)) * cs
            out_e = out_e + (alpha / len(rich)) * ce
        grads.append((out_s, out_e))
    return value, grads


# ---------------------------------------------------------------------------
# Finite-difference verification
# ---------------------------------------------------------------------------

def finite_difference_grads(loss_fn, batch: SpanLogitsBatch, h: float = 1e-5):
    """Central finite differences of loss_fn(batch) w.r.t. every logit."""
    grads = []
    for ex in batch:
        gs = np.zeros_like(ex.start_logits)
        ge = np.zeros_like(ex.end_logits)
        for vec, grad in ((ex.start_logits, gs), (ex.end_logits, ge)):
            for k in range(vec.shape[0]):
                orig = vec[k]
                vec[k] = orig + h
                up = loss_fn(batch)
                vec[k] = orig - h
                down = loss_fn(batch)
                vec[k] = orig
                grad[k] = (up - down) / (2 * h)
        grads.append((gs, ge))
    return grads


def max_relative_error(analytic, numeric, zero_scale: float = 1e-6, zero_tol: float = 1e-8) -> float:
    """Max over coordinates of |a-f|/max(|a|,|f|); coordinates where both are
    below zero_scale must agree to zero_tol absolutely."""
    worst = 0.0
    for (a_s, a_e), (f_s, f_e) in zip(analytic, numeric):
        for a, f in ((a_s, f_s), (a_e, f_e)):
            a = np.asarray(a).ravel()
            f = np.asarray(f).ravel()
            denom = np.maximum(np.abs(a), np.abs(f))
            small = denom < zero_scale
            if np.any(np.abs(a[small] - f[small]) > zero_tol):
                return math.inf
            big = ~small
            if np.any(big):
                worst = max(worst, float(np.max(np.abs(a[big] - f[big]) / denom[big])))
    return worst


def _random_span_example(rng: random.Random, with_negatives: bool) -> SpanExample:
    length = rng.randint(4, 8)
    start = np.array([rng.uniform(-2, 2) for _ in range(length)])
    end = np.array([rng.uniform(-2, 2) for _ in range(length)])
    gold = (rng.randrange(length), rng.randrange(length))
    negatives = []
    if with_negatives:
        target = rng.randint(1, min(5, length))
        attempts = 0
        while len(negatives) < target and attempts < 50:
            attempts += 1
            cand = (rng.randrange(length), rng.randrange(length))
            if cand != gold and cand not in negatives:
                negatives.append(cand)
    weight = rng.choice([1.0, 2.5, 3.0])
    return SpanExample(start, end, gold, weight=weight, negatives=tuple(negatives))


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def run_verification(seed: int = 0, n_instances: int = 100) -> list[CheckResult]:
    """Gradient and invariant suite; one result per property."""
    rng = random.Random(seed)
    results = []

    def fd_check(name, make_batch, loss_value_fn, analytic_fn):
        worst = 0.0
        for _ in range(n_instances):
            batch = make_batch()
            analytic = analytic_fn(batch)
            numeric = finite_difference_grads(loss_value_fn, batch)
            worst = max(worst, max_relative_error(analytic, numeric))
        results.append(
            CheckResult(name, worst <= 1e-6, f"max relative error {worst:.3e} over {n_instances} instances")
        )

    fd_check(
        "qa_ce_loss gradient",
        lambda: [_random_span_example(rng, with_negatives=False)],
        lambda b: qa_ce_loss(b[0].start_logits, b[0].end_logits, b[0].gold)[0],
        lambda b: [qa_ce_loss(b[0].start_logits, b[0].end_logits, b[0].gold)[1]],
    )
    fd_check(
        "weighted_batch_loss gradient",
        lambda: [_random_span_example(rng, with_negatives=False) for _ in range(rng.randint(2, 4))],
        lambda b: weighted_batch_loss(b)[0],
        lambda b: weighted_batch_loss(b)[1],
    )
    fd_check(
        "contrastive_loss gradient",
        lambda: [_random_span_example(rng, with_negatives=True)],
        lambda b: contrastive_loss(b[0])[0],
        lambda b: [contrastive_loss(b[0])[1]],
    )
    config = LossConfig(alpha=rng.uniform(0.1, 0.9))
    fd_check(
        "total_loss gradient",
        lambda: [
            _random_span_example(rng, with_negatives=bool(i % 2))
            for i in range(rng.randint(2, 4))
        ],
        lambda b: total_loss(b, config)[0],
        lambda b: total_loss(b, config)[1],
    )

    # closed forms
    uniform = SpanExample(np.zeros(4), np.zeros(4), (1, 2))
    value, _ = qa_ce_loss(uniform.start_logits, uniform.end_logits, uniform.gold)
    results.append(
        CheckResult(
            "uniform-logit CE equals 2 ln L",
            abs(value - 2 * math.log(4)) < 1e-12,
            f"value {value!r}",
        )
    )
    peaked_start = np.zeros(4)
    peaked_start[2] = 50.0
    peaked_end = np.zeros(4)
    peaked_end[3] = 50.0
    value, _ = qa_ce_loss(peaked_start, peaked_end, (2, 3))
    results.append(CheckResult("peaked-logit CE approaches zero", value < 1e-20, f"value {value!r}"))

    flat = SpanExample(np.zeros(8), np.zeros(8), (0, 0), negatives=((1, 1), (2, 2), (3, 3), (4, 4), (5, 5)))
    value, _ = contrastive_loss(flat)
    results.append(
        CheckResult(
            "uniform-score contrastive with N=5 equals ln 6",
            abs(value - math.log(6)) < 1e-12,
            f"value {value!r}",
        )
    )
    empty = SpanExample(np.zeros(4), np.zeros(4), (0, 0))
    value, (gs, ge) = contrastive_loss(empty)
    results.append(
        CheckResult(
            "contrastive with N=0 is exactly zero",
            value == 0.0 and not gs.any() and not ge.any(),
            f"value {value!r}",
        )
    )

    batch = [_random_span_example(rng, with_negatives=bool(i % 2)) for i in range(4)]
    qa_only, _ = total_loss(batch, LossConfig(alpha=0.0))
    qa_ref, _ = weighted_batch_loss(batch)
    con_only, _ = total_loss(batch, LossConfig(alpha=1.0))
    rich = [ex for ex in batch if ex.negatives]
    con_ref = math.fsum(contrastive_loss(ex)[0] for ex in rich) / len(rich)
    results.append(
        CheckResult(
            "alpha boundary identities",
            abs(qa_only - qa_ref) < 1e-12 and abs(con_only - con_ref) < 1e-12,
            f"alpha=0 delta {abs(qa_only - qa_ref):.3e}, alpha=1 delta {abs(con_only - con_ref):.3e}",
        )
    )

    # shift invariance: adding a constant to every logit changes nothing
    shifted_ok = True
    for _ in range(20):
        ex = _random_span_example(rng, with_negatives=True)
        c = rng.uniform(-5, 5)
        moved = SpanExample(
            ex.start_logits + c, ex.end_logits + c, ex.gold, ex.weight, ex.negatives
        )
        v1, _ = qa_ce_loss(ex.start_logits, ex.end_logits, ex.gold)
        v2, _ = qa_ce_loss(moved.start_logits, moved.end_logits, moved.gold)
        c1, _ = contrastive_loss(ex)
        c2, _ = contrastive_loss(moved)
        if abs(v1 - v2) > 1e-10 or abs(c1 - c2) > 1e-10:
            shifted_ok = False
    results.append(CheckResult("shift invariance (1e-10)", shifted_ok, "20 random shifts"))

    # linearity in per-example weights
    base = [_random_span_example(rng, with_negatives=False) for _ in range(3)]
    for ex in base:
        ex.weight = 1.0
    v1, g1 = weighted_batch_loss(base)
    base[0].weight = 3.0
    v3, g3 = weighted_batch_loss(base)
    per0 = qa_ce_loss(base[0].start_logits, base[0].end_logits, base[0].gold)[0]
    lin_ok = abs((v3 - v1) - 2 * per0 / 3) < 1e-12 and np.allclose(
        g3[0][0], 3 * g1[0][0], rtol=0, atol=1e-12
    )
    results.append(CheckResult("weight linearity", lin_ok, "w=1 vs w=3 on one example"))

    # order independence of batch reduction
    batch = [_random_span_example(rng, with_negatives=bool(i % 3)) for i in range(16)]
    cfg = LossConfig(alpha=0.5)
    v_fwd, _ = total_loss(batch, cfg)
    shuffled = batch[::-1]
    v_rev, _ = total_loss(shuffled, cfg)
    results.append(
        CheckResult(
            "order independence (1e-12)",
            abs(v_fwd - v_rev) <= 1e-12,
            f"delta {abs(v_fwd - v_rev):.3e}",
        )
    )
    return results


# ---------------------------------------------------------------------------
# Toy linear span scorer
# ---------------------------------------------------------------------------

N_FEATURES = 8

_EXPECTED_TYPES = {
    "Who": {"Person"},
    "Where": {"Location", "Facility"},
    "When": {"Date", "Year", "Time"},
    "Number": {"Number", "Money", "Percent", "Ordinal", "Year"},
}


@dataclass
class FeaturizedExample:
    example: QAExample
    phi: np.ndarray  # (L, N_FEATURES)
    offsets: tuple[tuple[int, int], ...]
    gold: tuple[int, int]
    negatives: tuple[tuple[int, int], ...]
    weight: float


def featurize(example: QAExample) -> FeaturizedExample | None:
    """Fixed per-token feature map feeding the linear scorer.

    Features: bias; question-token overlap; +/-3-token window overlap with
    question content; entity span of the question's expected answer type;
    inside any entity span; inside a distractor span; relative position;
    sentence-question Jaccard overlap.
    """
    tok = tokenize_with_offsets(example.context)
    length = len(tok.tokens)
    if length == 0:
        return None
    q_tokens = set(normalize_answer(example.question))
    expected = _EXPECTED_TYPES.get(classify_question_type(example.question), set())
    entities = extract_entities(example.context)
    sentences = split_sentences(example.context)

    in_entity = np.zeros(length)
    type_match = np.zeros(length)
    entity_ranges = []
    for span in entities:
        try:
            ts, te = map_to_token_positions((span.char_start, span.char_end), tok)
        except UnmappableSpan:
            continue
        entity_ranges.append((ts, te, span.entity_type))
    for ts, te, etype in entity_ranges:
        in_entity[ts : te + 1] = 1.0
        if not expected or etype in expected:
            type_match[ts : te + 1] = 1.0

    inside_distractor = np.zeros(length)
    for ds, de in example.distractor_spans:
        for t, (cs, ce) in enumerate(tok.offsets):
            if cs < de and ce > ds:
                inside_distractor[t] = 1.0

    norm_tokens = [normalize_answer(t) for t in tok.tokens]
    overlap = np.array(
        [1.0 if nt and nt[0] in q_tokens else 0.0 for nt in norm_tokens]
    )
    window = np.zeros(length)
    for t in range(length):
        lo, hi = max(0, t - 3), min(length, t + 4)
        window[t] = min(1.0, overlap[lo:hi].sum() / 3.0)

    sent_overlap = np.zeros(length)
    sent_cache = {}
    for t, (cs, _) in enumerate(tok.offsets):
        idx = next((i for i, (s, e) in enumerate(sentences) if s <= cs < e), 0)
        if idx not in sent_cache:
            s, e = sentences[idx] if sentences else (0, len(example.context))
            stoks = set(normalize_answer(example.context[s:e]))
            union = stoks | q_tokens
            sent_cache[idx] = len(stoks & q_tokens) / len(union) if union else 0.0
        sent_overlap[t] = sent_cache[idx]

    rel_pos = np.arange(length) / length
    phi = np.stack(
        [np.ones(length), overlap, window, type_match, in_entity, inside_distractor, rel_pos, sent_overlap],
        axis=1,
    )

    if example.answers:
        ans = example.answers[0]
        try:
            gold = map_to_token_positions((ans.answer_start, ans.answer_start + len(ans.text)), tok)
        except UnmappableSpan:
            return None
    else:
        gold = (0, 0)

    negatives: list[tuple[int, int]] = []
    hns = mine_hard_negatives(example)
    if hns is not None:
        for neg in hns.negatives:
            if neg.token_start is None:
                continue
            span = (neg.token_start, neg.token_end)
            if span != gold and span not in negatives:
                negatives.append(span)

    return FeaturizedExample(
        example=example,
        phi=phi,
        offsets=tok.offsets,
        gold=gold,
        negatives=tuple(negatives),
        weight=example.loss_weight,
    )


@dataclass(frozen=True)
class TrainHyper:
    epochs: int = 30
    lr: float = 0.5
    batch_size: int = 16
    seed: int = 0
    max_answer_tokens: int = 20


@dataclass
class TrainReport:
    alpha: float
    epochs: int
    train_losses: list[float]
    eval_em: float
    ranking_accuracy: float
    n_train: int
    n_eval: int
    n_eval_entity_rich: int


def _logits(fx: FeaturizedExample, w_start: np.ndarray, w_end: np.ndarray):
    return fx.phi @ w_start, fx.phi @ w_end


def _best_span(start: np.ndarray, end: np.ndarray, max_len: int) -> tuple[int, int]:
    length = start.shape[0]
    best, best_score = (0, 0), -math.inf
    for s in range(length):
        hi = min(length, s + max_len)
        e = s + int(np.argmax(end[s:hi]))
        score = start[s] + end[e]
        if score > best_score:
            best, best_score = (s, e), score
    return best


def toy_train(
    train_set: Dataset,
    eval_set: Dataset,
    config: LossConfig,
    hyper: TrainHyper = TrainHyper(),
) -> TrainReport:
    """Seeded mini-batch gradient descent of a linear start/end scorer on
    total_loss; reports the loss curve, eval EM, and hard-negative ranking
    accuracy over entity-rich eval examples."""
    train = [fx for fx in (featurize(ex) for ex in train_set) if fx is not None]
    eval_fx = [fx for fx in (featurize(ex) for ex in eval_set) if fx is not None]
    if not train:
        raise EmptyBatch("no featurizable training examples")

    w_start = np.zeros(N_FEATURES)
    w_end = np.zeros(N_FEATURES)
    rng = random.Random(hyper.seed)
    order = list(range(len(train)))
    losses: list[float] = []

    def epoch_loss() -> float:
        batch = [
            SpanExample(*_logits(fx, w_start, w_end), fx.gold, fx.weight, fx.negatives)
            for fx in train
        ]
        value, _ = total_loss(batch, config)
        return value

    losses.append(epoch_loss())
    for _ in range(hyper.epochs):
        rng.shuffle(order)
        for lo in range(0, len(order), hyper.batch_size):
            chunk = [train[i] for i in order[lo : lo + hyper.batch_size]]
            batch = [
                SpanExample(*_logits(fx, w_start, w_end), fx.gold, fx.weight, fx.negatives)
                for fx in chunk
            ]
            _, grads = total_loss(batch, config)
            g_ws = np.zeros(N_FEATURES)
            g_we = np.zeros(N_FEATURES)
            for fx, (gs, ge) in zip(chunk, grads):
                g_ws += fx.phi.T @ gs
                g_we += fx.phi.T @ ge
            w_start -= hyper.lr * g_ws
            w_end -= hyper.lr * g_we
        value = epoch_loss()
        if not math.isfinite(value):
            raise DivergenceDetected(f"non-finite loss after epoch {len(losses)}")
        losses.append(value)

    # evaluation
    hits = 0
    rank_hits = 0
    rank_total = 0
    for fx in eval_fx:
        start, end = _logits(fx, w_start, w_end)
        pred_span = _best_span(start, end, hyper.max_answer_tokens)
        cs = fx.offsets[pred_span[0]][0]
        ce = fx.offsets[pred_span[1]][1]
        prediction = fx.example.context[cs:ce]
        golds = [a.text for a in fx.example.answers]
        hits += exact_match(prediction, golds)
        if fx.negatives:
            rank_total += 1
            gold_score = span_score(start, end, fx.gold)
            neg_score = max(span_score(start, end, n) for n in fx.negatives)
            rank_hits += int(gold_score > neg_score)

    return TrainReport(
        alpha=config.alpha,
        epochs=hyper.epochs,
        train_losses=losses,
        eval_em=100.0 * hits / len(eval_fx) if eval_fx else 0.0,
        ranking_accuracy=rank_hits / rank_total if rank_total else 0.0,
        n_train=len(train),
        n_eval=len(eval_fx),
        n_eval_entity_rich=rank_total,
    )
