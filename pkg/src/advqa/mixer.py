"""Ratio-controlled, seeded mixing of clean and adversarial datasets.

Ratio semantics: clean_fraction is the clean share of the mixed set. With an
explicit total, counts are round-half-up on the clean side and the adversarial
side takes the remainder. Without a total, all clean examples are used and the
adversarial count is solved from the ratio; if the adversarial pool is short,
the default keeps everything available and reports the achieved ratio instead
of upsampling.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass

from .corpus import Dataset, QAExample
from .errors import EmptyDataset, InsufficientData

WITHOUT_REPLACEMENT = "without_replacement"
WITH_REPLACEMENT_IF_SHORT = "with_replacement_if_short"


@dataclass(frozen=True)
class MixConfig:
    clean_fraction: float
    total_size: int | None = None
    seed: int = 0
    sampling: str = WITHOUT_REPLACEMENT

    def __post_init__(self):
        if not 0 < self.clean_fraction < 1:
            raise ValueError("clean_fraction must be in (0, 1)")
        if self.sampling not in (WITHOUT_REPLACEMENT, WITH_REPLACEMENT_IF_SHORT):
            raise ValueError(f"unknown sampling mode {self.sampling!r}")


@dataclass(frozen=True)
class MixStats:
    n_clean: int
    n_adversarial: int
    requested_clean_fraction: float
    achieved_clean_fraction: float
    total: int


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def _sample(pool: tuple[QAExample, ...], count: int, rng: random.Random, sampling: str):
    if count <= len(pool):
        return [pool[i] for i in sorted(rng.sample(range(len(pool)), count))]
    if sampling != WITH_REPLACEMENT_IF_SHORT:
        raise InsufficientData(
            f"need {count} examples but pool holds {len(pool)} (without replacement)"
        )
    picks = [pool[rng.randrange(len(pool))] for _ in range(count)]
    # resampling duplicates ids; suffix repeats so the Dataset invariant holds
    seen: dict[str, int] = {}
    out = []
    for ex in picks:
        n = seen.get(ex.id, 0)
        seen[ex.id] = n + 1
        out.append(ex if n == 0 else ex.with_fields(id=f"{ex.id}#r{n}"))
    return out


def _fisher_yates(items: list, rng: random.Random) -> list:
    out = list(items)
    for i in range(len(out) - 1, 0, -1):
        j = rng.randrange(i + 1)
        out[i], out[j] = out[j], out[i]
    return out


def _retag(example: QAExample, pool: str) -> QAExample:
    if pool == "clean":
        return example if example.origin == "clean" else example.with_fields(origin="clean")
    if example.origin == "clean":
        return example.with_fields(origin="addsent")
    return example


def mix(clean: Dataset, adversarial: Dataset, config: MixConfig) -> tuple[Dataset, MixStats]:
    """Seeded uniform sample of both pools at the configured ratio, shuffled."""
    if len(clean) == 0 or len(adversarial) == 0:
        raise EmptyDataset("both pools must be non-empty")
    rng = random.Random(config.seed)

    if config.total_size is not None:
        total = config.total_size
        n_clean = _round_half_up(config.clean_fraction * total)
        n_adv = total - n_clean
    else:
        n_clean = len(clean)
        adv_fraction = 1.0 - config.clean_fraction
        n_adv = _round_half_up(n_clean * adv_fraction / config.clean_fraction)
        if n_adv > len(adversarial) and config.sampling == WITHOUT_REPLACEMENT:
            n_adv = len(adversarial)  # keep all, report achieved ratio

    clean_part = [_retag(ex, "clean") for ex in _sample(clean.examples, n_clean, rng, config.sampling)]
    adv_part = [_retag(ex, "adv") for ex in _sample(adversarial.examples, n_adv, rng, config.sampling)]
    mixed = _fisher_yates(clean_part + adv_part, rng)
    total = len(mixed)
    stats = MixStats(
        n_clean=n_clean,
        n_adversarial=n_adv,
        requested_clean_fraction=config.clean_fraction,
        achieved_clean_fraction=n_clean / total if total else 0.0,
        total=total,
    )
    label = f"mix-{config.clean_fraction:g}"
    return Dataset(examples=tuple(mixed), source_label=label, version=clean.version), stats


def _derived_seed(seed: int, ratio: float) -> int:
    digest = hashlib.sha256(f"{seed}:{ratio:.6f}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def mix_sweep(
    clean: Dataset,
    adversarial: Dataset,
    ratios: list[float],
    seed: int = 0,
    total_size: int | None = None,
    sampling: str = WITHOUT_REPLACEMENT,
) -> list[tuple[float, Dataset, MixStats]]:
    """One mix per clean fraction, each with an independent derived seed."""
    out = []
    for ratio in ratios:
        config = MixConfig(
            clean_fraction=ratio,
            total_size=total_size,
            seed=_derived_seed(seed, ratio),
            sampling=sampling,
        )
        mixed, stats = mix(clean, adversarial, config)
        out.append((ratio, mixed, stats))
    return out
