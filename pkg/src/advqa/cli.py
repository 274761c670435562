"""Unified command-line entry point.

Subcommands are pipe-composable (file in, file out), deterministic given
(inputs, flags, seed), and never touch the network. Diagnostics go to stderr;
data goes to files or stdout. Exit codes: 0 success, 1 usage error, 2 data
error. ADVQA_SEED serves as the seed fallback when --seed is absent.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import os
import sys
from pathlib import Path

from . import attacks, corpus, entity, losskit, metrics, mixer, taxonomy
from .errors import AdvQAError, UnsupportedFormat

REPORT_FORMATS = ("json", "csv", "markdown")


class _Parser(argparse.ArgumentParser):
    """argparse defaults to exit code 2 on usage errors; the contract says 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _resolve_seed(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("ADVQA_SEED")
    return int(env) if env else 0


def _load_dataset(path: str, strict: bool = False) -> corpus.Dataset:
    raw = Path(path).read_bytes()
    if path.endswith(".jsonl"):
        return corpus.read_augmented(raw)
    return corpus.parse_squad(raw, strict=strict)


def _dump_json(obj, path: str | None):
    text = json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _asdict(obj):
    return dataclasses.asdict(obj)


# ---------------------------------------------------------------------------
# Taxonomy report rendering
# ---------------------------------------------------------------------------

def taxonomy_report_to_dict(report: taxonomy.TaxonomyReport) -> dict:
    def stats(d):
        return {label: {"total": t, "correct": c} for label, (t, c) in d.items()}

    return {
        "n_examples": report.n_examples,
        "n_errors": report.n_errors,
        "question_type": stats(report.question_type),
        "answer_type": stats(report.answer_type),
        "complexity": stats(report.complexity),
        "error_type_counts": dict(report.error_type_counts),
        "pattern_counts": dict(report.pattern_counts),
        "cooccurrence": report.cooccurrence,
    }


def _fold_question_type(stats: dict) -> dict:
    """The canonical question-type table carries no When row."""
    folded: dict[str, dict] = {}
    for label, cell in stats.items():
        target = taxonomy.fold_question_type(label)
        slot = folded.setdefault(target, {"total": 0, "correct": 0})
        slot["total"] += cell["total"]
        slot["correct"] += cell["correct"]
    return folded


def _accuracy_rows(stats: dict) -> list[tuple[str, int, int, float]]:
    rows = [
        (label, cell["total"], cell["correct"],
         metrics.display_round(100.0 * cell["correct"] / cell["total"]) if cell["total"] else 0.0)
        for label, cell in stats.items()
    ]
    rows.sort(key=lambda r: (-r[1], r[0]))
    return rows


def _count_rows(counts: dict, denominator: int) -> list[tuple[str, int, float]]:
    rows = [
        (label, count, metrics.display_round(100.0 * count / denominator) if denominator else 0.0)
        for label, count in counts.items()
    ]
    rows.sort(key=lambda r: (-r[1], r[0]))
    return rows


_SCHEME_TITLES = {
    "question_type": "Performance by Question Type",
    "answer_type": "Performance by Answer Type",
    "complexity": "Performance by Question Complexity",
    "error_type": "Error Type Distribution",
    "patterns": "Linguistic Patterns",
}


def _report_tables(analysis: dict) -> list[tuple[str, list[str], list[tuple]]]:
    n_errors = analysis["n_errors"]
    tables = []
    for key, stats in (
        ("question_type", _fold_question_type(analysis["question_type"])),
        ("answer_type", analysis["answer_type"]),
        ("complexity", analysis["complexity"]),
    ):
        tables.append(
            (_SCHEME_TITLES[key], ["Type", "Total", "Correct", "Accuracy (%)"], _accuracy_rows(stats))
        )
    tables.append(
        (
            _SCHEME_TITLES["error_type"],
            ["Error Type", "Count", "%"],
            _count_rows(analysis["error_type_counts"], n_errors),
        )
    )
    tables.append(
        (
            _SCHEME_TITLES["patterns"],
            ["Pattern", "Count", "%"],
            _count_rows(analysis["pattern_counts"], n_errors),
        )
    )
    return tables


def emit_report(analysis: dict, fmt: str) -> bytes:
    """Render an analysis artifact as json/csv/markdown; deterministic bytes."""
    if fmt == "json":
        return (json.dumps(analysis, indent=2, sort_keys=True, ensure_ascii=False) + "\n").encode("utf-8")
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["scheme", "label", "total", "correct", "accuracy_pct", "count", "pct"])
        for title, header, rows in _report_tables(analysis):
            scheme = title
            if len(header) == 4:
                for label, total, correct, acc in rows:
                    writer.writerow([scheme, label, total, correct, f"{acc:.2f}", "", ""])
            else:
                for label, count, pct in rows:
                    writer.writerow([scheme, label, "", "", "", count, f"{pct:.2f}"])
        return buf.getvalue().encode("utf-8")
    if fmt == "markdown":
        lines = []
        for title, header, rows in _report_tables(analysis):
            lines.append(f"## {title}")
            lines.append("")
            lines.append("| " + " | ".join(header) + " |")
            lines.append("|" + "|".join(" --- " for _ in header) + "|")
            for row in rows:
                cells = [str(c) if not isinstance(c, float) else f"{c:.2f}" for c in row]
                lines.append("| " + " | ".join(cells) + " |")
            lines.append("")
        return ("\n".join(lines)).encode("utf-8")
    raise UnsupportedFormat(f"unknown report format {fmt!r}")


def _write_scheme_csvs(analysis: dict, out_dir: str):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    n_errors = analysis["n_errors"]

    def write(name, header, rows):
        with open(out / name, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(rows)

    write(
        "question_type.csv",
        ["Type", "Total", "Correct", "Accuracy (%)"],
        [(l, t, c, f"{a:.2f}") for l, t, c, a in _accuracy_rows(_fold_question_type(analysis["question_type"]))],
    )
    write(
        "answer_type.csv",
        ["Type", "Total", "Correct", "Accuracy (%)"],
        [(l, t, c, f"{a:.2f}") for l, t, c, a in _accuracy_rows(analysis["answer_type"])],
    )
    write(
        "complexity.csv",
        ["Type", "Total", "Correct", "Accuracy (%)"],
        [(l, t, c, f"{a:.2f}") for l, t, c, a in _accuracy_rows(analysis["complexity"])],
    )
    write(
        "error_type.csv",
        ["Error Type", "Count", "%"],
        [(l, n, f"{p:.2f}") for l, n, p in _count_rows(analysis["error_type_counts"], n_errors)],
    )
    write(
        "patterns.csv",
        ["Pattern", "Count", "%"],
        [(l, n, f"{p:.2f}") for l, n, p in _count_rows(analysis["pattern_counts"], n_errors)],
    )
    # pattern distribution for external plotting
    write(
        "pattern_distribution.csv",
        ["Pattern", "Count", "%"],
        [(l, n, f"{p:.2f}") for l, n, p in _count_rows(analysis["pattern_counts"], n_errors)],
    )
    cooc = analysis["cooccurrence"]
    order = list(taxonomy.PATTERNS)
    with open(out / "pattern_cooccurrence.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["Pattern"] + order)
        for p in order:
            writer.writerow([p] + [cooc[p][q] for q in order])


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_parse_stats(args) -> int:
    dataset = _load_dataset(args.dataset, strict=args.strict)
    origins: dict[str, int] = {}
    attack_types: dict[str, int] = {}
    weights: dict[str, int] = {}
    n_impossible = 0
    for ex in dataset:
        origins[ex.origin] = origins.get(ex.origin, 0) + 1
        if ex.attack_type:
            attack_types[ex.attack_type] = attack_types.get(ex.attack_type, 0) + 1
        key = f"{ex.loss_weight:g}"
        weights[key] = weights.get(key, 0) + 1
        n_impossible += ex.is_impossible
    _dump_json(
        {
            "n_examples": len(dataset),
            "n_impossible": n_impossible,
            "origins": origins,
            "attack_types": attack_types,
            "loss_weights": weights,
            "all_offsets_valid": True,  # construction enforces the invariant
        },
        args.out,
    )
    return 0


def _cmd_evaluate(args) -> int:
    dataset = _load_dataset(args.dataset, strict=args.strict)
    predictions = corpus.parse_predictions(Path(args.predictions).read_bytes(), strict=args.strict)
    report = metrics.evaluate(dataset, predictions)
    if args.per_example:
        with open(args.per_example, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["id", "em", "f1", "predicted", "gold"])
            for ex_id in sorted(report.per_example):
                s = report.per_example[ex_id]
                writer.writerow([ex_id, s.em, f"{s.f1:.6f}", s.predicted, " || ".join(s.gold_list)])
    _dump_json(
        {
            "em": metrics.display_round(report.em),
            "f1": metrics.display_round(report.f1),
            "n": report.n_examples,
        },
        args.out,
    )
    return 0


def _cmd_analyze_errors(args) -> int:
    dataset = _load_dataset(args.dataset, strict=args.strict)
    predictions = corpus.parse_predictions(Path(args.predictions).read_bytes(), strict=args.strict)
    report = taxonomy.analyze(dataset, predictions)
    analysis = taxonomy_report_to_dict(report)
    _dump_json(analysis, args.out)
    if args.csv_dir:
        _write_scheme_csvs(analysis, args.csv_dir)
    return 0


def _attack_config(args) -> attacks.AttackConfig:
    templates = dict(attacks.DEFAULT_TEMPLATES)
    target_counts = None
    rate = args.rate
    if getattr(args, "config", None):
        overrides = json.loads(Path(args.config).read_text(encoding="utf-8"))
        templates.update(overrides.get("templates", {}))
        target_counts = overrides.get("target_counts")
        if rate is None and "rate" in overrides:
            rate = float(overrides["rate"])
    enabled = tuple(args.attacks.split(",")) if args.attacks else attacks.DISTRACTOR_ATTACKS
    return attacks.AttackConfig(
        enabled=enabled,
        augmentation_rate=rate if rate is not None else 0.40,
        seed=_resolve_seed(args.seed),
        templates=templates,
        target_counts=target_counts,
    )


def _cmd_augment(args) -> int:
    dataset = _load_dataset(args.dataset, strict=args.strict)
    config = _attack_config(args)
    augmented, report = attacks.run_augmentation(dataset, config)
    Path(args.out).write_bytes(corpus.write_augmented(augmented))
    if args.report:
        _dump_json(_asdict(report), args.report)
    print(f"wrote {len(augmented)} examples to {args.out}", file=sys.stderr)
    return 0


def _cmd_pairs_negation(args) -> int:
    dataset = _load_dataset(args.dataset, strict=args.strict)
    output, report = attacks.gen_negation_pairs(
        dataset, rate=args.rate, seed=_resolve_seed(args.seed)
    )
    Path(args.out).write_bytes(corpus.write_augmented(output))
    if args.report:
        _dump_json(_asdict(report), args.report)
    print(f"wrote {len(output)} examples to {args.out}", file=sys.stderr)
    return 0


def _cmd_mine_negatives(args) -> int:
    dataset = _load_dataset(args.dataset, strict=args.strict)
    _, mined, stats = entity.mine_dataset(dataset)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            for hns in mined:
                fh.write(json.dumps(_asdict(hns), sort_keys=True, ensure_ascii=False) + "\n")
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["entity_type", "count", "%"])
            total = sum(stats.type_distribution.values()) or 1
            rows = sorted(stats.type_distribution.items(), key=lambda kv: (-kv[1], kv[0]))
            for etype, count in rows:
                writer.writerow([etype, count, f"{100.0 * count / total:.2f}"])
    _dump_json(_asdict(stats), None)
    return 0


def _parse_ratio(text: str) -> float:
    if "-" in text:
        clean, adv = text.split("-", 1)
        return float(clean) / (float(clean) + float(adv))
    return float(text)


def _cmd_mix(args) -> int:
    clean = _load_dataset(args.clean, strict=args.strict)
    adversarial = _load_dataset(args.adversarial, strict=args.strict)
    sampling = mixer.WITH_REPLACEMENT_IF_SHORT if args.allow_replacement else mixer.WITHOUT_REPLACEMENT
    config = mixer.MixConfig(
        clean_fraction=_parse_ratio(args.ratio),
        total_size=args.total,
        seed=_resolve_seed(args.seed),
        sampling=sampling,
    )
    mixed, stats = mixer.mix(clean, adversarial, config)
    Path(args.out).write_bytes(corpus.write_augmented(mixed))
    _dump_json(_asdict(stats), None)
    return 0


def _cmd_loss_check(args) -> int:
    results = losskit.run_verification(seed=_resolve_seed(args.seed), n_instances=args.instances)
    failed = False
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"{status}  {res.name}: {res.detail}")
        failed = failed or not res.passed
    return 2 if failed else 0


def _cmd_toy_train(args) -> int:
    train_set = _load_dataset(args.train, strict=args.strict)
    eval_set = _load_dataset(args.eval, strict=args.strict)
    config = losskit.LossConfig(alpha=args.alpha)
    hyper = losskit.TrainHyper(
        epochs=args.epochs, lr=args.lr, batch_size=args.batch_size, seed=_resolve_seed(args.seed)
    )
    report = losskit.toy_train(train_set, eval_set, config, hyper)
    if args.curve:
        with open(args.curve, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["epoch", "train_loss"])
            for epoch, value in enumerate(report.train_losses):
                writer.writerow([epoch, f"{value:.10f}"])
    _dump_json(_asdict(report), args.out)
    return 0


def _cmd_report(args) -> int:
    analysis = json.loads(Path(getattr(args, "from")).read_text(encoding="utf-8"))
    payload = emit_report(analysis, args.format)
    if args.out:
        Path(args.out).write_bytes(payload)
    else:
        sys.stdout.write(payload.decode("utf-8"))
    return 0


# ---------------------------------------------------------------------------
# Parser wiring
# ---------------------------------------------------------------------------

def build_parser() -> _Parser:
    parser = _Parser(prog="advqa", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, handler, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(handler=handler)
        p.add_argument("--strict", action="store_true", help="strict parsing mode")
        return p

    p = add("parse-stats", _cmd_parse_stats, "dataset statistics")
    p.add_argument("--dataset", required=True)
    p.add_argument("--out")

    p = add("evaluate", _cmd_evaluate, "EM/F1 evaluation")
    p.add_argument("--dataset", required=True)
    p.add_argument("--predictions", required=True)
    p.add_argument("--per-example", dest="per_example")
    p.add_argument("--out")

    p = add("analyze-errors", _cmd_analyze_errors, "five-scheme error analysis")
    p.add_argument("--dataset", required=True)
    p.add_argument("--predictions", required=True)
    p.add_argument("--out")
    p.add_argument("--csv-dir", dest="csv_dir")

    p = add("augment", _cmd_augment, "adversarial attack augmentation")
    p.add_argument("--dataset", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--report")
    p.add_argument("--rate", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--attacks")
    p.add_argument("--config")

    p = add("pairs-negation", _cmd_pairs_negation, "negation contrastive pairs")
    p.add_argument("--dataset", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--report")
    p.add_argument("--rate", type=float, default=0.30)
    p.add_argument("--seed", type=int)

    p = add("mine-negatives", _cmd_mine_negatives, "hard-negative mining")
    p.add_argument("--dataset", required=True)
    p.add_argument("--out")
    p.add_argument("--csv")

    p = add("mix", _cmd_mix, "ratio-controlled dataset mixing")
    p.add_argument("--clean", required=True)
    p.add_argument("--adversarial", required=True)
    p.add_argument("--ratio", required=True, help="clean fraction, e.g. 0.8 or 80-20")
    p.add_argument("--total", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.add_argument("--allow-replacement", dest="allow_replacement", action="store_true")

    p = add("loss-check", _cmd_loss_check, "gradient and invariant verification")
    p.add_argument("--seed", type=int)
    p.add_argument("--instances", type=int, default=100)

    p = add("toy-train", _cmd_toy_train, "linear span-scorer training")
    p.add_argument("--train", required=True)
    p.add_argument("--eval", required=True)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--epochs", type=int, default=30)
    p.add_argument("--lr", type=float, default=0.5)
    p.add_argument("--batch-size", dest="batch_size", type=int, default=16)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.add_argument("--curve")

    p = add("report", _cmd_report, "render an analysis artifact")
    p.add_argument("--from", required=True)
    p.add_argument("--format", choices=REPORT_FORMATS, default="markdown")
    p.add_argument("--out")

    return parser


def dispatch(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except AdvQAError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
