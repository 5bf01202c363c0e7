"""Command-line interface.

Subcommands cover the pipeline end to end: ``preprocess`` (token-id cache
or cleaned text for the context extractor), ``train`` (single or repeated
runs with averaged metrics), ``evaluate`` (score a checkpoint on a labeled
file), ``predict`` (label new text), and ``extract-config`` (machine-
readable contract for producing compatible context vectors).

Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric error.
"""

from __future__ import annotations

import argparse
import json
import logging
import shutil
import sys
from pathlib import Path

import numpy as np

from arafuse import __version__
from arafuse.checkpoint import load_checkpoint, save_checkpoint
from arafuse.corpus import (
    SplitSpec,
    class_order,
    label_name,
    load_corpus,
    stratified_split,
)
from arafuse.demo import (
    demo_context_vectors_path,
    demo_dataset_path,
    demo_embeddings_path,
    emoji_map_path,
    stopwords_path,
)
from arafuse.embeddings import (
    load_context_vectors,
    load_static_embeddings,
)
from arafuse.errors import DataError, NumericError
from arafuse.metrics import averaged_report, evaluate, predict_classes
from arafuse.model import FusionConfig, FusionModel
from arafuse.preprocess import (
    PreprocessConfig,
    load_emoji_map,
    load_stopwords,
    prepare_text,
    tokenize_encode,
)
from arafuse.training import (
    TrainConfig,
    build_examples,
    seeded_generators,
    train,
    write_history,
)

log = logging.getLogger("arafuse")


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; the contract says 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_preprocess_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--drop-hashtag-words",
        action="store_true",
        help="drop whole hashtag tokens instead of keeping the word",
    )
    parser.add_argument(
        "--remove-stopwords", action="store_true", help="filter the stopword list"
    )
    parser.add_argument(
        "--stopwords", type=Path, default=None, help="stopword file (default: bundled)"
    )
    parser.add_argument(
        "--emoji-map", type=Path, default=None, help="emoji map file (default: bundled)"
    )
    parser.add_argument(
        "--max-len", type=int, default=100, help="token sequence length (default 100)"
    )


def _preprocess_from_args(args) -> PreprocessConfig:
    stopword_file = args.stopwords or stopwords_path()
    emoji_file = args.emoji_map or emoji_map_path()
    return PreprocessConfig(
        keep_hashtag_words=not args.drop_hashtag_words,
        remove_stopwords=args.remove_stopwords,
        emoji_map=load_emoji_map(emoji_file),
        stopwords=load_stopwords(stopword_file) if args.remove_stopwords else frozenset(),
        max_len=args.max_len,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="arafuse", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"arafuse {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    pre = sub.add_parser(
        "preprocess",
        help="clean and encode a dataset",
        description="Write a token-id cache (id<TAB>space-joined ids), or with "
        "--emit-text the cleaned text (id<TAB>text) for the context extractor.",
    )
    pre.add_argument("--dataset", type=Path, help="labeled TSV dataset")
    pre.add_argument("--task", choices=("sentiment", "sarcasm"), default="sentiment")
    pre.add_argument("--embeddings", type=Path, help="static embeddings (word2vec text)")
    pre.add_argument("--emit-text", action="store_true", help="emit cleaned text, not ids")
    pre.add_argument("--output", type=Path, required=True)
    pre.add_argument("--demo", action="store_true", help="use the bundled demo assets")
    _add_preprocess_flags(pre)
    pre.set_defaults(func=cmd_preprocess)

    tr = sub.add_parser(
        "train",
        help="train a classifier",
        description="Split the dataset, train with Adam and early stopping, and "
        "write run_config.json, history.jsonl, metrics.json, and checkpoint.bin "
        "into --output-dir (run_<i>/ subdirectories plus metrics_avg.json when "
        "--runs > 1).",
    )
    tr.add_argument("--dataset", type=Path)
    tr.add_argument("--task", choices=("sentiment", "sarcasm"), default="sentiment")
    tr.add_argument("--embeddings", type=Path)
    tr.add_argument("--context-vectors", type=Path)
    tr.add_argument("--output-dir", type=Path, required=True)
    tr.add_argument("--demo", action="store_true", help="use the bundled demo assets")
    tr.add_argument(
        "--variant",
        choices=("fusion", "static_only", "context_only"),
        default=None,
        help="architecture variant (default fusion)",
    )
    tr.add_argument("--config", type=Path, help='JSON file with "model"/"train" sections')
    tr.add_argument("--learning-rate", type=float, default=None)
    tr.add_argument("--batch-size", type=int, default=None)
    tr.add_argument("--max-epochs", type=int, default=None)
    tr.add_argument("--patience", type=int, default=None, help="0 disables early stopping")
    tr.add_argument("--seed", type=int, default=None)
    tr.add_argument("--runs", type=int, default=1, help="repeat with seeds seed..seed+k-1")
    tr.add_argument("--validation-fraction", type=float, default=0.2)
    tr.add_argument("--split-seed", type=int, default=0)
    tr.add_argument(
        "--trainable-static",
        action="store_true",
        help="unfreeze the static embedding matrix",
    )
    _add_preprocess_flags(tr)
    tr.set_defaults(func=cmd_train)

    ev = sub.add_parser(
        "evaluate",
        help="score a checkpoint on a labeled dataset",
        description="Print the metric table; optionally write it as JSON.",
    )
    ev.add_argument("--checkpoint", type=Path, required=True)
    ev.add_argument("--dataset", type=Path, required=True)
    ev.add_argument("--embeddings", type=Path)
    ev.add_argument("--context-vectors", type=Path)
    ev.add_argument("--output", type=Path, help="write metrics JSON here")
    ev.set_defaults(func=cmd_evaluate)

    pr = sub.add_parser(
        "predict",
        help="label new text with a checkpoint",
        description="Read --text (one tweet) or --input (id<TAB>text lines) and "
        "write id<TAB>predicted_label lines.",
    )
    pr.add_argument("--checkpoint", type=Path, required=True)
    pr.add_argument("--embeddings", type=Path)
    pr.add_argument("--context-vectors", type=Path)
    pr.add_argument("--text", help="single tweet text")
    pr.add_argument("--id", dest="example_id", default="t0", help="id for --text")
    pr.add_argument("--input", type=Path, help="file of id<TAB>text lines")
    pr.add_argument("--output", type=Path, help="default: stdout")
    pr.set_defaults(func=cmd_predict)

    ex = sub.add_parser(
        "extract-config",
        help="print the context-vector compatibility contract",
        description="JSON on stdout: expected vector dimension, the preprocessing "
        "recipe, the text-emission command, and the output file format.",
    )
    ex.add_argument("--checkpoint", type=Path, help="describe a trained model")
    ex.add_argument("--context-dim", type=int, default=768)
    _add_preprocess_flags(ex)
    ex.set_defaults(func=cmd_extract_config)

    return parser


def _resolve_demo(args, need_context: bool = True) -> None:
    if getattr(args, "demo", False):
        args.dataset = args.dataset or demo_dataset_path()
        args.embeddings = args.embeddings or demo_embeddings_path()
        if need_context and getattr(args, "context_vectors", None) is None:
            args.context_vectors = demo_context_vectors_path()


def cmd_preprocess(args) -> int:
    _resolve_demo(args, need_context=False)
    if args.dataset is None:
        raise DataError("--dataset is required (or pass --demo)")
    config = _preprocess_from_args(args)
    corpus = load_corpus(args.dataset, args.task)

    lines = []
    if args.emit_text:
        for ex in corpus:
            lines.append(ex.id + "\t" + " ".join(prepare_text(ex.text, config)))
    else:
        if args.embeddings is None:
            raise DataError("--embeddings is required to encode ids (or use --emit-text)")
        table = load_static_embeddings(args.embeddings)
        for ex in corpus:
            seq = tokenize_encode(ex.text, table.vocabulary, config)
            lines.append(ex.id + "\t" + " ".join(str(i) for i in seq.ids))
    args.output.write_text("\n".join(lines) + "\n", encoding="utf-8")
    log.info("wrote %d lines to %s", len(lines), args.output)
    return 0


def _merge_config(args) -> tuple[dict, dict]:
    """Layer config sources: defaults, then --config file, then CLI flags."""
    model_cfg: dict = {}
    train_cfg: dict = {}
    if args.config is not None:
        if not args.config.exists():
            raise DataError(f"config file not found: {args.config}")
        try:
            payload = json.loads(args.config.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise DataError(f"{args.config}: invalid JSON: {exc}") from None
        unknown = set(payload) - {"model", "train"}
        if unknown:
            raise DataError(f"{args.config}: unknown sections {sorted(unknown)}")
        model_cfg.update(payload.get("model", {}))
        train_cfg.update(payload.get("train", {}))
    if args.variant is not None:
        model_cfg["variant"] = args.variant
    for flag, key in (
        ("learning_rate", "learning_rate"),
        ("batch_size", "batch_size"),
        ("max_epochs", "max_epochs"),
        ("patience", "patience"),
        ("seed", "seed"),
    ):
        value = getattr(args, flag)
        if value is not None:
            train_cfg[key] = value
    return model_cfg, train_cfg


def cmd_train(args) -> int:
    _resolve_demo(args)
    if args.dataset is None:
        raise DataError("--dataset is required (or pass --demo)")
    if args.runs < 1:
        raise DataError(f"--runs must be at least 1, got {args.runs}")

    model_cfg, train_cfg = _merge_config(args)
    variant = model_cfg.get("variant", "fusion")
    preprocess = _preprocess_from_args(args)
    corpus = load_corpus(args.dataset, args.task)
    model_cfg.setdefault("n_classes", len(class_order(args.task)))
    model_cfg.setdefault("max_len", preprocess.max_len)

    table = None
    if variant in ("fusion", "static_only"):
        if args.embeddings is None:
            raise DataError(f"variant {variant!r} needs --embeddings")
        table = load_static_embeddings(args.embeddings)

    store = None
    if variant in ("fusion", "context_only"):
        if args.context_vectors is None:
            raise DataError(f"variant {variant!r} needs --context-vectors")
        store = load_context_vectors(args.context_vectors)
        declared = model_cfg.setdefault("context_dim", store.dim)
        if declared != store.dim:
            raise DataError(
                f"config context_dim {declared} != vectors dimension {store.dim}"
            )

    config = FusionConfig.from_dict(model_cfg)
    tconfig = TrainConfig.from_dict(train_cfg)
    split = SplitSpec(validation_fraction=args.validation_fraction, seed=args.split_seed)
    train_corpus, val_corpus = stratified_split(corpus, split)
    train_set = build_examples(train_corpus, table.vocabulary if table else {}, preprocess, store)
    val_set = build_examples(val_corpus, table.vocabulary if table else {}, preprocess, store)
    log.info(
        "task=%s variant=%s train=%d val=%d", args.task, variant, len(train_set), len(val_set)
    )

    out_dir: Path = args.output_dir
    if out_dir.exists() and any(out_dir.iterdir()):
        raise DataError(f"output directory {out_dir} exists and is not empty")
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        run_config = {
            "package_version": __version__,
            "task": args.task,
            "dataset": str(args.dataset),
            "embeddings": None if args.embeddings is None else str(args.embeddings),
            "context_vectors": (
                None if args.context_vectors is None else str(args.context_vectors)
            ),
            "model": config.to_dict(),
            "train": tconfig.to_dict(),
            "preprocess": {
                "keep_hashtag_words": preprocess.keep_hashtag_words,
                "remove_stopwords": preprocess.remove_stopwords,
                "max_len": preprocess.max_len,
            },
            "split": {"validation_fraction": split.validation_fraction, "seed": split.seed},
            "trainable_static": args.trainable_static,
            "runs": args.runs,
        }
        (out_dir / "run_config.json").write_text(
            json.dumps(run_config, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )

        reports = []
        for run_index in range(args.runs):
            run_seed = tconfig.seed + run_index
            run_dir = out_dir if args.runs == 1 else out_dir / f"run_{run_index}"
            run_dir.mkdir(exist_ok=True)
            run_tconfig = TrainConfig.from_dict({**tconfig.to_dict(), "seed": run_seed})
            init_rng, shuffle_rng, dropout_rng = seeded_generators(run_seed)
            model = FusionModel(
                config, table=table, rng=init_rng, trainable_static=args.trainable_static
            )
            result = train(
                model, train_set, val_set, run_tconfig,
                shuffle_rng=shuffle_rng, dropout_rng=dropout_rng,
            )
            write_history(result.history, run_dir / "history.jsonl")
            report = evaluate(
                model,
                None if model.embedding is None else val_set.ids,
                val_set.contexts,
                val_set.labels,
                args.task,
            )
            (run_dir / "metrics.json").write_text(
                json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n",
                encoding="utf-8",
            )
            save_checkpoint(
                run_dir / "checkpoint.bin",
                model,
                preprocess,
                args.task,
                seed=run_seed,
                train_config=run_tconfig.to_dict(),
            )
            reports.append(report)
            log.info(
                "run %d: best epoch %d (val_loss %.4f), val %s=%.4f",
                run_index, result.best_epoch, result.best_val_loss,
                report.headline_name, report.headline,
            )

        if args.runs > 1:
            (out_dir / "metrics_avg.json").write_text(
                json.dumps(averaged_report(reports), indent=2, sort_keys=True) + "\n",
                encoding="utf-8",
            )
    except BaseException:
        shutil.rmtree(out_dir, ignore_errors=True)
        raise
    return 0


def _load_for_inference(args):
    """Shared evaluate/predict setup from a checkpoint's own manifest."""
    table = None
    if args.embeddings is not None:
        table = load_static_embeddings(args.embeddings)
    model, preprocess, manifest = load_checkpoint(args.checkpoint, table=table)
    store = None
    if model.config.variant in ("fusion", "context_only"):
        if args.context_vectors is None:
            raise DataError(
                f"variant {model.config.variant!r} needs --context-vectors"
            )
        store = load_context_vectors(args.context_vectors)
        if store.dim != model.config.context_dim:
            raise DataError(
                f"context vectors have dimension {store.dim}, model expects "
                f"{model.config.context_dim}"
            )
    return model, preprocess, manifest, table, store


def cmd_evaluate(args) -> int:
    model, preprocess, manifest, table, store = _load_for_inference(args)
    task = manifest["task"]
    corpus = load_corpus(args.dataset, task)
    dataset = build_examples(
        corpus, table.vocabulary if table else {}, preprocess, store
    )
    report = evaluate(
        model,
        None if model.embedding is None else dataset.ids,
        dataset.contexts,
        dataset.labels,
        task,
    )
    print(report.format_table())
    if args.output:
        args.output.write_text(
            json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
    return 0


def cmd_predict(args) -> int:
    if (args.text is None) == (args.input is None):
        raise DataError("pass exactly one of --text or --input")
    model, preprocess, manifest, table, store = _load_for_inference(args)
    task = manifest["task"]
    classes = class_order(task)

    if args.text is not None:
        items = [(args.example_id, args.text)]
    else:
        if not args.input.exists():
            raise DataError(f"input file not found: {args.input}")
        items = []
        for line_num, line in enumerate(
            args.input.read_text(encoding="utf-8").splitlines(), start=1
        ):
            if not line.strip():
                continue
            if "\t" not in line:
                raise DataError(f"{args.input}: line {line_num}: expected id<TAB>text")
            example_id, _, text = line.partition("\t")
            items.append((example_id, text))
        if not items:
            raise DataError(f"{args.input}: no examples")

    vocabulary = table.vocabulary if table else {}
    ids = None
    if model.embedding is not None:
        ids = np.array(
            [tokenize_encode(text, vocabulary, preprocess).ids for _, text in items],
            dtype=np.int64,
        )
    contexts = None
    if store is not None:
        contexts = np.vstack([store[example_id] for example_id, _ in items])

    predicted = predict_classes(model, ids, contexts)
    lines = [
        f"{example_id}\t{label_name(classes[int(k)])}"
        for (example_id, _), k in zip(items, predicted)
    ]
    payload = "\n".join(lines) + "\n"
    if args.output:
        args.output.write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)
    return 0


def cmd_extract_config(args) -> int:
    if args.checkpoint is not None:
        from arafuse.checkpoint import read_manifest

        manifest = read_manifest(args.checkpoint)
        context_dim = manifest["model_config"]["context_dim"]
        preprocess = manifest["preprocess"]
    else:
        config = _preprocess_from_args(args)
        context_dim = args.context_dim
        preprocess = {
            "keep_hashtag_words": config.keep_hashtag_words,
            "remove_stopwords": config.remove_stopwords,
            "emoji_map": dict(config.emoji_map),
            "stopwords": sorted(config.stopwords),
            "max_len": config.max_len,
        }
    contract = {
        "context_dim": context_dim,
        "preprocess": preprocess,
        "emit_text_command": [
            "arafuse", "preprocess", "--emit-text",
            "--dataset", "<dataset.tsv>", "--output", "<texts.tsv>",
        ],
        "input_format": "id<TAB>cleaned text, one example per line",
        "output_format": "id<TAB>v1,v2,...  (comma-separated floats, one line per id)",
    }
    print(json.dumps(contract, indent=2, sort_keys=True, ensure_ascii=False))
    return 0


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s", stream=sys.stderr)
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "func"):
        parser.print_help(sys.stderr)
        return 1
    try:
        return args.func(args)
    except DataError as exc:
        log.error("data error: %s", exc)
        return 2
    except NumericError as exc:
        log.error("numeric error: %s", exc)
        return 3


if __name__ == "__main__":
    sys.exit(main())
