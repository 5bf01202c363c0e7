"""Classification metrics computed from integer confusion counts.

All derived values come from exact integer tallies through plain float
division, so two implementations that agree on the counts agree on every
metric bit-for-bit. Zero denominators yield 0.0 by convention.

Task headline metrics: sarcasm reports the F1 of the sarcastic class;
sentiment reports the mean of the positive and negative F1 scores.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from arafuse.corpus import class_order, label_name
from arafuse.errors import DataError

EVAL_BATCH_SIZE = 64


@dataclass(frozen=True)
class MetricsReport:
    """Evaluation results for one model on one labeled set."""

    task: str
    class_names: tuple[str, ...]
    confusion: tuple[tuple[int, ...], ...]
    n_examples: int
    accuracy: float
    precision_macro: float
    recall_macro: float
    f1_macro: float
    per_class: dict[str, dict[str, float]]
    headline_name: str
    headline: float

    def to_dict(self) -> dict:
        return {
            "task": self.task,
            "class_names": list(self.class_names),
            "confusion": [list(row) for row in self.confusion],
            "n_examples": self.n_examples,
            "accuracy": self.accuracy,
            "precision_macro": self.precision_macro,
            "recall_macro": self.recall_macro,
            "f1_macro": self.f1_macro,
            "per_class": {k: dict(v) for k, v in self.per_class.items()},
            self.headline_name: self.headline,
        }

    def format_table(self) -> str:
        """Fixed-width text block for terminal output."""
        lines = [
            f"task: {self.task}  examples: {self.n_examples}",
            f"{'accuracy':<18}{self.accuracy:.4f}",
            f"{'precision_macro':<18}{self.precision_macro:.4f}",
            f"{'recall_macro':<18}{self.recall_macro:.4f}",
            f"{'f1_macro':<18}{self.f1_macro:.4f}",
            f"{self.headline_name:<18}{self.headline:.4f}",
        ]
        header = f"{'class':<12}{'precision':>10}{'recall':>10}{'f1':>10}{'support':>10}"
        lines.append(header)
        for name in self.class_names:
            stats = self.per_class[name]
            lines.append(
                f"{name:<12}{stats['precision']:>10.4f}{stats['recall']:>10.4f}"
                f"{stats['f1']:>10.4f}{int(stats['support']):>10d}"
            )
        return "\n".join(lines)


def _prf(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2.0 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


def headline_metric_name(task: str) -> str:
    return "f1_sarcastic" if task == "sarcasm" else "f_pn"


def metrics_from_confusion(
    confusion, task: str
) -> MetricsReport:
    """Derive the full report from a confusion matrix.

    ``confusion[i][j]`` counts examples whose true class is i and
    predicted class is j, with classes in the task's fixed order.
    """
    classes = class_order(task)
    names = tuple(label_name(c) for c in classes)
    matrix = [[int(v) for v in row] for row in confusion]
    n = len(classes)
    if len(matrix) != n or any(len(row) != n for row in matrix):
        raise DataError(f"confusion matrix must be {n}x{n} for task {task!r}")

    total = sum(sum(row) for row in matrix)
    if total == 0:
        raise DataError("confusion matrix is empty")
    correct = sum(matrix[i][i] for i in range(n))

    per_class: dict[str, dict[str, float]] = {}
    for i, name in enumerate(names):
        tp = matrix[i][i]
        fp = sum(matrix[r][i] for r in range(n)) - tp
        fn = sum(matrix[i][c] for c in range(n)) - tp
        precision, recall, f1 = _prf(tp, fp, fn)
        per_class[name] = {
            "precision": precision,
            "recall": recall,
            "f1": f1,
            "support": float(tp + fn),
        }

    if task == "sarcasm":
        headline = per_class["true"]["f1"]
    else:
        headline = (per_class["positive"]["f1"] + per_class["negative"]["f1"]) / 2.0

    return MetricsReport(
        task=task,
        class_names=names,
        confusion=tuple(tuple(row) for row in matrix),
        n_examples=total,
        accuracy=correct / total,
        precision_macro=sum(per_class[m]["precision"] for m in names) / n,
        recall_macro=sum(per_class[m]["recall"] for m in names) / n,
        f1_macro=sum(per_class[m]["f1"] for m in names) / n,
        per_class=per_class,
        headline_name=headline_metric_name(task),
        headline=headline,
    )


def predict_classes(model, ids, contexts, batch_size: int = EVAL_BATCH_SIZE) -> np.ndarray:
    """Most probable class index per example, in evaluation mode.

    Probability ties resolve to the lowest class index.
    """
    n = ids.shape[0] if ids is not None else contexts.shape[0]
    out = np.empty(n, dtype=np.int64)
    for start in range(0, n, batch_size):
        stop = min(start + batch_size, n)
        acts = model.forward(
            None if ids is None else ids[start:stop],
            None if contexts is None else contexts[start:stop],
            train=False,
        )
        out[start:stop] = np.argmax(acts.probs, axis=1)
    return out


def evaluate(
    model, ids, contexts, labels, task: str, batch_size: int = EVAL_BATCH_SIZE
) -> MetricsReport:
    """Score a model on encoded examples and return the full report.

    ``labels`` holds integer class indices in the task's fixed order.
    """
    classes = class_order(task)
    labels = np.asarray(labels, dtype=np.int64)
    if labels.size == 0:
        raise DataError("cannot evaluate on an empty dataset")
    if labels.min() < 0 or labels.max() >= len(classes):
        raise DataError(
            f"label index out of range [0, {len(classes)}) for task {task!r}"
        )
    predicted = predict_classes(model, ids, contexts, batch_size=batch_size)
    n = len(classes)
    matrix = [[0] * n for _ in range(n)]
    for true_i, pred_i in zip(labels, predicted):
        matrix[int(true_i)][int(pred_i)] += 1
    return metrics_from_confusion(matrix, task)


def averaged_report(reports: list[MetricsReport]) -> dict:
    """Mean and standard deviation of scalar metrics across repeated runs.

    Uses the population standard deviation. Per-run values are kept so
    nothing is hidden behind the average.
    """
    if not reports:
        raise DataError("no reports to average")
    tasks = {r.task for r in reports}
    if len(tasks) != 1:
        raise DataError(f"cannot average reports across tasks: {sorted(tasks)}")
    headline_name = reports[0].headline_name
    scalars = {
        "accuracy": [r.accuracy for r in reports],
        "precision_macro": [r.precision_macro for r in reports],
        "recall_macro": [r.recall_macro for r in reports],
        "f1_macro": [r.f1_macro for r in reports],
        headline_name: [r.headline for r in reports],
    }
    return {
        "task": reports[0].task,
        "n_runs": len(reports),
        "mean": {k: float(np.mean(v)) for k, v in scalars.items()},
        "std": {k: float(np.std(v)) for k, v in scalars.items()},
        "runs": {k: [float(x) for x in v] for k, v in scalars.items()},
    }
