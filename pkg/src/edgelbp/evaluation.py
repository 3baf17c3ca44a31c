"""Repeated-holdout experiment harness and its reports.

An experiment is scheme x classifier x repeated stratified splits; each
cell reports per-repetition accuracy plus mean and standard deviation.
When several schemes or classifiers are compared, every cell of a
repetition sees the identical split membership (paired splits), so the
differences measure methods rather than sampling luck.
"""

import dataclasses
import io
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .classify import DEFAULT_CONFIGS, KINDS, train
from .dataset import LabeledDataset, SplitSpec, manifest_hash, resolve_dataset, split
from .descriptors import (
    ExtractionParams,
    SCHEMES,
    apply_normalizer,
    extract_dataset,
    fit_normalizer,
)
from .fileio import atomic_write_text

REPORT_FORMAT_VERSION = 1

# the paper's "between 60% and 70%" training share, as five sweep points
SWEEP_FRACTIONS = (0.60, 0.625, 0.65, 0.675, 0.70)

CLASSIFIER_LABELS = {"forest": "RF", "mlp": "MLNN", "knn": "1NN"}


def repetition_seed(base_seed, k):
    """Derived seed for repetition k; documented so k is reproducible alone."""
    return int(np.random.SeedSequence([int(base_seed), int(k)]).generate_state(1)[0])


def summary_statistics(values):
    """(mean, population stddev, sample stddev) of accuracy cells.

    A single repetition has stddev 0 under both conventions.
    """
    arr = np.asarray(values, dtype=np.float64)
    mean = float(arr.mean())
    population = float(arr.std())
    sample = float(arr.std(ddof=1)) if len(arr) > 1 else 0.0
    return mean, population, sample


@dataclass(frozen=True)
class ExperimentConfig:
    dataset: object  # directory path, synthetic: URI, or LabeledDataset
    scheme: str = "PROPOSED"
    classifier: str = "forest"
    classifier_config: object = None
    split: SplitSpec = SplitSpec()
    repetitions: int = 5
    seed: int = 0
    normalize: Optional[bool] = None  # None: on for mlp, off otherwise
    sweep_split: bool = False
    params: ExtractionParams = ExtractionParams()

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.classifier not in KINDS:
            raise ValueError(f"unknown classifier {self.classifier!r}")
        if self.repetitions < 1:
            raise ValueError("repetitions must be at least 1")


@dataclass(frozen=True)
class ExperimentReport:
    scheme: str
    classifier: str
    accuracies: tuple  # percentage per repetition
    mean: float
    stddev: float  # population convention
    stddev_sample: float
    per_class: tuple  # one {label: percentage} per repetition
    fractions: tuple  # training fraction used per repetition
    split_hashes: tuple
    seed: int
    timings: dict


def _resolve(dataset):
    if isinstance(dataset, LabeledDataset):
        return dataset
    return resolve_dataset(dataset)


def _rep_fraction(cfg, k):
    if cfg.sweep_split:
        return SWEEP_FRACTIONS[k % len(SWEEP_FRACTIONS)]
    return cfg.split.train_fraction


def _normalize_enabled(cfg):
    if cfg.normalize is None:
        return cfg.classifier == "mlp"
    return cfg.normalize


def _run_cell(dataset, vectors, cfg, extract_seconds):
    """Repetitions for one scheme/classifier cell over pre-extracted vectors."""
    by_id = {v.sample_id: v for v in vectors}
    base_config = cfg.classifier_config or DEFAULT_CONFIGS[cfg.classifier]()
    normalize = _normalize_enabled(cfg)

    accuracies, per_class, fractions, hashes = [], [], [], []
    train_seconds, predict_seconds = [], []
    for k in range(cfg.repetitions):
        try:
            seed_k = repetition_seed(cfg.seed, k)
            fraction = _rep_fraction(cfg, k)
            train_set, test_set = split(dataset, SplitSpec(fraction, seed_k))
            train_vecs = [by_id[s.sample_id] for s in train_set.samples]
            test_vecs = [by_id[s.sample_id] for s in test_set.samples]
            if normalize:
                normalizer = fit_normalizer(train_vecs)
                train_vecs = [apply_normalizer(normalizer, v) for v in train_vecs]
                test_vecs = [apply_normalizer(normalizer, v) for v in test_vecs]

            config_k = dataclasses.replace(base_config, seed=seed_k)
            t0 = time.perf_counter()
            model = train(cfg.classifier, config_k, train_vecs)
            t1 = time.perf_counter()
            predicted = model.predict_batch(np.stack([v.values for v in test_vecs]))
            t2 = time.perf_counter()

            actual = [v.label for v in test_vecs]
            hits = np.array([p == a for p, a in zip(predicted, actual)])
            accuracies.append(100.0 * float(hits.mean()))
            class_acc = {}
            for label in dataset.class_index:
                mask = np.array([a == label for a in actual])
                if mask.any():
                    class_acc[label] = 100.0 * float(hits[mask].mean())
            per_class.append(class_acc)
            fractions.append(fraction)
            hashes.append(manifest_hash(train_set, test_set))
            train_seconds.append(t1 - t0)
            predict_seconds.append(t2 - t1)
        except Exception as exc:
            raise RuntimeError(f"repetition {k} failed: {exc}") from exc

    mean, population, sample = summary_statistics(accuracies)
    return ExperimentReport(
        scheme=cfg.scheme,
        classifier=cfg.classifier,
        accuracies=tuple(accuracies),
        mean=mean,
        stddev=population,
        stddev_sample=sample,
        per_class=tuple(per_class),
        fractions=tuple(fractions),
        split_hashes=tuple(hashes),
        seed=cfg.seed,
        timings={
            "extract": extract_seconds,
            "train": train_seconds,
            "predict": predict_seconds,
        },
    )


def run_experiment(cfg):
    """Extract features once, then run the configured repetitions."""
    dataset = _resolve(cfg.dataset)
    t0 = time.perf_counter()
    vectors = extract_dataset(dataset, cfg.scheme, cfg.params)
    extract_seconds = time.perf_counter() - t0
    return _run_cell(dataset, vectors, cfg, extract_seconds)


@dataclass(frozen=True)
class ComparisonCell:
    classifier: str
    scheme: str
    report: ExperimentReport


@dataclass(frozen=True)
class ComparisonReport:
    cells: tuple
    split_hashes: tuple  # shared across cells, one per repetition

    def cell(self, classifier, scheme):
        for c in self.cells:
            if c.classifier == classifier and c.scheme == scheme:
                return c.report
        raise KeyError(f"no cell for {classifier}/{scheme}")


def compare_schemes(dataset, schemes, classifiers, cfg):
    """Cross product of schemes x classifiers under shared per-rep splits."""
    resolved = _resolve(dataset)
    cells = []
    shared_hashes = None
    for scheme in schemes:
        scheme_cfg = dataclasses.replace(cfg, dataset=resolved, scheme=scheme)
        t0 = time.perf_counter()
        vectors = extract_dataset(resolved, scheme, cfg.params)
        extract_seconds = time.perf_counter() - t0
        for classifier in classifiers:
            cell_cfg = dataclasses.replace(scheme_cfg, classifier=classifier)
            report = _run_cell(resolved, vectors, cell_cfg, extract_seconds)
            if shared_hashes is None:
                shared_hashes = report.split_hashes
            elif shared_hashes != report.split_hashes:
                raise RuntimeError(
                    "paired-split invariant violated: split membership differs "
                    f"for {classifier}/{scheme}"
                )
            cells.append(ComparisonCell(classifier, scheme, report))
    return ComparisonReport(cells=tuple(cells), split_hashes=shared_hashes or ())


def method_label(classifier, scheme):
    return f"{CLASSIFIER_LABELS.get(classifier, classifier)}/{scheme}"


def format_table(comparison, title="Results"):
    """Aligned text table: method rows, EXP#k columns, Mean and St.Dv."""
    n_reps = max((len(c.report.accuracies) for c in comparison.cells), default=0)
    header = ["Method"] + [f"EXP#{k + 1}" for k in range(n_reps)] + ["Mean", "St.Dv"]
    rows = [header]
    for cell in comparison.cells:
        r = cell.report
        rows.append(
            [method_label(cell.classifier, cell.scheme)]
            + [f"{a:.2f}" for a in r.accuracies]
            + [f"{r.mean:.2f}", f"{r.stddev:.2f}"]
        )
    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    out = io.StringIO()
    out.write(title + "\n")
    for i, row in enumerate(rows):
        out.write(
            "  ".join(cell.ljust(widths[j]) for j, cell in enumerate(row)).rstrip()
        )
        out.write("\n")
        if i == 0:
            out.write("  ".join("-" * w for w in widths) + "\n")
    return out.getvalue()


def report_csv(comparison):
    """Machine-readable counterpart of the text table, one row per cell."""
    n_reps = max((len(c.report.accuracies) for c in comparison.cells), default=0)
    columns = (
        ["classifier", "scheme"]
        + [f"exp{k + 1}" for k in range(n_reps)]
        + ["mean", "stddev_population", "stddev_sample"]
    )
    lines = [",".join(columns)]
    for cell in comparison.cells:
        r = cell.report
        lines.append(
            ",".join(
                [cell.classifier, cell.scheme]
                + [format(a, ".9g") for a in r.accuracies]
                + [
                    format(r.mean, ".9g"),
                    format(r.stddev, ".9g"),
                    format(r.stddev_sample, ".9g"),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def write_report_csv(path, comparison):
    atomic_write_text(path, report_csv(comparison))
