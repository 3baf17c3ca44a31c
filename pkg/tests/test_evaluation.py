import numpy as np
import pytest

from edgelbp import evaluation
from edgelbp.classify import ForestConfig, MlpConfig
from edgelbp.dataset import LabeledDataset, Sample, SplitSpec, split, synth_shapes
from edgelbp.descriptors import FeatureVector, fit_normalizer
from edgelbp.evaluation import (
    SWEEP_FRACTIONS,
    ComparisonReport,
    ExperimentConfig,
    compare_schemes,
    format_table,
    method_label,
    repetition_seed,
    report_csv,
    run_experiment,
    summary_statistics,
    write_report_csv,
)


def _duplicate_dataset(n_per_class=6):
    """Two classes of identical images each: a 1-NN oracle must score 100%."""
    a = np.full((16, 16), 255, dtype=np.uint8)
    a[4:12, 4:12] = 0  # solid block
    b = np.full((16, 16), 255, dtype=np.uint8)
    b[8, 2:14] = 0  # thin line
    samples = []
    for label, img in (("block", a), ("line", b)):
        for i in range(n_per_class):
            samples.append(Sample(f"{label}/{i:02d}", label, img.copy()))
    return LabeledDataset(samples=samples, class_index=["block", "line"])


# ---------------------------------------------------------------------------
# seeds and statistics


def test_repetition_seed_is_stable_and_distinct():
    assert repetition_seed(0, 0) == repetition_seed(0, 0)
    seeds = {repetition_seed(0, k) for k in range(20)}
    assert len(seeds) == 20
    assert repetition_seed(1, 0) != repetition_seed(0, 0)
    assert all(isinstance(repetition_seed(3, k), int) for k in range(3))


def test_summary_statistics_both_conventions():
    mean, population, sample = summary_statistics([99.55] * 4 + [100.00])
    assert abs(mean - 99.64) < 1e-12
    assert round(population, 2) == 0.18
    assert round(sample, 2) == 0.20
    assert population < sample


def test_summary_statistics_single_value():
    mean, population, sample = summary_statistics([87.5])
    assert mean == 87.5
    assert population == 0.0 and sample == 0.0


def test_method_label():
    assert method_label("forest", "EDMS") == "RF/EDMS"
    assert method_label("knn", "LBP") == "1NN/LBP"
    assert method_label("mlp", "PROPOSED") == "MLNN/PROPOSED"


# ---------------------------------------------------------------------------
# run_experiment


def test_duplicate_exemplars_give_perfect_knn():
    cfg = ExperimentConfig(
        dataset=_duplicate_dataset(), scheme="EDMS", classifier="knn", repetitions=4
    )
    report = run_experiment(cfg)
    assert report.accuracies == (100.0,) * 4
    assert report.mean == 100.0
    assert report.stddev == 0.0 and report.stddev_sample == 0.0
    for per_class in report.per_class:
        assert per_class == {"block": 100.0, "line": 100.0}
    assert len(report.split_hashes) == 4
    assert report.fractions == (0.7,) * 4


def test_single_repetition_has_zero_stddev():
    cfg = ExperimentConfig(
        dataset=_duplicate_dataset(), scheme="EDMS", classifier="knn", repetitions=1
    )
    report = run_experiment(cfg)
    assert len(report.accuracies) == 1
    assert report.stddev == 0.0 and report.stddev_sample == 0.0


def test_report_statistics_recompute():
    ds = synth_shapes(["disk", "square", "cross"], n_per_class=8, seed=1)
    cfg = ExperimentConfig(dataset=ds, scheme="EDMS", classifier="knn", repetitions=3, seed=5)
    report = run_experiment(cfg)
    mean, population, sample = summary_statistics(report.accuracies)
    assert report.mean == mean
    assert report.stddev == population
    assert report.stddev_sample == sample
    assert set(report.timings) == {"extract", "train", "predict"}
    assert len(report.timings["train"]) == 3


def test_experiment_is_reproducible():
    ds = synth_shapes(["disk", "ring"], n_per_class=6, seed=2)
    cfg = ExperimentConfig(dataset=ds, scheme="EDMS", classifier="forest",
                           classifier_config=ForestConfig(n_trees=5), repetitions=2, seed=9)
    a = run_experiment(cfg)
    b = run_experiment(cfg)
    assert a.accuracies == b.accuracies
    assert a.split_hashes == b.split_hashes


def test_sweep_split_cycles_fractions():
    ds = _duplicate_dataset(n_per_class=10)
    cfg = ExperimentConfig(dataset=ds, scheme="EDMS", classifier="knn",
                           repetitions=7, sweep_split=True)
    report = run_experiment(cfg)
    assert report.fractions == SWEEP_FRACTIONS + SWEEP_FRACTIONS[:2]
    fixed = run_experiment(
        ExperimentConfig(dataset=ds, scheme="EDMS", classifier="knn",
                         repetitions=2, split=SplitSpec(train_fraction=0.6))
    )
    assert fixed.fractions == (0.6, 0.6)


def test_repetition_failures_are_wrapped():
    cfg = ExperimentConfig(
        dataset=_duplicate_dataset(), scheme="EDMS", classifier="forest",
        classifier_config=ForestConfig(n_trees=0), repetitions=2,
    )
    with pytest.raises(RuntimeError, match="repetition 0 failed"):
        run_experiment(cfg)


def test_experiment_config_validation():
    ds = _duplicate_dataset()
    with pytest.raises(ValueError):
        ExperimentConfig(dataset=ds, scheme="SIFT")
    with pytest.raises(ValueError):
        ExperimentConfig(dataset=ds, classifier="svm")
    with pytest.raises(ValueError):
        ExperimentConfig(dataset=ds, repetitions=0)


# ---------------------------------------------------------------------------
# normalization plumbing


def test_normalizer_fits_on_training_split_only(monkeypatch):
    ds = synth_shapes(["disk", "square"], n_per_class=6, seed=3)
    seen = []

    def spy(train_vecs):
        seen.append([v.sample_id for v in train_vecs])
        return fit_normalizer(train_vecs)

    monkeypatch.setattr(evaluation, "fit_normalizer", spy)
    cfg = ExperimentConfig(
        dataset=ds, scheme="EDMS", classifier="mlp",
        classifier_config=MlpConfig(hidden_units=4, epochs=5), repetitions=3, seed=1,
    )
    run_experiment(cfg)
    assert len(seen) == 3  # once per repetition
    for k, ids in enumerate(seen):
        seed_k = repetition_seed(cfg.seed, k)
        train_set, test_set = split(ds, SplitSpec(0.7, seed_k))
        assert sorted(ids) == sorted(s.sample_id for s in train_set.samples)
        assert not set(ids) & {s.sample_id for s in test_set.samples}


def test_normalize_flag_overrides_default(monkeypatch):
    ds = _duplicate_dataset()
    calls = []
    monkeypatch.setattr(
        evaluation, "fit_normalizer", lambda vs: calls.append(1) or fit_normalizer(vs)
    )
    base = dict(dataset=ds, scheme="EDMS", repetitions=1)
    run_experiment(ExperimentConfig(classifier="knn", **base))
    assert not calls  # off by default for non-mlp
    run_experiment(ExperimentConfig(classifier="knn", normalize=True, **base))
    assert len(calls) == 1
    run_experiment(
        ExperimentConfig(
            classifier="mlp", normalize=False,
            classifier_config=MlpConfig(hidden_units=4, epochs=2), **base,
        )
    )
    assert len(calls) == 1  # unchanged: mlp with normalize=False skips the fit


def test_injecting_test_rows_would_change_the_statistics():
    # the leakage the paired-split plumbing guards against is measurable
    train = [FeatureVector("EDMS", np.full(3, 1.0), f"t{i}", "a") for i in range(4)]
    test = [FeatureVector("EDMS", np.full(3, 9.0), f"q{i}", "a") for i in range(4)]
    clean = fit_normalizer(train)
    tainted = fit_normalizer(train + test)
    assert not np.allclose(clean.mean, tainted.mean)


# ---------------------------------------------------------------------------
# comparisons and reports


def _small_comparison():
    ds = synth_shapes(["disk", "square"], n_per_class=6, seed=7)
    cfg = ExperimentConfig(dataset=ds, scheme="EDMS", classifier="knn",
                           repetitions=2, seed=3)
    return compare_schemes(ds, ["EDMS", "MOMENT"], ["knn", "forest"], cfg)


def test_compare_schemes_pairs_splits():
    comparison = _small_comparison()
    assert len(comparison.cells) == 4
    assert len(comparison.split_hashes) == 2
    for cell in comparison.cells:
        assert cell.report.split_hashes == comparison.split_hashes
    report = comparison.cell("forest", "MOMENT")
    assert report.classifier == "forest" and report.scheme == "MOMENT"
    with pytest.raises(KeyError):
        comparison.cell("mlp", "EDMS")


def test_format_table_layout():
    comparison = _small_comparison()
    text = format_table(comparison, title="Synthetic shapes")
    lines = text.splitlines()
    assert lines[0] == "Synthetic shapes"
    assert lines[1].split() == ["Method", "EXP#1", "EXP#2", "Mean", "St.Dv"]
    assert set(lines[2]) <= {"-", " "}
    labels = [l.split()[0] for l in lines[3:]]
    assert labels == ["1NN/EDMS", "RF/EDMS", "1NN/MOMENT", "RF/MOMENT"]
    for line in lines[3:]:
        for token in line.split()[1:]:
            float(token)  # every cell is a number rendered with 2 decimals
            assert len(token.split(".")[1]) == 2


def test_report_csv_parses_back():
    comparison = _small_comparison()
    text = report_csv(comparison)
    lines = text.strip().splitlines()
    assert lines[0] == "classifier,scheme,exp1,exp2,mean,stddev_population,stddev_sample"
    assert len(lines) == 5
    for line, cell in zip(lines[1:], comparison.cells):
        fields = line.split(",")
        assert fields[0] == cell.classifier and fields[1] == cell.scheme
        values = [float(x) for x in fields[2:]]
        assert values[:2] == pytest.approx(list(cell.report.accuracies), rel=1e-8)
        assert values[2] == pytest.approx(cell.report.mean, rel=1e-8)


def test_write_report_csv_is_deterministic(tmp_path):
    comparison = _small_comparison()
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    write_report_csv(p1, comparison)
    write_report_csv(p2, comparison)
    assert p1.read_bytes() == p2.read_bytes()


def test_empty_comparison_formats():
    empty = ComparisonReport(cells=(), split_hashes=())
    text = format_table(empty)
    assert "Method" in text
    assert report_csv(empty).startswith("classifier,scheme")
