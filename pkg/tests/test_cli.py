import json
import os

import numpy as np
import pytest

from edgelbp.cli import main
from edgelbp.dataset import load_dataset
from edgelbp.descriptors import read_features_csv


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# extract


def test_extract_writes_feature_csv(tmp_path, capsys):
    out = tmp_path / "features.csv"
    code, stdout, _ = _run(
        capsys, "extract", "--dataset", "synthetic:2x4@1",
        "--scheme", "EDMS", "--out", str(out),
    )
    assert code == 0
    assert "wrote 8 x 22 features" in stdout
    vectors = read_features_csv(out)
    assert len(vectors) == 8
    assert {v.label for v in vectors} == {"square", "disk"}
    assert all(v.scheme == "EDMS" for v in vectors)


def test_extract_reruns_are_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (a, b):
        code, _, _ = _run(
            capsys, "extract", "--dataset", "synthetic:3x3@7", "--out", str(out)
        )
        assert code == 0
    assert a.read_bytes() == b.read_bytes()


def test_extract_missing_dataset_exits_2_without_partial_file(tmp_path, capsys):
    out = tmp_path / "f.csv"
    code, _, stderr = _run(
        capsys, "extract", "--dataset", str(tmp_path / "nope"), "--out", str(out)
    )
    assert code == 2
    assert "error:" in stderr
    assert not out.exists()
    assert not list(tmp_path.glob(".tmp*"))  # no leftover temp files either


# ---------------------------------------------------------------------------
# bench


def test_bench_writes_reports(tmp_path, capsys):
    prefix = str(tmp_path / "report")
    code, stdout, _ = _run(
        capsys, "bench", "--dataset", "synthetic:2x6@3",
        "--schemes", "EDMS,MOMENT", "--classifiers", "knn",
        "--reps", "2", "--out", prefix,
    )
    assert code == 0
    assert "1NN/EDMS" in stdout and "1NN/MOMENT" in stdout
    assert "Mean" in stdout and "St.Dv" in stdout
    csv_text = (tmp_path / "report.csv").read_text()
    lines = csv_text.strip().splitlines()
    assert lines[0].startswith("classifier,scheme,exp1,exp2,mean")
    assert len(lines) == 3  # two scheme rows
    table_text = (tmp_path / "report.txt").read_text()
    assert table_text.splitlines()[0] == "Dataset: synthetic:2x6@3"


def test_bench_is_deterministic(tmp_path, capsys):
    args = ("bench", "--dataset", "synthetic:2x5@2", "--schemes", "EDMS",
            "--classifiers", "rf", "--reps", "2")
    p1, p2 = str(tmp_path / "r1"), str(tmp_path / "r2")
    assert _run(capsys, *args, "--out", p1)[0] == 0
    assert _run(capsys, *args, "--out", p2)[0] == 0
    assert (tmp_path / "r1.csv").read_bytes() == (tmp_path / "r2.csv").read_bytes()
    assert (tmp_path / "r1.txt").read_bytes() == (tmp_path / "r2.txt").read_bytes()


def test_bench_rejects_unknown_scheme(tmp_path, capsys):
    code, _, stderr = _run(
        capsys, "bench", "--dataset", "synthetic:2x4@0", "--schemes", "SIFT",
        "--out", str(tmp_path / "r"),
    )
    assert code == 2
    assert "SIFT" in stderr


# ---------------------------------------------------------------------------
# train / predict round trip


def test_train_predict_round_trip(tmp_path, capsys):
    model_path = tmp_path / "model.json"
    code, stdout, _ = _run(
        capsys, "train", "--dataset", "synthetic:3x6@5", "--scheme", "EDMS",
        "--classifier", "rf", "--out", str(model_path),
    )
    assert code == 0
    assert "trained forest on 18 samples" in stdout
    document = json.loads(model_path.read_text())
    assert document["kind"] == "pipeline"
    assert document["scheme"] == "EDMS"
    assert document["model"]["kind"] == "forest"
    assert document["normalizer"] is None  # rf defaults to no normalization

    predictions = tmp_path / "pred.csv"
    code, stdout, _ = _run(
        capsys, "predict", "--dataset", "synthetic:3x6@5",
        "--model", str(model_path), "--out", str(predictions),
    )
    assert code == 0
    lines = predictions.read_text().strip().splitlines()
    assert lines[0] == "sample_id,label,predicted"
    assert len(lines) == 19
    # training data classified by its own forest: accuracy is reported
    assert "accuracy" in stdout


def test_train_mlp_embeds_normalizer(tmp_path, capsys):
    model_path = tmp_path / "model.json"
    code, _, _ = _run(
        capsys, "train", "--dataset", "synthetic:2x5@1", "--scheme", "MOMENT",
        "--classifier", "mlp", "--out", str(model_path),
    )
    assert code == 0
    document = json.loads(model_path.read_text())
    assert document["model"]["kind"] == "mlp"
    assert document["normalizer"]["kind"] == "normalizer"
    assert len(document["normalizer"]["mean"]) == 7


def test_train_from_features_csv(tmp_path, capsys):
    features = tmp_path / "features.csv"
    assert _run(
        capsys, "extract", "--dataset", "synthetic:2x6@4", "--scheme", "MOMENT",
        "--out", str(features),
    )[0] == 0
    model_path = tmp_path / "model.json"
    code, stdout, _ = _run(
        capsys, "train", "--features", str(features), "--classifier", "knn",
        "--out", str(model_path),
    )
    assert code == 0
    assert json.loads(model_path.read_text())["scheme"] == "MOMENT"


def test_train_requires_a_source(capsys):
    code, _, stderr = _run(capsys, "train", "--out", "unused.json")
    assert code == 2
    assert "--dataset or --features" in stderr


def test_predict_scheme_mismatch_names_both_schemes(tmp_path, capsys):
    model_path = tmp_path / "model.json"
    assert _run(
        capsys, "train", "--dataset", "synthetic:2x4@2", "--scheme", "EDMS",
        "--classifier", "knn", "--out", str(model_path),
    )[0] == 0
    # tamper: claim the pipeline was fitted on LBP so extraction disagrees
    document = json.loads(model_path.read_text())
    document["scheme"] = "LBP"
    model_path.write_text(json.dumps(document))
    code, _, stderr = _run(
        capsys, "predict", "--dataset", "synthetic:2x4@2",
        "--model", str(model_path), "--out", str(tmp_path / "p.csv"),
    )
    assert code == 1
    assert "LBP" in stderr and "EDMS" in stderr


def test_predict_missing_model_exits_2(tmp_path, capsys):
    code, _, stderr = _run(
        capsys, "predict", "--dataset", "synthetic:2x4@2",
        "--model", str(tmp_path / "missing.json"), "--out", str(tmp_path / "p.csv"),
    )
    assert code == 2
    assert "error:" in stderr


# ---------------------------------------------------------------------------
# synth


def test_synth_writes_loadable_tree(tmp_path, capsys):
    out = tmp_path / "shapes"
    code, stdout, _ = _run(
        capsys, "synth", "--out", str(out), "--classes", "3", "--per-class", "4",
        "--seed", "2",
    )
    assert code == 0
    assert "wrote 12 images" in stdout
    ds = load_dataset(out)
    assert len(ds) == 12
    assert ds.class_index == ["cross", "disk", "square"]
    assert all(s.image.shape == (64, 64) for s in ds.samples)
    assert not any(name.endswith(".tmp~") for _, _, files in os.walk(out) for name in files)


def test_synth_images_round_trip_pixel_exact(tmp_path, capsys):
    from edgelbp.dataset import synth_shapes

    out = tmp_path / "shapes"
    assert _run(capsys, "synth", "--out", str(out), "--classes", "2",
                "--per-class", "3", "--seed", "9")[0] == 0
    expected = synth_shapes(["square", "disk"], 3, 9)
    loaded = load_dataset(out)
    by_id = {s.sample_id: s for s in loaded.samples}
    for sample in expected.samples:
        disk_id = sample.sample_id + ".png"
        assert np.array_equal(by_id[disk_id].image, sample.image)


# ---------------------------------------------------------------------------
# parser-level behavior


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exit_info:
        main(["--version"])
    assert exit_info.value.code == 0
    assert capsys.readouterr().out.startswith("edgelbp ")


def test_bad_choice_is_argparse_error(capsys):
    with pytest.raises(SystemExit) as exit_info:
        main(["extract", "--dataset", "synthetic:2x4@0", "--scheme", "BAD"])
    assert exit_info.value.code == 2


def test_unknown_classifier_alias(tmp_path, capsys):
    code, _, stderr = _run(
        capsys, "train", "--dataset", "synthetic:2x4@0", "--classifier", "svm",
        "--out", str(tmp_path / "m.json"),
    )
    assert code == 2
    assert "svm" in stderr
