"""Command-line interface: extract, bench, train, predict, synth.

Exit codes: 0 success, 1 runtime or data failure, 2 usage error. All
output files are written atomically, so a failed command leaves no
partial artifacts behind.
"""

import argparse
import json
import os
import sys

from . import __version__
from .classify import DEFAULT_CONFIGS, MODEL_TYPES, train as train_classifier
from .dataset import CLASS_ORDER, SplitSpec, resolve_dataset, synth_shapes
from .descriptors import (
    ExtractionParams,
    SCHEMES,
    apply_normalizer,
    extract_dataset,
    fit_normalizer,
    normalizer_from_dict,
    normalizer_to_dict,
    read_features_csv,
    write_features_csv,
)
from .errors import EdgeLbpError
from .evaluation import (
    ExperimentConfig,
    compare_schemes,
    format_table,
    write_report_csv,
)
from .fileio import atomic_write_text

PIPELINE_FORMAT_VERSION = 1

_CLASSIFIER_ALIASES = {"rf": "forest", "forest": "forest", "mlp": "mlp", "knn": "knn"}


def _classifier_kind(name):
    kind = _CLASSIFIER_ALIASES.get(name.lower())
    if kind is None:
        raise ValueError(
            f"unknown classifier {name!r}; expected rf, mlp, or knn"
        )
    return kind


def _normalize_mode(text):
    return {"auto": None, "on": True, "off": False}[text]


def _params(args):
    return ExtractionParams(glcm_levels=args.glcm_levels)


def _add_common(parser):
    parser.add_argument("--dataset", required=True,
                        help="dataset directory or synthetic:<classes>x<per>@<seed>")
    parser.add_argument("--glcm-levels", type=int, default=16,
                        help="gray levels for co-occurrence quantization")


def cmd_extract(args):
    dataset = resolve_dataset(args.dataset)
    vectors = extract_dataset(dataset, args.scheme, _params(args))
    write_features_csv(args.out, vectors)
    print(f"wrote {len(vectors)} x {vectors[0].dims} features to {args.out}")
    return 0


def cmd_bench(args):
    schemes = args.schemes.split(",") if args.schemes else list(SCHEMES)
    for scheme in schemes:
        if scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {scheme!r}")
    classifiers = [
        _classifier_kind(name)
        for name in (args.classifiers.split(",") if args.classifiers else ["rf", "mlp"])
    ]
    cfg = ExperimentConfig(
        dataset=args.dataset,
        classifier_config=None,
        split=SplitSpec(args.split, args.seed),
        repetitions=args.reps,
        seed=args.seed,
        normalize=_normalize_mode(args.normalize),
        sweep_split=args.sweep_split,
        params=_params(args),
    )
    comparison = compare_schemes(args.dataset, schemes, classifiers, cfg)
    table = format_table(comparison, title=f"Dataset: {args.dataset}")
    write_report_csv(args.out + ".csv", comparison)
    atomic_write_text(args.out + ".txt", table)
    print(table, end="")
    print(f"wrote {args.out}.csv and {args.out}.txt")
    return 0


def _fit_pipeline(args):
    """Feature vectors plus (optional) fitted normalizer for cmd_train."""
    if args.features:
        vectors = read_features_csv(args.features)
        if not vectors:
            raise ValueError(f"{args.features} contains no feature rows")
        scheme = vectors[0].scheme
    else:
        dataset = resolve_dataset(args.dataset)
        scheme = args.scheme
        vectors = extract_dataset(dataset, scheme, _params(args))
    kind = _classifier_kind(args.classifier)
    normalize = _normalize_mode(args.normalize)
    if normalize is None:
        normalize = kind == "mlp"
    normalizer = None
    if normalize:
        normalizer = fit_normalizer(vectors)
        vectors = [apply_normalizer(normalizer, v) for v in vectors]
    return kind, scheme, vectors, normalizer


def cmd_train(args):
    if not args.features and not args.dataset:
        raise ValueError("either --dataset or --features is required")
    kind, scheme, vectors, normalizer = _fit_pipeline(args)
    config = DEFAULT_CONFIGS[kind](seed=args.seed)
    model = train_classifier(kind, config, vectors)
    document = {
        "format_version": PIPELINE_FORMAT_VERSION,
        "kind": "pipeline",
        "scheme": scheme,
        "glcm_levels": args.glcm_levels,
        "model": model.to_dict(),
        "normalizer": normalizer_to_dict(normalizer) if normalizer else None,
    }
    atomic_write_text(args.out, json.dumps(document, sort_keys=True))
    print(f"trained {kind} on {len(vectors)} samples ({scheme}); wrote {args.out}")
    return 0


def _load_pipeline(path):
    with open(path, encoding="utf-8") as handle:
        document = json.load(handle)
    if document.get("format_version") != PIPELINE_FORMAT_VERSION:
        raise ValueError(f"unsupported pipeline file {path!r}")
    model = MODEL_TYPES[document["model"]["kind"]].from_dict(document["model"])
    normalizer = (
        normalizer_from_dict(document["normalizer"])
        if document.get("normalizer")
        else None
    )
    return document["scheme"], int(document["glcm_levels"]), model, normalizer


def cmd_predict(args):
    scheme, glcm_levels, model, normalizer = _load_pipeline(args.model)
    dataset = resolve_dataset(args.dataset)
    params = ExtractionParams(glcm_levels=glcm_levels)
    vectors = extract_dataset(dataset, scheme, params)
    if normalizer is not None:
        vectors = [apply_normalizer(normalizer, v) for v in vectors]
    lines = ["sample_id,label,predicted"]
    hits, total = 0, 0
    for v in vectors:
        predicted = model.predict(v)
        lines.append(f"{v.sample_id},{v.label},{predicted}")
        if v.label:
            total += 1
            hits += predicted == v.label
    atomic_write_text(args.out, "\n".join(lines) + "\n")
    message = f"wrote {len(vectors)} predictions to {args.out}"
    if total:
        message += f" (accuracy {100.0 * hits / total:.2f}% on labeled samples)"
    print(message)
    return 0


def cmd_synth(args):
    from PIL import Image

    dataset = synth_shapes(list(CLASS_ORDER[: args.classes]), args.per_class, args.seed)
    for sample in dataset.samples:
        label_dir = os.path.join(args.out, sample.label)
        os.makedirs(label_dir, exist_ok=True)
        filename = sample.sample_id.split("/", 1)[1] + ".png"
        target = os.path.join(label_dir, filename)
        tmp = target + ".tmp~"
        Image.fromarray(sample.image).save(tmp, format="PNG")
        os.replace(tmp, target)
    print(f"wrote {len(dataset.samples)} images under {args.out}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="edgelbp",
        description="Shape/texture descriptors (edge direction matrices + LBP) "
        "with from-scratch classifiers and a benchmark harness.",
    )
    parser.add_argument("--version", action="version", version=f"edgelbp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="write a feature CSV for a dataset")
    _add_common(p)
    p.add_argument("--scheme", choices=SCHEMES, default="PROPOSED")
    p.add_argument("--out", default="features.csv")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("bench", help="run the scheme x classifier benchmark matrix")
    _add_common(p)
    p.add_argument("--schemes", default="",
                   help="comma-separated scheme names (default: all)")
    p.add_argument("--classifiers", default="",
                   help="comma-separated: rf, mlp, knn (default: rf,mlp)")
    p.add_argument("--split", type=float, default=0.7,
                   help="training fraction in [0.5, 0.9]")
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--normalize", choices=("auto", "on", "off"), default="auto")
    p.add_argument("--sweep-split", action="store_true",
                   help="sweep the training fraction over 60..70% across reps")
    p.add_argument("--out", default="report", help="output path prefix")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("train", help="train a classifier and save the pipeline")
    p.add_argument("--dataset", default="",
                   help="dataset directory or synthetic: URI")
    p.add_argument("--features", default="",
                   help="feature CSV produced by `extract` (alternative input)")
    p.add_argument("--glcm-levels", type=int, default=16)
    p.add_argument("--scheme", choices=SCHEMES, default="PROPOSED")
    p.add_argument("--classifier", default="rf", help="rf, mlp, or knn")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--normalize", choices=("auto", "on", "off"), default="auto")
    p.add_argument("--out", default="model.json")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="label images with a trained pipeline")
    _add_common(p)
    p.add_argument("--model", required=True, help="pipeline file from `train`")
    p.add_argument("--out", default="predictions.csv")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("synth", help="write a synthetic shape dataset to disk")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--classes", type=int, default=5, choices=range(2, 6))
    p.add_argument("--per-class", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EdgeLbpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
