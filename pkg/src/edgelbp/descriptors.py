"""Descriptor schemes, feature normalization, and feature serialization.

A scheme names which descriptors go into the feature vector and in what
order. Singleton schemes are the four base descriptors; combined schemes
concatenate two of them, first-named part first:

    EDMS        22   edge direction matrix statistics (binary shape)
    LBP        256   local binary pattern histogram (grayscale texture)
    GLCM        28   co-occurrence features, 7 per orientation (grayscale)
    MOMENT       7   moment invariants of the binary shape
    PROPOSED   278   EDMS then LBP
    GLCM-EDMS   50   GLCM then EDMS
    LBP-MOMENT 263   LBP then MOMENT
"""

import csv
import io
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .edms import EDMS_DIM, edms_from_edges
from .errors import ExtractionError, SchemeMismatchError
from .fileio import atomic_write_text
from .glcm import DEFAULT_LEVELS, GLCM_DIM, glcm_descriptor
from .imaging import binarize_otsu, extract_edges
from .lbp import LBP_DIM, lbp_histogram
from .moments import MOMENT_DIM, moment_descriptor

PART_DIMS = {
    "EDMS": EDMS_DIM,
    "LBP": LBP_DIM,
    "GLCM": GLCM_DIM,
    "MOMENT": MOMENT_DIM,
}

SCHEME_PARTS = {
    "EDMS": ("EDMS",),
    "LBP": ("LBP",),
    "GLCM": ("GLCM",),
    "MOMENT": ("MOMENT",),
    "PROPOSED": ("EDMS", "LBP"),
    "GLCM-EDMS": ("GLCM", "EDMS"),
    "LBP-MOMENT": ("LBP", "MOMENT"),
}

SCHEMES = tuple(SCHEME_PARTS)

NORMALIZER_FORMAT_VERSION = 1

_STD_FLOOR = 1e-12


def scheme_dims(scheme):
    """Feature-vector length of a scheme; unknown names raise ValueError."""
    if scheme not in SCHEME_PARTS:
        raise ValueError(
            f"unknown scheme {scheme!r}; expected one of {', '.join(SCHEMES)}"
        )
    return sum(PART_DIMS[part] for part in SCHEME_PARTS[scheme])


@dataclass(frozen=True)
class ExtractionParams:
    """Knobs shared by every extraction call.

    glcm_levels: quantization level count for the co-occurrence part.
    raw_moments: emit raw moment invariants instead of signed-log values.
    """

    glcm_levels: int = DEFAULT_LEVELS
    raw_moments: bool = False


@dataclass(frozen=True)
class FeatureVector:
    """One sample's features under a scheme, plus bookkeeping for CSV rows."""

    scheme: str
    values: np.ndarray
    sample_id: str = ""
    label: str = ""

    @property
    def dims(self):
        return len(self.values)


def extract(gray, scheme, params=None):
    """Feature vector of a grayscale image under the given scheme.

    Shape parts (EDMS, MOMENT) run on the Otsu-binarized image — EDMS after
    edge extraction — while texture parts (LBP, GLCM) use the grayscale
    values directly. Combined schemes concatenate their parts in the order
    the scheme name declares.
    """
    parts = SCHEME_PARTS.get(scheme)
    if parts is None:
        raise ValueError(
            f"unknown scheme {scheme!r}; expected one of {', '.join(SCHEMES)}"
        )
    if params is None:
        params = ExtractionParams()
    binary = None
    pieces = []
    for part in parts:
        if part in ("EDMS", "MOMENT") and binary is None:
            binary = binarize_otsu(gray)
        if part == "EDMS":
            edges = extract_edges(binary)
            pieces.append(edms_from_edges(edges, binary).to_vector())
        elif part == "LBP":
            pieces.append(lbp_histogram(gray))
        elif part == "GLCM":
            pieces.append(glcm_descriptor(gray, levels=params.glcm_levels))
        else:
            pieces.append(moment_descriptor(binary, compress=not params.raw_moments))
    return pieces[0] if len(pieces) == 1 else np.concatenate(pieces)


def _worker_count(n_jobs):
    """Thread count for per-sample extraction, capped by EDGELBP_THREADS."""
    env = os.environ.get("EDGELBP_THREADS")
    cap = int(env) if env else (os.cpu_count() or 1)
    return max(1, min(cap, n_jobs))


def extract_dataset(dataset, scheme, params=None, threads=None):
    """One FeatureVector per sample, in dataset order.

    Samples are independent, so extraction fans out over a thread pool
    (the counting kernels run without the GIL). Failures surface as
    ExtractionError naming the offending sample.
    """
    samples = dataset.samples

    def one(sample):
        try:
            values = extract(sample.image, scheme, params)
        except Exception as exc:
            raise ExtractionError(sample.sample_id, exc) from exc
        return FeatureVector(
            scheme=scheme,
            values=values,
            sample_id=sample.sample_id,
            label=sample.label,
        )

    n_workers = threads if threads is not None else _worker_count(len(samples))
    if n_workers <= 1 or len(samples) <= 1:
        return [one(s) for s in samples]
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        return list(pool.map(one, samples))


@dataclass(frozen=True)
class Normalizer:
    """Per-dimension z-scoring statistics fitted on training vectors only."""

    scheme: str
    mean: np.ndarray
    std: np.ndarray


def fit_normalizer(train):
    """Per-dim mean and population std over the training vectors.

    Dimensions with std below 1e-12 get std 1 so constant features pass
    through unscaled instead of blowing up.
    """
    if not train:
        raise ValueError("cannot fit a normalizer on an empty training set")
    scheme = train[0].scheme
    for v in train:
        if v.scheme != scheme:
            raise SchemeMismatchError(
                f"mixed schemes in normalizer fit: {scheme!r} and {v.scheme!r}"
            )
    matrix = np.stack([v.values for v in train]).astype(np.float64)
    mean = matrix.mean(axis=0)
    std = matrix.std(axis=0)
    std = np.where(std < _STD_FLOOR, 1.0, std)
    return Normalizer(scheme=scheme, mean=mean, std=std)


def apply_normalizer(normalizer, vector):
    """Z-score one FeatureVector; scheme and length must match the fit."""
    if vector.scheme != normalizer.scheme or vector.dims != len(normalizer.mean):
        raise SchemeMismatchError(
            f"normalizer fitted for {normalizer.scheme!r}"
            f"/{len(normalizer.mean)} dims, got {vector.scheme!r}/{vector.dims}"
        )
    values = (np.asarray(vector.values, dtype=np.float64) - normalizer.mean)
    values /= normalizer.std
    return FeatureVector(
        scheme=vector.scheme,
        values=values,
        sample_id=vector.sample_id,
        label=vector.label,
    )


def normalizer_to_dict(normalizer):
    return {
        "format_version": NORMALIZER_FORMAT_VERSION,
        "kind": "normalizer",
        "scheme": normalizer.scheme,
        "mean": [float(x) for x in normalizer.mean],
        "std": [float(x) for x in normalizer.std],
    }


def normalizer_from_dict(doc):
    version = doc.get("format_version")
    if version != NORMALIZER_FORMAT_VERSION:
        raise ValueError(f"unsupported normalizer format_version {version!r}")
    return Normalizer(
        scheme=doc["scheme"],
        mean=np.asarray(doc["mean"], dtype=np.float64),
        std=np.asarray(doc["std"], dtype=np.float64),
    )


def save_normalizer(path, normalizer):
    atomic_write_text(path, json.dumps(normalizer_to_dict(normalizer), indent=2))


def load_normalizer(path):
    with open(path, encoding="utf-8") as handle:
        return normalizer_from_dict(json.load(handle))


def features_to_csv(vectors):
    """Render FeatureVectors as CSV text: sample_id,label,scheme,f0,...

    Floats use 9 significant digits, so equal inputs give byte-equal files.
    """
    if not vectors:
        raise ValueError("no feature vectors to serialize")
    dims = vectors[0].dims
    scheme = vectors[0].scheme
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["sample_id", "label", "scheme"] + [f"f{i}" for i in range(dims)]
    )
    for v in vectors:
        if v.scheme != scheme or v.dims != dims:
            raise SchemeMismatchError(
                f"cannot mix {scheme!r}/{dims} with {v.scheme!r}/{v.dims} in one CSV"
            )
        writer.writerow(
            [v.sample_id, v.label, v.scheme]
            + [format(float(x), ".9g") for x in v.values]
        )
    return buf.getvalue()


def write_features_csv(path, vectors):
    atomic_write_text(path, features_to_csv(vectors))


def read_features_csv(path):
    """Inverse of write_features_csv; returns a list of FeatureVector."""
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or header[:3] != ["sample_id", "label", "scheme"]:
            raise ValueError(f"{path}: not a feature CSV (bad header)")
        vectors = []
        for row in reader:
            sample_id, label, scheme = row[0], row[1], row[2]
            values = np.array([float(x) for x in row[3:]], dtype=np.float64)
            vectors.append(
                FeatureVector(
                    scheme=scheme, values=values, sample_id=sample_id, label=label
                )
            )
    return vectors
