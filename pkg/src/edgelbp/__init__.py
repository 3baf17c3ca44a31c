"""Shape/texture descriptors built on edge direction matrices and LBP.

The package covers the full recognition pipeline: binarization and edge
extraction, four base descriptors (EDMS, LBP histogram, GLCM features,
moment invariants) plus their fused schemes, seeded from-scratch
classifiers (1-NN, random forest, MLP), dataset handling with a
synthetic shape generator, and a repeated-holdout benchmark harness.

Counting kernels run on a numba backend when available and fall back to
pure numpy; see `edgelbp.kernels.set_backend` and the EDGELBP_BACKEND
environment variable.
"""

__version__ = "0.1.0"

from .classify import (
    ForestConfig,
    KnnConfig,
    MlpConfig,
    load_model,
    mlp_gradient_check,
    predict,
    save_model,
    train,
)
from .dataset import (
    LabeledDataset,
    Sample,
    SplitSpec,
    load_dataset,
    resolve_dataset,
    split,
    synth_shapes,
)
from .descriptors import (
    ExtractionParams,
    FeatureVector,
    Normalizer,
    SCHEMES,
    apply_normalizer,
    extract,
    extract_dataset,
    fit_normalizer,
    read_features_csv,
    scheme_dims,
    write_features_csv,
)
from .edms import compute_edm1, compute_edm2, edms_features, rank_directions
from .errors import EdgeLbpError
from .evaluation import (
    ExperimentConfig,
    ExperimentReport,
    compare_schemes,
    format_table,
    run_experiment,
)
from .glcm import compute_glcm, glcm_descriptor, glcm_features, quantize
from .imaging import binarize_otsu, extract_edges, load_image, otsu_threshold, to_gray
from .kernels import active_backend, available_backends, set_backend
from .lbp import lbp_code, lbp_histogram
from .moments import hu_moments, moment_descriptor

__all__ = [
    "__version__",
    "EdgeLbpError",
    "SCHEMES",
    # imaging
    "to_gray", "load_image", "otsu_threshold", "binarize_otsu", "extract_edges",
    # descriptors
    "compute_edm1", "compute_edm2", "rank_directions", "edms_features",
    "lbp_code", "lbp_histogram",
    "quantize", "compute_glcm", "glcm_features", "glcm_descriptor",
    "hu_moments", "moment_descriptor",
    "ExtractionParams", "FeatureVector", "extract", "extract_dataset",
    "scheme_dims", "Normalizer", "fit_normalizer", "apply_normalizer",
    "read_features_csv", "write_features_csv",
    # classifiers
    "KnnConfig", "ForestConfig", "MlpConfig", "train", "predict",
    "mlp_gradient_check", "save_model", "load_model",
    # datasets and evaluation
    "Sample", "LabeledDataset", "SplitSpec", "load_dataset", "split",
    "synth_shapes", "resolve_dataset",
    "ExperimentConfig", "ExperimentReport", "run_experiment",
    "compare_schemes", "format_table",
    # kernel backends
    "available_backends", "active_backend", "set_backend",
]
