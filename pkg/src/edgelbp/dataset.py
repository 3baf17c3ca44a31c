"""Dataset ingestion, stratified splitting, and a synthetic shape generator.

Real datasets live on disk as one subdirectory per class. The synthetic
generator renders five binary shape classes at desk scale so experiments
and CI run without any external benchmark data.
"""

import hashlib
import math
import os
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateClassError, EmptyDatasetError, InvalidImageError
from .imaging import load_image

_IMAGE_EXTENSIONS = {
    ".png", ".pgm", ".bmp", ".gif", ".jpg", ".jpeg", ".tif", ".tiff",
}

CANVAS = 64


@dataclass(frozen=True)
class Sample:
    sample_id: str
    label: str
    image: np.ndarray


@dataclass(frozen=True)
class LabeledDataset:
    samples: list
    class_index: list

    def __len__(self):
        return len(self.samples)

    def by_class(self):
        """Sample positions per label, in dataset order."""
        groups = {c: [] for c in self.class_index}
        for pos, sample in enumerate(self.samples):
            groups[sample.label].append(pos)
        return groups


def load_dataset(root):
    """Load a directory-per-class tree into memory.

    Ordering is lexicographic by class then filename, so the same tree
    always loads identically. Files that fail to decode are skipped with
    a warning; a class whose files all fail is an error.
    """
    root = os.fspath(root)
    if not os.path.isdir(root):
        raise FileNotFoundError(f"dataset root {root!r} is not a directory")
    class_names = sorted(
        entry for entry in os.listdir(root)
        if os.path.isdir(os.path.join(root, entry))
    )
    if not class_names:
        raise EmptyDatasetError(f"dataset root {root!r} contains no class directories")
    samples = []
    for name in class_names:
        class_dir = os.path.join(root, name)
        filenames = sorted(
            f for f in os.listdir(class_dir)
            if os.path.splitext(f)[1].lower() in _IMAGE_EXTENSIONS
            and os.path.isfile(os.path.join(class_dir, f))
        )
        loaded = 0
        for filename in filenames:
            try:
                image = load_image(os.path.join(class_dir, filename))
            except InvalidImageError as exc:
                warnings.warn(f"skipping {name}/{filename}: {exc}")
                continue
            samples.append(Sample(f"{name}/{filename}", name, image))
            loaded += 1
        if loaded == 0:
            raise EmptyDatasetError(f"class {name!r} has no loadable images")
    return LabeledDataset(samples=samples, class_index=class_names)


@dataclass(frozen=True)
class SplitSpec:
    """Stratified holdout split: per-class shuffle, then cut at the fraction."""

    train_fraction: float = 0.7
    seed: int = 0

    def __post_init__(self):
        if not 0.5 <= self.train_fraction <= 0.9:
            raise ValueError(
                f"train_fraction must be in [0.5, 0.9], got {self.train_fraction}"
            )


def _train_count(fraction, class_size):
    # round-half-up of fraction * size, at least one sample on each side
    cut = math.floor(fraction * class_size + 0.5)
    return min(max(cut, 1), class_size - 1)


def split(dataset, spec):
    """Seeded stratified split into (train, test) LabeledDatasets.

    Each class is shuffled by the seeded generator and cut at
    round-half-up(train_fraction * class_size); both sides keep the
    original dataset sample order.
    """
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(spec.seed)))
    groups = dataset.by_class()
    train_positions = set()
    for label in dataset.class_index:
        positions = groups[label]
        if len(positions) < 2:
            raise DegenerateClassError(
                f"class {label!r} has {len(positions)} sample(s); cannot split"
            )
        shuffled = rng.permutation(len(positions))
        n_train = _train_count(spec.train_fraction, len(positions))
        train_positions.update(positions[i] for i in shuffled[:n_train])
    train_samples, test_samples = [], []
    for pos, sample in enumerate(dataset.samples):
        (train_samples if pos in train_positions else test_samples).append(sample)
    return (
        LabeledDataset(train_samples, dataset.class_index),
        LabeledDataset(test_samples, dataset.class_index),
    )


# -------------------------------------------------------- synthetic shapes


def _tile_square(side):
    return np.ones((side, side), dtype=bool)


def _tile_disk(side):
    c = (side - 1) / 2.0
    r = side / 2.0
    yy, xx = np.mgrid[0:side, 0:side]
    return (yy - c) ** 2 + (xx - c) ** 2 <= r * r


def _tile_cross(side):
    arm = max(side // 3, 1)
    lo = (side - arm) // 2
    hi = lo + arm
    tile = np.zeros((side, side), dtype=bool)
    tile[lo:hi, :] = True
    tile[:, lo:hi] = True
    return tile


def _tile_ring(side):
    c = (side - 1) / 2.0
    r = side / 2.0
    yy, xx = np.mgrid[0:side, 0:side]
    d2 = (yy - c) ** 2 + (xx - c) ** 2
    return (d2 <= r * r) & (d2 > (r / 2.0) ** 2)


def _tile_triangle(side):
    yy, xx = np.mgrid[0:side, 0:side]
    return xx <= yy


GENERATORS = {
    "square": _tile_square,
    "disk": _tile_disk,
    "cross": _tile_cross,
    "ring": _tile_ring,
    "triangle": _tile_triangle,
}

CLASS_ORDER = ("square", "disk", "cross", "ring", "triangle")


def synth_shapes(classes=None, n_per_class=20, seed=0):
    """Render a synthetic shape dataset on 64x64 canvases.

    Each instance draws a scale in [0.5, 1.0) of the canvas, a rotation
    that is a multiple of 90 degrees, and a random placement; shapes are
    black (0) on a white (255) background.
    """
    if classes is None:
        classes = list(CLASS_ORDER)
    unknown = [c for c in classes if c not in GENERATORS]
    if unknown:
        raise ValueError(f"unknown shape class(es): {unknown}")
    if n_per_class < 2:
        raise ValueError("n_per_class must be at least 2")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    samples = []
    for name in classes:
        make_tile = GENERATORS[name]
        for i in range(n_per_class):
            side = int(rng.uniform(0.5, 1.0) * CANVAS)
            tile = np.rot90(make_tile(side), k=int(rng.integers(0, 4)))
            y0 = int(rng.integers(0, CANVAS - side + 1))
            x0 = int(rng.integers(0, CANVAS - side + 1))
            canvas = np.full((CANVAS, CANVAS), 255, dtype=np.uint8)
            canvas[y0 : y0 + side, x0 : x0 + side][tile] = 0
            samples.append(Sample(f"{name}/{name}_{i:03d}", name, canvas))
    return LabeledDataset(samples=samples, class_index=sorted(set(classes)))


def parse_synthetic_uri(uri):
    """Parse 'synthetic:<n_classes>x<n_per_class>@<seed>' into its parts."""
    body = uri[len("synthetic:"):]
    try:
        head, seed_text = body.split("@")
        n_classes_text, n_per_text = head.split("x")
        n_classes, n_per, seed = int(n_classes_text), int(n_per_text), int(seed_text)
    except ValueError:
        raise ValueError(
            f"bad synthetic dataset spec {uri!r}; expected "
            "'synthetic:<n_classes>x<n_per_class>@<seed>'"
        ) from None
    if not 2 <= n_classes <= len(CLASS_ORDER):
        raise ValueError(
            f"synthetic class count must be in [2, {len(CLASS_ORDER)}], got {n_classes}"
        )
    return n_classes, n_per, seed


def resolve_dataset(source):
    """A dataset from either a directory path or a synthetic: URI."""
    if isinstance(source, str) and source.startswith("synthetic:"):
        n_classes, n_per, seed = parse_synthetic_uri(source)
        return synth_shapes(list(CLASS_ORDER[:n_classes]), n_per, seed)
    return load_dataset(source)


# ---------------------------------------------------------------- manifest


def manifest_csv(train, test, seed):
    """Audit CSV of split membership: sample_id,label,part,seed."""
    lines = ["sample_id,label,part,seed"]
    for part_name, part in (("train", train), ("test", test)):
        for sample in part.samples:
            lines.append(f"{sample.sample_id},{sample.label},{part_name},{seed}")
    return "\n".join(lines) + "\n"


def manifest_hash(train, test):
    """Stable digest of split membership, for paired-split assertions."""
    digest = hashlib.sha256()
    for part_name, part in (("train", train), ("test", test)):
        for sample in part.samples:
            digest.update(f"{part_name}\x1f{sample.sample_id}\n".encode())
    return digest.hexdigest()
